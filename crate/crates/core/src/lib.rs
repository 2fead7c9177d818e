//! Critical-visibility analysis of multiparty GHZ correlation experiments.
//!
//! An N-party GHZ experiment with a finite number of analyzer settings per
//! observer produces a tensor of full-correlation values. Mixing the state
//! with white noise scales that tensor by a visibility `V`. This crate
//! answers, exactly, the question: up to which `V` can a local
//! hidden-variable (LHV) model reproduce the correlations?
//!
//! The pipeline:
//!
//! 1. [`quantum`]: predicted probabilities and correlation tensors for the
//!    GHZ state measured with dichotomic Bloch-vector observables.
//! 2. [`lhv`]: enumeration of deterministic local strategies and the
//!    rank-one product tensors they generate (the vertices of the LHV
//!    correlation polytope).
//! 3. [`lp`]: the membership test "V-scaled quantum tensor is a convex
//!    mixture of product tensors", solved as a linear program maximizing V.
//! 4. [`optimizer`]: derivative-free search over analyzer settings for the
//!    settings most resistant to a local-realistic explanation, plus a
//!    seeded random scan.
//! 5. [`demos`]: the exact small-scale classics, the CHSH inequality and
//!    the GHZ all-versus-nothing contradiction.

pub mod demos;
pub mod error;
pub mod grids;
pub mod lhv;
pub mod lp;
pub mod optimizer;
pub mod quantum;

pub(crate) mod index;
pub(crate) mod simplex;

pub use error::{Error, Result};
pub use quantum::{AnalyzerDirection, CorrelationTensor, SettingsGrid, Visibility};

use std::fmt;
use std::ops::{Mul, Neg};

/// A dichotomic measurement outcome or predetermined assignment: +1 or -1.
///
/// Using an enum instead of a raw integer keeps every ±1 quantity in the
/// crate exact; products and negations never leave the two-element set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, serde::Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// The numeric value, +1 or -1.
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    /// Maps +1/-1 to the corresponding sign; anything else is `None`.
    pub fn from_i8(v: i8) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    /// All outcome pairs, plus-first. Handy for exhaustive sums.
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl Neg for Sign {
    type Output = Sign;

    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}
