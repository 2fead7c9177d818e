//! Quantum predictions for GHZ states measured with dichotomic observables.
//!
//! Each observer measures a Bloch-vector observable `n·σ` parameterized by
//! spherical angles (θ, φ). For the three-qubit GHZ state the joint outcome
//! probability is an explicit trigonometric expression; restricted to the
//! equatorial plane (θ = π/2, "coplanar" settings) the full-correlation
//! function collapses to `V·cos(α+β+γ)` where `1−V` is the white-noise
//! fraction, and the same cosine form extends to any number of parties.
//!
//! Single-party and two-party marginals of the GHZ state are flat: 1/2 and
//! 1/4 regardless of the angles. Only the top-order correlation carries
//! setting dependence, which is why the LHV analysis in [`crate::lp`] works
//! on correlation tensors alone.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::Sign;

/// One analyzer setting: a measurement direction on the Bloch sphere.
#[derive(Clone, Copy, PartialEq, Debug, serde::Serialize)]
pub struct AnalyzerDirection {
    theta: f64,
    phi: f64,
}

impl AnalyzerDirection {
    /// Direction from polar angle `theta` and azimuth `phi`, in radians.
    ///
    /// Angles are stored as given; no range normalization is applied since
    /// the trigonometric formulas are periodic anyway.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFiniteDirection { theta, phi });
        }
        Ok(Self { theta, phi })
    }

    /// Equatorial-plane direction: θ fixed to π/2 exactly.
    pub fn coplanar(phi: f64) -> Result<Self> {
        Self::new(FRAC_PI_2, phi)
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn phi(self) -> f64 {
        self.phi
    }

    /// True when θ is bit-exactly π/2.
    pub fn is_coplanar(self) -> bool {
        self.theta == FRAC_PI_2
    }

    /// The Cartesian unit vector (cos φ sin θ, sin φ sin θ, cos θ).
    pub fn unit_vector(self) -> [f64; 3] {
        let (sin_t, cos_t) = self.theta.sin_cos();
        let (sin_p, cos_p) = self.phi.sin_cos();
        [cos_p * sin_t, sin_p * sin_t, cos_t]
    }
}

/// The visibility `V` of the correlations: weight of the pure GHZ part
/// under a white-noise admixture `1−V`.
#[derive(Clone, Copy, PartialEq, PartialOrd, Debug, serde::Serialize)]
pub struct Visibility(f64);

impl Visibility {
    /// Noise-free correlations.
    pub const FULL: Visibility = Visibility(1.0);
    /// Pure white noise.
    pub const ZERO: Visibility = Visibility(0.0);

    pub fn new(v: f64) -> Result<Self> {
        if v.is_finite() && (0.0..=1.0).contains(&v) {
            Ok(Self(v))
        } else {
            Err(Error::VisibilityRange(v))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Per-party lists of analyzer directions: the knobs of one experiment.
#[derive(Clone, PartialEq, Debug, serde::Serialize)]
pub struct SettingsGrid {
    parties: Vec<Vec<AnalyzerDirection>>,
    coplanar: bool,
}

impl SettingsGrid {
    /// Builds a grid, requiring at least two parties with at least one
    /// setting each. The coplanar flag is derived: set iff every θ is
    /// bit-exactly π/2.
    pub fn new(parties: Vec<Vec<AnalyzerDirection>>) -> Result<Self> {
        if parties.len() < 2 {
            return Err(Error::TooFewParties(parties.len()));
        }
        for (p, settings) in parties.iter().enumerate() {
            if settings.is_empty() {
                return Err(Error::EmptyParty(p));
            }
        }
        let coplanar = parties
            .iter()
            .all(|s| s.iter().all(|d| d.is_coplanar()));
        Ok(Self { parties, coplanar })
    }

    /// Grid of equatorial directions from per-party azimuth lists.
    pub fn from_coplanar_angles(angles: &[Vec<f64>]) -> Result<Self> {
        let mut parties = Vec::with_capacity(angles.len());
        for (p, list) in angles.iter().enumerate() {
            let mut settings = Vec::with_capacity(list.len());
            for (s, &phi) in list.iter().enumerate() {
                let dir = AnalyzerDirection::coplanar(phi)
                    .map_err(|_| Error::NonFiniteAngle { party: p, setting: s })?;
                settings.push(dir);
            }
            parties.push(settings);
        }
        Self::new(parties)
    }

    /// Grid from a flat angle vector split by per-party counts, as used by
    /// the settings optimizer where one coordinate is one azimuth.
    pub fn from_coplanar_flat(counts: &[usize], angles: &[f64]) -> Result<Self> {
        let total: usize = counts.iter().sum();
        debug_assert_eq!(total, angles.len(), "flat angle vector length mismatch");
        let mut per_party = Vec::with_capacity(counts.len());
        let mut offset = 0;
        for &c in counts {
            per_party.push(angles[offset..offset + c].to_vec());
            offset += c;
        }
        Self::from_coplanar_angles(&per_party)
    }

    pub fn party_count(&self) -> usize {
        self.parties.len()
    }

    /// Settings per party, in party order.
    pub fn counts(&self) -> Vec<usize> {
        self.parties.iter().map(Vec::len).collect()
    }

    /// Total number of settings across all parties.
    pub fn total_settings(&self) -> usize {
        self.parties.iter().map(Vec::len).sum()
    }

    /// Number of setting combinations, ∏ per-party counts.
    pub fn entry_count(&self) -> usize {
        self.parties.iter().map(Vec::len).product()
    }

    pub fn is_coplanar(&self) -> bool {
        self.coplanar
    }

    pub fn parties(&self) -> &[Vec<AnalyzerDirection>] {
        &self.parties
    }

    /// Azimuth lists for a coplanar grid; errors on the first setting that
    /// has a polar component.
    pub fn coplanar_angles(&self) -> Result<Vec<Vec<f64>>> {
        self.require_coplanar()?;
        Ok(self
            .parties
            .iter()
            .map(|s| s.iter().map(|d| d.phi()).collect())
            .collect())
    }

    pub(crate) fn require_coplanar(&self) -> Result<()> {
        for (p, settings) in self.parties.iter().enumerate() {
            for (s, d) in settings.iter().enumerate() {
                if !d.is_coplanar() {
                    return Err(Error::NotCoplanar {
                        party: p,
                        setting: s,
                        theta: d.theta(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Dense tensor of full-correlation values, one entry per setting
/// combination, stored row-major with the last party's index fastest.
#[derive(Clone, PartialEq, Debug, serde::Serialize)]
pub struct CorrelationTensor {
    dims: Vec<usize>,
    values: Vec<f64>,
}

impl CorrelationTensor {
    pub fn new(dims: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let expected: usize = dims.iter().product();
        if values.len() != expected {
            return Err(Error::TensorShape {
                dims,
                expected,
                got: values.len(),
            });
        }
        for (index, &value) in values.iter().enumerate() {
            if !value.is_finite() || value.abs() > 1.0 + 1e-12 {
                return Err(Error::EntryRange { index, value });
            }
        }
        Ok(Self { dims, values })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entry at a multi-index, one setting index per party.
    pub fn get(&self, index: &[usize]) -> f64 {
        self.values[crate::index::flat(&self.dims, index)]
    }
}

/// The three-qubit correlation structure constant: the only nonzero
/// components of M are M[0][0][0]=+1, M[0][1][1]=M[1][0][1]=M[1][1][0]=−1,
/// contracting the in-plane components of the three analyzer vectors.
fn m_tensor_contraction(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * b[0] * c[0] - a[0] * b[1] * c[1] - a[1] * b[0] * c[1] - a[1] * b[1] * c[0]
}

/// The four outcome-sign-weighted terms of the three-qubit probability:
/// pair terms a₃b₃, a₃c₃, b₃c₃ and the visibility-scaled triple term.
fn probability_terms(directions: &[AnalyzerDirection], v: Visibility) -> [f64; 4] {
    let a = directions[0].unit_vector();
    let b = directions[1].unit_vector();
    let c = directions[2].unit_vector();
    [
        a[2] * b[2],
        a[2] * c[2],
        b[2] * c[2],
        v.value() * m_tensor_contraction(a, b, c),
    ]
}

/// Sums the joint probability over all outcomes compatible with `fixed`.
///
/// The ±1 coefficients of the four angle-dependent terms are accumulated as
/// exact integers before any float multiplication, so marginals that cancel
/// algebraically cancel here too, independent of the angles.
fn outcome_marginal(fixed: [Option<Sign>; 3], terms: [f64; 4]) -> f64 {
    let mut count: i32 = 0;
    let mut coeff = [0i32; 4];
    let choices = |f: Option<Sign>| match f {
        Some(s) => vec![s],
        None => vec![Sign::Plus, Sign::Minus],
    };
    for &m in &choices(fixed[0]) {
        for &l in &choices(fixed[1]) {
            for &k in &choices(fixed[2]) {
                count += 1;
                coeff[0] += i32::from((m * l).value());
                coeff[1] += i32::from((m * k).value());
                coeff[2] += i32::from((l * k).value());
                coeff[3] += i32::from((m * l * k).value());
            }
        }
    }
    0.125
        * (f64::from(count)
            + f64::from(coeff[0]) * terms[0]
            + f64::from(coeff[1]) * terms[1]
            + f64::from(coeff[2]) * terms[2]
            + f64::from(coeff[3]) * terms[3])
}

fn check_three_parties(outcomes: usize, directions: usize) -> Result<()> {
    if directions != 3 {
        return Err(Error::NotThreeParties(directions));
    }
    if outcomes != directions {
        return Err(Error::OutcomeCountMismatch {
            outcomes,
            parties: directions,
        });
    }
    Ok(())
}

/// Joint probability of a three-party outcome triple under white noise.
///
/// Equals (1/8)(1 + ml·a₃b₃ + mk·a₃c₃ + lk·b₃c₃ + mlk·V·M(a,b,c)) for
/// outcomes (m,l,k) and analyzer vectors a,b,c. Only the triple-correlation
/// term is damped by the visibility; the pair terms are geometric and vanish
/// for coplanar settings.
pub fn joint_probability(
    outcomes: &[Sign],
    directions: &[AnalyzerDirection],
    v: Visibility,
) -> Result<f64> {
    check_three_parties(outcomes.len(), directions.len())?;
    let fixed = [Some(outcomes[0]), Some(outcomes[1]), Some(outcomes[2])];
    Ok(outcome_marginal(fixed, probability_terms(directions, v)))
}

/// Flat single- and two-party outcome probabilities of the noisy GHZ state.
#[derive(Clone, Copy, Debug)]
pub struct Marginals {
    single: [[f64; 2]; 3],
    pair: [[[f64; 2]; 2]; 3],
}

/// Index of an (ordered) party pair among (0,1), (0,2), (1,2).
fn pair_slot(a: usize, b: usize) -> usize {
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (1, 2) => 2,
        _ => panic!("invalid party pair ({a}, {b})"),
    }
}

fn outcome_slot(s: Sign) -> usize {
    match s {
        Sign::Plus => 0,
        Sign::Minus => 1,
    }
}

impl Marginals {
    /// P(outcome for one party), any other parties summed out.
    pub fn single(&self, party: usize, outcome: Sign) -> f64 {
        self.single[party][outcome_slot(outcome)]
    }

    /// P(joint outcome for two parties), the third summed out. Parties may
    /// be given in either order.
    pub fn pair(&self, parties: (usize, usize), outcomes: (Sign, Sign)) -> f64 {
        let ((a, b), (oa, ob)) = if parties.0 <= parties.1 {
            (parties, outcomes)
        } else {
            ((parties.1, parties.0), (outcomes.1, outcomes.0))
        };
        self.pair[pair_slot(a, b)][outcome_slot(oa)][outcome_slot(ob)]
    }
}

/// Single-party and two-party outcome probabilities for three coplanar
/// analyzers. For the GHZ state these are flat (1/2 and 1/4) no matter
/// the azimuths or the visibility; the computation sums the joint
/// probability over the unobserved outcomes.
pub fn marginals(directions: &[AnalyzerDirection], v: Visibility) -> Result<Marginals> {
    if directions.len() != 3 {
        return Err(Error::NotThreeParties(directions.len()));
    }
    for (p, d) in directions.iter().enumerate() {
        if !d.is_coplanar() {
            return Err(Error::NotCoplanar {
                party: p,
                setting: 0,
                theta: d.theta(),
            });
        }
    }
    let terms = probability_terms(directions, v);
    let mut single = [[0.0; 2]; 3];
    let mut pair = [[[0.0; 2]; 2]; 3];
    for party in 0..3 {
        for &o in &Sign::BOTH {
            let mut fixed = [None; 3];
            fixed[party] = Some(o);
            single[party][outcome_slot(o)] = outcome_marginal(fixed, terms);
        }
    }
    for (a, b) in [(0, 1), (0, 2), (1, 2)] {
        for &oa in &Sign::BOTH {
            for &ob in &Sign::BOTH {
                let mut fixed = [None; 3];
                fixed[a] = Some(oa);
                fixed[b] = Some(ob);
                pair[pair_slot(a, b)][outcome_slot(oa)][outcome_slot(ob)] =
                    outcome_marginal(fixed, terms);
            }
        }
    }
    Ok(Marginals { single, pair })
}

/// Full-correlation function for coplanar settings: `v·cos(Σ angles)`.
///
/// Valid for any party count ≥ 2; for three parties it agrees with the
/// outcome-weighted sum of [`joint_probability`] to machine precision.
pub fn correlation(angles: &[f64], v: Visibility) -> f64 {
    v.value() * angles.iter().sum::<f64>().cos()
}

/// The tensor of correlation values over a coplanar grid: entry (i,j,k,…)
/// is `v·cos(α_i + β_j + γ_k + …)`. Non-coplanar grids are rejected.
pub fn correlation_tensor(grid: &SettingsGrid, v: Visibility) -> Result<CorrelationTensor> {
    grid.require_coplanar()?;
    let angles = grid.coplanar_angles()?;
    let dims = grid.counts();
    let mut values = Vec::with_capacity(grid.entry_count());
    let mut index = vec![0usize; dims.len()];
    loop {
        let sum: f64 = index.iter().zip(&angles).map(|(&i, a)| a[i]).sum();
        values.push(v.value() * sum.cos());
        if !crate::index::advance(&mut index, &dims) {
            break;
        }
    }
    CorrelationTensor::new(dims, values)
}
