//! Small exact nonlocality arguments: the CHSH inequality machinery and the
//! inequality-free GHZ contradiction.
//!
//! Everything here is algebra on ±1 values, kept in integer arithmetic; the
//! only floats are the correlation values a caller feeds to the bound check
//! and the sine convention used to classify perfect GHZ correlations. GHZ
//! correlations in this section follow `sin(φ_A+φ_B+φ_C)`, unlike the
//! cosine convention of the visibility pipeline; the two never mix.

use std::f64::consts::FRAC_PI_2;

use crate::Sign;

/// One deterministic answer sheet for the CHSH experiment: party A's two
/// predetermined outcomes and party B's.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct ChshAssignment {
    pub a1: Sign,
    pub a2: Sign,
    pub b1: Sign,
    pub b2: Sign,
}

impl ChshAssignment {
    /// All 16 assignments, ordered by the bit pattern (a1, a2, b1, b2),
    /// a zero bit meaning +1.
    pub fn all() -> Vec<ChshAssignment> {
        (0u8..16)
            .map(|bits| {
                let sign = |k: u8| {
                    if bits >> k & 1 == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                };
                ChshAssignment {
                    a1: sign(0),
                    a2: sign(1),
                    b1: sign(2),
                    b2: sign(3),
                }
            })
            .collect()
    }
}

/// The CHSH combination a₁b₁ + a₁b₂ + a₂b₁ − a₂b₂ of one assignment.
///
/// Factoring as a₁(b₁+b₂) + a₂(b₁−b₂) shows one parenthesis is always 0 and
/// the other ±2, so the result is exactly ±2.
pub fn chsh_combination(x: ChshAssignment) -> i32 {
    let p = |u: Sign, v: Sign| i32::from((u * v).value());
    p(x.a1, x.b1) + p(x.a1, x.b2) + p(x.a2, x.b1) - p(x.a2, x.b2)
}

/// Evaluates S = E₁₁ + E₁₂ + E₂₁ − E₂₂ and whether the local-realistic
/// bound −2 ≤ S ≤ 2 holds. The bound is closed: equality satisfies it.
pub fn chsh_bound_check(correlations: [f64; 4]) -> (f64, bool) {
    let [e11, e12, e21, e22] = correlations;
    let s = e11 + e12 + e21 - e22;
    (s, s.abs() <= 2.0)
}

/// GHZ correlation in the sine convention: E(φ_A, φ_B, φ_C) =
/// sin(φ_A + φ_B + φ_C).
pub fn ghz_sin_correlation(phi_a: f64, phi_b: f64, phi_c: f64) -> f64 {
    (phi_a + phi_b + phi_c).sin()
}

/// One perfect-correlation equation: at these angles the outcome product
/// must equal `required`.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct ParadoxConstraint {
    pub angles: [f64; 3],
    pub required: Sign,
}

/// The GHZ argument, fully evaluated: three perfect-correlation premises,
/// the product value they force, the quantum value that contradicts it,
/// and the exhaustive count of ±1 assignments meeting all four equations.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ParadoxRecord {
    constraints: [ParadoxConstraint; 4],
    derived: Sign,
    quantum: Sign,
    satisfying: usize,
    assignments: usize,
}

impl ParadoxRecord {
    /// The three premises followed by the contradicted equation.
    pub fn constraints(&self) -> &[ParadoxConstraint; 4] {
        &self.constraints
    }

    /// The product value local realism derives for the fourth equation.
    pub fn derived_product(&self) -> Sign {
        self.derived
    }

    /// The value quantum mechanics requires there instead.
    pub fn quantum_value(&self) -> Sign {
        self.quantum
    }

    /// How many of the 64 assignments satisfy all four equations.
    pub fn satisfying_assignments(&self) -> usize {
        self.satisfying
    }

    pub fn assignment_count(&self) -> usize {
        self.assignments
    }
}

/// The sign of a perfect sine correlation: at angle sums π/2 + kπ the
/// correlation is exactly (−1)^k.
fn perfect_sign(angles: [f64; 3]) -> Sign {
    let sum: f64 = angles.iter().sum();
    let k = ((sum - FRAC_PI_2) / std::f64::consts::PI).round() as i64;
    debug_assert!(
        (ghz_sin_correlation(angles[0], angles[1], angles[2]).abs() - 1.0).abs() < 1e-9,
        "not a perfect-correlation angle triple: {angles:?}"
    );
    if k % 2 == 0 {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Runs the inequality-free GHZ argument.
///
/// Each party may measure at 0 or π/2. The three premises place π/2 with
/// one party at a time (angle sum π/2, perfect correlation +1); multiplying
/// them cancels every squared 0-setting outcome and forces the all-π/2
/// product to +1, while the angle sum 3π/2 demands −1. Exhaustion over all
/// 2⁶ outcome assignments confirms no local answer sheet satisfies all
/// four equations at once.
pub fn ghz_paradox() -> ParadoxRecord {
    const SETTING_ANGLES: [f64; 2] = [0.0, FRAC_PI_2];
    // Setting index per party for each equation: premises, then the
    // contradicted all-π/2 combination.
    const EQUATIONS: [[usize; 3]; 4] = [[1, 0, 0], [0, 0, 1], [0, 1, 0], [1, 1, 1]];

    let constraints = EQUATIONS.map(|eq| {
        let angles = eq.map(|s| SETTING_ANGLES[s]);
        ParadoxConstraint {
            angles,
            required: perfect_sign(angles),
        }
    });

    let derived = constraints[..3]
        .iter()
        .fold(Sign::Plus, |acc, c| acc * c.required);
    let quantum = constraints[3].required;
    debug_assert_eq!(derived, -quantum);

    // Assignment bits: A(0), A(π/2), B(0), B(π/2), C(0), C(π/2).
    let assignments = 1usize << 6;
    let satisfying = (0..assignments)
        .filter(|bits| {
            EQUATIONS.iter().zip(&constraints).all(|(eq, c)| {
                let outcome = |party: usize| {
                    if bits >> (2 * party + eq[party]) & 1 == 0 {
                        Sign::Plus
                    } else {
                        Sign::Minus
                    }
                };
                outcome(0) * outcome(1) * outcome(2) == c.required
            })
        })
        .count();

    ParadoxRecord {
        constraints,
        derived,
        quantum,
        satisfying,
        assignments,
    }
}
