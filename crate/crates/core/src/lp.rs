//! The visibility linear program: the largest `V` for which `V`-scaled
//! quantum correlations admit a local-hidden-variable mixture.
//!
//! For a coplanar grid with correlation targets `c_e = cos(Σ angles)` the
//! test asks for weights `w ≥ 0` with `Σ_s w_s·T_s,e = V·c_e` per entry and
//! `Σ w = 1`. Both conditions on `V` (nonnegativity via feasibility of
//! `V = 0`, the cap `V ≤ 1`) are absorbed by substituting `t = 1 − V` and
//! minimizing the noise weight `t ≥ 0`, which keeps the system at exactly
//! one row per tensor entry plus the normalization row. The optimum is a
//! polytope vertex, so a simplex solve returns exact mixtures.

use std::io;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lhv::{self, StrategyBasis};
use crate::quantum::{self, CorrelationTensor, SettingsGrid, Visibility};
use crate::simplex;

const WEIGHT_TOL: f64 = 1e-9;
const RESIDUAL_TOL: f64 = 1e-8;

/// The assembled membership problem: maximize `V` subject to the mixture
/// equalities over a fixed strategy basis.
#[derive(Clone, Debug)]
pub struct LpProblem {
    basis: Arc<StrategyBasis>,
    targets: CorrelationTensor,
}

impl LpProblem {
    /// Pairs a strategy basis with a target tensor of matching shape.
    pub fn new(basis: Arc<StrategyBasis>, targets: CorrelationTensor) -> Result<Self> {
        if basis.counts() != targets.dims() {
            return Err(Error::BasisMismatch {
                basis: basis.counts().to_vec(),
                grid: targets.dims().to_vec(),
            });
        }
        Ok(Self { basis, targets })
    }

    pub fn basis(&self) -> &StrategyBasis {
        &self.basis
    }

    /// Correlation targets at unit visibility.
    pub fn targets(&self) -> &CorrelationTensor {
        &self.targets
    }

    /// One equality per tensor entry plus the normalization row.
    pub fn constraint_count(&self) -> usize {
        self.targets.len() + 1
    }

    /// One mixture weight per basis tensor plus the visibility itself.
    pub fn variable_count(&self) -> usize {
        self.basis.len() + 1
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LpStatus {
    Optimal,
    /// Never produced by problems built here; `V = 0` with the uniform
    /// mixture over any tensor and its negation is always feasible.
    Infeasible,
    IterationLimit,
}

/// An LP outcome: the critical visibility together with its certificate
/// mixture and the constraint duals.
#[derive(Clone, Debug, serde::Serialize)]
pub struct LpSolution {
    status: LpStatus,
    v_max: Visibility,
    weights: Vec<f64>,
    duals: Vec<f64>,
    iterations: usize,
}

impl LpSolution {
    pub fn status(&self) -> LpStatus {
        self.status
    }

    /// The critical visibility. On `IterationLimit` this is only the best
    /// feasible value seen, a valid lower bound.
    pub fn v_max(&self) -> Visibility {
        self.v_max
    }

    /// Mixture weight per basis tensor, in basis order.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Row duals of the noise-minimizing form, one per constraint (entry
    /// rows in tensor order, then the normalization row). At an optimum
    /// they certify the objective: `v_max = 1 − (Σ_e c_e·y_e + y_norm)`.
    pub fn duals(&self) -> &[f64] {
        &self.duals
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Max-norm residual of the mixture equalities, ‖Σ w·T − v·c‖∞.
    pub fn residual(&self, problem: &LpProblem) -> f64 {
        let v = self.v_max.value();
        let mut worst = 0.0f64;
        for (e, &target) in problem.targets.values().iter().enumerate() {
            let mixed: f64 = problem
                .basis
                .tensors()
                .iter()
                .zip(&self.weights)
                .map(|(t, &w)| w * t.signs()[e].as_f64())
                .sum();
            worst = worst.max((mixed - v * target).abs());
        }
        worst
    }
}

/// Builds the membership LP for a coplanar grid with the default
/// even-flip-deduplicated basis.
pub fn build_problem(grid: &SettingsGrid) -> Result<LpProblem> {
    let basis = Arc::new(lhv::build_basis(grid)?);
    build_problem_with_basis(basis, grid)
}

/// Builds the LP against a prebuilt basis, for callers that sweep many
/// grids of the same shape.
pub fn build_problem_with_basis(
    basis: Arc<StrategyBasis>,
    grid: &SettingsGrid,
) -> Result<LpProblem> {
    let targets = quantum::correlation_tensor(grid, Visibility::FULL)?;
    LpProblem::new(basis, targets)
}

/// Solves the membership LP.
///
/// An `Optimal` solution is validated before it is returned: weights down
/// to −1e-9, their sum within 1e-9 of one, mixture residual within 1e-8,
/// and the visibility inside [0, 1] up to 1e-9 (then clamped). Violations
/// surface as numerical errors rather than silently wrong answers.
pub fn solve_lp(problem: &LpProblem) -> Result<LpSolution> {
    let basis_len = problem.basis.len();
    let entries = problem.targets.len();
    let m = entries + 1;
    let n = basis_len + 1;

    let mut cols = Vec::with_capacity(n);
    for tensor in problem.basis.tensors() {
        let mut col = Vec::with_capacity(m);
        col.extend(tensor.signs().iter().map(|s| s.as_f64()));
        col.push(1.0);
        cols.push(col);
    }
    let mut noise_col = problem.targets.values().to_vec();
    noise_col.push(0.0);
    cols.push(noise_col);

    let mut rhs = problem.targets.values().to_vec();
    rhs.push(1.0);
    let mut cost = vec![0.0; n];
    cost[n - 1] = 1.0;

    let raw = simplex::solve(
        &simplex::DenseLp { cols, rhs, cost },
        &simplex::Options::default(),
    );

    match raw.status {
        simplex::Status::Optimal => {
            let v_raw = 1.0 - raw.objective;
            if !(-WEIGHT_TOL..=1.0 + WEIGHT_TOL).contains(&v_raw) {
                return Err(Error::Numerical(format!(
                    "visibility {v_raw} left [0, 1] despite explicit bounds"
                )));
            }
            let weights = raw.x[..basis_len].to_vec();
            let sum: f64 = weights.iter().sum();
            if (sum - 1.0).abs() > WEIGHT_TOL {
                return Err(Error::Numerical(format!(
                    "mixture weights sum to {sum}, expected 1"
                )));
            }
            if let Some(&w) = weights
                .iter()
                .min_by(|a, b| a.total_cmp(b))
                .filter(|&&w| w < -WEIGHT_TOL)
            {
                return Err(Error::Numerical(format!(
                    "mixture weight {w} fell below zero"
                )));
            }
            let solution = LpSolution {
                status: LpStatus::Optimal,
                v_max: Visibility::new(v_raw.clamp(0.0, 1.0)).expect("clamped to range"),
                weights,
                duals: raw.duals,
                iterations: raw.iterations,
            };
            let res = solution.residual(problem);
            if res > RESIDUAL_TOL {
                return Err(Error::Numerical(format!(
                    "mixture residual {res} exceeds {RESIDUAL_TOL}"
                )));
            }
            Ok(solution)
        }
        simplex::Status::IterationLimit => {
            let v = if raw.objective.is_finite() {
                (1.0 - raw.objective).clamp(0.0, 1.0)
            } else {
                0.0
            };
            Ok(LpSolution {
                status: LpStatus::IterationLimit,
                v_max: Visibility::new(v).expect("clamped to range"),
                weights: raw.x[..basis_len].to_vec(),
                duals: raw.duals,
                iterations: raw.iterations,
            })
        }
        simplex::Status::Infeasible => {
            debug_assert!(
                false,
                "the visibility LP is feasible by construction (V = 0 mixture)"
            );
            Ok(LpSolution {
                status: LpStatus::Infeasible,
                v_max: Visibility::ZERO,
                weights: vec![0.0; basis_len],
                duals: raw.duals,
                iterations: raw.iterations,
            })
        }
        simplex::Status::Unbounded => Err(Error::Numerical(
            "the visibility LP reported an unbounded objective; the noise weight is bounded"
                .into(),
        )),
        simplex::Status::Numerical => Err(Error::Numerical(
            "basis factorization failed while solving the visibility LP".into(),
        )),
    }
}

/// The critical visibility of a coplanar grid: `build_problem` composed
/// with `solve_lp`.
pub fn critical_visibility(grid: &SettingsGrid) -> Result<LpSolution> {
    solve_lp(&build_problem(grid)?)
}

/// [`critical_visibility`] against a prebuilt basis; the hot path when
/// scanning or optimizing over grids of a fixed shape.
pub fn critical_visibility_with_basis(
    basis: Arc<StrategyBasis>,
    grid: &SettingsGrid,
) -> Result<LpSolution> {
    solve_lp(&build_problem_with_basis(basis, grid)?)
}

/// Writes the problem in CPLEX LP text format (maximize form, explicit
/// bounds) for cross-checking against external solvers.
pub fn write_lp_format<W: io::Write>(problem: &LpProblem, mut out: W) -> io::Result<()> {
    let dims = problem.targets.dims().to_vec();
    writeln!(
        out,
        "\\ critical visibility LP, setting counts {dims:?}, {} mixture columns",
        problem.basis.len()
    )?;
    writeln!(out, "Maximize\n obj: v")?;
    writeln!(out, "Subject To")?;

    let mut index = vec![0usize; dims.len()];
    let mut entry = 0usize;
    loop {
        let name: Vec<String> = index.iter().map(ToString::to_string).collect();
        write!(out, " e{}:", name.join("_"))?;
        for (s, tensor) in problem.basis.tensors().iter().enumerate() {
            let sign = if tensor.signs()[entry] == crate::Sign::Plus {
                '+'
            } else {
                '-'
            };
            write!(out, " {sign} w{s}")?;
        }
        let c = problem.targets.values()[entry];
        if c != 0.0 {
            write!(out, " {:+e} v", -c)?;
        }
        writeln!(out, " = 0")?;
        entry += 1;
        if !crate::index::advance(&mut index, &dims) {
            break;
        }
    }

    write!(out, " norm:")?;
    for s in 0..problem.basis.len() {
        write!(out, " + w{s}")?;
    }
    writeln!(out, " = 1")?;
    writeln!(out, "Bounds\n 0 <= v <= 1")?;
    writeln!(out, "End")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn coplanar(angles: &[Vec<f64>]) -> SettingsGrid {
        SettingsGrid::from_coplanar_angles(angles).unwrap()
    }

    fn uniform_grid(counts: &[usize]) -> SettingsGrid {
        let angles: Vec<Vec<f64>> = counts
            .iter()
            .map(|&c| (0..c).map(|i| 0.37 * i as f64).collect())
            .collect();
        coplanar(&angles)
    }

    #[test]
    fn problem_dimensions() {
        for (counts, constraints, variables) in
            [(&[2usize, 2, 2][..], 9, 17), (&[1, 1, 1], 2, 3), (&[3, 3, 3], 28, 129)]
        {
            let p = build_problem(&uniform_grid(counts)).unwrap();
            assert_eq!(p.constraint_count(), constraints);
            assert_eq!(p.variable_count(), variables);
        }
    }

    #[test]
    fn zero_targets_allow_full_visibility() {
        let basis = Arc::new(lhv::build_basis(&uniform_grid(&[2, 2])).unwrap());
        let targets = CorrelationTensor::new(vec![2, 2], vec![0.0; 4]).unwrap();
        let sol = solve_lp(&LpProblem::new(basis, targets).unwrap()).unwrap();
        assert_eq!(sol.status(), LpStatus::Optimal);
        assert!((sol.v_max().value() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn single_entry_target_is_reachable() {
        let sol = critical_visibility(&coplanar(&[vec![0.0], vec![0.0], vec![0.0]])).unwrap();
        assert_eq!(sol.status(), LpStatus::Optimal);
        assert!((sol.v_max().value() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn any_single_setting_grid_is_classical() {
        for angles in [[0.4, 1.3], [2.2, -0.7], [0.0, 0.9]] {
            let sol =
                critical_visibility(&coplanar(&[vec![angles[0]], vec![angles[1]]])).unwrap();
            assert!((sol.v_max().value() - 1.0).abs() <= 1e-9, "angles {angles:?}");
        }
    }

    #[test]
    fn two_setting_orthogonal_grid_halves_visibility() {
        let g = coplanar(&[
            vec![0.0, FRAC_PI_2],
            vec![0.0, FRAC_PI_2],
            vec![0.0, FRAC_PI_2],
        ]);
        let sol = critical_visibility(&g).unwrap();
        assert_eq!(sol.status(), LpStatus::Optimal);
        assert!((sol.v_max().value() - 0.5).abs() <= 1e-9);
    }

    #[test]
    fn chsh_grid_reaches_inverse_sqrt_two() {
        let g = coplanar(&[vec![0.0, FRAC_PI_2], vec![FRAC_PI_4, -FRAC_PI_4]]);
        let sol = critical_visibility(&g).unwrap();
        assert!((sol.v_max().value() - std::f64::consts::FRAC_1_SQRT_2).abs() <= 1e-9);
    }

    #[test]
    fn optimal_solutions_carry_valid_certificates() {
        let g = coplanar(&[vec![0.0, FRAC_PI_2], vec![FRAC_PI_4, -FRAC_PI_4], vec![0.1, 0.8]]);
        let p = build_problem(&g).unwrap();
        let sol = solve_lp(&p).unwrap();
        assert_eq!(sol.status(), LpStatus::Optimal);

        assert!(sol.residual(&p) <= 1e-8);
        let sum: f64 = sol.weights().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-9);
        assert!(sol.weights().iter().all(|&w| w >= -1e-9));

        // Dual certificate: v = 1 − (Σ c·y + y_norm).
        let c = p.targets().values();
        let y = sol.duals();
        let bound: f64 = c.iter().zip(y).map(|(&ce, &ye)| ce * ye).sum::<f64>() + y[c.len()];
        assert!((sol.v_max().value() - (1.0 - bound)).abs() <= 1e-8);
    }

    #[test]
    fn prebuilt_basis_must_match_grid_shape() {
        let basis = Arc::new(lhv::build_basis(&uniform_grid(&[2, 2])).unwrap());
        let err = build_problem_with_basis(basis, &uniform_grid(&[2, 2, 2]));
        assert!(matches!(err, Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn rejects_non_coplanar_grids() {
        let tilted = crate::quantum::AnalyzerDirection::new(0.4, 0.0).unwrap();
        let flat = crate::quantum::AnalyzerDirection::coplanar(0.0).unwrap();
        let g = SettingsGrid::new(vec![vec![flat], vec![tilted]]).unwrap();
        assert!(matches!(
            build_problem(&g),
            Err(Error::NotCoplanar { .. })
        ));
    }

    #[test]
    fn solutions_are_deterministic() {
        let g = uniform_grid(&[2, 2, 2]);
        let a = critical_visibility(&g).unwrap();
        let b = critical_visibility(&g).unwrap();
        assert_eq!(a.v_max().value(), b.v_max().value());
        assert_eq!(a.weights(), b.weights());
    }

    #[test]
    fn lp_dump_is_well_formed() {
        let p = build_problem(&uniform_grid(&[1, 1])).unwrap();
        let mut buf = Vec::new();
        write_lp_format(&p, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("Maximize"));
        assert!(text.contains("Subject To"));
        assert!(text.contains("e0_0:"));
        assert!(text.contains("norm:"));
        assert!(text.contains("0 <= v <= 1"));
        assert!(text.trim_end().ends_with("End"));
    }
}
