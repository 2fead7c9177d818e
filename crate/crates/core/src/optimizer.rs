//! Settings search: minimize the critical visibility over analyzer angles.
//!
//! The objective `grid ↦ V^max(grid)` is piecewise smooth but derivative
//! information is awkward (each evaluation is an LP), so the search uses
//! multi-restart Nelder-Mead over the flat angle vector, one coordinate per
//! setting. Shifting one party's angles by δ and another's by −δ leaves
//! every angle sum unchanged, so the objective has flat gauge directions;
//! convergence therefore keys on the function-value spread across the
//! simplex, never on its diameter.
//!
//! Randomness (restart starting points, scan samples) comes from a seeded
//! ChaCha8 stream, drawn up-front in a fixed order, so reports are
//! byte-identical across runs and thread counts.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lhv::{self, StrategyBasis, DEFAULT_MAX_TOTAL_SETTINGS};
use crate::lp::{self, LpSolution, LpStatus};
use crate::quantum::SettingsGrid;

const ANGLE_DIGITS: i32 = 12;
const INITIAL_SIMPLEX_STEP: f64 = 0.5;

/// Nelder-Mead controls plus the restart schedule.
#[derive(Clone, Copy, PartialEq, Debug, serde::Serialize)]
pub struct SimplexConfig {
    pub reflection: f64,
    pub expansion: f64,
    pub contraction: f64,
    pub shrink: f64,
    /// Convergence threshold on max−min objective value over the simplex.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for SimplexConfig {
    fn default() -> Self {
        Self {
            reflection: 1.0,
            expansion: 2.0,
            contraction: 0.5,
            shrink: 0.5,
            tolerance: 1e-6,
            max_iterations: 2000,
            restarts: 30,
            seed: 0,
        }
    }
}

impl SimplexConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.reflection > 0.0) {
            return Err(Error::BadConfig(format!(
                "reflection coefficient must be positive, got {}",
                self.reflection
            )));
        }
        if !(self.expansion > 1.0) {
            return Err(Error::BadConfig(format!(
                "expansion coefficient must exceed 1, got {}",
                self.expansion
            )));
        }
        if !(self.contraction > 0.0 && self.contraction < 1.0) {
            return Err(Error::BadConfig(format!(
                "contraction coefficient must lie in (0, 1), got {}",
                self.contraction
            )));
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return Err(Error::BadConfig(format!(
                "shrink coefficient must lie in (0, 1), got {}",
                self.shrink
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::BadConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.restarts == 0 {
            return Err(Error::BadConfig("restarts must be at least 1".into()));
        }
        Ok(())
    }
}

/// Outcome of one Nelder-Mead run.
#[derive(Clone, Debug, serde::Serialize)]
pub struct NelderMeadResult {
    pub point: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// False when the run stopped on the iteration budget instead of the
    /// spread tolerance.
    pub converged: bool,
}

/// Minimizes a total objective by the downhill simplex method.
///
/// The initial simplex is the start point plus one vertex per coordinate,
/// offset by 0.5 (radians, for the angle objectives here). Deterministic:
/// no randomness is used inside a run.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut objective: F,
    start: &[f64],
    cfg: &SimplexConfig,
) -> Result<NelderMeadResult> {
    cfg.validate()?;
    let n = start.len();
    if n == 0 {
        return Err(Error::BadConfig(
            "nelder_mead needs at least one coordinate".into(),
        ));
    }

    let mut evaluations = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        objective(x)
    };

    let mut pts: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = eval(start, &mut evaluations);
    pts.push((start.to_vec(), f0));
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += INITIAL_SIMPLEX_STEP;
        let f = eval(&p, &mut evaluations);
        pts.push((p, f));
    }
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));

    let mut iterations = 0usize;
    let converged = loop {
        let spread = pts[n].1 - pts[0].1;
        if spread < cfg.tolerance {
            break true;
        }
        if iterations >= cfg.max_iterations {
            break false;
        }
        iterations += 1;

        let mut centroid = vec![0.0; n];
        for (p, _) in &pts[..n] {
            for (c, &x) in centroid.iter_mut().zip(p) {
                *c += x;
            }
        }
        for c in &mut centroid {
            *c /= n as f64;
        }
        let worst = pts[n].clone();
        let along = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(&c, &w)| c + coef * (c - w))
                .collect()
        };

        let reflected = along(cfg.reflection);
        let fr = eval(&reflected, &mut evaluations);
        if fr < pts[0].1 {
            let expanded = along(cfg.reflection * cfg.expansion);
            let fe = eval(&expanded, &mut evaluations);
            pts[n] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < pts[n - 1].1 {
            pts[n] = (reflected, fr);
        } else if fr < worst.1 {
            let contracted = along(cfg.reflection * cfg.contraction);
            let fc = eval(&contracted, &mut evaluations);
            if fc <= fr {
                pts[n] = (contracted, fc);
            } else {
                shrink_simplex(&mut pts, cfg.shrink, &mut |x| eval(x, &mut evaluations));
            }
        } else {
            let contracted = along(-cfg.contraction);
            let fc = eval(&contracted, &mut evaluations);
            if fc < worst.1 {
                pts[n] = (contracted, fc);
            } else {
                shrink_simplex(&mut pts, cfg.shrink, &mut |x| eval(x, &mut evaluations));
            }
        }
        pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    };

    let (point, value) = pts.swap_remove(0);
    Ok(NelderMeadResult {
        point,
        value,
        iterations,
        evaluations,
        converged,
    })
}

fn shrink_simplex<F: FnMut(&[f64]) -> f64>(
    pts: &mut [(Vec<f64>, f64)],
    shrink: f64,
    eval: &mut F,
) {
    let best = pts[0].0.clone();
    for (p, f) in &mut pts[1..] {
        for (x, &b) in p.iter_mut().zip(&best) {
            *x = b + shrink * (*x - b);
        }
        *f = eval(p);
    }
}

/// Rounds to 12 significant digits, the precision carried by reported
/// angles.
pub(crate) fn round_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(ANGLE_DIGITS - 1 - magnitude);
    (x * scale).round() / scale
}

fn split_by_counts(counts: &[usize], flat: &[f64]) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(counts.len());
    let mut offset = 0;
    for &c in counts {
        out.push(flat[offset..offset + c].to_vec());
        offset += c;
    }
    out
}

fn validate_counts(counts: &[usize]) -> Result<()> {
    if counts.len() < 2 {
        return Err(Error::TooFewParties(counts.len()));
    }
    for (p, &c) in counts.iter().enumerate() {
        if c == 0 {
            return Err(Error::EmptyParty(p));
        }
    }
    Ok(())
}

/// Builds the shared dedup basis for a count shape under a cap.
fn basis_for_counts(counts: &[usize], cap: usize) -> Result<Arc<StrategyBasis>> {
    let total: usize = counts.iter().sum();
    let reference = SettingsGrid::from_coplanar_flat(counts, &vec![0.0; total])?;
    Ok(Arc::new(lhv::build_basis_with(
        &reference,
        lhv::DedupMode::EvenFlips,
        cap,
    )?))
}

/// The search objective: critical visibility of the grid at a flat angle
/// vector, with LP failures parked for later propagation.
struct VisibilityObjective {
    counts: Vec<usize>,
    basis: Arc<StrategyBasis>,
    error: Option<Error>,
}

impl VisibilityObjective {
    fn eval(&mut self, x: &[f64]) -> f64 {
        if self.error.is_some() {
            return f64::INFINITY;
        }
        let result = SettingsGrid::from_coplanar_flat(&self.counts, x)
            .and_then(|grid| lp::critical_visibility_with_basis(self.basis.clone(), &grid));
        match result {
            Ok(sol) if sol.status() == LpStatus::Optimal => sol.v_max().value(),
            Ok(sol) => {
                self.error = Some(Error::Numerical(format!(
                    "LP finished with status {:?} during settings search",
                    sol.status()
                )));
                f64::INFINITY
            }
            Err(e) => {
                self.error = Some(e);
                f64::INFINITY
            }
        }
    }
}

/// One restart of the settings search.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RestartRecord {
    pub start: Vec<f64>,
    pub end: Vec<f64>,
    pub end_value: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
}

/// Result of a multi-restart settings optimization.
#[derive(Clone, Debug, serde::Serialize)]
pub struct OptimizationReport {
    counts: Vec<usize>,
    seed: u64,
    config: SimplexConfig,
    /// Per-party angles of the best grid, rounded to 12 significant digits.
    best_angles: Vec<Vec<f64>>,
    best_v: f64,
    restarts: Vec<RestartRecord>,
    lp_solves: usize,
}

impl OptimizationReport {
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn config(&self) -> &SimplexConfig {
        &self.config
    }

    pub fn best_angles(&self) -> &[Vec<f64>] {
        &self.best_angles
    }

    /// The best grid found, reconstructed from the rounded angles.
    pub fn best_grid(&self) -> SettingsGrid {
        SettingsGrid::from_coplanar_angles(&self.best_angles)
            .expect("report angles are finite")
    }

    /// The minimum over all restart end values.
    pub fn best_v(&self) -> f64 {
        self.best_v
    }

    pub fn restarts(&self) -> &[RestartRecord] {
        &self.restarts
    }

    pub fn lp_solves(&self) -> usize {
        self.lp_solves
    }
}

/// Searches for the angle grid minimizing `V^max` for the given per-party
/// setting counts.
///
/// Runs `cfg.restarts` independent Nelder-Mead searches from starting
/// vectors drawn uniformly from [0, 2π) per coordinate, using the seeded
/// generator. Restarts execute in parallel; the start list and the
/// min-reduction (ties to the lowest restart index) are fixed, so the
/// report does not depend on scheduling.
pub fn minimize_vmax(counts: &[usize], cfg: &SimplexConfig) -> Result<OptimizationReport> {
    minimize_vmax_capped(counts, cfg, DEFAULT_MAX_TOTAL_SETTINGS)
}

/// [`minimize_vmax`] with an explicit enumeration cap.
pub fn minimize_vmax_capped(
    counts: &[usize],
    cfg: &SimplexConfig,
    cap: usize,
) -> Result<OptimizationReport> {
    cfg.validate()?;
    validate_counts(counts)?;
    let basis = basis_for_counts(counts, cap)?;
    let dim: usize = counts.iter().sum();

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let starts: Vec<Vec<f64>> = (0..cfg.restarts)
        .map(|_| {
            (0..dim)
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect()
        })
        .collect();

    let records: Vec<RestartRecord> = starts
        .into_par_iter()
        .map(|start| {
            let mut objective = VisibilityObjective {
                counts: counts.to_vec(),
                basis: basis.clone(),
                error: None,
            };
            let run = nelder_mead(|x| objective.eval(x), &start, cfg)?;
            if let Some(e) = objective.error {
                return Err(e);
            }
            Ok(RestartRecord {
                start,
                end: run.point,
                end_value: run.value,
                iterations: run.iterations,
                evaluations: run.evaluations,
                converged: run.converged,
            })
        })
        .collect::<Result<_>>()?;

    let best = records
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.end_value.total_cmp(&b.end_value).then(ia.cmp(ib)))
        .map(|(i, _)| i)
        .expect("restarts >= 1");
    let best_flat: Vec<f64> = records[best].end.iter().map(|&a| round_sig(a)).collect();

    Ok(OptimizationReport {
        counts: counts.to_vec(),
        seed: cfg.seed,
        config: *cfg,
        best_angles: split_by_counts(counts, &best_flat),
        best_v: records[best].end_value,
        lp_solves: records.iter().map(|r| r.evaluations).sum(),
        restarts: records,
    })
}

/// Five-number summary of scanned visibility values.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct DistributionSummary {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

impl DistributionSummary {
    fn from_values(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let at = |p: f64| {
            let h = (sorted.len() - 1) as f64 * p;
            let lo = h.floor() as usize;
            let hi = (lo + 1).min(sorted.len() - 1);
            sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
        };
        Some(Self {
            min: sorted[0],
            q1: at(0.25),
            median: at(0.5),
            q3: at(0.75),
            max: sorted[sorted.len() - 1],
        })
    }
}

/// The lowest grid a scan found.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ScanBest {
    /// Per-party angles rounded to 12 significant digits.
    pub angles: Vec<Vec<f64>>,
    pub v_max: f64,
}

/// Result of a random scan over angle grids of a fixed shape.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ScanReport {
    counts: Vec<usize>,
    seed: u64,
    samples: usize,
    /// One critical visibility per sample, in draw order.
    values: Vec<f64>,
    summary: Option<DistributionSummary>,
    best: Option<ScanBest>,
    lp_solves: usize,
}

impl ScanReport {
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn samples(&self) -> usize {
        self.samples
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn summary(&self) -> Option<&DistributionSummary> {
        self.summary.as_ref()
    }

    pub fn best(&self) -> Option<&ScanBest> {
        self.best.as_ref()
    }

    pub fn lp_solves(&self) -> usize {
        self.lp_solves
    }
}

/// Evaluates the critical visibility at `samples` random grids of the given
/// shape, angles uniform in [0, 2π), and reports the minimum found along
/// with a distribution summary. Zero samples yield an empty report.
pub fn random_scan(counts: &[usize], samples: usize, seed: u64) -> Result<ScanReport> {
    random_scan_capped(counts, samples, seed, DEFAULT_MAX_TOTAL_SETTINGS)
}

/// [`random_scan`] with an explicit enumeration cap.
pub fn random_scan_capped(
    counts: &[usize],
    samples: usize,
    seed: u64,
    cap: usize,
) -> Result<ScanReport> {
    validate_counts(counts)?;
    let basis = basis_for_counts(counts, cap)?;
    let dim: usize = counts.iter().sum();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draws: Vec<Vec<f64>> = (0..samples)
        .map(|_| {
            (0..dim)
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect()
        })
        .collect();

    let values: Vec<f64> = draws
        .par_iter()
        .map(|angles| {
            let grid = SettingsGrid::from_coplanar_flat(counts, angles)?;
            let sol = lp::critical_visibility_with_basis(basis.clone(), &grid)?;
            if sol.status() != LpStatus::Optimal {
                return Err(Error::Numerical(format!(
                    "LP finished with status {:?} during scan",
                    sol.status()
                )));
            }
            Ok(sol.v_max().value())
        })
        .collect::<Result<_>>()?;

    let best = values
        .iter()
        .enumerate()
        .min_by(|(ia, a), (ib, b)| a.total_cmp(b).then(ia.cmp(ib)))
        .map(|(i, &v)| ScanBest {
            angles: split_by_counts(
                counts,
                &draws[i].iter().map(|&a| round_sig(a)).collect::<Vec<_>>(),
            ),
            v_max: v,
        });

    Ok(ScanReport {
        counts: counts.to_vec(),
        seed,
        samples,
        summary: DistributionSummary::from_values(&values),
        best,
        lp_solves: values.len(),
        values,
    })
}

/// Critical visibility of one explicit grid; the scripted counterpart of
/// the search entry points.
pub fn evaluate_fixed(grid: &SettingsGrid) -> Result<LpSolution> {
    lp::critical_visibility(grid)
}

/// [`evaluate_fixed`] with an explicit enumeration cap.
pub fn evaluate_fixed_capped(grid: &SettingsGrid, cap: usize) -> Result<LpSolution> {
    let basis = Arc::new(lhv::build_basis_with(
        grid,
        lhv::DedupMode::EvenFlips,
        cap,
    )?);
    lp::critical_visibility_with_basis(basis, grid)
}
