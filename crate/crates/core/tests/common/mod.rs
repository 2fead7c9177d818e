//! Shared helpers for the integration suites: seeded angle draws and an
//! exhaustive vertex-enumeration solver used as an oracle for the simplex
//! path.

// Each test target compiles this module separately and uses its own subset.
#![allow(dead_code)]

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vcrit::quantum::{correlation_tensor, Visibility};
use vcrit::SettingsGrid;

/// Per-party angle lists drawn uniformly from [0, 2π).
pub fn seeded_angles(counts: &[usize], seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    counts
        .iter()
        .map(|&c| {
            (0..c)
                .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
                .collect()
        })
        .collect()
}

pub fn seeded_grid(counts: &[usize], seed: u64) -> SettingsGrid {
    SettingsGrid::from_coplanar_angles(&seeded_angles(counts, seed)).unwrap()
}

/// Flat correlation targets of a grid at unit visibility.
pub fn unit_targets(grid: &SettingsGrid) -> Vec<f64> {
    correlation_tensor(grid, Visibility::FULL)
        .unwrap()
        .values()
        .to_vec()
}

/// Solves a dense square system by Gaussian elimination with partial
/// pivoting; None when singular within tolerance.
fn solve_square(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[row][k] -= f * a[col][k];
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut v = b[row];
        for k in row + 1..n {
            v -= a[row][k] * x[k];
        }
        x[row] = v / a[row][row];
    }
    Some(x)
}

/// The critical visibility by brute force: enumerate every basic solution
/// of the mixture system and keep the best feasible vertex.
///
/// Variables are the weights (one per tensor column), `v`, and the slack of
/// `v ≤ 1`; rows are the tensor entries, the weight normalization, and the
/// `v` bound. This shares no code with the production simplex beyond plain
/// Gaussian elimination, so agreement is meaningful. Cost is C(B+2, E+2)
/// linear solves; keep the instances tiny.
pub fn vertex_enumeration_vmax(tensor_columns: &[Vec<f64>], targets: &[f64]) -> f64 {
    let entries = targets.len();
    let b_count = tensor_columns.len();
    let m = entries + 2;
    let n = b_count + 2;
    let v_col = b_count;

    // Column-major full matrix.
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(n);
    for t in tensor_columns {
        assert_eq!(t.len(), entries);
        let mut col = t.clone();
        col.push(1.0);
        col.push(0.0);
        cols.push(col);
    }
    let mut vcol: Vec<f64> = targets.iter().map(|&c| -c).collect();
    vcol.push(0.0);
    vcol.push(1.0);
    cols.push(vcol);
    let mut slack = vec![0.0; m];
    slack[m - 1] = 1.0;
    cols.push(slack);

    let mut rhs = vec![0.0; m];
    rhs[m - 2] = 1.0;
    rhs[m - 1] = 1.0;

    let mut best = f64::NEG_INFINITY;
    for combo in (0..n).combinations(m) {
        let a: Vec<Vec<f64>> = (0..m)
            .map(|i| combo.iter().map(|&j| cols[j][i]).collect())
            .collect();
        let Some(x) = solve_square(a, rhs.clone()) else {
            continue;
        };
        if x.iter().any(|&xi| xi < -1e-9) {
            continue;
        }
        let v = combo
            .iter()
            .position(|&j| j == v_col)
            .map_or(0.0, |k| x[k]);
        best = best.max(v);
    }
    assert!(best.is_finite(), "no feasible vertex found");
    best
}

/// All ordered per-party setting counts with at least two parties and the
/// given total.
pub fn count_shapes_with_total(total: usize) -> Vec<Vec<usize>> {
    fn extend(remaining: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if remaining == 0 {
            if current.len() >= 2 {
                out.push(current.clone());
            }
            return;
        }
        for first in 1..=remaining {
            current.push(first);
            extend(remaining - first, current, out);
            current.pop();
        }
    }
    let mut out = Vec::new();
    extend(total, &mut Vec::new(), &mut out);
    out
}
