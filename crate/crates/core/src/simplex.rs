//! Dense two-phase revised simplex for equality-form linear programs.
//!
//! Solves `min cᵀx  s.t.  Ax = b, x ≥ 0` with an explicit basis inverse.
//! Phase 1 starts from an all-artificial basis and minimizes the artificial
//! sum; phase 2 prices only structural columns. Pricing is Dantzig's rule
//! with a switch to Bland's rule after a run of degenerate pivots, which
//! restores the termination guarantee on the highly degenerate, symmetric
//! problems this crate produces. The basis inverse is refactorized
//! periodically to bound drift.
//!
//! The matrices here are small (at most a few hundred rows) and dense, so
//! no sparsity or bounded-variable machinery is attempted.

const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_STEP: f64 = 1e-12;
const BLAND_TRIGGER: usize = 64;
const REFACTOR_EVERY: usize = 128;

#[derive(Clone, Debug)]
pub(crate) struct DenseLp {
    /// Column-major constraint matrix; `cols[j][i]` is A(i, j).
    pub cols: Vec<Vec<f64>>,
    pub rhs: Vec<f64>,
    pub cost: Vec<f64>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Options {
    pub max_iterations: usize,
    pub feas_tol: f64,
    pub opt_tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            max_iterations: 50_000,
            feas_tol: 1e-9,
            opt_tol: 1e-9,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub(crate) enum Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    /// Lost numerical footing (singular basis, uncontrolled drift).
    Numerical,
}

#[derive(Clone, Debug)]
pub(crate) struct Solution {
    pub status: Status,
    pub objective: f64,
    pub x: Vec<f64>,
    /// Row duals of the minimization problem, in the caller's row signs.
    pub duals: Vec<f64>,
    pub iterations: usize,
}

enum Phase {
    Done,
    Unbounded,
    IterationLimit,
    Numerical,
}

struct State {
    m: usize,
    n: usize,
    /// Sign-normalized structural columns (rhs made nonnegative).
    cols: Vec<Vec<f64>>,
    b: Vec<f64>,
    /// Basic column per row; indices ≥ n are artificials.
    basis: Vec<usize>,
    in_basis: Vec<bool>,
    /// Row-major basis inverse.
    binv: Vec<f64>,
    xb: Vec<f64>,
    iterations: usize,
    max_iterations: usize,
    opt_tol: f64,
    pivots_since_refactor: usize,
    degenerate_run: usize,
}

impl State {
    /// Entry A(i, j), artificial columns being unit vectors.
    fn a(&self, i: usize, j: usize) -> f64 {
        if j < self.n {
            self.cols[j][i]
        } else if j - self.n == i {
            1.0
        } else {
            0.0
        }
    }

    /// u = B⁻¹·A_j.
    fn ftran(&self, j: usize) -> Vec<f64> {
        let m = self.m;
        if j >= self.n {
            let col = j - self.n;
            return (0..m).map(|i| self.binv[i * m + col]).collect();
        }
        let a = &self.cols[j];
        (0..m)
            .map(|i| {
                let row = &self.binv[i * m..(i + 1) * m];
                row.iter().zip(a).map(|(&r, &x)| r * x).sum()
            })
            .collect()
    }

    /// y = c_Bᵀ·B⁻¹ for the given cost vector.
    fn duals(&self, cost: &[f64]) -> Vec<f64> {
        let m = self.m;
        let mut y = vec![0.0; m];
        for (i, &bj) in self.basis.iter().enumerate() {
            let cb = cost[bj];
            if cb != 0.0 {
                let row = &self.binv[i * m..(i + 1) * m];
                for (yk, &r) in y.iter_mut().zip(row) {
                    *yk += cb * r;
                }
            }
        }
        y
    }

    fn reduced_cost(&self, j: usize, cost: &[f64], y: &[f64]) -> f64 {
        let dot: f64 = if j < self.n {
            y.iter().zip(&self.cols[j]).map(|(&yk, &a)| yk * a).sum()
        } else {
            y[j - self.n]
        };
        cost[j] - dot
    }

    fn choose_entering(&self, cost: &[f64], y: &[f64], ncols: usize, bland: bool) -> Option<usize> {
        if bland {
            return (0..ncols).find(|&j| {
                !self.in_basis[j] && self.reduced_cost(j, cost, y) < -self.opt_tol
            });
        }
        let mut best = None;
        let mut best_d = -self.opt_tol;
        for j in 0..ncols {
            if self.in_basis[j] {
                continue;
            }
            let d = self.reduced_cost(j, cost, y);
            if d < best_d {
                best_d = d;
                best = Some(j);
            }
        }
        best
    }

    /// Minimum-ratio row, preferring large pivots; under Bland's rule ties
    /// break toward the smallest basic variable index.
    fn choose_leaving(&self, u: &[f64], bland: bool) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for (i, &ui) in u.iter().enumerate() {
            if ui <= PIVOT_TOL {
                continue;
            }
            let ratio = self.xb[i].max(0.0) / ui;
            let better = match best {
                None => true,
                Some(r) => {
                    if ratio < best_ratio - DEGENERATE_STEP {
                        true
                    } else if ratio > best_ratio + DEGENERATE_STEP {
                        false
                    } else if bland {
                        self.basis[i] < self.basis[r]
                    } else {
                        ui > u[r]
                    }
                }
            };
            if better {
                best = Some(i);
                best_ratio = ratio;
            }
        }
        best
    }

    fn pivot(&mut self, r: usize, j: usize, u: &[f64]) {
        let m = self.m;
        let theta = self.xb[r].max(0.0) / u[r];
        for i in 0..m {
            if i != r {
                self.xb[i] -= theta * u[i];
            }
        }
        self.xb[r] = theta;

        let inv_p = 1.0 / u[r];
        for k in 0..m {
            self.binv[r * m + k] *= inv_p;
        }
        for i in 0..m {
            if i == r {
                continue;
            }
            let f = u[i];
            if f != 0.0 {
                for k in 0..m {
                    self.binv[i * m + k] -= f * self.binv[r * m + k];
                }
            }
        }

        self.in_basis[self.basis[r]] = false;
        self.in_basis[j] = true;
        self.basis[r] = j;
        self.pivots_since_refactor += 1;
        self.degenerate_run = if theta <= DEGENERATE_STEP {
            self.degenerate_run + 1
        } else {
            0
        };
    }

    /// Rebuilds B⁻¹ from the basis columns by Gauss-Jordan elimination with
    /// partial pivoting, then refreshes x_B. False means a singular basis.
    fn refactor(&mut self) -> bool {
        let m = self.m;
        let mut work = vec![0.0; m * m];
        for (col, &j) in self.basis.iter().enumerate() {
            for i in 0..m {
                work[i * m + col] = self.a(i, j);
            }
        }
        let mut inv = vec![0.0; m * m];
        for i in 0..m {
            inv[i * m + i] = 1.0;
        }
        for col in 0..m {
            let piv_row = (col..m)
                .max_by(|&a, &b| {
                    work[a * m + col]
                        .abs()
                        .total_cmp(&work[b * m + col].abs())
                })
                .unwrap();
            if work[piv_row * m + col].abs() < 1e-12 {
                return false;
            }
            if piv_row != col {
                for k in 0..m {
                    work.swap(piv_row * m + k, col * m + k);
                    inv.swap(piv_row * m + k, col * m + k);
                }
            }
            let inv_p = 1.0 / work[col * m + col];
            for k in 0..m {
                work[col * m + k] *= inv_p;
                inv[col * m + k] *= inv_p;
            }
            for i in 0..m {
                if i == col {
                    continue;
                }
                let f = work[i * m + col];
                if f != 0.0 {
                    for k in 0..m {
                        work[i * m + k] -= f * work[col * m + k];
                        inv[i * m + k] -= f * inv[col * m + k];
                    }
                }
            }
        }
        self.binv = inv;
        for i in 0..m {
            let row = &self.binv[i * m..(i + 1) * m];
            self.xb[i] = row.iter().zip(&self.b).map(|(&r, &bk)| r * bk).sum();
        }
        self.pivots_since_refactor = 0;
        true
    }

    /// Runs the simplex loop for one phase. `ncols` limits pricing to the
    /// structural columns in phase 2 so artificials cannot re-enter.
    fn run_phase(&mut self, cost: &[f64], ncols: usize) -> Phase {
        loop {
            if self.iterations >= self.max_iterations {
                return Phase::IterationLimit;
            }
            if self.pivots_since_refactor >= REFACTOR_EVERY && !self.refactor() {
                return Phase::Numerical;
            }
            let bland = self.degenerate_run >= BLAND_TRIGGER;
            let y = self.duals(cost);
            let Some(entering) = self.choose_entering(cost, &y, ncols, bland) else {
                return Phase::Done;
            };
            let u = self.ftran(entering);
            let Some(leaving) = self.choose_leaving(&u, bland) else {
                return Phase::Unbounded;
            };
            self.pivot(leaving, entering, &u);
            self.iterations += 1;
        }
    }
}

pub(crate) fn solve(lp: &DenseLp, opts: &Options) -> Solution {
    let m = lp.rhs.len();
    let n = lp.cols.len();
    debug_assert!(lp.cols.iter().all(|c| c.len() == m));
    debug_assert_eq!(lp.cost.len(), n);

    // Normalize row signs so the artificial start is feasible (b ≥ 0).
    let flip: Vec<bool> = lp.rhs.iter().map(|&bi| bi < 0.0).collect();
    let mut cols = lp.cols.clone();
    for col in &mut cols {
        for (i, v) in col.iter_mut().enumerate() {
            if flip[i] {
                *v = -*v;
            }
        }
    }
    let b: Vec<f64> = lp.rhs.iter().map(|&bi| bi.abs()).collect();

    let mut binv = vec![0.0; m * m];
    for i in 0..m {
        binv[i * m + i] = 1.0;
    }
    let mut in_basis = vec![false; n + m];
    for f in &mut in_basis[n..] {
        *f = true;
    }
    let mut st = State {
        m,
        n,
        cols,
        xb: b.clone(),
        b,
        basis: (n..n + m).collect(),
        in_basis,
        binv,
        iterations: 0,
        max_iterations: opts.max_iterations,
        opt_tol: opts.opt_tol,
        pivots_since_refactor: 0,
        degenerate_run: 0,
    };

    let fail = |status: Status, st: &State| Solution {
        status,
        objective: f64::NAN,
        x: vec![0.0; n],
        duals: vec![0.0; m],
        iterations: st.iterations,
    };

    // Phase 1: drive the artificial sum to zero.
    let mut cost1 = vec![0.0; n + m];
    for c in &mut cost1[n..] {
        *c = 1.0;
    }
    match st.run_phase(&cost1, n + m) {
        Phase::Done => {}
        Phase::IterationLimit => return fail(Status::IterationLimit, &st),
        Phase::Unbounded | Phase::Numerical => return fail(Status::Numerical, &st),
    }
    let artificial_sum: f64 = st
        .basis
        .iter()
        .zip(&st.xb)
        .filter(|(&j, _)| j >= n)
        .map(|(_, &x)| x.max(0.0))
        .sum();
    if artificial_sum > opts.feas_tol {
        return fail(Status::Infeasible, &st);
    }

    // Pivot leftover zero-level artificials out on any usable structural
    // column; with a full-row-rank A one always exists.
    for r in 0..m {
        if st.basis[r] < n {
            continue;
        }
        let mut found = false;
        for j in 0..n {
            if st.in_basis[j] {
                continue;
            }
            let u = st.ftran(j);
            if u[r].abs() > 1e-7 {
                st.pivot(r, j, &u);
                found = true;
                break;
            }
        }
        if !found {
            return fail(Status::Numerical, &st);
        }
    }

    let mut cost2 = lp.cost.clone();
    cost2.extend(std::iter::repeat(0.0).take(m));
    let status = match st.run_phase(&cost2, n) {
        Phase::Done => Status::Optimal,
        Phase::Unbounded => Status::Unbounded,
        Phase::IterationLimit => Status::IterationLimit,
        Phase::Numerical => return fail(Status::Numerical, &st),
    };

    let mut x = vec![0.0; n];
    for (i, &j) in st.basis.iter().enumerate() {
        if j < n {
            x[j] = st.xb[i];
        }
    }
    let objective = lp.cost.iter().zip(&x).map(|(&c, &xi)| c * xi).sum();
    let mut duals = st.duals(&cost2);
    for (yi, &f) in duals.iter_mut().zip(&flip) {
        if f {
            *yi = -*yi;
        }
    }
    Solution {
        status,
        objective,
        x,
        duals,
        iterations: st.iterations,
    }
}
