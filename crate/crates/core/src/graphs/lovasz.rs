//! `lovasz(G)`, the Lovász number of the complement of `G`, by a small dense
//! primal-dual interior-point method with a certified enclosing interval.
//!
//! Primal: maximize `⟨J, X⟩` over `X ⪰ 0`, `tr X = 1`, `X_ij = 0` for distinct
//! non-adjacent `i, j` of `G`. Dual: minimize `y_0` subject to
//! `y_0 I + Σ y_ij (E_ij + E_ji) − J ⪰ 0`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{guard, Graph, GraphError, DEFAULT_GUARD};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LovaszResult {
    pub value: f64,
    /// Objective of a repaired primal-feasible matrix.
    pub lower: f64,
    /// Largest eigenvalue bound from the dual multipliers.
    pub upper: f64,
    pub tol: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl LovaszResult {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

const MAX_ITERATIONS: usize = 200;

pub fn lovasz_complement(g: &Graph, tol: f64) -> Result<LovaszResult, GraphError> {
    lovasz_complement_with_guard(g, tol, guard(DEFAULT_GUARD))
}

pub fn lovasz_complement_with_guard(
    g: &Graph,
    tol: f64,
    guard: usize,
) -> Result<LovaszResult, GraphError> {
    if g.n() > guard {
        return Err(GraphError::GuardExceeded { n: g.n(), guard });
    }
    Ok(Solver::new(g).run(tol))
}

struct Solver {
    n: usize,
    /// Non-adjacent pairs `(i, j)`, `i < j`, whose entries are forced to zero.
    pairs: Vec<(usize, usize)>,
}

impl Solver {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let mut pairs = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if !g.adjacent(i, j) {
                    pairs.push((i, j));
                }
            }
        }
        Solver { n, pairs }
    }

    fn apply(&self, y: &DVector<f64>) -> DMatrix<f64> {
        let mut a = DMatrix::identity(self.n, self.n) * y[0];
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            a[(i, j)] += y[k + 1];
            a[(j, i)] += y[k + 1];
        }
        a
    }

    fn run(&self, tol: f64) -> LovaszResult {
        let n = self.n;
        let m = self.pairs.len() + 1;
        let ones = DMatrix::from_element(n, n, 1.0);
        let mut x = DMatrix::identity(n, n) / n as f64;
        let mut y = DVector::zeros(m);
        y[0] = n as f64 + 1.0;
        let mut z = self.apply(&y) - &ones;

        let mut best = (f64::NEG_INFINITY, f64::INFINITY);
        let mut iterations = 0;
        while iterations < MAX_ITERATIONS {
            let (lo, hi) = (self.certified_lower(&x), self.certified_upper(&y));
            best = (best.0.max(lo), best.1.min(hi));
            if best.1 - best.0 <= tol {
                break;
            }
            iterations += 1;
            let Some(zc) = z.clone().cholesky() else {
                break;
            };
            let w = zc.inverse();
            let mu = x.dot(&z) / n as f64;
            let sigma = 0.1;

            let p = &w * &x;
            let mut mm = DMatrix::zeros(m, m);
            let mut rhs = DVector::zeros(m);
            mm[(0, 0)] = p.trace();
            rhs[0] = sigma * mu * w.trace() - 1.0;
            for (k, &(i, j)) in self.pairs.iter().enumerate() {
                let e = p[(j, i)] + p[(i, j)];
                mm[(0, k + 1)] = e;
                mm[(k + 1, 0)] = e;
                rhs[k + 1] = sigma * mu * 2.0 * w[(i, j)];
                for (l, &(a, b)) in self.pairs.iter().enumerate().skip(k) {
                    let v = x[(j, a)] * w[(b, i)]
                        + x[(j, b)] * w[(a, i)]
                        + x[(i, a)] * w[(b, j)]
                        + x[(i, b)] * w[(a, j)];
                    mm[(k + 1, l + 1)] = v;
                    mm[(l + 1, k + 1)] = v;
                }
            }
            let dy = match mm.clone().cholesky() {
                Some(c) => c.solve(&rhs),
                None => match mm.lu().solve(&rhs) {
                    Some(s) => s,
                    None => break,
                },
            };
            let dz = self.apply(&dy);
            let xdzw = &x * &dz * &w;
            let dx = &w * (sigma * mu) - &x - (&xdzw + xdzw.transpose()) * 0.5;

            let ap = step_length(&x, &dx);
            let ad = step_length(&z, &dz);
            x += dx * ap;
            y += dy * ad;
            z = self.apply(&y) - &ones;
            if ap < 1e-12 && ad < 1e-12 {
                break;
            }
        }
        let (lower, upper) = best;
        LovaszResult {
            value: (lower + upper) / 2.0,
            lower,
            upper,
            tol,
            converged: upper - lower <= tol,
            iterations,
        }
    }

    /// Zeroes the forced entries, shifts into the PSD cone and renormalizes the trace.
    fn certified_lower(&self, x: &DMatrix<f64>) -> f64 {
        let mut xc = (x + x.transpose()) * 0.5;
        for &(i, j) in &self.pairs {
            xc[(i, j)] = 0.0;
            xc[(j, i)] = 0.0;
        }
        let min_eig = xc.clone().symmetric_eigen().eigenvalues.min();
        if min_eig < 0.0 {
            for i in 0..self.n {
                xc[(i, i)] -= min_eig;
            }
        }
        let tr = xc.trace();
        if tr <= 0.0 {
            return 1.0;
        }
        // Keep the bound conservative against rounding in the eigenvalue shift.
        (xc.sum() / tr) * (1.0 - 1e-12) - 1e-12
    }

    fn certified_upper(&self, y: &DVector<f64>) -> f64 {
        let mut a = DMatrix::from_element(self.n, self.n, 1.0);
        for (k, &(i, j)) in self.pairs.iter().enumerate() {
            a[(i, j)] -= y[k + 1];
            a[(j, i)] -= y[k + 1];
        }
        a.symmetric_eigen().eigenvalues.max() * (1.0 + 1e-12) + 1e-12
    }
}

/// Largest `α ≤ 1` (damped) keeping `s + α·ds` positive definite.
fn step_length(s: &DMatrix<f64>, ds: &DMatrix<f64>) -> f64 {
    let Some(c) = s.clone().cholesky() else {
        return 0.0;
    };
    let l = c.l();
    let Some(linv) = l.try_inverse() else {
        return 0.0;
    };
    let t = &linv * ds * linv.transpose();
    let t = (&t + t.transpose()) * 0.5;
    let min = t.symmetric_eigen().eigenvalues.min();
    if min >= 0.0 {
        1.0
    } else {
        (0.95 * (-1.0 / min)).min(1.0)
    }
}
