//! Generators and independent checkers shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use num_traits::{One, Zero};
use proptest::collection::vec;
use proptest::prelude::*;
use remono::cone::ClosedCone;
use remono::dd::canonical_generators;
use remono::lp::{LinearProgram, LpOutcome, Relation};
use remono::rational::{dot, int, QVec, Rational};

/// A pointed cone given by integer generators, with three points of it.
#[derive(Debug, Clone)]
pub struct ConeCase {
    pub dim: usize,
    pub rays: Vec<QVec>,
    pub x: QVec,
    pub y: QVec,
    pub z: QVec,
}

impl ConeCase {
    pub fn closed(&self) -> ClosedCone {
        ClosedCone::from_generators(canonical_generators(self.dim, vec![], self.rays.clone()))
    }
}

fn combination(rays: &[QVec], coeffs: &[i64], d: usize) -> QVec {
    let mut p = vec![Rational::zero(); d];
    for (r, &c) in rays.iter().zip(coeffs) {
        for (pi, ri) in p.iter_mut().zip(r) {
            *pi += ri * int(c);
        }
    }
    p
}

/// Rays are flipped or shifted into the open halfspace `c·v > 0`, so the cone is pointed.
pub fn pointed_cone_case(max_dim: usize) -> impl Strategy<Value = ConeCase> {
    (1..=max_dim)
        .prop_flat_map(|d| {
            let c =
                vec(-2i64..=2, d).prop_filter("nonzero direction", |c| c.iter().any(|&x| x != 0));
            (Just(d), c, vec(vec(-3i64..=3, d), 1..=6))
        })
        .prop_flat_map(|(d, c, raw)| {
            let k = raw.len();
            let rays: Vec<QVec> = raw
                .into_iter()
                .map(|v| {
                    let s: i64 = v.iter().zip(&c).map(|(a, b)| a * b).sum();
                    let v: Vec<i64> = match s {
                        s if s > 0 => v,
                        s if s < 0 => v.iter().map(|x| -x).collect(),
                        _ => v.iter().zip(&c).map(|(a, b)| a + b).collect(),
                    };
                    v.into_iter().map(int).collect()
                })
                .collect();
            (
                Just(d),
                Just(rays),
                vec(0i64..=3, k),
                vec(0i64..=3, k),
                vec(0i64..=3, k),
            )
        })
        .prop_map(|(dim, rays, a, b, c)| ConeCase {
            x: combination(&rays, &a, dim),
            y: combination(&rays, &b, dim),
            z: combination(&rays, &c, dim),
            dim,
            rays,
        })
}

/// Whether `v` lies in `cone(rays)`, decided by a feasibility LP over the original generators.
pub fn in_generated_cone(rays: &[QVec], v: &[Rational]) -> bool {
    let mut lp = LinearProgram::new(rays.len());
    for i in 0..v.len() {
        lp.add(
            rays.iter().map(|r| r[i].clone()).collect(),
            Relation::Eq,
            v[i].clone(),
        );
    }
    matches!(lp.solve(), LpOutcome::Optimal { .. })
}

/// Whether `f` is a convex combination of `forms`, i.e. `f ≤ max_k forms[k]` pointwise.
pub fn in_convex_hull(forms: &[QVec], f: &[Rational]) -> bool {
    let mut lp = LinearProgram::new(forms.len());
    for i in 0..f.len() {
        lp.add(
            forms.iter().map(|a| a[i].clone()).collect(),
            Relation::Eq,
            f[i].clone(),
        );
    }
    lp.add(
        vec![Rational::one(); forms.len()],
        Relation::Eq,
        Rational::one(),
    );
    matches!(lp.solve(), LpOutcome::Optimal { .. })
}

/// A sublinear gauge (max of forms), a subspace, and a seed value vector dominated by
/// construction: the seed is the restriction of a convex combination of the forms.
#[derive(Debug, Clone)]
pub struct GaugeCase {
    pub dim: usize,
    pub forms: Vec<QVec>,
    pub basis: Vec<QVec>,
    pub values: QVec,
}

pub fn gauge_case(max_dim: usize) -> impl Strategy<Value = GaugeCase> {
    (1..=max_dim)
        .prop_flat_map(|d| {
            (
                Just(d),
                vec(vec(-3i64..=3, d), 1..=5),
                vec(vec(-2i64..=2, d), 0..=d),
            )
        })
        .prop_flat_map(|(d, forms, basis)| {
            let k = forms.len();
            (Just(d), Just(forms), Just(basis), vec(0i64..=3, k))
        })
        .prop_map(|(dim, forms, basis, weights)| {
            let forms: Vec<QVec> = forms
                .into_iter()
                .map(|f| f.into_iter().map(int).collect())
                .collect();
            // Greedily keep linearly independent vectors.
            let mut independent: Vec<QVec> = Vec::new();
            for b in basis {
                let b: QVec = b.into_iter().map(int).collect();
                let mut trial = independent.clone();
                trial.push(b);
                if remono::linalg::rank(&trial, dim) == trial.len() {
                    independent = trial;
                }
            }
            let basis = independent;
            let total: i64 = weights.iter().sum();
            let (weights, total) = if total == 0 {
                (vec![1; weights.len()], weights.len() as i64)
            } else {
                (weights, total)
            };
            let mut seed = vec![Rational::zero(); dim];
            for (a, &w) in forms.iter().zip(&weights) {
                for (s, x) in seed.iter_mut().zip(a) {
                    *s += x * Rational::new(w.into(), total.into());
                }
            }
            let values = basis.iter().map(|b| dot(&seed, b)).collect();
            GaugeCase {
                dim,
                forms,
                basis,
                values,
            }
        })
}

pub fn standard_basis(d: usize) -> Vec<QVec> {
    (0..d).map(|i| remono::rational::unit(d, i)).collect()
}

/// A row-stochastic channel with at most `max_in` inputs and `max_out` outputs. Rows come from
/// integer weights in 0..=3, so zeros (and hence distinguishable inputs) are common.
pub fn channel_strategy(
    max_in: usize,
    max_out: usize,
) -> impl Strategy<Value = remono::channels::StochasticChannel> {
    (1..=max_in, 1..=max_out)
        .prop_flat_map(|(a, b)| (Just(a), Just(b), vec(vec(0i64..=3, b), a)))
        .prop_map(|(a, b, weights)| {
            let matrix = weights
                .into_iter()
                .map(|mut w| {
                    if w.iter().all(|&x| x == 0) {
                        w[0] = 1;
                    }
                    let total: i64 = w.iter().sum();
                    w.into_iter()
                        .map(|x| Rational::new(x.into(), total.into()))
                        .collect()
                })
                .collect();
            remono::channels::StochasticChannel::new(a, b, matrix).expect("rows are normalized")
        })
}
