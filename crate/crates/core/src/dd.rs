//! Double description: conversion between inequality and generator
//! representations of rational polyhedral cones.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::linalg::row_basis;
use crate::rational::{dot, is_zero_vec, primitive, primitive_line, serde_qmat, QVec, Rational};

/// `cone(rays) + span(lineality)`, with rays taken modulo the lineality space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generators {
    pub dim: usize,
    #[serde(with = "serde_qmat")]
    pub lineality: Vec<QVec>,
    #[serde(with = "serde_qmat")]
    pub rays: Vec<QVec>,
}

/// `{ v : a·v ≥ 0 for a in inequalities, a·v = 0 for a in equalities }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequalities {
    pub dim: usize,
    #[serde(with = "serde_qmat")]
    pub inequalities: Vec<QVec>,
    #[serde(with = "serde_qmat")]
    pub equalities: Vec<QVec>,
}

impl Inequalities {
    pub fn contains(&self, v: &[Rational]) -> bool {
        self.inequalities.iter().all(|a| !dot(a, v).is_negative())
            && self.equalities.iter().all(|a| dot(a, v).is_zero())
    }

    /// All constraints as `≥ 0` rows (each equality contributes both signs).
    pub fn as_rows(&self) -> Vec<QVec> {
        let mut rows = self.inequalities.clone();
        for e in &self.equalities {
            rows.push(e.clone());
            rows.push(e.iter().map(|x| -x).collect());
        }
        rows
    }
}

impl Generators {
    pub fn all_rows(&self) -> impl Iterator<Item = &QVec> {
        self.rays.iter().chain(&self.lineality)
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }
}

struct Ray {
    v: QVec,
    zeros: Vec<bool>,
}

/// Generators of `{ v ∈ Q^d : a·v ≥ 0 for every row a }`.
pub fn h_to_v(d: usize, rows: &[QVec]) -> Generators {
    let mut lineality: Vec<QVec> = (0..d).map(|i| crate::rational::unit(d, i)).collect();
    let mut rays: Vec<Ray> = Vec::new();
    let mut processed = 0;

    for a in rows.iter().filter(|a| !is_zero_vec(a)) {
        processed += 1;
        let hit = lineality.iter().position(|l| !dot(a, l).is_zero());
        if let Some(idx) = hit {
            let mut l0 = lineality.remove(idx);
            let mut al0 = dot(a, &l0);
            if al0.is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
                al0 = -al0;
            }
            let reduce = |v: &QVec| -> QVec {
                let c = dot(a, v) / &al0;
                if c.is_zero() {
                    return v.clone();
                }
                v.iter().zip(&l0).map(|(x, y)| x - &c * y).collect()
            };
            lineality = lineality.iter().map(reduce).collect();
            for r in rays.iter_mut() {
                r.v = reduce(&r.v);
                r.zeros.push(true);
            }
            let mut zeros = vec![true; processed - 1];
            zeros.push(false);
            rays.push(Ray { v: l0, zeros });
            continue;
        }

        let vals: Vec<Rational> = rays.iter().map(|r| dot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                r.zeros.push(v.is_zero());
            }
            continue;
        }
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                if !adjacent(&rays, p, n) {
                    continue;
                }
                let v: QVec = rays[n]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(xn, xp)| &vals[p] * xn - &vals[n] * xp)
                    .collect();
                let mut zeros: Vec<bool> = rays[p]
                    .zeros
                    .iter()
                    .zip(&rays[n].zeros)
                    .map(|(x, y)| *x && *y)
                    .collect();
                zeros.push(true);
                fresh.push(Ray {
                    v: primitive(&v),
                    zeros,
                });
            }
        }
        let mut kept: Vec<Ray> = rays
            .into_iter()
            .zip(&vals)
            .filter(|(_, v)| !v.is_negative())
            .map(|(mut r, v)| {
                r.zeros.push(v.is_zero());
                r
            })
            .collect();
        kept.extend(fresh);
        rays = kept;
    }

    canonical_generators(d, lineality, rays.into_iter().map(|r| r.v).collect())
}

fn adjacent(rays: &[Ray], p: usize, n: usize) -> bool {
    let common: Vec<usize> = (0..rays[p].zeros.len())
        .filter(|&i| rays[p].zeros[i] && rays[n].zeros[i])
        .collect();
    !rays
        .iter()
        .enumerate()
        .any(|(i, r)| i != p && i != n && common.iter().all(|&c| r.zeros[c]))
}

/// Canonical form: lineality in reduced echelon form, rays projected orthogonally
/// off the lineality space, made primitive, deduplicated and sorted.
pub fn canonical_generators(d: usize, lineality: Vec<QVec>, rays: Vec<QVec>) -> Generators {
    let lin: Vec<QVec> = row_basis(&lineality, d)
        .iter()
        .map(|l| primitive_line(l))
        .collect();
    let ortho = gram_schmidt(&lin);
    let mut out: Vec<QVec> = rays
        .iter()
        .map(|r| primitive(&project_off(r, &ortho)))
        .filter(|r| !is_zero_vec(r))
        .collect();
    out.sort();
    out.dedup();
    Generators {
        dim: d,
        lineality: lin,
        rays: out,
    }
}

fn gram_schmidt(basis: &[QVec]) -> Vec<(QVec, Rational)> {
    let mut out: Vec<(QVec, Rational)> = Vec::new();
    for b in basis {
        let v = project_off(b, &out);
        let n = dot(&v, &v);
        out.push((v, n));
    }
    out
}

fn project_off(v: &[Rational], ortho: &[(QVec, Rational)]) -> QVec {
    let mut w = v.to_vec();
    for (u, n) in ortho {
        let c = dot(&w, u) / n;
        if !c.is_zero() {
            for (x, y) in w.iter_mut().zip(u) {
                *x -= &c * y;
            }
        }
    }
    w
}

/// Irredundant inequality description of `cone(rays) + span(lineality)`.
pub fn v_to_h(g: &Generators) -> Inequalities {
    let mut rows: Vec<QVec> = g.rays.clone();
    for l in &g.lineality {
        rows.push(l.clone());
        rows.push(l.iter().map(|x| -x).collect());
    }
    let dual = h_to_v(g.dim, &rows);
    Inequalities {
        dim: g.dim,
        inequalities: dual.rays,
        equalities: dual.lineality,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn q(v: &[i64]) -> QVec {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn orthant_is_self_dual() {
        let g = h_to_v(2, &[q(&[1, 0]), q(&[0, 1])]);
        assert!(g.lineality.is_empty());
        assert_eq!(g.rays, vec![q(&[0, 1]), q(&[1, 0])]);
    }

    #[test]
    fn halfspace_has_lineality() {
        let g = h_to_v(2, &[q(&[1, 0])]);
        assert_eq!(g.lineality, vec![q(&[0, 1])]);
        assert_eq!(g.rays, vec![q(&[1, 0])]);
    }

    #[test]
    fn no_constraints_is_whole_space() {
        let g = h_to_v(3, &[]);
        assert_eq!(g.lineality.len(), 3);
        assert!(g.rays.is_empty());
    }

    #[test]
    fn dual_of_generated_cone() {
        let g = Generators {
            dim: 2,
            lineality: vec![],
            rays: vec![q(&[1, 0]), q(&[1, 1])],
        };
        let h = v_to_h(&g);
        assert_eq!(h.inequalities, vec![q(&[0, 1]), q(&[1, -1])]);
        assert!(h.equalities.is_empty());
    }

    #[test]
    fn square_pyramid() {
        // Cone over a square: four rays, four facets.
        let rays = vec![
            q(&[1, 1, 1]),
            q(&[1, -1, 1]),
            q(&[-1, 1, 1]),
            q(&[-1, -1, 1]),
        ];
        let h = v_to_h(&Generators {
            dim: 3,
            lineality: vec![],
            rays: rays.clone(),
        });
        assert_eq!(h.inequalities.len(), 4);
        let back = h_to_v(3, &h.inequalities);
        let mut sorted = rays;
        sorted.sort();
        assert_eq!(back.rays, sorted);
    }

    #[test]
    fn lower_dimensional_cone() {
        let g = Generators {
            dim: 3,
            lineality: vec![],
            rays: vec![q(&[1, 0, 0]), q(&[0, 1, 0])],
        };
        let h = v_to_h(&g);
        assert_eq!(h.equalities, vec![q(&[0, 0, 1])]);
        assert_eq!(h.inequalities.len(), 2);
        assert!(h.contains(&q(&[2, 3, 0])));
        assert!(!h.contains(&q(&[2, 3, 1])));
    }
}
