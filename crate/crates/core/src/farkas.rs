//! Conic membership with Farkas separation certificates.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{dot, primitive, serde_qvec, QVec, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Membership {
    /// `target = Σ rays[i]·ray_coeffs[i] + Σ lines[j]·line_coeffs[j]` with `ray_coeffs ≥ 0`.
    Inside {
        #[serde(with = "serde_qvec")]
        ray_coeffs: QVec,
        #[serde(with = "serde_qvec")]
        line_coeffs: QVec,
    },
    /// `f·ray ≥ 0`, `f·line = 0`, and `f·target < 0`.
    Outside {
        #[serde(with = "serde_qvec")]
        separator: QVec,
    },
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside { .. })
    }
}

/// Decides whether `target` lies in `cone(rays) + span(lines)`.
pub fn conic_membership(rays: &[QVec], lines: &[QVec], target: &[Rational]) -> Membership {
    let d = target.len();
    let (k, l) = (rays.len(), lines.len());
    let mut lp = LinearProgram::new(k + l);
    for j in 0..l {
        lp = lp.with_free(k + j);
    }
    for i in 0..d {
        let row: QVec = rays.iter().chain(lines).map(|g| g[i].clone()).collect();
        lp.add(row, Relation::Eq, target[i].clone());
    }
    if let LpOutcome::Optimal { x, .. } = lp.solve() {
        let (rc, lc) = x.split_at(k);
        return Membership::Inside {
            ray_coeffs: rc.to_vec(),
            line_coeffs: lc.to_vec(),
        };
    }
    Membership::Outside {
        separator: separator(rays, lines, target),
    }
}

fn separator(rays: &[QVec], lines: &[QVec], target: &[Rational]) -> QVec {
    let d = target.len();
    let mut lp = LinearProgram::new(d).all_free();
    for g in rays {
        lp.add(g.clone(), Relation::Ge, Rational::zero());
    }
    for g in lines {
        lp.add(g.clone(), Relation::Eq, Rational::zero());
    }
    lp.add(target.to_vec(), Relation::Le, -Rational::one());
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => primitive(&x),
        other => unreachable!("Farkas alternative violated: {other:?}"),
    }
}

/// Independent check of a membership answer.
pub fn verify_membership(
    rays: &[QVec],
    lines: &[QVec],
    target: &[Rational],
    m: &Membership,
) -> bool {
    match m {
        Membership::Inside {
            ray_coeffs,
            line_coeffs,
        } => {
            if ray_coeffs.len() != rays.len() || line_coeffs.len() != lines.len() {
                return false;
            }
            if ray_coeffs.iter().any(|c| c < &Rational::zero()) {
                return false;
            }
            let mut sum = vec![Rational::zero(); target.len()];
            for (g, c) in rays
                .iter()
                .zip(ray_coeffs)
                .chain(lines.iter().zip(line_coeffs))
            {
                for (s, x) in sum.iter_mut().zip(g) {
                    *s += c * x;
                }
            }
            sum == target
        }
        Membership::Outside { separator: f } => {
            rays.iter().all(|g| dot(f, g) >= Rational::zero())
                && lines.iter().all(|g| dot(f, g).is_zero())
                && dot(f, target) < Rational::zero()
        }
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
    fn inside_and_outside() {
        let rays = vec![q(&[1, 0]), q(&[1, 1])];
        let t = q(&[3, 1]);
        let m = conic_membership(&rays, &[], &t);
        assert!(m.is_inside());
        assert!(verify_membership(&rays, &[], &t, &m));

        let t = q(&[0, -1]);
        let m = conic_membership(&rays, &[], &t);
        assert!(!m.is_inside());
        assert!(verify_membership(&rays, &[], &t, &m));
    }

    #[test]
    fn lines_are_two_sided() {
        let lines = vec![q(&[0, 1])];
        let rays = vec![q(&[1, 0])];
        let m = conic_membership(&rays, &lines, &q(&[2, -7]));
        assert!(verify_membership(&rays, &lines, &q(&[2, -7]), &m) && m.is_inside());
        let m = conic_membership(&rays, &lines, &q(&[-1, 0]));
        assert_eq!(
            m,
            Membership::Outside {
                separator: q(&[1, 0])
            }
        );
    }
}
