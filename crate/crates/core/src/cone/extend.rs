//! Extension of a dominated functional from a subspace to the whole space, one
//! direction at a time, for a sublinear gauge `p(z) = max_k a_k·z`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::ClosedCone;
use crate::linalg::{in_span, rank, solve_combination};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::{add, dot, scale, serde_q, serde_qvec, QVec, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExtensionError {
    #[error("the gauge needs at least one linear form")]
    NoForms,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the subspace basis is linearly dependent")]
    DependentBasis,
    #[error("the functional exceeds the gauge on the subspace, e.g. at {0:?}")]
    NotDominated(Vec<String>),
    #[error("the subspace and the extension directions do not span the space")]
    NotSpanning,
    #[error("g is not an interior point of the cone")]
    NotInterior,
}

/// One extension step: the admissible interval `[lower, upper]` for the value on `direction`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionStep {
    #[serde(with = "serde_qvec")]
    pub direction: QVec,
    #[serde(with = "serde_q")]
    pub lower: Rational,
    #[serde(with = "serde_q")]
    pub upper: Rational,
    #[serde(with = "serde_q")]
    pub chosen: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extension {
    /// Coefficients of the extended functional in standard coordinates.
    #[serde(with = "serde_qvec")]
    pub functional: QVec,
    pub steps: Vec<ExtensionStep>,
    /// LP certificate that `functional ≤ p` everywhere.
    pub dominated: bool,
}

fn gauge_violation(forms: &[QVec], basis: &[QVec], values: &[Rational]) -> Option<QVec> {
    // Find coordinates c with f(Σ c_i b_i) − a_k·(Σ c_i b_i) ≥ 1 for every k.
    let n = basis.len();
    let mut lp = LinearProgram::new(n).all_free();
    for a in forms {
        let row: QVec = basis
            .iter()
            .zip(values)
            .map(|(b, v)| v - dot(a, b))
            .collect();
        lp.add(row, Relation::Ge, Rational::one());
    }
    match lp.solve() {
        LpOutcome::Optimal { x, .. } => {
            let d = forms[0].len();
            Some(
                basis
                    .iter()
                    .zip(&x)
                    .fold(vec![Rational::zero(); d], |acc, (b, c)| {
                        add(&acc, &scale(b, c))
                    }),
            )
        }
        _ => None,
    }
}

/// `inf_x p(x + y) − f(x)` when `upper`, else `sup_x f(x) − p(x − y)`, over `x` in the
/// span of `basis`, by the epigraph LP.
fn step_bound(
    forms: &[QVec],
    basis: &[QVec],
    values: &[Rational],
    y: &[Rational],
    upper: bool,
) -> Rational {
    let n = basis.len();
    // Variables: c (coordinates of x), t (epigraph of p). Both free.
    let mut obj = vec![Rational::zero(); n + 1];
    obj[n] = Rational::one();
    for (i, v) in values.iter().enumerate() {
        obj[i] = -v.clone();
    }
    let mut lp = LinearProgram::new(n + 1).minimize(obj).all_free();
    let y = if upper {
        y.to_vec()
    } else {
        y.iter().map(|v| -v).collect()
    };
    for a in forms {
        // t − a·x ≥ a·(±y)
        let mut row: QVec = basis.iter().map(|b| -dot(a, b)).collect();
        row.push(Rational::one());
        lp.add(row, Relation::Ge, dot(a, &y));
    }
    match lp.solve() {
        // The program minimizes t − f(x) = p(x ± y) − f(x); its optimum is finite
        // whenever f ≤ p on the subspace.
        LpOutcome::Optimal { value, .. } => {
            let m = -value;
            if upper {
                m
            } else {
                -m
            }
        }
        other => unreachable!("extension bound is finite for a dominated functional: {other:?}"),
    }
}

/// Extends `f` (given by its values on `subspace_basis`) along the vectors of
/// `full_basis` that are not yet spanned, keeping `f ≤ p` where `p = max_k forms[k]·z`.
///
/// At each step the admissible values on the new direction `y` form the interval
/// `[sup_x f(x) − p(x − y), inf_x p(x + y) − f(x)]`; the midpoint is chosen.
pub fn hahn_banach_extend(
    forms: &[QVec],
    subspace_basis: &[QVec],
    values: &[Rational],
    full_basis: &[QVec],
) -> Result<Extension, ExtensionError> {
    let Some(first) = forms.first() else {
        return Err(ExtensionError::NoForms);
    };
    let d = first.len();
    for v in forms.iter().chain(subspace_basis).chain(full_basis) {
        if v.len() != d {
            return Err(ExtensionError::DimensionMismatch {
                expected: d,
                found: v.len(),
            });
        }
    }
    if values.len() != subspace_basis.len() {
        return Err(ExtensionError::DimensionMismatch {
            expected: subspace_basis.len(),
            found: values.len(),
        });
    }
    if rank(subspace_basis, d) != subspace_basis.len() {
        return Err(ExtensionError::DependentBasis);
    }
    if let Some(w) = gauge_violation(forms, subspace_basis, values) {
        return Err(ExtensionError::NotDominated(crate::rational::format_vec(
            &w,
        )));
    }

    let mut basis = subspace_basis.to_vec();
    let mut vals = values.to_vec();
    let mut steps = Vec::new();
    for y in full_basis {
        if in_span(&basis, y) {
            continue;
        }
        let upper = step_bound(forms, &basis, &vals, y, true);
        let lower = step_bound(forms, &basis, &vals, y, false);
        debug_assert!(lower <= upper, "empty extension interval");
        let chosen = (&lower + &upper) / Rational::from_integer(2.into());
        steps.push(ExtensionStep {
            direction: y.clone(),
            lower,
            upper,
            chosen: chosen.clone(),
        });
        basis.push(y.clone());
        vals.push(chosen);
    }
    if basis.len() != d {
        return Err(ExtensionError::NotSpanning);
    }
    // Coefficients g with g·b_i = vals_i: solve the transposed system.
    let columns: Vec<QVec> = (0..d)
        .map(|j| basis.iter().map(|b| b[j].clone()).collect())
        .collect();
    let functional = solve_combination(&columns, &vals).ok_or(ExtensionError::NotSpanning)?;
    let dominated = gauge_violation(forms, &identity(d), &functional).is_none();
    Ok(Extension {
        functional,
        steps,
        dominated,
    })
}

fn identity(d: usize) -> Vec<QVec> {
    (0..d).map(|i| crate::rational::unit(d, i)).collect()
}

/// Linear forms of the gauge `p(z) = inf { μ : μg − z ∈ C }` for an interior point `g`
/// of a full-dimensional closed cone: `p(z) = max_i a_i·z / a_i·g` over the facets `a_i`.
pub fn gauge_forms(cone: &ClosedCone, g: &[Rational]) -> Result<Vec<QVec>, ExtensionError> {
    let ineq = &cone.inequalities;
    if !ineq.equalities.is_empty() {
        return Err(ExtensionError::NotInterior);
    }
    let mut forms = Vec::new();
    for a in &ineq.inequalities {
        let ag = dot(a, g);
        if ag <= Rational::zero() {
            return Err(ExtensionError::NotInterior);
        }
        forms.push(scale(a, &(Rational::one() / ag)));
    }
    if forms.is_empty() {
        // The whole space has no facets and no finite gauge.
        return Err(ExtensionError::NotInterior);
    }
    Ok(forms)
}
