mod common;

use common::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use remono::cone::*;
use remono::rational::{dot, int, neg, scale, sub, QVec, Rational};
use remono::ExtValue;

/// `β` is the supremum of `{ β : x − βy ∈ C }`: `x − βy ∈ C`, and the functional `f`
/// is nonnegative on the generators with `f·(x − βy) = 0` and `f·y > 0`.
fn certify_rate(
    rays: &[QVec],
    x: &[Rational],
    y: &[Rational],
    beta: &Rational,
    f: &[Rational],
) -> bool {
    in_generated_cone(rays, &sub(x, &scale(y, beta)))
        && rays.iter().all(|r| !dot(f, r).is_negative())
        && dot(f, y).is_positive()
        && dot(f, &sub(x, &scale(y, beta))).is_zero()
}

fn exact(v: &ExtValue) -> Option<&Rational> {
    v.exact()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn primal_and_dual_rates_agree(case in pointed_cone_case(5)) {
        let closed = case.closed();
        let r = rate_closed(&closed, &case.x, &case.y).unwrap();
        prop_assert_eq!(&r.primal, &r.dual);
        match (&r.r_max, &r.argmin) {
            (ExtValue::Exact(beta), Some(f)) => prop_assert!(certify_rate(&case.rays, &case.x, &case.y, beta, f)),
            (ExtValue::Infinite, None) => {
                // Unbounded rates happen only for y = 0 in a pointed cone.
                prop_assert!(case.y.iter().all(Zero::is_zero));
            }
            other => prop_assert!(false, "unexpected rate {:?}", other),
        }
    }

    #[test]
    fn carnot_dichotomy_and_scaling(case in pointed_cone_case(5), n in 1i64..=4, m in 1i64..=4) {
        let closed = case.closed();
        let rate = |a: &QVec, b: &QVec| rate_closed(&closed, a, b).unwrap().r_max;
        let (rxy, ryz, rxz) = (rate(&case.x, &case.y), rate(&case.y, &case.z), rate(&case.x, &case.z));
        match (exact(&rxy), exact(&ryz)) {
            (Some(a), Some(b)) => {
                let product = a * b;
                prop_assert!(exact(&rxz).is_none_or(|c| *c >= product));
            }
            (None, Some(b)) | (Some(b), None) if b.is_positive() => prop_assert_eq!(&rxz, &ExtValue::Infinite),
            _ => {}
        }

        let rxx = rate(&case.x, &case.x);
        let in_lineality = closed.contains(&neg(&case.x));
        if in_lineality {
            prop_assert_eq!(&rxx, &ExtValue::Infinite);
        } else {
            prop_assert_eq!(&rxx, &ExtValue::Exact(int(1)));
        }

        let nx = scale(&case.x, &int(n));
        let my = scale(&case.y, &int(m));
        match &rxy {
            ExtValue::Exact(r) => {
                prop_assert_eq!(rate(&nx, &case.y), ExtValue::Exact(r * int(n)));
                prop_assert_eq!(rate(&case.x, &my), ExtValue::Exact(r / int(m)));
            }
            _ => {
                prop_assert_eq!(rate(&nx, &case.y), ExtValue::Infinite);
                prop_assert_eq!(rate(&case.x, &my), ExtValue::Infinite);
            }
        }
    }

    #[test]
    fn hahn_banach_extends_and_dominates(case in gauge_case(4)) {
        let e = hahn_banach_extend(&case.forms, &case.basis, &case.values, &standard_basis(case.dim)).unwrap();
        for (b, v) in case.basis.iter().zip(&case.values) {
            prop_assert_eq!(&dot(&e.functional, b), v);
        }
        prop_assert!(e.dominated);
        prop_assert!(in_convex_hull(&case.forms, &e.functional));
        for s in &e.steps {
            prop_assert!(s.lower <= s.upper);
        }
    }

    #[test]
    fn separation_certificates_verify(case in pointed_cone_case(4), target in proptest::collection::vec(-3i64..=3, 4)) {
        let closed = case.closed();
        let t: QVec = target.into_iter().take(case.dim).map(int).collect();
        prop_assume!(t.len() == case.dim);
        match separate_closed(&closed, &t) {
            Separation::InClosure { .. } => prop_assert!(in_generated_cone(&case.rays, &t)),
            Separation::Separated { functional } => {
                prop_assert!(case.rays.iter().all(|r| !dot(&functional, r).is_negative()));
                prop_assert!(dot(&functional, &t).is_negative());
            }
        }
    }

    #[test]
    fn dual_rays_decompose_dual_points(case in pointed_cone_case(4), w in proptest::collection::vec(0i64..=3, 8)) {
        let closed = case.closed();
        let dual = closed.dual();
        prop_assume!(!dual.rays.is_empty());
        let mut f = vec![Rational::zero(); case.dim];
        for (r, &c) in dual.rays.iter().zip(w.iter().cycle()) {
            f = remono::rational::add(&f, &scale(r, &int(c)));
        }
        let d = decompose_functional(&closed, &f).unwrap();
        prop_assert!(d.ray_coeffs.iter().all(|c| !c.is_negative()));
        let mut sum = vec![Rational::zero(); case.dim];
        for (r, c) in d.dual.rays.iter().zip(&d.ray_coeffs).chain(d.dual.lineality.iter().zip(&d.line_coeffs)) {
            sum = remono::rational::add(&sum, &scale(r, c));
        }
        prop_assert_eq!(sum, f);
    }

    #[test]
    fn order_unit_tests_agree(case in pointed_cone_case(3), probes in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..6)) {
        let closed = case.closed();
        // Only full-dimensional cones have interior points; g = sum of generators.
        prop_assume!(closed.inequalities.equalities.is_empty());
        let mut g = vec![Rational::zero(); case.dim];
        for r in &case.rays {
            g = remono::rational::add(&g, r);
        }
        let mut probes: Vec<QVec> = probes.into_iter().map(|p| p.into_iter().take(case.dim).map(int).collect()).collect();
        probes.extend(standard_basis(case.dim).iter().flat_map(|e| [e.clone(), neg(e)]));
        prop_assert_eq!(
            is_order_unit_by_perturbation(&closed, &g),
            is_order_unit_by_absorption(&closed, &g, &probes)
        );
    }
}
