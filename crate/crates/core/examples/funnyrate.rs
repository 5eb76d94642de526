//! The cone `|√2·α + β| ≤ γ` in three dimensions has irrational facets, so it cannot
//! be entered directly. This demo replaces √2 by its continued-fraction convergents
//! λ_k and watches what the exact tools report as λ_k → √2.
//!
//! For each rational cone `|λ·α + β| ≤ γ`:
//! - `e1 ≥ λ·e2` holds, so λ is an exact conversion ratio, while the irrational cone
//!   orders no two points of the plane γ = 0;
//! - every extreme functional satisfies `f(e1) = λ·f(e2)`;
//! - the point `e1 − λ' e2` for the next convergent λ' is separated, but the margin
//!   `|f·p| / ‖f‖₁` of the separating functional tends to zero.
//!
//! Run with `cargo run --example funnyrate`.

use num_traits::Signed;
use remono::cone::{separate_closed, ClosedCone, Separation};
use remono::rational::{display_rational, dot, int, to_f64, QVec, Rational};

fn convergents(k: usize) -> Vec<Rational> {
    // p/q with p' = p + 2q, q' = p + q, starting from 1/1.
    let (mut p, mut q) = (1i64, 1i64);
    let mut out = Vec::new();
    for _ in 0..k {
        out.push(Rational::new(p.into(), q.into()));
        (p, q) = (p + 2 * q, p + q);
    }
    out
}

fn wedge(lambda: &Rational) -> ClosedCone {
    // γ − λα − β ≥ 0 and γ + λα + β ≥ 0.
    let rows: Vec<QVec> = vec![
        vec![-lambda.clone(), int(-1), int(1)],
        vec![lambda.clone(), int(1), int(1)],
    ];
    ClosedCone::from_inequalities(3, &rows)
}

fn main() {
    let e1 = vec![int(1), int(0), int(0)];
    let e2 = vec![int(0), int(1), int(0)];
    let lambdas = convergents(9);
    println!(
        "{:>3}  {:>12}  {:>12}  {:>10}  {:>14}",
        "k", "lambda", "e1 >= l*e2", "|l - √2|", "next margin"
    );
    for (k, pair) in lambdas.windows(2).enumerate() {
        let (lambda, next) = (&pair[0], &pair[1]);
        let cone = wedge(lambda);
        let exact = vec![int(1), -lambda.clone(), int(0)];
        let converts = matches!(separate_closed(&cone, &exact), Separation::InClosure { .. });
        for f in cone.dual().rays {
            assert_eq!(dot(&f, &e1), lambda * dot(&f, &e2));
        }
        let probe = vec![int(1), -next.clone(), int(0)];
        let margin = match separate_closed(&cone, &probe) {
            Separation::Separated { functional } => {
                let norm: Rational = functional.iter().map(|x| x.abs()).sum();
                to_f64(&(dot(&functional, &probe).abs() / norm))
            }
            Separation::InClosure { .. } => 0.0,
        };
        println!(
            "{:>3}  {:>12}  {:>12}  {:>10.2e}  {:>14.2e}",
            k,
            display_rational(lambda),
            converts,
            (to_f64(lambda) - 2f64.sqrt()).abs(),
            margin
        );
    }
    println!("With λ = √2 exactly, the plane γ = 0 meets the cone only at the origin, so e1 converts to no multiple of e2,");
    println!("while every functional still satisfies f(e1) = √2·f(e2).");
}
