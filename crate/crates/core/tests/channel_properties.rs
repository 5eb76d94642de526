mod common;

use common::channel_strategy;
use num_traits::Zero;
use proptest::prelude::*;
use remono::channels::*;
use remono::graphs::{disjunctive_product, verify_map, Graph};

/// Adjacency straight from the definition: output supports are disjoint.
fn supports_disjoint(p: &StochasticChannel, a1: usize, a2: usize) -> bool {
    (0..p.outputs()).all(|b| p.prob(b, a1).is_zero() || p.prob(b, a2).is_zero())
}

fn swap_inputs(n: usize, m: usize) -> Vec<usize> {
    (0..n * m).map(|i| (i % m) * n + i / m).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn tensor_graph_is_disjunctive_product(p in channel_strategy(5, 5), q in channel_strategy(5, 5)) {
        let pq = tensor(&p, &q);
        let g = distinguishability_graph(&pq);
        let (fp, fq) = (distinguishability_graph(&p), distinguishability_graph(&q));
        prop_assert_eq!(&g, &disjunctive_product(&fp, &fq));
        let m = q.inputs();
        for i in 0..pq.inputs() {
            for j in 0..pq.inputs() {
                let expected = i != j && (supports_disjoint(&p, i / m, j / m) || supports_disjoint(&q, i % m, j % m));
                prop_assert_eq!(g.adjacent(i, j), expected);
            }
        }
    }

    #[test]
    fn tensor_is_commutative_up_to_pairing(p in channel_strategy(4, 4), q in channel_strategy(4, 4)) {
        let (pq, qp) = (tensor(&p, &q), tensor(&q, &p));
        let ins = swap_inputs(p.inputs(), q.inputs());
        let outs = swap_inputs(p.outputs(), q.outputs());
        for (i, &i2) in ins.iter().enumerate() {
            for (o, &o2) in outs.iter().enumerate() {
                prop_assert_eq!(pq.prob(o, i), qp.prob(o2, i2));
            }
        }
    }

    #[test]
    fn composition_is_associative(a in channel_strategy(4, 4), b in channel_strategy(4, 4), c in channel_strategy(4, 4)) {
        // Re-shape so the alphabets chain: c then b then a.
        let b = fit(&b, c.outputs());
        let a = fit(&a, b.outputs());
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn conversions_induce_homomorphisms(p in channel_strategy(5, 5), enc in channel_strategy(5, 5), dec in channel_strategy(5, 5)) {
        let enc = fit_outputs(&enc, p.inputs());
        let dec = fit(&dec, p.outputs());
        let q = compose(&dec, &compose(&p, &enc).unwrap()).unwrap();
        prop_assert!(verify_conversion(&p, &q, &enc, &dec).unwrap());
        let hom = induced_hom(&p, &q, &enc, &dec).unwrap();
        prop_assert!(verify_map(&distinguishability_graph(&q), &distinguishability_graph(&p), &hom.map));
    }

    #[test]
    fn tensor_witnesses_convert_tensors(p in channel_strategy(3, 3), e1 in channel_strategy(3, 3), d1 in channel_strategy(3, 3),
                                        r in channel_strategy(2, 3), e2 in channel_strategy(3, 3), d2 in channel_strategy(3, 3)) {
        let (e1, d1) = (fit_outputs(&e1, p.inputs()), fit(&d1, p.outputs()));
        let (e2, d2) = (fit_outputs(&e2, r.inputs()), fit(&d2, r.outputs()));
        let q = compose(&d1, &compose(&p, &e1).unwrap()).unwrap();
        let s = compose(&d2, &compose(&r, &e2).unwrap()).unwrap();
        prop_assert!(verify_conversion(&tensor(&p, &r), &tensor(&q, &s), &tensor(&e1, &e2), &tensor(&d1, &d2)).unwrap());
    }

    #[test]
    fn documents_round_trip(p in channel_strategy(5, 5)) {
        let text = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<StochasticChannel>(&text).unwrap(), p);
    }
}

/// Keeps the first `inputs` rows, cycling if there are fewer.
fn fit(c: &StochasticChannel, inputs: usize) -> StochasticChannel {
    let rows = (0..inputs)
        .map(|i| c.rows()[i % c.inputs()].clone())
        .collect();
    StochasticChannel::new(inputs, c.outputs(), rows).unwrap()
}

/// Folds output `b` onto `b mod outputs`.
fn fit_outputs(c: &StochasticChannel, outputs: usize) -> StochasticChannel {
    let rows = c
        .rows()
        .iter()
        .map(|r| {
            let mut out = vec![remono::Rational::zero(); outputs];
            for (b, x) in r.iter().enumerate() {
                out[b % outputs] += x;
            }
            out
        })
        .collect();
    StochasticChannel::new(c.inputs(), outputs, rows).unwrap()
}

#[test]
fn typewriter_is_a_pentagon() {
    let g = distinguishability_graph(&StochasticChannel::typewriter(5));
    let relabel: Vec<usize> = (0..5).map(|a| 2 * a % 5).collect();
    assert_eq!(g.permuted(&relabel), Graph::cycle(5));
}
