//! Fractional chromatic number as an exact covering linear program.

use num_traits::{One, Zero};

use super::{guard, BitSet, Graph, GraphError, DEFAULT_GUARD};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::Rational;

/// All maximal independent sets of `g`, each sorted, in discovery order.
pub fn maximal_independent_sets(g: &Graph) -> Vec<Vec<usize>> {
    let co: Vec<BitSet> = (0..g.n())
        .map(|v| {
            let mut row = BitSet::full(g.n());
            row.difference_with(g.neighbors(v));
            row.remove(v);
            row
        })
        .collect();
    let mut out = Vec::new();
    bron_kerbosch(
        &co,
        &mut Vec::new(),
        BitSet::full(g.n()),
        BitSet::new(g.n()),
        &mut out,
    );
    out
}

fn bron_kerbosch(
    adj: &[BitSet],
    r: &mut Vec<usize>,
    mut p: BitSet,
    mut x: BitSet,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            let mut set = r.clone();
            set.sort_unstable();
            out.push(set);
        }
        return;
    }
    let mut px = p.clone();
    px.union_with(&x);
    let pivot = px
        .iter()
        .max_by_key(|&u| p.intersection_len(&adj[u]))
        .unwrap();
    let mut cand = p.clone();
    cand.difference_with(&adj[pivot]);
    for v in cand.iter() {
        r.push(v);
        bron_kerbosch(
            adj,
            r,
            p.intersection(&adj[v]),
            x.intersection(&adj[v]),
            out,
        );
        r.pop();
        p.remove(v);
        x.insert(v);
    }
}

/// `χ_f(G) = min Σ w_I` subject to `Σ_{I ∋ v} w_I ≥ 1` for every vertex, over maximal
/// independent sets `I`, solved exactly.
pub fn fractional_chromatic(g: &Graph) -> Result<Rational, GraphError> {
    fractional_chromatic_with_guard(g, guard(DEFAULT_GUARD))
}

pub fn fractional_chromatic_with_guard(g: &Graph, guard: usize) -> Result<Rational, GraphError> {
    if g.n() > guard {
        return Err(GraphError::GuardExceeded { n: g.n(), guard });
    }
    let sets = maximal_independent_sets(g);
    let mut lp = LinearProgram::new(sets.len()).minimize(vec![Rational::one(); sets.len()]);
    for v in 0..g.n() {
        let row = sets
            .iter()
            .map(|s| {
                if s.binary_search(&v).is_ok() {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            })
            .collect();
        lp.add(row, Relation::Ge, Rational::one());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => Ok(-value),
        other => unreachable!("covering program is feasible and bounded: {other:?}"),
    }
}
