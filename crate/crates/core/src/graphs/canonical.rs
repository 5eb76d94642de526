//! Canonical labeling by color refinement and individualization.

use super::{guard, Graph, GraphError};

const CANONICAL_GUARD: usize = 128;
const LEAF_LIMIT: usize = 200_000;

/// An isomorphism-invariant relabeling: two graphs get equal outputs iff they are isomorphic.
pub fn canonical_label(g: &Graph) -> Result<Graph, GraphError> {
    let limit = guard(CANONICAL_GUARD);
    if g.n() > limit {
        return Err(GraphError::GuardExceeded {
            n: g.n(),
            guard: limit,
        });
    }
    let mut best: Option<(Vec<u64>, Vec<usize>)> = None;
    let mut leaves = 0;
    let colors = refine(g, vec![0; g.n()]);
    explore(g, colors, &mut best, &mut leaves);
    if leaves > LEAF_LIMIT {
        return Err(GraphError::GuardExceeded {
            n: g.n(),
            guard: limit,
        });
    }
    let (_, perm) = best.expect("at least one leaf");
    Ok(g.permuted(&perm))
}

pub fn isomorphic(a: &Graph, b: &Graph) -> Result<bool, GraphError> {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return Ok(false);
    }
    Ok(canonical_label(a)? == canonical_label(b)?)
}

fn explore(
    g: &Graph,
    colors: Vec<usize>,
    best: &mut Option<(Vec<u64>, Vec<usize>)>,
    leaves: &mut usize,
) {
    if *leaves > LEAF_LIMIT {
        return;
    }
    let n = g.n();
    let mut sizes = vec![0; n];
    for &c in &colors {
        sizes[c] += 1;
    }
    // Target cell: the smallest non-singleton cell, lowest color first.
    let Some(target) = (0..n)
        .filter(|&c| sizes[c] > 1)
        .min_by_key(|&c| (sizes[c], c))
    else {
        *leaves += 1;
        let cert = certificate(g, &colors);
        if best.as_ref().is_none_or(|(b, _)| cert < *b) {
            *best = Some((cert, colors));
        }
        return;
    };
    let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
    let mut tried: Vec<usize> = Vec::new();
    for &v in &cell {
        // Swapping twins is an automorphism fixing everything individualized so far.
        if tried.iter().any(|&u| twins(g, u, v)) {
            continue;
        }
        tried.push(v);
        let split: Vec<(usize, usize)> = (0..n).map(|w| (colors[w], usize::from(w != v))).collect();
        let next = refine(g, rank(&split));
        explore(g, next, best, leaves);
    }
}

fn twins(g: &Graph, u: usize, v: usize) -> bool {
    let mut nu = g.neighbors(u).clone();
    let mut nv = g.neighbors(v).clone();
    nu.remove(v);
    nv.remove(u);
    nu == nv
}

fn rank<T: Ord + Clone>(keys: &[T]) -> Vec<usize> {
    let mut sorted: Vec<T> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap())
        .collect()
}

fn refine(g: &Graph, mut colors: Vec<usize>) -> Vec<usize> {
    let n = g.n();
    let mut count = distinct(&colors);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        colors = rank(&sigs);
        let c = distinct(&colors);
        if c == count {
            return colors;
        }
        count = c;
    }
}

fn distinct(colors: &[usize]) -> usize {
    colors.iter().max().map_or(0, |m| m + 1)
}

/// Upper-triangle adjacency bits of the graph relabeled by `perm`.
fn certificate(g: &Graph, perm: &[usize]) -> Vec<u64> {
    let n = g.n();
    let mut inv = vec![0; n];
    for (v, &p) in perm.iter().enumerate() {
        inv[p] = v;
    }
    let mut bits = Vec::with_capacity(n * n / 128 + 1);
    let mut word = 0u64;
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if g.adjacent(inv[i], inv[j]) {
                word |= 1 << (63 - k);
            }
            k += 1;
            if k == 64 {
                bits.push(word);
                word = 0;
                k = 0;
            }
        }
    }
    bits.push(word);
    bits
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{disjunctive_product, power};

    #[test]
    fn relabeled_cycles_agree() {
        let a = Graph::cycle(5);
        let b = Graph::from_edges(5, &[(0, 2), (2, 4), (4, 1), (1, 3), (3, 0)]).unwrap();
        assert_eq!(canonical_label(&a).unwrap(), canonical_label(&b).unwrap());
        assert!(!isomorphic(&a, &Graph::path(5)).unwrap());
    }

    #[test]
    fn complete_products() {
        let p = disjunctive_product(&Graph::complete(3), &Graph::complete(4));
        assert_eq!(
            canonical_label(&p).unwrap(),
            canonical_label(&Graph::complete(12)).unwrap()
        );
    }

    #[test]
    fn vertex_transitive_product() {
        let g = power(&Graph::cycle(5), 2);
        let perm: Vec<usize> = (0..25).map(|v| (v * 7 + 3) % 25).collect();
        assert_eq!(
            canonical_label(&g).unwrap(),
            canonical_label(&g.permuted(&perm)).unwrap()
        );
    }
}
