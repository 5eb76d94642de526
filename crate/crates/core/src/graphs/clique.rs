//! Maximum clique by branch and bound with a greedy-coloring bound.

use serde::{Deserialize, Serialize};

use super::{BitSet, Graph};
use crate::monoid::Budget;

/// Result of a budgeted optimization: exact, or the best found before the budget ran out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bounded<T> {
    Exact(T),
    BudgetExceeded { best: T },
}

impl<T> Bounded<T> {
    pub fn exact(self) -> Option<T> {
        match self {
            Bounded::Exact(t) => Some(t),
            Bounded::BudgetExceeded { .. } => None,
        }
    }

    pub fn value(&self) -> &T {
        match self {
            Bounded::Exact(t) | Bounded::BudgetExceeded { best: t } => t,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Bounded::Exact(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Bounded<U> {
        match self {
            Bounded::Exact(t) => Bounded::Exact(f(t)),
            Bounded::BudgetExceeded { best } => Bounded::BudgetExceeded { best: f(best) },
        }
    }
}

struct Search {
    adj: Vec<BitSet>,
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    limit: u64,
    stop_at: usize,
    aborted: bool,
}

impl Search {
    fn expand(&mut self, mut p: BitSet) {
        // Each node costs in proportion to the coloring pass over `p`.
        self.nodes += 1 + p.len() as u64 / 4;
        if self.nodes > self.limit {
            self.aborted = true;
            return;
        }
        let order = self.color_sort(&p);
        for &(v, color) in order.iter().rev() {
            if self.current.len() + color <= self.best.len()
                || self.aborted
                || self.best.len() >= self.stop_at
            {
                return;
            }
            self.current.push(v);
            let next = p.intersection(&self.adj[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            p.remove(v);
        }
    }

    /// Sequential greedy coloring of `p`; returns vertices by nondecreasing color.
    fn color_sort(&self, p: &BitSet) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(p.len());
        let mut uncolored = p.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut q = uncolored.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                uncolored.remove(v);
                q.difference_with(&self.adj[v]);
                out.push((v, color));
            }
        }
        out
    }
}

/// A maximum clique, or the best clique found within the budget.
pub fn max_clique(g: &Graph, budget: &Budget) -> Bounded<Vec<usize>> {
    clique_search(g, budget, usize::MAX)
}

/// Searches for a clique of size `target`, stopping as soon as one is found.
/// `Exact` with fewer than `target` vertices means no such clique exists.
pub fn clique_search(g: &Graph, budget: &Budget, target: usize) -> Bounded<Vec<usize>> {
    clique_search_seeded(g, budget, target, &[])
}

/// Like [`clique_search`], starting from a known clique `seed` (which must be a clique of `g`).
pub fn clique_search_seeded(
    g: &Graph,
    budget: &Budget,
    target: usize,
    seed: &[usize],
) -> Bounded<Vec<usize>> {
    let n = g.n();
    if seed.len() >= target {
        let mut c = seed.to_vec();
        c.sort_unstable();
        return Bounded::Exact(c);
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let adj: Vec<BitSet> = order
        .iter()
        .map(|&v| {
            let mut row = BitSet::new(n);
            for w in g.neighbors(v).iter() {
                row.insert(pos[w]);
            }
            row
        })
        .collect();
    let mut s = Search {
        adj,
        best: if seed.is_empty() {
            vec![0]
        } else {
            seed.iter().map(|&v| pos[v]).collect()
        },
        current: Vec::new(),
        nodes: 0,
        limit: budget.nodes.max(1),
        stop_at: target,
        aborted: false,
    };
    s.expand(BitSet::full(n));
    let mut clique: Vec<usize> = s.best.iter().map(|&i| order[i]).collect();
    clique.sort_unstable();
    if s.aborted {
        Bounded::BudgetExceeded { best: clique }
    } else {
        Bounded::Exact(clique)
    }
}

pub fn clique_number(g: &Graph, budget: &Budget) -> Bounded<usize> {
    max_clique(g, budget).map(|c| c.len())
}

/// Largest clique found by a greedy pass started at `v`.
pub(crate) fn greedy_clique_from(g: &Graph, v: usize) -> Vec<usize> {
    let mut clique = vec![v];
    let mut cand = g.neighbors(v).clone();
    while !cand.is_empty() {
        let u = cand
            .iter()
            .max_by_key(|&u| (cand.intersection_len(g.neighbors(u)), std::cmp::Reverse(u)))
            .unwrap();
        clique.push(u);
        cand.intersect_with(g.neighbors(u));
    }
    clique
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{disjunctive_product, graph_join, power};

    #[test]
    fn small_cliques() {
        let b = Budget::default();
        assert_eq!(clique_number(&Graph::complete(6), &b), Bounded::Exact(6));
        assert_eq!(clique_number(&Graph::cycle(5), &b), Bounded::Exact(2));
        assert_eq!(clique_number(&Graph::empty(4), &b), Bounded::Exact(1));
        let c5 = Graph::cycle(5);
        assert_eq!(
            clique_number(&disjunctive_product(&c5, &c5), &b),
            Bounded::Exact(5)
        );
    }

    #[test]
    fn join_adds_clique_numbers() {
        let b = Budget::default();
        let g = graph_join(&Graph::cycle(5), &power(&Graph::complete(2), 2));
        assert_eq!(clique_number(&g, &b), Bounded::Exact(6));
    }

    #[test]
    fn clique_is_a_clique() {
        let g = disjunctive_product(&Graph::cycle(7), &Graph::cycle(5));
        let c = max_clique(&g, &Budget::default()).exact().unwrap();
        for (i, &u) in c.iter().enumerate() {
            for &v in &c[i + 1..] {
                assert!(g.adjacent(u, v));
            }
        }
        assert!(c.len() >= 4);
    }

    #[test]
    fn tiny_budget_reports_best() {
        let g = power(&Graph::cycle(5), 2);
        assert!(!clique_number(&g, &Budget::with_nodes(1)).is_exact());
    }
}
