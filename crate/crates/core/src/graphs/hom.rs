//! Backtracking search for graph homomorphisms.

use serde::{Deserialize, Serialize};

use super::clique::{clique_search, greedy_clique_from, Bounded};
use super::{BitSet, Graph, GraphHom};
use crate::monoid::{Budget, TriState};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum HomRefutation {
    /// The backtracking search finished without finding a map.
    Exhaustive,
    /// The source contains a clique larger than the exact clique number of the target.
    CliqueNumber { needed: usize, available: usize },
}

/// Decides whether a homomorphism `g → h` exists (equivalently `h ≥ g`).
pub fn hom_search(g: &Graph, h: &Graph, budget: &Budget) -> TriState<GraphHom, HomRefutation> {
    match find_hom(g, h, budget.nodes) {
        TriState::Yes(map) => {
            let hom = GraphHom {
                source: g.clone(),
                target: h.clone(),
                map,
            };
            debug_assert!(hom.verify());
            TriState::Yes(hom)
        }
        TriState::No(r) => TriState::No(r),
        TriState::Unknown => TriState::Unknown,
    }
}

/// Map-only variant of [`hom_search`].
pub fn find_hom(g: &Graph, h: &Graph, nodes: u64) -> TriState<Vec<usize>, HomRefutation> {
    if g.is_edgeless() {
        return TriState::Yes(vec![0; g.n()]);
    }
    if h.is_edgeless() {
        return TriState::No(HomRefutation::CliqueNumber {
            needed: 2,
            available: 1,
        });
    }
    if g.is_complete() {
        let budget = Budget::with_nodes(nodes);
        return match clique_search(h, &budget, g.n()) {
            Bounded::Exact(c) if c.len() >= g.n() => TriState::Yes(c[..g.n()].to_vec()),
            Bounded::Exact(c) => TriState::No(HomRefutation::CliqueNumber {
                needed: g.n(),
                available: c.len(),
            }),
            Bounded::BudgetExceeded { best } if best.len() >= g.n() => {
                TriState::Yes(best[..g.n()].to_vec())
            }
            Bounded::BudgetExceeded { .. } => TriState::Unknown,
        };
    }
    let mut s = HomSearch::new(g, h, nodes);
    let domains = s.initial_domains();
    let mut assignment = vec![usize::MAX; g.n()];
    match s.search(domains, &mut assignment, g.n()) {
        Outcome::Found => TriState::Yes(assignment),
        Outcome::Exhausted => TriState::No(HomRefutation::Exhaustive),
        Outcome::Aborted => TriState::Unknown,
    }
}

enum Outcome {
    Found,
    Exhausted,
    Aborted,
}

#[derive(Clone, Copy)]
struct OrderLink {
    other: usize,
    strict: bool,
}

struct HomSearch<'a> {
    g: &'a Graph,
    h: &'a Graph,
    nodes: u64,
    limit: u64,
    /// `f(u) > f(prev)` (or `≥`) for twin classes, and the mirror constraint.
    prev: Vec<Option<OrderLink>>,
    next: Vec<Option<OrderLink>>,
    /// A large clique of the source used for the coloring bound.
    bound_clique: Vec<usize>,
    clique_hint: Vec<usize>,
}

impl<'a> HomSearch<'a> {
    fn new(g: &'a Graph, h: &'a Graph, limit: u64) -> Self {
        let n = g.n();
        let mut prev = vec![None; n];
        let mut next = vec![None; n];
        // Twins are interchangeable, so their images may be assumed sorted:
        // strictly for adjacent twins (same closed neighborhood), weakly otherwise.
        let mut seen = vec![false; n];
        for u in 0..n {
            if seen[u] {
                continue;
            }
            let mut closed = g.neighbors(u).clone();
            closed.insert(u);
            let mut class_true = vec![u];
            let mut class_false = vec![u];
            for v in (u + 1..n).filter(|&v| !seen[v]) {
                let mut cv = g.neighbors(v).clone();
                cv.insert(v);
                if g.adjacent(u, v) && cv == closed {
                    class_true.push(v);
                } else if !g.adjacent(u, v) && g.neighbors(v) == g.neighbors(u) {
                    class_false.push(v);
                }
            }
            for (class, strict) in [(class_true, true), (class_false, false)] {
                if class.len() < 2 {
                    continue;
                }
                for w in class.windows(2) {
                    seen[w[1]] = true;
                    prev[w[1]] = Some(OrderLink {
                        other: w[0],
                        strict,
                    });
                    next[w[0]] = Some(OrderLink {
                        other: w[1],
                        strict,
                    });
                }
            }
            seen[u] = true;
        }
        let mut clique_hint = vec![1; n];
        let mut bound_clique = vec![0];
        for (u, hint) in clique_hint.iter_mut().enumerate() {
            let c = greedy_clique_from(g, u);
            *hint = c.len();
            if c.len() > bound_clique.len() {
                bound_clique = c;
            }
        }
        HomSearch {
            g,
            h,
            nodes: 0,
            limit,
            prev,
            next,
            bound_clique,
            clique_hint,
        }
    }

    fn initial_domains(&self) -> Vec<BitSet> {
        let hn = self.h.n();
        (0..self.g.n())
            .map(|u| {
                let mut d = BitSet::new(hn);
                let need = self.clique_hint[u]
                    .saturating_sub(1)
                    .max(usize::from(self.g.degree(u) > 0));
                for v in 0..hn {
                    if self.h.degree(v) >= need {
                        d.insert(v);
                    }
                }
                d
            })
            .collect()
    }

    fn search(
        &mut self,
        domains: Vec<BitSet>,
        assignment: &mut [usize],
        remaining: usize,
    ) -> Outcome {
        if remaining == 0 {
            return Outcome::Found;
        }
        let u = (0..self.g.n())
            .filter(|&u| assignment[u] == usize::MAX)
            .min_by_key(|&u| (domains[u].len(), std::cmp::Reverse(self.g.degree(u)), u))
            .expect("unassigned vertex");
        let candidates: Vec<usize> = domains[u].iter().collect();
        for v in candidates {
            self.nodes += 1;
            if self.nodes > self.limit {
                return Outcome::Aborted;
            }
            let Some(next_domains) = self.propagate(&domains, assignment, u, v) else {
                continue;
            };
            assignment[u] = v;
            if !self.coloring_bound_ok(&next_domains, assignment) {
                assignment[u] = usize::MAX;
                continue;
            }
            match self.search(next_domains, assignment, remaining - 1) {
                Outcome::Found => return Outcome::Found,
                Outcome::Aborted => {
                    assignment[u] = usize::MAX;
                    return Outcome::Aborted;
                }
                Outcome::Exhausted => assignment[u] = usize::MAX,
            }
        }
        Outcome::Exhausted
    }

    fn propagate(
        &self,
        domains: &[BitSet],
        assignment: &[usize],
        u: usize,
        v: usize,
    ) -> Option<Vec<BitSet>> {
        let mut d = domains.to_vec();
        d[u] = BitSet::new(self.h.n());
        d[u].insert(v);
        for w in self.g.neighbors(u).iter() {
            if assignment[w] == usize::MAX {
                d[w].intersect_with(self.h.neighbors(v));
                if d[w].is_empty() {
                    return None;
                }
            }
        }
        if let Some(OrderLink { other, strict }) = self.next[u] {
            if assignment[other] == usize::MAX {
                d[other].remove_below(if strict { v + 1 } else { v });
                if d[other].is_empty() {
                    return None;
                }
            }
        }
        if let Some(OrderLink { other, strict }) = self.prev[u] {
            if assignment[other] == usize::MAX {
                if strict && v == 0 {
                    return None;
                }
                d[other].remove_above(if strict { v - 1 } else { v });
                if d[other].is_empty() {
                    return None;
                }
            }
        }
        Some(d)
    }

    /// The unassigned part of the bound clique needs that many distinct, pairwise
    /// adjacent images; a greedy coloring of the union of their domains bounds
    /// the largest clique available there.
    fn coloring_bound_ok(&self, domains: &[BitSet], assignment: &[usize]) -> bool {
        let open: Vec<usize> = self
            .bound_clique
            .iter()
            .copied()
            .filter(|&u| assignment[u] == usize::MAX)
            .collect();
        if open.len() < 2 {
            return true;
        }
        let mut union = BitSet::new(self.h.n());
        for &u in &open {
            union.union_with(&domains[u]);
        }
        let mut colors = 0;
        while !union.is_empty() {
            colors += 1;
            if colors >= open.len() {
                return true;
            }
            let mut q = union.clone();
            while let Some(x) = q.first() {
                q.remove(x);
                union.remove(x);
                q.difference_with(self.h.neighbors(x));
            }
        }
        colors >= open.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{power, verify_map};

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn identity_and_colorings() {
        let c5 = Graph::cycle(5);
        assert!(hom_search(&c5, &c5, &b()).is_yes());
        let hom = hom_search(&c5, &Graph::complete(3), &b()).yes().unwrap();
        assert!(hom.verify());
        assert!(hom_search(&c5, &Graph::complete(2), &b()).is_no());
        assert!(hom_search(&Graph::complete(3), &c5, &b()).is_no());
    }

    #[test]
    fn odd_cycles_map_down() {
        let c7 = Graph::cycle(7);
        let c5 = Graph::cycle(5);
        let hom = hom_search(&c7, &c5, &b()).yes().unwrap();
        assert!(verify_map(&c7, &c5, &hom.map));
        assert!(hom_search(&c5, &c7, &b()).is_no());
    }

    #[test]
    fn clique_into_pentagon_square() {
        let t = power(&Graph::cycle(5), 2);
        assert!(hom_search(&Graph::complete(5), &t, &b()).is_yes());
        assert!(hom_search(&Graph::complete(6), &t, &b()).is_no());
    }

    #[test]
    fn twins_do_not_lose_solutions() {
        // Two false twins hanging off a triangle.
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (3, 0), (4, 0), (3, 1), (4, 1)])
            .unwrap();
        assert!(hom_search(&g, &Graph::complete(3), &b()).is_yes());
        assert!(hom_search(&g, &Graph::complete(2), &b()).is_no());
    }
}
