//! Exact chromatic number by DSATUR branch and bound.

use super::clique::{max_clique, Bounded};
use super::Graph;
use crate::monoid::Budget;

/// An optimal proper coloring (colors `0..χ`), or the best found within the budget.
pub fn optimal_coloring(g: &Graph, budget: &Budget) -> Bounded<Vec<usize>> {
    let n = g.n();
    let clique = max_clique(g, budget);
    let lower = clique.value().len();
    let greedy = dsatur_greedy(g);
    let greedy_k = greedy.iter().max().map_or(0, |c| c + 1);
    if greedy_k == lower && clique.is_exact() {
        return Bounded::Exact(greedy);
    }
    let mut s = Dsatur {
        g,
        colors: vec![usize::MAX; n],
        best: greedy,
        best_k: greedy_k,
        lower,
        nodes: 0,
        limit: budget.nodes.max(1),
        aborted: false,
    };
    // Seed the search with the clique colored 0..|clique| to break color symmetry.
    for (i, &v) in clique.value().iter().enumerate() {
        s.colors[v] = i;
    }
    s.branch(lower, n - lower);
    if s.aborted {
        Bounded::BudgetExceeded { best: s.best }
    } else {
        Bounded::Exact(s.best)
    }
}

pub fn chromatic_number(g: &Graph, budget: &Budget) -> Bounded<usize> {
    optimal_coloring(g, budget).map(|c| c.iter().max().map_or(0, |k| k + 1))
}

fn saturation(g: &Graph, colors: &[usize], v: usize) -> usize {
    let mut seen: Vec<usize> = g
        .neighbors(v)
        .iter()
        .map(|w| colors[w])
        .filter(|&c| c != usize::MAX)
        .collect();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn pick(g: &Graph, colors: &[usize]) -> Option<usize> {
    (0..g.n())
        .filter(|&v| colors[v] == usize::MAX)
        .max_by_key(|&v| (saturation(g, colors, v), g.degree(v), std::cmp::Reverse(v)))
}

fn dsatur_greedy(g: &Graph) -> Vec<usize> {
    let mut colors = vec![usize::MAX; g.n()];
    while let Some(v) = pick(g, &colors) {
        let c = (0..)
            .find(|&c| g.neighbors(v).iter().all(|w| colors[w] != c))
            .unwrap();
        colors[v] = c;
    }
    colors
}

struct Dsatur<'a> {
    g: &'a Graph,
    colors: Vec<usize>,
    best: Vec<usize>,
    best_k: usize,
    lower: usize,
    nodes: u64,
    limit: u64,
    aborted: bool,
}

impl Dsatur<'_> {
    fn branch(&mut self, used: usize, remaining: usize) {
        if self.aborted || self.best_k == self.lower {
            return;
        }
        if remaining == 0 {
            if used < self.best_k {
                self.best_k = used;
                self.best = self.colors.clone();
            }
            return;
        }
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
            return;
        }
        let v = pick(self.g, &self.colors).expect("uncolored vertex");
        for c in 0..=used {
            if c + 1 >= self.best_k {
                break;
            }
            if self.g.neighbors(v).iter().any(|w| self.colors[w] == c) {
                continue;
            }
            self.colors[v] = c;
            self.branch(used.max(c + 1), remaining - 1);
            self.colors[v] = usize::MAX;
            if self.aborted {
                return;
            }
        }
    }
}

/// Whether `colors` is a proper coloring of `g`.
pub fn is_proper(g: &Graph, colors: &[usize]) -> bool {
    colors.len() == g.n() && g.edges().iter().all(|&(u, v)| colors[u] != colors[v])
}
