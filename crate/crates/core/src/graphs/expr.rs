//! Graph expressions built from atoms by disjunctive products and joins, and a
//! homomorphism search that exploits that structure.
//!
//! Every expression has a flat vertex numbering: a product numbers its vertices
//! in mixed radix with the first factor most significant, a join concatenates its
//! parts. [`GraphExpr::normalize`] preserves this numbering, and so do all the
//! witnesses produced here.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::clique::{clique_search, clique_search_seeded, Bounded};
use super::fractional::fractional_chromatic_with_guard;
use super::hom::{find_hom, HomRefutation};
use super::lovasz::lovasz_complement_with_guard;
use super::{disjunctive_product, graph_join, Graph, DEFAULT_GUARD};
use crate::monoid::{Budget, MonoidInstance, TriState};

/// Largest flat graph on which clique numbers are computed exactly.
const CLIQUE_FLAT_LIMIT: usize = 1024;
/// Limits for the plain backtracking search on flattened graphs.
const FLAT_SOURCE_LIMIT: usize = 512;
const FLAT_TARGET_LIMIT: usize = 4096;
/// Largest source for which an explicit vertex map is materialized.
const WITNESS_LIMIT: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GraphExpr {
    Atom(Graph),
    Product(Vec<GraphExpr>),
    Join(Vec<GraphExpr>),
}

impl From<Graph> for GraphExpr {
    fn from(g: Graph) -> Self {
        GraphExpr::Atom(g)
    }
}

impl GraphExpr {
    pub fn unit() -> Self {
        GraphExpr::Atom(Graph::unit())
    }

    pub fn product(a: GraphExpr, b: GraphExpr) -> Self {
        GraphExpr::Product(vec![a, b]).normalize()
    }

    pub fn join(a: GraphExpr, b: GraphExpr) -> Self {
        GraphExpr::Join(vec![a, b]).normalize()
    }

    /// `g^{∗k}` as a product of `k` atoms.
    pub fn power(g: &Graph, k: u32) -> Self {
        GraphExpr::Product((0..k).map(|_| GraphExpr::Atom(g.clone())).collect()).normalize()
    }

    /// Number of vertices, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        match self {
            GraphExpr::Atom(g) => g.n() as u128,
            GraphExpr::Product(cs) => cs.iter().fold(1u128, |acc, c| acc.saturating_mul(c.size())),
            GraphExpr::Join(cs) => cs.iter().fold(0u128, |acc, c| acc.saturating_add(c.size())),
        }
    }

    fn usize_size(&self) -> Option<usize> {
        self.size().to_usize()
    }

    pub fn is_complete(&self) -> bool {
        match self {
            GraphExpr::Atom(g) => g.is_complete(),
            GraphExpr::Product(cs) | GraphExpr::Join(cs) => cs.iter().all(GraphExpr::is_complete),
        }
    }

    /// Flattens nested products and joins and drops `K1` factors; flat numbering is unchanged.
    pub fn normalize(&self) -> GraphExpr {
        match self {
            GraphExpr::Atom(g) => GraphExpr::Atom(g.clone()),
            GraphExpr::Product(cs) => {
                let mut out = Vec::new();
                for c in cs.iter().map(GraphExpr::normalize) {
                    match c {
                        GraphExpr::Product(inner) => out.extend(inner),
                        GraphExpr::Atom(g) if g.n() == 1 => {}
                        other => out.push(other),
                    }
                }
                match out.len() {
                    0 => GraphExpr::unit(),
                    1 => out.pop().unwrap(),
                    _ => GraphExpr::Product(out),
                }
            }
            GraphExpr::Join(cs) => {
                let mut out = Vec::new();
                for c in cs.iter().map(GraphExpr::normalize) {
                    match c {
                        GraphExpr::Join(inner) => out.extend(inner),
                        other => out.push(other),
                    }
                }
                if out.len() == 1 {
                    out.pop().unwrap()
                } else {
                    GraphExpr::Join(out)
                }
            }
        }
    }

    /// Materializes the expression as a single graph.
    pub fn flatten(&self) -> Graph {
        match self {
            GraphExpr::Atom(g) => g.clone(),
            GraphExpr::Product(cs) => cs.iter().skip(1).fold(cs[0].flatten(), |acc, c| {
                disjunctive_product(&acc, &c.flatten())
            }),
            GraphExpr::Join(cs) => cs
                .iter()
                .skip(1)
                .fold(cs[0].flatten(), |acc, c| graph_join(&acc, &c.flatten())),
        }
    }

    /// Adjacency in the flat numbering, without materializing the graph.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        match self {
            GraphExpr::Atom(g) => g.adjacent(u, v),
            GraphExpr::Product(cs) => {
                let sizes: Vec<usize> = cs.iter().map(|c| c.usize_size().unwrap()).collect();
                let du = decode(u, &sizes);
                let dv = decode(v, &sizes);
                cs.iter()
                    .zip(du.iter().zip(&dv))
                    .any(|(c, (&a, &b))| c.adjacent(a, b))
            }
            GraphExpr::Join(cs) => {
                let (cu, iu) = join_part(cs, u);
                let (cv, iv) = join_part(cs, v);
                cu != cv || cs[cu].adjacent(iu, iv)
            }
        }
    }

    fn term_count(&self) -> usize {
        match self {
            GraphExpr::Atom(_) => 1,
            GraphExpr::Product(cs) => cs.iter().map(GraphExpr::term_count).product(),
            GraphExpr::Join(cs) => cs.iter().map(GraphExpr::term_count).sum(),
        }
    }

    /// Atoms of term `t` of the join-of-products normal form.
    fn term_atoms<'a>(&'a self, t: usize, out: &mut Vec<&'a Graph>) {
        match self {
            GraphExpr::Atom(g) => out.push(g),
            GraphExpr::Product(cs) => {
                let counts: Vec<usize> = cs.iter().map(GraphExpr::term_count).collect();
                for (c, tc) in cs.iter().zip(decode(t, &counts)) {
                    c.term_atoms(tc, out);
                }
            }
            GraphExpr::Join(cs) => {
                let mut t = t;
                for c in cs {
                    let k = c.term_count();
                    if t < k {
                        return c.term_atoms(t, out);
                    }
                    t -= k;
                }
                unreachable!("term index out of range")
            }
        }
    }

    /// Flat vertex → (normal-form term, coordinates in that term's atoms).
    fn to_nf(&self, v: usize) -> (usize, Vec<usize>) {
        match self {
            GraphExpr::Atom(_) => (0, vec![v]),
            GraphExpr::Product(cs) => {
                let sizes: Vec<usize> = cs.iter().map(|c| c.usize_size().unwrap()).collect();
                let counts: Vec<usize> = cs.iter().map(GraphExpr::term_count).collect();
                let mut terms = Vec::with_capacity(cs.len());
                let mut coords = Vec::new();
                for (c, part) in cs.iter().zip(decode(v, &sizes)) {
                    let (t, cc) = c.to_nf(part);
                    terms.push(t);
                    coords.extend(cc);
                }
                (encode(&terms, &counts), coords)
            }
            GraphExpr::Join(cs) => {
                let (ci, inner) = join_part(cs, v);
                let offset: usize = cs[..ci].iter().map(GraphExpr::term_count).sum();
                let (t, coords) = cs[ci].to_nf(inner);
                (offset + t, coords)
            }
        }
    }

    /// Inverse of [`GraphExpr::to_nf`].
    fn index_from_nf(&self, t: usize, coords: &[usize]) -> usize {
        match self {
            GraphExpr::Atom(_) => coords[0],
            GraphExpr::Product(cs) => {
                let sizes: Vec<usize> = cs.iter().map(|c| c.usize_size().unwrap()).collect();
                let counts: Vec<usize> = cs.iter().map(GraphExpr::term_count).collect();
                let mut parts = Vec::with_capacity(cs.len());
                let mut rest = coords;
                for (c, tc) in cs.iter().zip(decode(t, &counts)) {
                    let k = c.term_width(tc);
                    parts.push(c.index_from_nf(tc, &rest[..k]));
                    rest = &rest[k..];
                }
                encode(&parts, &sizes)
            }
            GraphExpr::Join(cs) => {
                let mut t = t;
                let mut offset = 0;
                for c in cs {
                    let k = c.term_count();
                    if t < k {
                        return offset + c.index_from_nf(t, coords);
                    }
                    t -= k;
                    offset += c.usize_size().unwrap();
                }
                unreachable!("term index out of range")
            }
        }
    }

    fn term_width(&self, t: usize) -> usize {
        let mut atoms = Vec::new();
        self.term_atoms(t, &mut atoms);
        atoms.len()
    }
}

fn join_part(cs: &[GraphExpr], v: usize) -> (usize, usize) {
    let mut v = v;
    for (i, c) in cs.iter().enumerate() {
        let s = c.usize_size().unwrap();
        if v < s {
            return (i, v);
        }
        v -= s;
    }
    panic!("vertex out of range")
}

/// Mixed-radix digits of `v`, most significant first.
pub(crate) fn decode(mut v: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (i, &r) in radices.iter().enumerate().rev() {
        out[i] = v % r;
        v /= r;
    }
    out
}

pub(crate) fn encode(digits: &[usize], radices: &[usize]) -> usize {
    digits
        .iter()
        .zip(radices)
        .fold(0, |acc, (&d, &r)| acc * r + d)
}

/// A vertex map between the flat numberings of two expressions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExprHom {
    pub map: Vec<usize>,
}

/// Adjacency-preservation check through the expressions' adjacency oracles.
pub fn verify_expr_map(source: &GraphExpr, target: &GraphExpr, map: &[usize]) -> bool {
    let (Some(ns), Some(nt)) = (source.usize_size(), target.usize_size()) else {
        return false;
    };
    if map.len() != ns || map.iter().any(|&v| v >= nt) {
        return false;
    }
    let edges: Vec<(usize, usize)> = if ns <= FLAT_TARGET_LIMIT {
        source.flatten().edges()
    } else {
        let mut e = Vec::new();
        for u in 0..ns {
            for v in u + 1..ns {
                if source.adjacent(u, v) {
                    e.push((u, v));
                }
            }
        }
        e
    };
    edges
        .into_iter()
        .all(|(u, v)| target.adjacent(map[u], map[v]))
}

/// A normal-form term: a product of atoms.
#[derive(Debug, Clone)]
struct Term {
    atoms: Vec<Graph>,
}

impl Term {
    fn sizes(&self) -> Vec<usize> {
        self.atoms.iter().map(Graph::n).collect()
    }

    fn size(&self) -> Option<usize> {
        self.atoms
            .iter()
            .try_fold(1usize, |acc, a| acc.checked_mul(a.n()))
    }

    fn is_complete(&self) -> bool {
        self.atoms.iter().all(Graph::is_complete)
    }

    fn flatten(&self) -> Graph {
        self.atoms
            .iter()
            .fold(Graph::unit(), |acc, a| disjunctive_product(&acc, a))
    }
}

fn terms_of(e: &GraphExpr) -> Vec<Term> {
    (0..e.term_count())
        .map(|t| {
            let mut atoms = Vec::new();
            e.term_atoms(t, &mut atoms);
            Term {
                atoms: atoms.into_iter().cloned().collect(),
            }
        })
        .collect()
}

/// Homomorphism search between graph expressions, with caches for the
/// clique numbers of atom groups and the fractional chromatic numbers of atoms.
#[derive(Default)]
pub struct GraphInstance {
    clique_cache: Mutex<HashMap<Vec<Graph>, Bounded<Vec<usize>>>>,
    bound_cache: Mutex<HashMap<Graph, Option<f64>>>,
}

impl std::fmt::Debug for GraphInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("GraphInstance")
    }
}

type TermMap = Vec<Vec<usize>>;

impl GraphInstance {
    pub fn new() -> Self {
        Self::default()
    }

    /// Decides whether a homomorphism `source → target` exists.
    pub fn expr_hom(
        &self,
        source: &GraphExpr,
        target: &GraphExpr,
        budget: &Budget,
    ) -> TriState<ExprHom, HomRefutation> {
        let (Some(ns), Some(nt)) = (source.usize_size(), target.usize_size()) else {
            return TriState::Unknown;
        };
        if source.is_complete() {
            match self.complete_into(ns, target, budget) {
                TriState::Unknown => {}
                settled => return settled,
            }
        }
        if ns <= FLAT_SOURCE_LIMIT && nt <= FLAT_TARGET_LIMIT {
            return find_hom(&source.flatten(), &target.flatten(), budget.nodes)
                .map_yes(|map| ExprHom { map });
        }
        if ns > WITNESS_LIMIT {
            return TriState::Unknown;
        }
        let sterms = terms_of(source);
        let tterms = terms_of(target);
        let mut used = vec![false; tterms.len()];
        let mut assign = vec![0; sterms.len()];
        let mut maps: Vec<Option<TermMap>> = vec![None; sterms.len()];
        let mut cache: HashMap<(usize, usize), Option<TermMap>> = HashMap::new();
        if !self.assign_terms(
            0,
            &sterms,
            &tterms,
            &mut used,
            &mut assign,
            &mut maps,
            &mut cache,
            budget,
        ) {
            return TriState::Unknown;
        }
        let map = (0..ns)
            .map(|v| {
                let (t, coords) = source.to_nf(v);
                let sizes = sterms[t].sizes();
                let image = &maps[t].as_ref().unwrap()[encode(&coords, &sizes)];
                target.index_from_nf(assign[t], image)
            })
            .collect();
        TriState::Yes(ExprHom { map })
    }

    #[allow(clippy::too_many_arguments)]
    fn assign_terms(
        &self,
        i: usize,
        sterms: &[Term],
        tterms: &[Term],
        used: &mut [bool],
        assign: &mut [usize],
        maps: &mut [Option<TermMap>],
        cache: &mut HashMap<(usize, usize), Option<TermMap>>,
        budget: &Budget,
    ) -> bool {
        if i == sterms.len() {
            return true;
        }
        for j in 0..tterms.len() {
            if used[j] {
                continue;
            }
            let m = cache
                .entry((i, j))
                .or_insert_with(|| self.term_hom(&sterms[i], &tterms[j], budget).yes())
                .clone();
            if let Some(m) = m {
                used[j] = true;
                assign[i] = j;
                maps[i] = Some(m);
                if self.assign_terms(i + 1, sterms, tterms, used, assign, maps, cache, budget) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }

    /// Term-to-term homomorphism as a table from source coordinates (flat within the term)
    /// to target coordinates.
    fn term_hom(&self, s: &Term, t: &Term, budget: &Budget) -> TriState<TermMap, HomRefutation> {
        let Some(ns) = s.size() else {
            return TriState::Unknown;
        };
        if s.is_complete() {
            match self.clique_in_term(t, ns, budget) {
                TriState::Yes(clique) => return TriState::Yes(clique),
                TriState::No(r) => return TriState::No(r),
                TriState::Unknown => {}
            }
        }
        if let Some(m) = self.factor_matching(s, t, budget) {
            return TriState::Yes(m);
        }
        match t.size() {
            Some(nt) if ns <= FLAT_SOURCE_LIMIT && nt <= FLAT_TARGET_LIMIT => {
                let tsizes = t.sizes();
                find_hom(&s.flatten(), &t.flatten(), budget.nodes)
                    .map_yes(|map| map.into_iter().map(|v| decode(v, &tsizes)).collect())
            }
            _ => TriState::Unknown,
        }
    }

    /// Maps a complete source of `n` vertices into `target`.
    fn complete_into(
        &self,
        n: usize,
        target: &GraphExpr,
        budget: &Budget,
    ) -> TriState<ExprHom, HomRefutation> {
        let tterms = terms_of(target);
        let mut clique: Vec<usize> = Vec::new();
        let mut upper = 0usize;
        let mut upper_known = true;
        for (ti, term) in tterms.iter().enumerate() {
            if clique.len() < n {
                if let Some(c) = self.grouped_clique(term, n - clique.len(), budget) {
                    clique.extend(c.iter().map(|coords| target.index_from_nf(ti, coords)));
                }
            }
            match self.clique_upper(term, budget) {
                Some(u) => upper = upper.saturating_add(u),
                None => upper_known = false,
            }
        }
        if clique.len() >= n {
            clique.truncate(n);
            return TriState::Yes(ExprHom { map: clique });
        }
        if upper_known && upper < n {
            return TriState::No(HomRefutation::CliqueNumber {
                needed: n,
                available: upper,
            });
        }
        TriState::Unknown
    }

    fn clique_in_term(
        &self,
        t: &Term,
        n: usize,
        budget: &Budget,
    ) -> TriState<TermMap, HomRefutation> {
        if let Some(c) = self.grouped_clique(t, n, budget) {
            return TriState::Yes(c.into_iter().take(n).collect());
        }
        match self.clique_upper(t, budget) {
            Some(u) if u < n => TriState::No(HomRefutation::CliqueNumber {
                needed: n,
                available: u,
            }),
            _ => TriState::Unknown,
        }
    }

    /// A maximum clique of `atoms[0] ∗ atoms[1] ∗ …` in flat numbering.
    pub fn clique_of_product(&self, atoms: &[Graph], budget: &Budget) -> Bounded<Vec<usize>> {
        self.product_clique(atoms, budget)
    }

    /// Maximum clique of the product of `atoms` in that factor order, cached.
    /// The search is seeded with the product of cliques of the two halves and skipped
    /// when that seed already meets the functional upper bound.
    fn product_clique(&self, atoms: &[Graph], budget: &Budget) -> Bounded<Vec<usize>> {
        if let Some(c) = self.clique_cache.lock().unwrap().get(atoms) {
            return c.clone();
        }
        let c = if atoms.len() == 1 {
            clique_search(&atoms[0], budget, usize::MAX)
        } else {
            let (left, right) = atoms.split_at(atoms.len() / 2);
            let cl = self.product_clique(left, budget);
            let cr = self.product_clique(right, budget);
            let nr: usize = right.iter().map(Graph::n).product();
            let seed: Vec<usize> = cl
                .value()
                .iter()
                .flat_map(|&u| cr.value().iter().map(move |&v| u * nr + v))
                .collect();
            if self.cheap_upper(atoms).is_some_and(|u| seed.len() >= u) {
                Bounded::Exact(seed)
            } else {
                let flat = Term {
                    atoms: atoms.to_vec(),
                }
                .flatten();
                clique_search_seeded(&flat, budget, usize::MAX, &seed)
            }
        };
        self.clique_cache
            .lock()
            .unwrap()
            .insert(atoms.to_vec(), c.clone());
        c
    }

    fn omega(&self, atoms: &[Graph], budget: &Budget) -> Option<usize> {
        let mut key = atoms.to_vec();
        key.sort_by_key(|g| (g.n(), g.adjacency_strings()));
        self.product_clique(&key, budget).exact().map(|c| c.len())
    }

    /// `min(χ_f, lovasz)` of an atom, both multiplicative upper bounds on clique numbers.
    fn atom_bound(&self, g: &Graph) -> Option<f64> {
        if let Some(v) = self.bound_cache.lock().unwrap().get(g) {
            return *v;
        }
        let chi = fractional_chromatic_with_guard(g, DEFAULT_GUARD)
            .ok()
            .and_then(|r| r.to_f64());
        let lov = lovasz_complement_with_guard(g, 1e-7, DEFAULT_GUARD)
            .ok()
            .map(|r| r.upper);
        let v = match (chi, lov) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        self.bound_cache.lock().unwrap().insert(g.clone(), v);
        v
    }

    fn cheap_upper(&self, atoms: &[Graph]) -> Option<usize> {
        let mut complete = 1usize;
        let mut rest = 1f64;
        for a in atoms {
            if a.is_complete() {
                complete = complete.saturating_mul(a.n());
            } else {
                rest *= self.atom_bound(a)?;
            }
        }
        Some(((rest + 1e-9).floor() as usize).saturating_mul(complete))
    }

    /// A certified upper bound on the clique number of a term: the smaller of the
    /// functional bound and, for small terms, the exact clique number.
    fn clique_upper(&self, t: &Term, budget: &Budget) -> Option<usize> {
        let cheap = self.cheap_upper(&t.atoms);
        let exact = if t.size().is_some_and(|s| s <= CLIQUE_FLAT_LIMIT) {
            self.omega(&t.atoms, budget)
        } else {
            None
        };
        match (cheap, exact) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// A clique of at least `need` vertices (coordinates per atom), found by partitioning
    /// the atoms into groups and multiplying cliques of the groups.
    fn grouped_clique(&self, t: &Term, need: usize, budget: &Budget) -> Option<Vec<Vec<usize>>> {
        let k = t.atoms.len();
        if t.size().is_some_and(|s| s <= CLIQUE_FLAT_LIMIT) {
            let c = self.product_clique(&t.atoms, budget);
            let c = c.value();
            return (c.len() >= need).then(|| c.iter().map(|&v| decode(v, &t.sizes())).collect());
        }
        let groups = if k <= 12 {
            self.best_partition(t, need, budget)?
        } else {
            self.chunked_partition(t, need, budget)?
        };
        // Product of group cliques, enumerated in mixed radix until `need` vertices.
        let group_cliques: Vec<(Vec<usize>, Vec<Vec<usize>>)> = groups
            .into_iter()
            .map(|g| {
                let atoms: Vec<Graph> = g.iter().map(|&i| t.atoms[i].clone()).collect();
                let sizes: Vec<usize> = atoms.iter().map(Graph::n).collect();
                let c = self.product_clique(&atoms, budget);
                let coords = c.value().iter().map(|&v| decode(v, &sizes)).collect();
                (g, coords)
            })
            .collect();
        let radices: Vec<usize> = group_cliques.iter().map(|(_, c)| c.len()).collect();
        let total = radices
            .iter()
            .try_fold(1usize, |a, &r| a.checked_mul(r))
            .unwrap_or(usize::MAX);
        if total < need {
            return None;
        }
        let out = (0..need)
            .map(|idx| {
                let mut coords = vec![0; k];
                for ((g, cl), d) in group_cliques.iter().zip(decode(idx, &radices)) {
                    for (&atom, &c) in g.iter().zip(&cl[d]) {
                        coords[atom] = c;
                    }
                }
                coords
            })
            .collect();
        Some(out)
    }

    /// Set-partition search over atom groups with flat size at most the clique limit,
    /// trying groups of size 1, then at most 2, and so on.
    fn best_partition(&self, t: &Term, need: usize, budget: &Budget) -> Option<Vec<Vec<usize>>> {
        let k = t.atoms.len();
        let full = (1usize << k) - 1;
        let mut omega_of: HashMap<usize, Option<usize>> = HashMap::new();
        for s in 1..=k {
            let mut best: Vec<Option<(usize, Vec<usize>)>> = vec![None; full + 1];
            best[0] = Some((1, Vec::new()));
            for mask in 1..=full {
                let low = mask & mask.wrapping_neg();
                let rest = mask ^ low;
                let mut sub = rest;
                let mut cand: Option<(usize, Vec<usize>)> = None;
                loop {
                    let group = sub | low;
                    if (group.count_ones() as usize) <= s {
                        let size = members(group)
                            .iter()
                            .try_fold(1usize, |a, &i| a.checked_mul(t.atoms[i].n()));
                        if size.is_some_and(|x| x <= CLIQUE_FLAT_LIMIT) {
                            let w = *omega_of.entry(group).or_insert_with(|| {
                                let atoms: Vec<Graph> =
                                    members(group).iter().map(|&i| t.atoms[i].clone()).collect();
                                self.omega(&atoms, budget)
                            });
                            if let (Some(w), Some((v, parts))) = (w, &best[mask ^ group]) {
                                let val = v.saturating_mul(w);
                                if cand.as_ref().is_none_or(|(c, _)| val > *c) {
                                    let mut p = parts.clone();
                                    p.push(group);
                                    cand = Some((val, p));
                                }
                            }
                        }
                    }
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & rest;
                }
                best[mask] = cand;
            }
            if let Some((v, parts)) = &best[full] {
                if *v >= need {
                    return Some(parts.iter().map(|&g| members(g)).collect());
                }
            }
        }
        None
    }

    fn chunked_partition(&self, t: &Term, need: usize, budget: &Budget) -> Option<Vec<Vec<usize>>> {
        let k = t.atoms.len();
        for s in 1..=k {
            let groups: Vec<Vec<usize>> = (0..k)
                .collect::<Vec<_>>()
                .chunks(s)
                .map(<[usize]>::to_vec)
                .collect();
            let mut total = 1usize;
            for g in &groups {
                let atoms: Vec<Graph> = g.iter().map(|&i| t.atoms[i].clone()).collect();
                let size = atoms.iter().try_fold(1usize, |a, x| a.checked_mul(x.n()))?;
                if size > CLIQUE_FLAT_LIMIT {
                    return None;
                }
                total = total.saturating_mul(self.omega(&atoms, budget)?);
            }
            if total >= need {
                return Some(groups);
            }
        }
        None
    }

    /// Matches the non-complete source atoms injectively to target atoms that admit a
    /// homomorphism, then sends the product of the complete source atoms to a clique in
    /// the product of the unused target atoms. Yes-only.
    fn factor_matching(&self, s: &Term, t: &Term, budget: &Budget) -> Option<TermMap> {
        let nc: Vec<usize> = (0..s.atoms.len())
            .filter(|&i| !s.atoms[i].is_complete())
            .collect();
        let cp: Vec<usize> = (0..s.atoms.len())
            .filter(|&i| s.atoms[i].is_complete())
            .collect();
        let need: usize = cp.iter().map(|&i| s.atoms[i].n()).product();
        let mut atom_homs: HashMap<(usize, usize), Option<Vec<usize>>> = HashMap::new();
        let mut chosen = vec![usize::MAX; nc.len()];
        let mut used = vec![false; t.atoms.len()];
        self.match_atoms(
            0,
            &nc,
            s,
            t,
            &mut chosen,
            &mut used,
            &mut atom_homs,
            budget,
            &|used: &[bool]| {
                let rest: Vec<usize> = (0..t.atoms.len()).filter(|&j| !used[j]).collect();
                let sub = Term {
                    atoms: rest.iter().map(|&j| t.atoms[j].clone()).collect(),
                };
                let clique = if need == 1 {
                    Some(vec![vec![0; rest.len()]])
                } else {
                    self.grouped_clique(&sub, need, budget)
                };
                clique.map(|c| (rest, c))
            },
        )
        .map(|(chosen, rest, clique)| {
            let ssizes = s.sizes();
            let csizes: Vec<usize> = cp.iter().map(|&i| s.atoms[i].n()).collect();
            let total = s.size().unwrap();
            (0..total)
                .map(|v| {
                    let coords = decode(v, &ssizes);
                    let mut out = vec![0; t.atoms.len()];
                    for (k, &i) in nc.iter().enumerate() {
                        let (j, ref hom) = chosen[k];
                        out[j] = hom[coords[i]];
                    }
                    let cidx = encode(&cp.iter().map(|&i| coords[i]).collect::<Vec<_>>(), &csizes);
                    for (&j, &c) in rest.iter().zip(&clique[cidx]) {
                        out[j] = c;
                    }
                    out
                })
                .collect()
        })
    }

    #[allow(clippy::too_many_arguments, clippy::type_complexity)]
    fn match_atoms<F>(
        &self,
        k: usize,
        nc: &[usize],
        s: &Term,
        t: &Term,
        chosen: &mut Vec<usize>,
        used: &mut Vec<bool>,
        atom_homs: &mut HashMap<(usize, usize), Option<Vec<usize>>>,
        budget: &Budget,
        finish: &F,
    ) -> Option<(Vec<(usize, Vec<usize>)>, Vec<usize>, Vec<Vec<usize>>)>
    where
        F: Fn(&[bool]) -> Option<(Vec<usize>, Vec<Vec<usize>>)>,
    {
        if k == nc.len() {
            let (rest, clique) = finish(used)?;
            let homs = nc
                .iter()
                .zip(chosen.iter())
                .map(|(&i, &j)| (j, atom_homs[&(i, j)].clone().unwrap()))
                .collect();
            return Some((homs, rest, clique));
        }
        let i = nc[k];
        // Equal source atoms take increasing targets; equal unused targets are interchangeable.
        let from = if k > 0 && s.atoms[nc[k - 1]] == s.atoms[i] {
            chosen[k - 1] + 1
        } else {
            0
        };
        let mut tried: Vec<&Graph> = Vec::new();
        for j in from..t.atoms.len() {
            if used[j] || tried.contains(&&t.atoms[j]) {
                continue;
            }
            tried.push(&t.atoms[j]);
            let ok = atom_homs
                .entry((i, j))
                .or_insert_with(|| {
                    let (a, b) = (&s.atoms[i], &t.atoms[j]);
                    if a.n() > FLAT_SOURCE_LIMIT || b.n() > FLAT_TARGET_LIMIT {
                        return None;
                    }
                    find_hom(a, b, budget.nodes).yes()
                })
                .is_some();
            if ok {
                used[j] = true;
                chosen[k] = j;
                if let Some(r) =
                    self.match_atoms(k + 1, nc, s, t, chosen, used, atom_homs, budget, finish)
                {
                    return Some(r);
                }
                used[j] = false;
            }
        }
        None
    }
}

fn members(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize)
        .filter(|&i| mask >> i & 1 == 1)
        .collect()
}

impl MonoidInstance for GraphInstance {
    type Elem = GraphExpr;
    type Witness = ExprHom;
    type Refutation = HomRefutation;

    fn name(&self) -> &'static str {
        "graph"
    }

    fn zero(&self) -> GraphExpr {
        GraphExpr::unit()
    }

    fn combine(&self, a: &GraphExpr, b: &GraphExpr) -> GraphExpr {
        GraphExpr::product(a.clone(), b.clone())
    }

    fn canonical(&self, x: &GraphExpr) -> GraphExpr {
        x.normalize()
    }

    /// `x ≥ y` iff there is a homomorphism `y → x`.
    fn leq(
        &self,
        x: &GraphExpr,
        y: &GraphExpr,
        budget: &Budget,
    ) -> TriState<ExprHom, HomRefutation> {
        self.expr_hom(y, x, budget)
    }

    fn verify(&self, x: &GraphExpr, y: &GraphExpr, w: &ExprHom) -> bool {
        verify_expr_map(y, x, &w.map)
    }

    fn combine_witness(
        &self,
        (x1, y1, w1): (&GraphExpr, &GraphExpr, &ExprHom),
        (x2, y2, w2): (&GraphExpr, &GraphExpr, &ExprHom),
    ) -> ExprHom {
        let nx2 = x2.usize_size().unwrap();
        let ny2 = y2.usize_size().unwrap();
        let ny1 = y1.usize_size().unwrap();
        let _ = x1;
        let map = (0..ny1 * ny2)
            .map(|u| w1.map[u / ny2] * nx2 + w2.map[u % ny2])
            .collect();
        ExprHom { map }
    }

    fn is_complete(&self) -> bool {
        true
    }
}
