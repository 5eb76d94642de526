//! Reaction systems: multisets of species rewritten by a fixed list of reactions.
//! Reachability by breadth-first search, conservation laws, additive monotones,
//! and the functional order decided by conic membership.

pub mod formula;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dd::h_to_v;
use crate::farkas::{conic_membership, Membership};
use crate::linalg::nullspace;
use crate::monoid::{Budget, MonoidInstance, TriState};
use crate::rational::{dot, int, serde_qmat, serde_qvec, QVec, Rational};
pub use formula::{parse_formula, AtomCounts, FormulaError};

/// Default cap on the number of molecules in a single search state.
pub const MOLECULE_GUARD: usize = 4096;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RxnError {
    #[error("unknown species {0:?}")]
    UnknownSpecies(String),
    #[error("species {0:?} is declared twice")]
    DuplicateSpecies(String),
    #[error(
        "{species} species exceed the cone guard of {guard} (raise with REMONO_GUARD_OVERRIDE)"
    )]
    GuardExceeded { species: usize, guard: usize },
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("no atom counts for species {0:?}")]
    MissingExpansion(String),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct RxnParseError {
    pub line: usize,
    pub message: String,
}

/// Species name → positive count.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiset(BTreeMap<String, u64>);

impl Multiset {
    pub fn new() -> Self {
        Multiset::default()
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, u64)>) -> Self {
        let mut m = Multiset::new();
        for (s, n) in pairs {
            m.insert(s, n);
        }
        m
    }

    pub fn insert(&mut self, species: impl Into<String>, n: u64) {
        if n > 0 {
            *self.0.entry(species.into()).or_default() += n;
        }
    }

    pub fn count(&self, species: &str) -> u64 {
        self.0.get(species).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn sum(&self, other: &Multiset) -> Multiset {
        let mut m = self.clone();
        for (s, n) in other.iter() {
            m.insert(s, n);
        }
        m
    }

    /// Reads `"CH4 + 2 O2"`; `"0"` or an empty string is the empty multiset.
    pub fn parse(text: &str) -> Result<Multiset, String> {
        let text = text.trim();
        let mut m = Multiset::new();
        if text.is_empty() || text == "0" {
            return Ok(m);
        }
        for term in text.split('+') {
            let (n, name) = parse_term(term)?;
            m.insert(name, n);
        }
        Ok(m)
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        for (i, (s, n)) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if n == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{n} {s}")?;
            }
        }
        Ok(())
    }
}

fn parse_term(term: &str) -> Result<(u64, String), String> {
    let term = term.trim();
    let digits = term.chars().take_while(char::is_ascii_digit).count();
    let n = if digits == 0 {
        1
    } else {
        term[..digits]
            .parse::<u64>()
            .map_err(|_| format!("coefficient too large in {term:?}"))?
    };
    if n == 0 {
        return Err(format!("zero coefficient in {term:?}"));
    }
    let name = term[digits..].trim();
    let mut chars = name.chars();
    let valid_start = chars
        .next()
        .is_some_and(|c| c.is_ascii_alphabetic() || c == '_');
    if !valid_start || !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("invalid species name in {term:?}"));
    }
    Ok((n, name.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reaction {
    pub lhs: Multiset,
    pub rhs: Multiset,
}

impl fmt::Display for Reaction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReactionSystem {
    species: Vec<String>,
    reactions: Vec<Reaction>,
    #[serde(skip)]
    index: HashMap<String, usize>,
    #[serde(skip)]
    vectors: Vec<(Vec<u64>, Vec<u64>)>,
}

impl<'de> Deserialize<'de> for ReactionSystem {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            species: Vec<String>,
            reactions: Vec<Reaction>,
        }
        let raw = Raw::deserialize(d)?;
        ReactionSystem::new(raw.species, raw.reactions).map_err(serde::de::Error::custom)
    }
}

impl ReactionSystem {
    /// Species referenced by a reaction but not listed are appended in order of appearance.
    pub fn new(mut species: Vec<String>, reactions: Vec<Reaction>) -> Result<Self, RxnError> {
        let mut index = HashMap::new();
        for (i, s) in species.iter().enumerate() {
            if index.insert(s.clone(), i).is_some() {
                return Err(RxnError::DuplicateSpecies(s.clone()));
            }
        }
        for r in &reactions {
            for (s, _) in r.lhs.iter().chain(r.rhs.iter()) {
                if !index.contains_key(s) {
                    index.insert(s.to_string(), species.len());
                    species.push(s.to_string());
                }
            }
        }
        let counts = |m: &Multiset| {
            let mut v = vec![0u64; species.len()];
            for (s, n) in m.iter() {
                v[index[s]] = n;
            }
            v
        };
        let vectors = reactions
            .iter()
            .map(|r| (counts(&r.lhs), counts(&r.rhs)))
            .collect();
        Ok(ReactionSystem {
            species,
            reactions,
            index,
            vectors,
        })
    }

    /// One reaction per line, `2 H2 + O2 -> 2 H2O`; `<->` adds both directions.
    /// An optional `species: A, B, C` line fixes the species order. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self, RxnParseError> {
        let mut species = Vec::new();
        let mut reactions = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| RxnParseError {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("species:") {
                for name in rest.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    let (n, s) = parse_term(name).map_err(&err)?;
                    if n != 1 || name.starts_with(|c: char| c.is_ascii_digit()) {
                        return Err(err(format!(
                            "species declaration {name:?} has a coefficient"
                        )));
                    }
                    if species.contains(&s) {
                        return Err(err(format!("species {s:?} is declared twice")));
                    }
                    species.push(s);
                }
                continue;
            }
            let (lhs, rhs, both) = if let Some((l, r)) = line.split_once("<->") {
                (l, r, true)
            } else if let Some((l, r)) = line.split_once("->") {
                (l, r, false)
            } else {
                return Err(err("expected '->' or '<->'".to_string()));
            };
            if rhs.contains("->") {
                return Err(err("more than one arrow".to_string()));
            }
            for side in [lhs, rhs] {
                let side = side.trim();
                if side.is_empty() || side == "0" {
                    continue;
                }
                for term in side.split('+') {
                    let (_, name) = parse_term(term).map_err(&err)?;
                    if !species.contains(&name) {
                        species.push(name);
                    }
                }
            }
            let lhs = Multiset::parse(lhs).map_err(&err)?;
            let rhs = Multiset::parse(rhs).map_err(&err)?;
            if both {
                reactions.push(Reaction {
                    lhs: rhs.clone(),
                    rhs: lhs.clone(),
                });
                reactions.insert(reactions.len() - 1, Reaction { lhs, rhs });
            } else {
                reactions.push(Reaction { lhs, rhs });
            }
        }
        ReactionSystem::new(species, reactions).map_err(|e| RxnParseError {
            line: 0,
            message: e.to_string(),
        })
    }

    pub fn species(&self) -> &[String] {
        &self.species
    }

    pub fn reactions(&self) -> &[Reaction] {
        &self.reactions
    }

    pub fn index_of(&self, species: &str) -> Option<usize> {
        self.index.get(species).copied()
    }

    /// Counts in species order; species outside the system are an error.
    pub fn counts(&self, m: &Multiset) -> Result<Vec<u64>, RxnError> {
        let mut v = vec![0u64; self.species.len()];
        for (s, n) in m.iter() {
            let i = self
                .index_of(s)
                .ok_or_else(|| RxnError::UnknownSpecies(s.to_string()))?;
            v[i] = n;
        }
        Ok(v)
    }

    pub fn vector(&self, m: &Multiset) -> Result<QVec, RxnError> {
        Ok(self
            .counts(m)?
            .into_iter()
            .map(|n| Rational::from_integer(n.into()))
            .collect())
    }

    /// Multiset with the given counts in species order.
    pub fn from_counts(&self, counts: &[u64]) -> Multiset {
        Multiset::from_pairs(
            self.species
                .iter()
                .zip(counts)
                .map(|(s, &n)| (s.clone(), n)),
        )
    }

    /// `lhs_r − rhs_r` for every reaction.
    pub fn reaction_vectors(&self) -> Vec<QVec> {
        self.vectors
            .iter()
            .map(|(l, r)| {
                l.iter()
                    .zip(r)
                    .map(|(&a, &b)| int(a as i64 - b as i64))
                    .collect()
            })
            .collect()
    }

    /// Splits a multiset into counts over the system's species and the untouched rest.
    fn split(&self, m: &Multiset) -> (Vec<u64>, Multiset) {
        let mut v = vec![0u64; self.species.len()];
        let mut inert = Multiset::new();
        for (s, n) in m.iter() {
            match self.index_of(s) {
                Some(i) => v[i] = n,
                None => inert.insert(s, n),
            }
        }
        (v, inert)
    }

    fn apply(&self, state: &[u64], r: usize) -> Option<Vec<u64>> {
        let (lhs, rhs) = &self.vectors[r];
        if state.iter().zip(lhs).any(|(s, l)| s < l) {
            return None;
        }
        Some(
            state
                .iter()
                .zip(lhs)
                .zip(rhs)
                .map(|((s, l), r)| s - l + r)
                .collect(),
        )
    }
}

/// Reaction indices, applied in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReactionPath {
    pub steps: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum ReachRefutation {
    /// Every state reachable from `x` was visited.
    Exhausted { states: usize },
    /// An additive monotone decreases from `x` to `y`.
    Separated {
        #[serde(with = "serde_qvec")]
        functional: QVec,
    },
    /// Species no reaction touches differ between `x` and `y`.
    InertMismatch { species: Vec<String> },
}

/// Decides `x ≥ y`: some sequence of reactions, each applied to a sub-multiset,
/// turns `x` into exactly `y`.
///
/// A separating monotone refutes immediately. Otherwise the search is breadth-first
/// to `budget.depth` reactions, visiting at most `budget.nodes` states with at most
/// the molecule guard per state; No means the reachable set was exhausted.
pub fn reachable_leq(
    sys: &ReactionSystem,
    x: &Multiset,
    y: &Multiset,
    budget: &Budget,
) -> TriState<ReactionPath, ReachRefutation> {
    let (start, inert_x) = sys.split(x);
    let (goal, inert_y) = sys.split(y);
    if inert_x != inert_y {
        let mut species: Vec<String> = inert_x
            .iter()
            .chain(inert_y.iter())
            .map(|(s, _)| s.to_string())
            .collect();
        species.sort();
        species.dedup();
        species.retain(|s| inert_x.count(s) != inert_y.count(s));
        return TriState::No(ReachRefutation::InertMismatch { species });
    }
    if start == goal {
        return TriState::Yes(ReactionPath { steps: Vec::new() });
    }
    let diff: QVec = start
        .iter()
        .zip(&goal)
        .map(|(&a, &b)| int(a as i64 - b as i64))
        .collect();
    if let Membership::Outside { separator } = conic_membership(&sys.reaction_vectors(), &[], &diff)
    {
        return TriState::No(ReachRefutation::Separated {
            functional: separator,
        });
    }

    let cap = crate::guard(MOLECULE_GUARD) as u64;
    let mut states: Vec<Vec<u64>> = vec![start.clone()];
    let mut parent: Vec<(usize, usize)> = vec![(usize::MAX, usize::MAX)];
    let mut seen: HashMap<Vec<u64>, usize> = HashMap::from([(start, 0)]);
    let mut frontier = vec![0usize];
    let mut truncated = false;
    for _ in 0..budget.depth {
        let mut next = Vec::new();
        for &idx in &frontier {
            for r in 0..sys.reactions.len() {
                let Some(s) = sys.apply(&states[idx], r) else {
                    continue;
                };
                if seen.contains_key(&s) {
                    continue;
                }
                if s.iter().sum::<u64>() > cap {
                    truncated = true;
                    continue;
                }
                if states.len() as u64 >= budget.nodes {
                    return TriState::Unknown;
                }
                let id = states.len();
                let done = s == goal;
                seen.insert(s.clone(), id);
                states.push(s);
                parent.push((idx, r));
                if done {
                    let mut steps = Vec::new();
                    let mut cur = id;
                    while parent[cur].0 != usize::MAX {
                        steps.push(parent[cur].1);
                        cur = parent[cur].0;
                    }
                    steps.reverse();
                    return TriState::Yes(ReactionPath { steps });
                }
                next.push(id);
            }
        }
        if next.is_empty() {
            return if truncated {
                TriState::Unknown
            } else {
                TriState::No(ReachRefutation::Exhausted {
                    states: states.len(),
                })
            };
        }
        frontier = next;
    }
    TriState::Unknown
}

/// Replays the path from `x` and checks that it ends at `y`.
pub fn verify_path(sys: &ReactionSystem, x: &Multiset, y: &Multiset, path: &ReactionPath) -> bool {
    let (mut state, inert_x) = sys.split(x);
    let (goal, inert_y) = sys.split(y);
    if inert_x != inert_y {
        return false;
    }
    for &r in &path.steps {
        if r >= sys.reactions.len() {
            return false;
        }
        match sys.apply(&state, r) {
            Some(s) => state = s,
            None => return false,
        }
    }
    state == goal
}

/// Basis of `{ f : f·lhs_r = f·rhs_r for every reaction }`, as primitive integer vectors.
pub fn conservation_laws(sys: &ReactionSystem) -> Vec<QVec> {
    nullspace(&sys.reaction_vectors(), sys.species.len())
}

/// Atom counts of every species: `matrix[s][a]` atoms of `atoms[a]` in `species[s]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomExpansion {
    pub atoms: Vec<String>,
    pub matrix: Vec<Vec<u64>>,
}

impl AtomExpansion {
    /// Reads every species name as a chemical formula.
    pub fn from_formulas(sys: &ReactionSystem) -> Result<Self, RxnError> {
        let table = sys
            .species
            .iter()
            .map(|s| Ok((s.clone(), parse_formula(s)?)))
            .collect::<Result<BTreeMap<_, _>, RxnError>>()?;
        Self::from_table(sys, &table)
    }

    pub fn from_table(
        sys: &ReactionSystem,
        table: &BTreeMap<String, AtomCounts>,
    ) -> Result<Self, RxnError> {
        let mut atoms: Vec<String> = table.values().flat_map(|c| c.keys().cloned()).collect();
        atoms.sort();
        atoms.dedup();
        let matrix = sys
            .species
            .iter()
            .map(|s| {
                let counts = table
                    .get(s)
                    .ok_or_else(|| RxnError::MissingExpansion(s.clone()))?;
                Ok(atoms
                    .iter()
                    .map(|a| counts.get(a).copied().unwrap_or(0))
                    .collect())
            })
            .collect::<Result<Vec<Vec<u64>>, RxnError>>()?;
        Ok(AtomExpansion { atoms, matrix })
    }

    /// The functional on species counting atoms of `atom`.
    pub fn atom_vector(&self, atom: &str) -> Option<QVec> {
        let a = self.atoms.iter().position(|x| x == atom)?;
        Some(self.matrix.iter().map(|row| int(row[a] as i64)).collect())
    }

    /// Pulls a functional on atoms back to species.
    pub fn pull_back(&self, g: &[Rational]) -> QVec {
        self.matrix
            .iter()
            .map(|row| row.iter().zip(g).map(|(&n, x)| x * int(n as i64)).sum())
            .collect()
    }
}

/// Conservation laws that are weighted atom counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtomLaws {
    pub atoms: Vec<String>,
    /// Basis of the atom weightings `g` whose pull-back is conserved.
    #[serde(with = "serde_qmat")]
    pub atom_basis: Vec<QVec>,
    /// The same basis pulled back to species.
    #[serde(with = "serde_qmat")]
    pub species_basis: Vec<QVec>,
}

/// For balanced reactions every atom count is conserved and the basis is the standard one.
pub fn atom_conservation_laws(sys: &ReactionSystem, expansion: &AtomExpansion) -> AtomLaws {
    let rows: Vec<QVec> = sys
        .reaction_vectors()
        .iter()
        .map(|d| expansion_row(expansion, d))
        .collect();
    let atom_basis = nullspace(&rows, expansion.atoms.len());
    let species_basis = atom_basis.iter().map(|g| expansion.pull_back(g)).collect();
    AtomLaws {
        atoms: expansion.atoms.clone(),
        atom_basis,
        species_basis,
    }
}

/// Net atom change of a species vector.
fn expansion_row(expansion: &AtomExpansion, d: &[Rational]) -> QVec {
    (0..expansion.atoms.len())
        .map(|a| {
            d.iter()
                .zip(&expansion.matrix)
                .map(|(x, row)| x * int(row[a] as i64))
                .sum()
        })
        .collect()
}

/// Generators of the cone of additive monotones `{ f : f·(lhs_r − rhs_r) ≥ 0 }`.
/// The lineality space is the space of conservation laws.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneCone {
    #[serde(with = "serde_qmat")]
    pub rays: Vec<QVec>,
    #[serde(with = "serde_qmat")]
    pub lineality: Vec<QVec>,
}

pub fn monotone_rays(sys: &ReactionSystem) -> Result<MonotoneCone, RxnError> {
    let d = sys.species.len();
    let guard = crate::guard(crate::cone::CONE_GUARD);
    if d > guard {
        return Err(RxnError::GuardExceeded { species: d, guard });
    }
    let g = h_to_v(d, &sys.reaction_vectors());
    Ok(MonotoneCone {
        rays: g.rays,
        lineality: g.lineality,
    })
}

/// Whether every additive monotone satisfies `f(x) ≥ f(y)`, i.e. `x − y` lies in the
/// conic hull of the reaction vectors.
///
/// This is the order induced by all functionals. It coincides with the
/// seed-regularized order only when the system has a generating pair, which is not
/// checked here; without one it may be strictly coarser.
///
/// `Inside` carries nonnegative multiplicities per reaction; `Outside` carries a
/// monotone `f` with `f(x) < f(y)`.
pub fn functional_order_leq(
    sys: &ReactionSystem,
    x: &Multiset,
    y: &Multiset,
) -> Result<Membership, RxnError> {
    let diff: QVec = sys
        .vector(x)?
        .iter()
        .zip(sys.vector(y)?)
        .map(|(a, b)| a - b)
        .collect();
    Ok(conic_membership(&sys.reaction_vectors(), &[], &diff))
}

/// `f·(lhs_r − rhs_r) ≥ 0` for every reaction.
pub fn is_monotone(sys: &ReactionSystem, f: &[Rational]) -> bool {
    sys.reaction_vectors()
        .iter()
        .all(|d| dot(f, d) >= Rational::zero())
}

/// Multisets over a fixed reaction system.
#[derive(Debug, Clone)]
pub struct ReactionInstance {
    pub system: ReactionSystem,
}

impl MonoidInstance for ReactionInstance {
    type Elem = Multiset;
    type Witness = ReactionPath;
    type Refutation = ReachRefutation;

    fn name(&self) -> &'static str {
        "reactions"
    }

    fn zero(&self) -> Multiset {
        Multiset::new()
    }

    fn combine(&self, a: &Multiset, b: &Multiset) -> Multiset {
        a.sum(b)
    }

    fn leq(
        &self,
        x: &Multiset,
        y: &Multiset,
        budget: &Budget,
    ) -> TriState<ReactionPath, ReachRefutation> {
        reachable_leq(&self.system, x, y, budget)
    }

    fn verify(&self, x: &Multiset, y: &Multiset, w: &ReactionPath) -> bool {
        verify_path(&self.system, x, y, w)
    }

    fn combine_witness(
        &self,
        pair1: (&Multiset, &Multiset, &ReactionPath),
        pair2: (&Multiset, &Multiset, &ReactionPath),
    ) -> ReactionPath {
        // The first path never touches the second summand, so the two run back to back.
        let mut steps = pair1.2.steps.clone();
        steps.extend_from_slice(&pair2.2.steps);
        ReactionPath { steps }
    }

    fn is_complete(&self) -> bool {
        false
    }
}
