//! The ordered commutative monoid contract and the derived computations that
//! work for every instance: powers, annihilators, two-dimensional slices,
//! rate bounds, and catalytic, many-copy and seed-regularized searches.

use std::fmt::Debug;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::rational::{ratio, ExtValue, Rational};

/// Outcome of a budgeted decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "evidence", rename_all = "snake_case")]
pub enum TriState<W, R> {
    Yes(W),
    No(R),
    Unknown,
}

impl<W, R> TriState<W, R> {
    pub fn is_yes(&self) -> bool {
        matches!(self, TriState::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, TriState::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, TriState::Unknown)
    }

    pub fn yes(self) -> Option<W> {
        match self {
            TriState::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn map_yes<V>(self, f: impl FnOnce(W) -> V) -> TriState<V, R> {
        match self {
            TriState::Yes(w) => TriState::Yes(f(w)),
            TriState::No(r) => TriState::No(r),
            TriState::Unknown => TriState::Unknown,
        }
    }

    pub fn map_no<S>(self, f: impl FnOnce(R) -> S) -> TriState<W, S> {
        match self {
            TriState::Yes(w) => TriState::Yes(w),
            TriState::No(r) => TriState::No(f(r)),
            TriState::Unknown => TriState::Unknown,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TriState::Yes(_) => "yes",
            TriState::No(_) => "no",
            TriState::Unknown => "unknown",
        }
    }
}

/// Search limits. Searches are deterministic for a fixed budget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    /// Search nodes allowed per individual decision.
    pub nodes: u64,
    /// Depth limit for sequence searches such as reaction reachability.
    pub depth: u32,
    /// Advisory only; never consulted by the deterministic searches.
    pub time_hint_ms: u64,
    /// Worker threads for independent subqueries; 1 means sequential.
    pub jobs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            nodes: 20_000_000,
            depth: 64,
            time_hint_ms: 0,
            jobs: 1,
        }
    }
}

impl Budget {
    pub fn with_nodes(nodes: u64) -> Self {
        Budget {
            nodes,
            ..Budget::default()
        }
    }
}

/// An ordered commutative monoid presented by a (possibly partial) decision procedure.
///
/// `leq(x, y, budget)` answers whether `x ≥ y`, i.e. whether `x` can be converted into `y`.
pub trait MonoidInstance: Sync {
    type Elem: Clone + PartialEq + Debug + Send + Sync;
    type Witness: Clone + Debug + Send + Sync;
    type Refutation: Clone + Debug + Send + Sync;

    fn name(&self) -> &'static str;

    fn zero(&self) -> Self::Elem;

    fn combine(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    /// Representative used for structural equality.
    fn canonical(&self, x: &Self::Elem) -> Self::Elem {
        x.clone()
    }

    /// Decides `x ≥ y`.
    fn leq(
        &self,
        x: &Self::Elem,
        y: &Self::Elem,
        budget: &Budget,
    ) -> TriState<Self::Witness, Self::Refutation>;

    /// Independent check of a witness for `x ≥ y`.
    fn verify(&self, x: &Self::Elem, y: &Self::Elem, w: &Self::Witness) -> bool;

    /// Witness for `x1 + x2 ≥ y1 + y2` from witnesses of the two summands.
    fn combine_witness(
        &self,
        pair1: (&Self::Elem, &Self::Elem, &Self::Witness),
        pair2: (&Self::Elem, &Self::Elem, &Self::Witness),
    ) -> Self::Witness;

    /// True when a large enough budget always settles `leq` with Yes or No.
    fn is_complete(&self) -> bool;
}

/// `n·x`, computed by repeated combination; `nfold(x, 0)` is zero.
pub fn nfold<I: MonoidInstance>(inst: &I, x: &I::Elem, n: u32) -> I::Elem {
    if n == 0 {
        return inst.zero();
    }
    let mut acc = x.clone();
    for _ in 1..n {
        acc = inst.combine(&acc, x);
    }
    inst.canonical(&acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annihilator {
    pub bound: u32,
    pub members: Vec<u32>,
    pub unknown: Vec<u32>,
}

/// `{ n ≤ bound : n·x ≥ n·y }`, with undecided `n` listed separately.
pub fn annihilator<I: MonoidInstance>(
    inst: &I,
    x: &I::Elem,
    y: &I::Elem,
    bound: u32,
    budget: &Budget,
) -> Annihilator {
    let decide = |n: u32| -> TriState<(), ()> {
        if n == 0 {
            return TriState::Yes(());
        }
        let xn = nfold(inst, x, n);
        let yn = nfold(inst, y, n);
        inst.leq(&xn, &yn, budget).map_yes(|_| ()).map_no(|_| ())
    };
    let results: Vec<TriState<(), ()>> = run_indexed((0..=bound).collect(), budget.jobs, decide);
    let mut out = Annihilator {
        bound,
        members: Vec::new(),
        unknown: Vec::new(),
    };
    for (n, r) in (0..=bound).zip(results) {
        match r {
            TriState::Yes(_) => out.members.push(n),
            TriState::Unknown => out.unknown.push(n),
            TriState::No(_) => {}
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct SlicePoint<W> {
    pub n: u32,
    pub m: u32,
    pub witness: W,
}

/// Witnessed pairs `(n, m)` with `n·x ≥ m·y` inside the box `[0, nmax] × [0, mmax]`.
#[derive(Debug, Clone)]
pub struct Slice<W> {
    pub nmax: u32,
    pub mmax: u32,
    pub points: Vec<SlicePoint<W>>,
    pub unknown: Vec<(u32, u32)>,
}

impl<W> Slice<W> {
    pub fn contains(&self, n: u32, m: u32) -> bool {
        self.points.iter().any(|p| p.n == n && p.m == m)
    }

    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.points.iter().map(|p| (p.n, p.m)).collect()
    }

    /// Largest witnessed slope `m/n` with `n > 0`, and the point attaining it
    /// (least `n`, then largest `m` on ties).
    pub fn best_slope(&self) -> Option<(Rational, (u32, u32))> {
        let mut best: Option<(Rational, (u32, u32))> = None;
        for p in self.points.iter().filter(|p| p.n > 0) {
            let s = ratio(p.m as i64, p.n as i64);
            if best.as_ref().is_none_or(|(b, _)| s > *b) {
                best = Some((s, (p.n, p.m)));
            }
        }
        best
    }
}

pub fn slice<I: MonoidInstance>(
    inst: &I,
    x: &I::Elem,
    y: &I::Elem,
    nmax: u32,
    mmax: u32,
    budget: &Budget,
) -> Slice<I::Witness> {
    let xs: Vec<I::Elem> = (0..=nmax).map(|n| nfold(inst, x, n)).collect();
    let ys: Vec<I::Elem> = (0..=mmax).map(|m| nfold(inst, y, m)).collect();
    let cells: Vec<(u32, u32)> = (0..=nmax)
        .flat_map(|n| (0..=mmax).map(move |m| (n, m)))
        .collect();
    let results = run_indexed(cells.clone(), budget.jobs, |(n, m)| {
        inst.leq(&xs[n as usize], &ys[m as usize], budget)
    });
    let mut out = Slice {
        nmax,
        mmax,
        points: Vec::new(),
        unknown: Vec::new(),
    };
    for ((n, m), r) in cells.into_iter().zip(results) {
        match r {
            TriState::Yes(witness) => out.points.push(SlicePoint { n, m, witness }),
            TriState::Unknown => out.unknown.push((n, m)),
            TriState::No(_) => {}
        }
    }
    out
}

/// Evaluates `f` on every item, in parallel when `jobs > 1`, returning results in input order.
pub(crate) fn run_indexed<T, R, F>(items: Vec<T>, jobs: usize, f: F) -> Vec<R>
where
    T: Send + Sync,
    R: Send,
    F: Fn(T) -> R + Send + Sync,
{
    if jobs <= 1 {
        return items.into_iter().map(f).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| items.into_par_iter().map(&f).collect()),
        Err(_) => items.into_iter().map(f).collect(),
    }
}

/// A real-valued additive monotone used for upper rate bounds.
pub trait Functional<E>: Sync {
    fn name(&self) -> String;
    fn eval(&self, x: &E) -> f64;
}

impl<E, F: Fn(&E) -> f64 + Sync> Functional<E> for (&str, F) {
    fn name(&self) -> String {
        self.0.to_string()
    }
    fn eval(&self, x: &E) -> f64 {
        (self.1)(x)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateInterval {
    pub lower: ExtValue,
    pub upper: ExtValue,
    /// Slice point `(n, m)` attaining the lower bound.
    pub lower_witness: Option<(u32, u32)>,
    pub upper_source: Option<String>,
}

impl RateInterval {
    pub fn is_consistent(&self) -> bool {
        self.lower.to_f64() <= self.upper.to_f64() + 1e-9
    }
}

/// Bounds on the maximal rate of converting `x` into `y`.
///
/// For each `n ≤ nmax` the largest `m` with a witnessed `n·x ≥ m·y` is searched
/// downward from `⌊n·upper⌋` (or from `mmax`/`8n` when no functional bounds it).
pub fn rate_bounds<I: MonoidInstance>(
    inst: &I,
    x: &I::Elem,
    y: &I::Elem,
    nmax: u32,
    mmax: Option<u32>,
    functionals: &[&dyn Functional<I::Elem>],
    budget: &Budget,
) -> RateInterval {
    let mut upper = f64::INFINITY;
    let mut upper_source = None;
    for f in functionals {
        let fy = f.eval(y);
        if fy > 0.0 {
            let r = (f.eval(x) / fy).max(0.0);
            if r < upper {
                upper = r;
                upper_source = Some(format!("{}(x)/{}(y)", f.name(), f.name()));
            }
        }
    }
    let mut best: Option<(Rational, (u32, u32))> = None;
    for n in 1..=nmax {
        let mut cap = mmax.unwrap_or(8 * n);
        if upper.is_finite() {
            cap = cap.min((n as f64 * upper + 1e-9).floor() as u32);
        }
        let xn = nfold(inst, x, n);
        for m in (1..=cap).rev() {
            if let Some((b, _)) = &best {
                if ratio(m as i64, n as i64) <= *b {
                    break;
                }
            }
            let ym = nfold(inst, y, m);
            if inst.leq(&xn, &ym, budget).is_yes() {
                best = Some((ratio(m as i64, n as i64), (n, m)));
                break;
            }
        }
    }
    let (lower, lower_witness) = match best {
        Some((r, p)) => (ExtValue::Exact(r), Some(p)),
        None => (ExtValue::Exact(Rational::zero()), None),
    };
    let upper = if upper.is_finite() {
        ExtValue::Approx(upper)
    } else {
        ExtValue::Infinite
    };
    RateInterval {
        lower,
        upper,
        lower_witness,
        upper_source,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalysis<E, W> {
    pub catalyst: E,
    pub witness: W,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelativeRefutation {
    /// Refuted for every candidate examined; other candidates may still succeed.
    RelativeToCandidates,
    /// Refuted for every copy count up to the search bound.
    RelativeToBound,
}

/// `x + z ≥ y + z` for some candidate catalyst `z` (zero is always tried first).
pub fn catalytic_leq<I: MonoidInstance>(
    inst: &I,
    x: &I::Elem,
    y: &I::Elem,
    candidates: &[I::Elem],
    budget: &Budget,
) -> TriState<Catalysis<I::Elem, I::Witness>, RelativeRefutation> {
    let direct = inst.leq(x, y, budget);
    let mut all_no = direct.is_no();
    if let TriState::Yes(witness) = direct {
        return TriState::Yes(Catalysis {
            catalyst: inst.zero(),
            witness,
        });
    }
    for z in candidates {
        let xz = inst.combine(x, z);
        let yz = inst.combine(y, z);
        match inst.leq(&xz, &yz, budget) {
            TriState::Yes(witness) => {
                return TriState::Yes(Catalysis {
                    catalyst: z.clone(),
                    witness,
                })
            }
            TriState::No(_) => {}
            TriState::Unknown => all_no = false,
        }
    }
    if all_no {
        TriState::No(RelativeRefutation::RelativeToCandidates)
    } else {
        TriState::Unknown
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopyWitness<W> {
    pub copies: u32,
    pub witness: W,
}

/// Least `n ≤ nmax` with `n·x ≥ n·y`.
pub fn manycopy_leq<I: MonoidInstance>(
    inst: &I,
    x: &I::Elem,
    y: &I::Elem,
    nmax: u32,
    budget: &Budget,
) -> TriState<CopyWitness<I::Witness>, RelativeRefutation> {
    let mut all_no = true;
    for n in 1..=nmax {
        match inst.leq(&nfold(inst, x, n), &nfold(inst, y, n), budget) {
            TriState::Yes(witness) => return TriState::Yes(CopyWitness { copies: n, witness }),
            TriState::No(_) => {}
            TriState::Unknown => all_no = false,
        }
    }
    if all_no {
        TriState::No(RelativeRefutation::RelativeToBound)
    } else {
        TriState::Unknown
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedWitness<W> {
    pub n: u32,
    pub k: u32,
    pub witness: W,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RegularizeError {
    #[error("g+ ≥ g- could not be established ({0})")]
    SeedOrder(&'static str),
    #[error("eps must be positive")]
    NonPositiveEps,
}

/// Searches `n·x + k·g+ ≥ n·y + k·g-` with `k ≤ eps·n`, ordered by `n` then `k` ascending.
#[allow(clippy::too_many_arguments)]
pub fn regularized_leq_witness<I: MonoidInstance>(
    inst: &I,
    x: &I::Elem,
    y: &I::Elem,
    gplus: &I::Elem,
    gminus: &I::Elem,
    eps: &Rational,
    nmax: u32,
    budget: &Budget,
) -> Result<TriState<SeedWitness<I::Witness>, RelativeRefutation>, RegularizeError> {
    if *eps <= Rational::zero() {
        return Err(RegularizeError::NonPositiveEps);
    }
    match inst.leq(gplus, gminus, budget) {
        TriState::Yes(_) => {}
        TriState::No(_) => return Err(RegularizeError::SeedOrder("refuted")),
        TriState::Unknown => return Err(RegularizeError::SeedOrder("undecided within budget")),
    }
    let mut all_no = true;
    for n in 1..=nmax {
        let kmax = (eps * Rational::from_integer(n.into()))
            .floor()
            .to_integer();
        let kmax: u32 = kmax.try_into().unwrap_or(u32::MAX);
        let xn = nfold(inst, x, n);
        let yn = nfold(inst, y, n);
        for k in 0..=kmax {
            let lhs = inst.combine(&xn, &nfold(inst, gplus, k));
            let rhs = inst.combine(&yn, &nfold(inst, gminus, k));
            match inst.leq(&lhs, &rhs, budget) {
                TriState::Yes(witness) => return Ok(TriState::Yes(SeedWitness { n, k, witness })),
                TriState::No(_) => {}
                TriState::Unknown => all_no = false,
            }
        }
    }
    Ok(if all_no {
        TriState::No(RelativeRefutation::RelativeToBound)
    } else {
        TriState::Unknown
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SampleResult {
    /// Least `n` satisfying both absorption conditions.
    Covered {
        n: u32,
    },
    /// Every `n ≤ nmax` was refuted.
    Refuted,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum PairVerdict {
    VerifiedOnSamples,
    RefutedOnSample { index: usize },
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratingPairReport {
    pub samples: Vec<SampleResult>,
    pub verdict: PairVerdict,
}

/// For each sample `x`, the least `n ≤ nmax` with `n·g+ ≥ x + n·g-` and `n·g+ + x ≥ n·g-`.
pub fn generating_pair_check<I: MonoidInstance>(
    inst: &I,
    gplus: &I::Elem,
    gminus: &I::Elem,
    samples: &[I::Elem],
    nmax: u32,
    budget: &Budget,
) -> GeneratingPairReport {
    let results: Vec<SampleResult> = samples
        .iter()
        .map(|x| {
            let mut all_no = true;
            for n in 0..=nmax {
                let gp = nfold(inst, gplus, n);
                let gm = nfold(inst, gminus, n);
                let a = inst.leq(&gp, &inst.combine(x, &gm), budget);
                if a.is_yes() {
                    let b = inst.leq(&inst.combine(&gp, x), &gm, budget);
                    match b {
                        TriState::Yes(_) => return SampleResult::Covered { n },
                        TriState::Unknown => all_no = false,
                        TriState::No(_) => {}
                    }
                } else if a.is_unknown() {
                    all_no = false;
                }
            }
            if all_no {
                SampleResult::Refuted
            } else {
                SampleResult::Unknown
            }
        })
        .collect();
    let verdict = if let Some(i) = results.iter().position(|r| *r == SampleResult::Refuted) {
        PairVerdict::RefutedOnSample { index: i }
    } else if results
        .iter()
        .all(|r| matches!(r, SampleResult::Covered { .. }))
    {
        PairVerdict::VerifiedOnSamples
    } else {
        PairVerdict::Inconclusive
    };
    GeneratingPairReport {
        samples: results,
        verdict,
    }
}
