//! Finite probability distributions under majorization, with Rényi entropies.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::monoid::{Budget, Functional, MonoidInstance, TriState};
use crate::rational::{display_rational, parse_rational, serde_qvec, to_f64, QVec, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DistributionError {
    #[error("distribution has no entries")]
    Empty,
    #[error("entry {0} is outside [0, 1]")]
    OutOfRange(usize),
    #[error("entries sum to {0}, expected 1")]
    BadSum(String),
}

/// A probability vector stored sorted nonincreasing; zero entries are kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution", into = "RawDistribution")]
pub struct FiniteDistribution {
    probs: QVec,
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct RawDistribution(#[serde(with = "serde_qvec")] QVec);

impl TryFrom<RawDistribution> for FiniteDistribution {
    type Error = DistributionError;
    fn try_from(r: RawDistribution) -> Result<Self, Self::Error> {
        FiniteDistribution::new(r.0)
    }
}

impl From<FiniteDistribution> for RawDistribution {
    fn from(d: FiniteDistribution) -> Self {
        RawDistribution(d.probs)
    }
}

impl FiniteDistribution {
    pub fn new(mut probs: QVec) -> Result<Self, DistributionError> {
        if probs.is_empty() {
            return Err(DistributionError::Empty);
        }
        if let Some(i) = probs
            .iter()
            .position(|p| *p < Rational::zero() || *p > Rational::one())
        {
            return Err(DistributionError::OutOfRange(i));
        }
        let sum: Rational = probs.iter().sum();
        if !sum.is_one() {
            return Err(DistributionError::BadSum(display_rational(&sum)));
        }
        probs.sort_by(|a, b| b.cmp(a));
        Ok(FiniteDistribution { probs })
    }

    pub fn parse(entries: &[&str]) -> Result<Self, String> {
        let v: Result<QVec, _> = entries.iter().map(|s| parse_rational(s)).collect();
        let v = v.map_err(|e| e.to_string())?;
        Self::new(v).map_err(|e| e.to_string())
    }

    pub fn point_mass() -> Self {
        FiniteDistribution {
            probs: vec![Rational::one()],
        }
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0);
        let p = Rational::new(1.into(), (n as i64).into());
        FiniteDistribution { probs: vec![p; n] }
    }

    pub fn probs(&self) -> &[Rational] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn support_size(&self) -> usize {
        self.probs.iter().filter(|p| !p.is_zero()).count()
    }

    pub fn is_point_mass(&self) -> bool {
        self.probs[0].is_one()
    }

    /// Drops zero entries; majorization and entropies ignore them.
    pub fn trimmed(&self) -> Self {
        let probs: QVec = self
            .probs
            .iter()
            .filter(|p| !p.is_zero())
            .cloned()
            .collect();
        FiniteDistribution { probs }
    }
}

impl fmt::Display for FiniteDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.probs.iter().map(display_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// First prefix length `k` at which `p` fails to dominate `q`, if any.
pub fn majorization_failure(p: &FiniteDistribution, q: &FiniteDistribution) -> Option<usize> {
    let n = p.len().max(q.len());
    let zero = Rational::zero();
    let (mut sp, mut sq) = (Rational::zero(), Rational::zero());
    for k in 0..n {
        sp += p.probs.get(k).unwrap_or(&zero);
        sq += q.probs.get(k).unwrap_or(&zero);
        if sp < sq {
            return Some(k + 1);
        }
    }
    None
}

/// Whether `p` majorizes `q`: every prefix sum of `p` dominates that of `q`.
pub fn major_leq(p: &FiniteDistribution, q: &FiniteDistribution) -> bool {
    majorization_failure(p, q).is_none()
}

pub fn product(p: &FiniteDistribution, q: &FiniteDistribution) -> FiniteDistribution {
    let mut probs = Vec::with_capacity(p.len() * q.len());
    for a in &p.probs {
        for b in &q.probs {
            probs.push(a * b);
        }
    }
    probs.sort_by(|a, b| b.cmp(a));
    FiniteDistribution { probs }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RenyiOrder {
    Finite(f64),
    Infinity,
}

impl RenyiOrder {
    pub fn parse(s: &str) -> Result<Self, String> {
        let t = s.trim();
        if matches!(t, "inf" | "infinity" | "∞") {
            return Ok(RenyiOrder::Infinity);
        }
        if t == "one" {
            return Ok(RenyiOrder::Finite(1.0));
        }
        let r = parse_rational(t).map_err(|e| e.to_string())?;
        if r < Rational::zero() {
            return Err(format!("order {t} is negative"));
        }
        Ok(RenyiOrder::Finite(to_f64(&r)))
    }
}

impl fmt::Display for RenyiOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RenyiOrder::Finite(t) => write!(f, "{t}"),
            RenyiOrder::Infinity => write!(f, "inf"),
        }
    }
}

/// Rényi entropy `H_t` in bits. `t = 0` counts the support, `t = 1` is Shannon entropy.
pub fn renyi(p: &FiniteDistribution, t: RenyiOrder) -> f64 {
    let ps: Vec<f64> = p
        .probs
        .iter()
        .filter(|x| !x.is_zero())
        .map(to_f64)
        .collect();
    let max = ps[0];
    match t {
        RenyiOrder::Infinity => -max.log2(),
        RenyiOrder::Finite(0.0) => (ps.len() as f64).log2(),
        RenyiOrder::Finite(1.0) => -ps.iter().map(|x| x * x.log2()).sum::<f64>(),
        RenyiOrder::Finite(t) => {
            // log2 Σ p^t, evaluated relative to the largest entry to avoid underflow.
            let rel: f64 = ps.iter().map(|x| (x / max).powf(t)).sum();
            let log_sum = t * max.log2() + rel.log2();
            log_sum / (1.0 - t)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenyiRateBound {
    /// `inf_t H_t(P)/H_t(Q)`; `None` stands for `+∞` (Q a point mass).
    pub value: Option<f64>,
    pub argmin: Option<RenyiOrder>,
    pub grid_points: usize,
    /// Log-spaced grid range and refinement tolerance used.
    pub grid: String,
    pub tol: f64,
}

/// Numerical infimum of `H_t(P)/H_t(Q)` over `t ∈ [0, ∞]`.
///
/// Scans `resolution` log-spaced orders in `[2^-10, 2^10]` plus `0`, `1` and `∞`,
/// then refines around the best grid cell by golden-section search.
pub fn rate_upper_renyi(
    p: &FiniteDistribution,
    q: &FiniteDistribution,
    resolution: usize,
) -> RenyiRateBound {
    let tol = 1e-9;
    let grid = format!(
        "{resolution} log-spaced points on [2^-10, 2^10] plus 0, 1, inf; golden-section refinement"
    );
    if q.is_point_mass() {
        return RenyiRateBound {
            value: None,
            argmin: None,
            grid_points: 0,
            grid,
            tol,
        };
    }
    let ratio = |t: RenyiOrder| renyi(p, t) / renyi(q, t);
    let resolution = resolution.max(2);
    let ts: Vec<f64> = (0..resolution)
        .map(|i| (-10.0 + 20.0 * i as f64 / (resolution - 1) as f64).exp2())
        .collect();
    let mut best = (f64::INFINITY, RenyiOrder::Infinity);
    let mut best_idx = None;
    for (i, &t) in ts.iter().enumerate() {
        let v = ratio(RenyiOrder::Finite(t));
        if v < best.0 {
            best = (v, RenyiOrder::Finite(t));
            best_idx = Some(i);
        }
    }
    for t in [
        RenyiOrder::Finite(0.0),
        RenyiOrder::Finite(1.0),
        RenyiOrder::Infinity,
    ] {
        let v = ratio(t);
        if v < best.0 {
            best = (v, t);
            best_idx = None;
        }
    }
    if let Some(i) = best_idx {
        let lo = ts[i.saturating_sub(1)].log2();
        let hi = ts[(i + 1).min(ts.len() - 1)].log2();
        let f = |s: f64| ratio(RenyiOrder::Finite(s.exp2()));
        let (s, v) = golden_section(f, lo, hi, tol);
        if v < best.0 {
            best = (v, RenyiOrder::Finite(s.exp2()));
        }
    }
    RenyiRateBound {
        value: Some(best.0),
        argmin: Some(best.1),
        grid_points: resolution + 3,
        grid,
        tol,
    }
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - phi * (b - a);
    let mut d = a + phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = f(d);
        }
    }
    let m = (a + b) / 2.0;
    (m, f(m))
}

/// Which direction of majorization counts as convertibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorOrder {
    /// `x ≥ y` iff `x` majorizes `y`; the point mass is the top element.
    Majorizes,
    /// `x ≥ y` iff `y` majorizes `x`; Rényi entropies are monotones.
    MajorizedBy,
}

#[derive(Debug, Clone, Copy)]
pub struct MajorInstance {
    pub order: MajorOrder,
}

impl MajorInstance {
    pub fn new(order: MajorOrder) -> Self {
        MajorInstance { order }
    }

    /// The pair `(g+, g-)` that generates under this orientation.
    pub fn generating_pair(&self) -> (FiniteDistribution, FiniteDistribution) {
        match self.order {
            MajorOrder::Majorizes => (
                FiniteDistribution::point_mass(),
                FiniteDistribution::uniform(2),
            ),
            MajorOrder::MajorizedBy => (
                FiniteDistribution::uniform(2),
                FiniteDistribution::point_mass(),
            ),
        }
    }
}

/// Prefix length at which the required domination fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixFailure {
    pub k: usize,
}

impl MonoidInstance for MajorInstance {
    type Elem = FiniteDistribution;
    type Witness = ();
    type Refutation = PrefixFailure;

    fn name(&self) -> &'static str {
        "major"
    }

    fn zero(&self) -> FiniteDistribution {
        FiniteDistribution::point_mass()
    }

    fn combine(&self, a: &FiniteDistribution, b: &FiniteDistribution) -> FiniteDistribution {
        product(a, b)
    }

    fn canonical(&self, x: &FiniteDistribution) -> FiniteDistribution {
        x.trimmed()
    }

    fn leq(
        &self,
        x: &FiniteDistribution,
        y: &FiniteDistribution,
        _: &Budget,
    ) -> TriState<(), PrefixFailure> {
        let fail = match self.order {
            MajorOrder::Majorizes => majorization_failure(x, y),
            MajorOrder::MajorizedBy => majorization_failure(y, x),
        };
        match fail {
            None => TriState::Yes(()),
            Some(k) => TriState::No(PrefixFailure { k }),
        }
    }

    fn verify(&self, x: &FiniteDistribution, y: &FiniteDistribution, _: &()) -> bool {
        match self.order {
            MajorOrder::Majorizes => major_leq(x, y),
            MajorOrder::MajorizedBy => major_leq(y, x),
        }
    }

    fn combine_witness(
        &self,
        _: (&FiniteDistribution, &FiniteDistribution, &()),
        _: (&FiniteDistribution, &FiniteDistribution, &()),
    ) {
    }

    fn is_complete(&self) -> bool {
        true
    }
}

/// `H_t` as a functional on distributions.
pub struct RenyiFunctional(pub RenyiOrder);

impl Functional<FiniteDistribution> for RenyiFunctional {
    fn name(&self) -> String {
        format!("H_{}", self.0)
    }

    fn eval(&self, x: &FiniteDistribution) -> f64 {
        renyi(x, self.0)
    }
}
