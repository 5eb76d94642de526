//! Communication channels as row-stochastic rational matrices, their parallel
//! combination, exact conversion by encoder and decoder, and the map to graphs
//! given by distinguishability.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graphs::hom::hom_search;
use crate::graphs::{Graph, GraphHom, HomRefutation};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::monoid::{run_indexed, Budget, MonoidInstance, TriState};
use crate::rational::{format_rational, parse_rational, ratio, QVec, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ChannelError {
    #[error("alphabets must be nonempty")]
    EmptyAlphabet,
    #[error("matrix has {found} rows, expected {expected}")]
    RowCount { expected: usize, found: usize },
    #[error("row {row} has {found} entries, expected {expected}")]
    RowLength {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row}, {col}) = {value} is not a probability")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("row {row} sums to {sum}, not 1")]
    RowSum { row: usize, sum: String },
    #[error("{what}: expected alphabet size {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("entry ({row}, {col}): {message}")]
    BadEntry {
        row: usize,
        col: usize,
        message: String,
    },
    #[error("the encoder and decoder do not convert the first channel into the second")]
    NotAConversion,
}

/// `P(b|a)` stored as `matrix[a][b]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ChannelDocument", into = "ChannelDocument")]
pub struct StochasticChannel {
    inputs: usize,
    outputs: usize,
    matrix: Vec<QVec>,
}

/// On-disk shape: declared alphabet sizes and a row-major matrix of `"p/q"` strings.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDocument {
    pub inputs: usize,
    pub outputs: usize,
    pub matrix: Vec<Vec<String>>,
}

impl TryFrom<ChannelDocument> for StochasticChannel {
    type Error = ChannelError;

    fn try_from(doc: ChannelDocument) -> Result<Self, ChannelError> {
        let mut matrix = Vec::with_capacity(doc.matrix.len());
        for (row, entries) in doc.matrix.iter().enumerate() {
            let parsed = entries
                .iter()
                .enumerate()
                .map(|(col, s)| {
                    parse_rational(s).map_err(|e| ChannelError::BadEntry {
                        row,
                        col,
                        message: e.to_string(),
                    })
                })
                .collect::<Result<QVec, _>>()?;
            matrix.push(parsed);
        }
        StochasticChannel::new(doc.inputs, doc.outputs, matrix)
    }
}

impl From<StochasticChannel> for ChannelDocument {
    fn from(c: StochasticChannel) -> Self {
        ChannelDocument {
            inputs: c.inputs,
            outputs: c.outputs,
            matrix: c
                .matrix
                .iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect(),
        }
    }
}

impl StochasticChannel {
    pub fn new(inputs: usize, outputs: usize, matrix: Vec<QVec>) -> Result<Self, ChannelError> {
        if inputs == 0 || outputs == 0 {
            return Err(ChannelError::EmptyAlphabet);
        }
        if matrix.len() != inputs {
            return Err(ChannelError::RowCount {
                expected: inputs,
                found: matrix.len(),
            });
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != outputs {
                return Err(ChannelError::RowLength {
                    row,
                    expected: outputs,
                    found: r.len(),
                });
            }
            for (col, v) in r.iter().enumerate() {
                if *v < Rational::zero() || *v > Rational::one() {
                    return Err(ChannelError::EntryOutOfRange {
                        row,
                        col,
                        value: format_rational(v),
                    });
                }
            }
            let sum: Rational = r.iter().sum();
            if !sum.is_one() {
                return Err(ChannelError::RowSum {
                    row,
                    sum: format_rational(&sum),
                });
            }
        }
        Ok(StochasticChannel {
            inputs,
            outputs,
            matrix,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::deterministic(&(0..n).collect::<Vec<_>>(), n)
    }

    /// The neutral element: one input, one output.
    pub fn trivial() -> Self {
        Self::identity(1)
    }

    /// Input `a` is sent to output `map[a]` with certainty.
    pub fn deterministic(map: &[usize], outputs: usize) -> Self {
        let matrix = map
            .iter()
            .map(|&b| {
                (0..outputs)
                    .map(|j| {
                        if j == b {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        StochasticChannel::new(map.len(), outputs, matrix).expect("deterministic map within range")
    }

    /// Every input produces the uniform distribution on the outputs.
    pub fn uniform(inputs: usize, outputs: usize) -> Self {
        let row = vec![ratio(1, outputs as i64); outputs];
        StochasticChannel::new(inputs, outputs, vec![row; inputs])
            .expect("uniform rows are stochastic")
    }

    /// Binary symmetric channel with flip probability `p`.
    pub fn binary_symmetric(p: &Rational) -> Result<Self, ChannelError> {
        let q = Rational::one() - p;
        StochasticChannel::new(2, 2, vec![vec![q.clone(), p.clone()], vec![p.clone(), q]])
    }

    /// Input `a` yields `a` or `a + 1 mod n`, each with probability 1/2.
    pub fn typewriter(n: usize) -> Self {
        let half = ratio(1, 2);
        let matrix = (0..n)
            .map(|a| {
                let mut row = vec![Rational::zero(); n];
                row[a] += &half;
                row[(a + 1) % n] += &half;
                row
            })
            .collect();
        StochasticChannel::new(n, n, matrix).expect("typewriter rows are stochastic")
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn prob(&self, b: usize, a: usize) -> &Rational {
        &self.matrix[a][b]
    }

    pub fn rows(&self) -> &[QVec] {
        &self.matrix
    }
}

/// Parallel use: input `(a, c)` has index `a·|Q_in| + c`, output `(b, d)` has index `b·|Q_out| + d`.
pub fn tensor(p: &StochasticChannel, q: &StochasticChannel) -> StochasticChannel {
    let mut matrix = Vec::with_capacity(p.inputs * q.inputs);
    for pa in &p.matrix {
        for qc in &q.matrix {
            matrix.push(
                pa.iter()
                    .flat_map(|x| qc.iter().map(move |y| x * y))
                    .collect(),
            );
        }
    }
    StochasticChannel {
        inputs: p.inputs * q.inputs,
        outputs: p.outputs * q.outputs,
        matrix,
    }
}

/// `a ∘ b`: first `b`, then `a`.
pub fn compose(
    a: &StochasticChannel,
    b: &StochasticChannel,
) -> Result<StochasticChannel, ChannelError> {
    if b.outputs != a.inputs {
        return Err(ChannelError::DimensionMismatch {
            what: "compose",
            expected: a.inputs,
            found: b.outputs,
        });
    }
    let matrix = b
        .matrix
        .iter()
        .map(|row| {
            (0..a.outputs)
                .map(|d| row.iter().zip(&a.matrix).map(|(x, ar)| x * &ar[d]).sum())
                .collect()
        })
        .collect();
    Ok(StochasticChannel {
        inputs: b.inputs,
        outputs: a.outputs,
        matrix,
    })
}

fn check_witness_shapes(
    p: &StochasticChannel,
    q: &StochasticChannel,
    enc: &StochasticChannel,
    dec: &StochasticChannel,
) -> Result<(), ChannelError> {
    let checks = [
        ("encoder inputs", q.inputs, enc.inputs),
        ("encoder outputs", p.inputs, enc.outputs),
        ("decoder inputs", p.outputs, dec.inputs),
        ("decoder outputs", q.outputs, dec.outputs),
    ];
    for (what, expected, found) in checks {
        if expected != found {
            return Err(ChannelError::DimensionMismatch {
                what,
                expected,
                found,
            });
        }
    }
    Ok(())
}

/// Exact check of `q = dec ∘ p ∘ enc`.
pub fn verify_conversion(
    p: &StochasticChannel,
    q: &StochasticChannel,
    enc: &StochasticChannel,
    dec: &StochasticChannel,
) -> Result<bool, ChannelError> {
    check_witness_shapes(p, q, enc, dec)?;
    let simulated = compose(dec, &compose(p, enc)?)?;
    Ok(simulated == *q)
}

/// Inputs are adjacent when their output distributions have disjoint supports.
pub fn distinguishability_graph(p: &StochasticChannel) -> Graph {
    let mut edges = Vec::new();
    for a1 in 0..p.inputs {
        for a2 in a1 + 1..p.inputs {
            let disjoint = p.matrix[a1]
                .iter()
                .zip(&p.matrix[a2])
                .all(|(x, y)| x.is_zero() || y.is_zero());
            if disjoint {
                edges.push((a1, a2));
            }
        }
    }
    Graph::from_edges(p.inputs, &edges).expect("edges within range")
}

/// The homomorphism `f(q) → f(p)` sending `c` to the least `a` with `enc(a|c) > 0`.
pub fn induced_hom(
    p: &StochasticChannel,
    q: &StochasticChannel,
    enc: &StochasticChannel,
    dec: &StochasticChannel,
) -> Result<GraphHom, ChannelError> {
    if !verify_conversion(p, q, enc, dec)? {
        return Err(ChannelError::NotAConversion);
    }
    let map = enc
        .matrix
        .iter()
        .map(|row| {
            row.iter()
                .position(|x| !x.is_zero())
                .expect("stochastic rows have support")
        })
        .collect();
    let hom = GraphHom {
        source: distinguishability_graph(q),
        target: distinguishability_graph(p),
        map,
    };
    debug_assert!(hom.verify());
    Ok(hom)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConversionWitness {
    pub enc: StochasticChannel,
    pub dec: StochasticChannel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum ConversionRefutation {
    /// No graph homomorphism `f(q) → f(p)` exists, so no encoder and decoder can.
    NecessaryConditionFails { graph: HomRefutation },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
    pub jobs: usize,
    /// Node budget for the graph-level necessary condition.
    pub nodes: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            restarts: 8,
            iterations: 6,
            seed: 0,
            jobs: 1,
            nodes: Budget::default().nodes,
        }
    }
}

/// Matrix product in the row convention (`m` is `r × k`, `n` is `k × c`).
fn matmul(m: &[QVec], n: &[QVec]) -> Vec<QVec> {
    let cols = n.first().map_or(0, Vec::len);
    m.iter()
        .map(|row| {
            (0..cols)
                .map(|j| row.iter().zip(n).map(|(x, nr)| x * &nr[j]).sum())
                .collect()
        })
        .collect()
}

/// Stochastic `d` (`k × c`) minimizing `‖m·d − q‖₁`, with the optimal error.
fn best_decoder(m: &[QVec], q: &[QVec], k: usize) -> (Vec<QVec>, Rational) {
    let (rows, c) = (q.len(), q[0].len());
    let nd = k * c;
    let ns = rows * c;
    let nv = nd + 2 * ns;
    let mut obj = vec![Rational::zero(); nv];
    for v in &mut obj[nd..] {
        *v = Rational::one();
    }
    let mut lp = LinearProgram::new(nv).minimize(obj);
    for b in 0..k {
        let mut row = vec![Rational::zero(); nv];
        for d in 0..c {
            row[b * c + d] = Rational::one();
        }
        lp.add(row, Relation::Eq, Rational::one());
    }
    for (i, qrow) in q.iter().enumerate() {
        for d in 0..c {
            let mut row = vec![Rational::zero(); nv];
            for b in 0..k {
                row[b * c + d] = m[i][b].clone();
            }
            row[nd + i * c + d] = -Rational::one();
            row[nd + ns + i * c + d] = Rational::one();
            lp.add(row, Relation::Eq, qrow[d].clone());
        }
    }
    match lp.solve() {
        LpOutcome::Optimal { value, x } => {
            let d = (0..k).map(|b| x[b * c..(b + 1) * c].to_vec()).collect();
            (d, -value)
        }
        other => unreachable!("decoder program is feasible and bounded: {other:?}"),
    }
}

/// Stochastic `e` (`r × k`) minimizing `‖e·n − q‖₁`, solved row by row.
fn best_encoder(n: &[QVec], q: &[QVec]) -> (Vec<QVec>, Rational) {
    let k = n.len();
    let c = q[0].len();
    let nv = k + 2 * c;
    let mut total = Rational::zero();
    let mut e = Vec::with_capacity(q.len());
    for qrow in q {
        let mut obj = vec![Rational::zero(); nv];
        for v in &mut obj[k..] {
            *v = Rational::one();
        }
        let mut lp = LinearProgram::new(nv).minimize(obj);
        let mut sum = vec![Rational::zero(); nv];
        for v in &mut sum[..k] {
            *v = Rational::one();
        }
        lp.add(sum, Relation::Eq, Rational::one());
        for d in 0..c {
            let mut row = vec![Rational::zero(); nv];
            for a in 0..k {
                row[a] = n[a][d].clone();
            }
            row[k + d] = -Rational::one();
            row[k + c + d] = Rational::one();
            lp.add(row, Relation::Eq, qrow[d].clone());
        }
        match lp.solve() {
            LpOutcome::Optimal { value, x } => {
                total += -value;
                e.push(x[..k].to_vec());
            }
            other => unreachable!("encoder program is feasible and bounded: {other:?}"),
        }
    }
    (e, total)
}

fn random_encoder(
    rng: &mut ChaCha8Rng,
    rows: usize,
    cols: usize,
    deterministic: bool,
) -> Vec<QVec> {
    (0..rows)
        .map(|_| {
            if deterministic {
                let j = rng.random_range(0..cols);
                (0..cols)
                    .map(|i| {
                        if i == j {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            } else {
                let mut w: Vec<i64> = (0..cols).map(|_| rng.random_range(0..4)).collect();
                if w.iter().all(|&x| x == 0) {
                    w[rng.random_range(0..cols)] = 1;
                }
                let s: i64 = w.iter().sum();
                w.iter().map(|&x| ratio(x, s)).collect()
            }
        })
        .collect()
}

fn alternate(
    p: &StochasticChannel,
    q: &StochasticChannel,
    mut enc: Vec<QVec>,
    iterations: usize,
) -> Option<ConversionWitness> {
    for _ in 0..iterations.max(1) {
        let (dec, err) = best_decoder(&matmul(&enc, &p.matrix), &q.matrix, p.outputs);
        if err.is_zero() {
            return finish(p, q, enc, dec);
        }
        let (e, err) = best_encoder(&matmul(&p.matrix, &dec), &q.matrix);
        enc = e;
        if err.is_zero() {
            return finish(p, q, enc, dec);
        }
    }
    None
}

fn finish(
    p: &StochasticChannel,
    q: &StochasticChannel,
    enc: Vec<QVec>,
    dec: Vec<QVec>,
) -> Option<ConversionWitness> {
    let enc = StochasticChannel::new(q.inputs, p.inputs, enc).ok()?;
    let dec = StochasticChannel::new(p.outputs, q.outputs, dec).ok()?;
    verify_conversion(p, q, &enc, &dec)
        .ok()?
        .then_some(ConversionWitness { enc, dec })
}

/// Looks for an encoder and decoder with `q = dec ∘ p ∘ enc`.
///
/// Alternates exact L1-optimal linear programs for the decoder and the encoder from
/// several starting encoders. The first start is the deterministic encoder read off a
/// graph homomorphism `f(q) → f(p)` when one is found; the rest are seeded random.
/// Only the graph condition can refute, so a failed search is `Unknown`.
pub fn conversion_search(
    p: &StochasticChannel,
    q: &StochasticChannel,
    opts: &SearchOptions,
) -> TriState<ConversionWitness, ConversionRefutation> {
    if p == q {
        return TriState::Yes(ConversionWitness {
            enc: StochasticChannel::identity(p.inputs),
            dec: StochasticChannel::identity(p.outputs),
        });
    }
    let graph = hom_search(
        &distinguishability_graph(q),
        &distinguishability_graph(p),
        &Budget::with_nodes(opts.nodes),
    );
    let first = match graph {
        TriState::No(r) => {
            return TriState::No(ConversionRefutation::NecessaryConditionFails { graph: r })
        }
        TriState::Yes(h) => StochasticChannel::deterministic(&h.map, p.inputs).matrix,
        TriState::Unknown => {
            StochasticChannel::deterministic(
                &(0..q.inputs).map(|c| c % p.inputs).collect::<Vec<_>>(),
                p.inputs,
            )
            .matrix
        }
    };
    let start = |i: usize| -> Vec<QVec> {
        if i == 0 {
            return first.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
        random_encoder(&mut rng, q.inputs, p.inputs, i % 2 == 1)
    };
    let restarts = opts.restarts.max(1);
    let found = if opts.jobs <= 1 {
        (0..restarts).find_map(|i| alternate(p, q, start(i), opts.iterations))
    } else {
        run_indexed((0..restarts).collect(), opts.jobs, |i| {
            alternate(p, q, start(i), opts.iterations)
        })
        .into_iter()
        .flatten()
        .next()
    };
    match found {
        Some(w) => TriState::Yes(w),
        None => TriState::Unknown,
    }
}

/// Channels under parallel use; `x ≥ y` when `x` simulates `y` with an encoder and decoder.
#[derive(Debug, Clone, Copy, Default)]
pub struct ChannelInstance {
    pub seed: u64,
}

impl MonoidInstance for ChannelInstance {
    type Elem = StochasticChannel;
    type Witness = ConversionWitness;
    type Refutation = ConversionRefutation;

    fn name(&self) -> &'static str {
        "channels"
    }

    fn zero(&self) -> StochasticChannel {
        StochasticChannel::trivial()
    }

    fn combine(&self, a: &StochasticChannel, b: &StochasticChannel) -> StochasticChannel {
        tensor(a, b)
    }

    fn leq(
        &self,
        x: &StochasticChannel,
        y: &StochasticChannel,
        budget: &Budget,
    ) -> TriState<ConversionWitness, ConversionRefutation> {
        let opts = SearchOptions {
            seed: self.seed,
            jobs: budget.jobs,
            nodes: budget.nodes,
            iterations: (budget.depth as usize).clamp(1, 16),
            ..SearchOptions::default()
        };
        conversion_search(x, y, &opts)
    }

    fn verify(&self, x: &StochasticChannel, y: &StochasticChannel, w: &ConversionWitness) -> bool {
        verify_conversion(x, y, &w.enc, &w.dec).unwrap_or(false)
    }

    fn combine_witness(
        &self,
        pair1: (&StochasticChannel, &StochasticChannel, &ConversionWitness),
        pair2: (&StochasticChannel, &StochasticChannel, &ConversionWitness),
    ) -> ConversionWitness {
        ConversionWitness {
            enc: tensor(&pair1.2.enc, &pair2.2.enc),
            dec: tensor(&pair1.2.dec, &pair2.2.dec),
        }
    }

    fn is_complete(&self) -> bool {
        false
    }
}
