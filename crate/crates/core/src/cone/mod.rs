//! Finite-dimensional ordered vector spaces over the rationals.
//!
//! A positive cone is a finite union of cells, each cut out by non-strict
//! (`a·v ≥ 0`) and strict (`a·v > 0`) linear constraints. Everything past
//! membership works on the closure, which is a single polyhedral cone.

mod extend;

pub use extend::{gauge_forms, hahn_banach_extend, Extension, ExtensionError, ExtensionStep};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dd::{h_to_v, v_to_h, Generators, Inequalities};
use crate::farkas::{conic_membership, Membership};
use crate::linalg::nullspace;
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::monoid::RateInterval;
use crate::rational::{
    add, display_vec, dot, int, neg, scale, serde_qmat, serde_qvec, unit, ExtValue, QVec, Rational,
};

/// Dimension guard for double description and the LP-based decisions.
pub const CONE_GUARD: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConeError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("a cone needs at least one cell")]
    NoCells,
    #[error("the cone does not contain the origin (some cell must have no strict constraints)")]
    MissingOrigin,
    #[error("the cells are not closed under addition: {0} + {1} leaves the cone")]
    NotAdditive(String, String),
    #[error("dimension {dim} is above the guard of {guard} (raise with REMONO_GUARD_OVERRIDE)")]
    GuardExceeded { dim: usize, guard: usize },
    #[error("{0} is not in the closure of the cone")]
    NotInClosure(&'static str),
    #[error("the functional is not in the dual cone")]
    NotInDual,
}

/// `{ v : a·v ≥ 0 for a in ge, a·v > 0 for a in gt }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    #[serde(with = "serde_qmat", default)]
    pub ge: Vec<QVec>,
    #[serde(with = "serde_qmat", default)]
    pub gt: Vec<QVec>,
}

impl Cell {
    pub fn closed(ge: Vec<QVec>) -> Self {
        Cell { ge, gt: Vec::new() }
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.ge.iter().all(|a| !dot(a, v).is_negative())
            && self.gt.iter().all(|a| dot(a, v).is_positive())
    }

    /// A point satisfying every constraint with the strict ones at least 1, if any.
    fn witness(&self, d: usize) -> Option<QVec> {
        let mut lp = LinearProgram::new(d).all_free();
        for a in &self.ge {
            lp.add(a.clone(), Relation::Ge, Rational::zero());
        }
        for a in &self.gt {
            lp.add(a.clone(), Relation::Ge, Rational::one());
        }
        match lp.solve() {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }

    fn closure_rows(&self) -> Vec<QVec> {
        self.ge.iter().chain(&self.gt).cloned().collect()
    }
}

/// A positive cone given as a union of cells. Construct through [`RationalCone::new`],
/// which validates it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalCone {
    dim: usize,
    cells: Vec<Cell>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCone {
    #[serde(alias = "dimension")]
    dim: usize,
    cells: Vec<Cell>,
}

impl<'de> Deserialize<'de> for RationalCone {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawCone::deserialize(d)?;
        RationalCone::new(raw.dim, raw.cells).map_err(serde::de::Error::custom)
    }
}

const VALIDATION_SEED: u64 = 0x5eed_c0de;
const SAMPLES_PER_CELL: usize = 12;

impl RationalCone {
    /// Validates dimensions, the origin, and closure under addition (by exact
    /// sampling with a fixed seed).
    pub fn new(dim: usize, cells: Vec<Cell>) -> Result<Self, ConeError> {
        if cells.is_empty() {
            return Err(ConeError::NoCells);
        }
        for row in cells.iter().flat_map(|c| c.ge.iter().chain(&c.gt)) {
            if row.len() != dim {
                return Err(ConeError::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
        }
        if !cells.iter().any(|c| c.gt.is_empty()) {
            return Err(ConeError::MissingOrigin);
        }
        let cone = RationalCone { dim, cells };
        cone.check_additive()?;
        Ok(cone)
    }

    /// A closed polyhedral cone `{ v : a·v ≥ 0 }`.
    pub fn polyhedral(dim: usize, rows: Vec<QVec>) -> Result<Self, ConeError> {
        Self::new(dim, vec![Cell::closed(rows)])
    }

    /// The conic hull of `rays`.
    pub fn generated(dim: usize, rays: Vec<QVec>) -> Result<Self, ConeError> {
        if let Some(r) = rays.iter().find(|r| r.len() != dim) {
            return Err(ConeError::DimensionMismatch {
                expected: dim,
                found: r.len(),
            });
        }
        let h = v_to_h(&Generators {
            dim,
            lineality: vec![],
            rays,
        });
        Self::polyhedral(dim, h.as_rows())
    }

    pub fn orthant(dim: usize) -> Self {
        Self::polyhedral(dim, (0..dim).map(|i| unit(dim, i)).collect()).expect("orthant is a cone")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn contains(&self, v: &[Rational]) -> Result<bool, ConeError> {
        self.check_dim(v)?;
        Ok(self.cells.iter().any(|c| c.contains(v)))
    }

    fn check_dim(&self, v: &[Rational]) -> Result<(), ConeError> {
        if v.len() != self.dim {
            return Err(ConeError::DimensionMismatch {
                expected: self.dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    fn check_additive(&self) -> Result<(), ConeError> {
        let mut rng = ChaCha8Rng::seed_from_u64(VALIDATION_SEED);
        let mut samples: Vec<QVec> = Vec::new();
        for cell in &self.cells {
            let Some(base) = cell.witness(self.dim) else {
                continue;
            };
            let g = h_to_v(self.dim, &cell.closure_rows());
            let mut dirs: Vec<QVec> = g.rays.clone();
            for l in &g.lineality {
                dirs.push(l.clone());
                dirs.push(neg(l));
            }
            samples.push(base.clone());
            for _ in 0..SAMPLES_PER_CELL {
                let mut p = scale(&base, &int(rng.random_range(0..3)));
                for d in &dirs {
                    p = add(&p, &scale(d, &int(rng.random_range(0..4))));
                }
                if !cell.gt.is_empty() {
                    p = add(&p, &base);
                }
                samples.push(p);
            }
            samples.extend(dirs.into_iter().filter(|d| cell.contains(d)));
        }
        for (i, a) in samples.iter().enumerate() {
            for b in &samples[i..] {
                let s = add(a, b);
                if !self.cells.iter().any(|c| c.contains(&s)) {
                    return Err(ConeError::NotAdditive(display_vec(a), display_vec(b)));
                }
            }
        }
        Ok(())
    }

    /// The closure as a single polyhedral cone: each nonempty cell is closed, and
    /// the generators of all closed cells are combined into one conic hull.
    pub fn closure(&self) -> ClosedCone {
        let mut lineality = Vec::new();
        let mut rays = Vec::new();
        for cell in &self.cells {
            if cell.witness(self.dim).is_none() {
                continue;
            }
            let g = h_to_v(self.dim, &cell.closure_rows());
            lineality.extend(g.lineality);
            rays.extend(g.rays);
        }
        ClosedCone::from_generators(Generators {
            dim: self.dim,
            lineality,
            rays,
        })
    }

    /// The closure, as a single-cell cone.
    pub fn archimedeanize(&self) -> RationalCone {
        self.closure().to_cone()
    }
}

/// A closed polyhedral cone held in both representations.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedCone {
    pub generators: Generators,
    pub inequalities: Inequalities,
}

impl ClosedCone {
    pub fn from_generators(g: Generators) -> Self {
        let inequalities = v_to_h(&g);
        let generators = h_to_v(g.dim, &inequalities.as_rows());
        ClosedCone {
            generators,
            inequalities,
        }
    }

    pub fn from_inequalities(dim: usize, rows: &[QVec]) -> Self {
        let generators = h_to_v(dim, rows);
        Self::from_generators(generators)
    }

    pub fn dim(&self) -> usize {
        self.generators.dim
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.inequalities.contains(v)
    }

    pub fn to_cone(&self) -> RationalCone {
        RationalCone {
            dim: self.dim(),
            cells: vec![Cell::closed(self.inequalities.as_rows())],
        }
    }

    fn lines_both_signs(&self) -> Vec<QVec> {
        self.generators
            .lineality
            .iter()
            .flat_map(|l| [l.clone(), neg(l)])
            .collect()
    }

    /// `{ f : f·v ≥ 0 on the cone }`.
    pub fn dual(&self) -> DualCone {
        let mut rows = self.generators.rays.clone();
        rows.extend(self.lines_both_signs());
        let g = h_to_v(self.dim(), &rows);
        DualCone {
            rays: g.rays,
            lineality: g.lineality,
        }
    }
}

fn check_guard(d: usize) -> Result<(), ConeError> {
    let g = crate::guard(CONE_GUARD);
    if d > g {
        return Err(ConeError::GuardExceeded { dim: d, guard: g });
    }
    Ok(())
}

/// The dual cone: `cone(rays) + span(lineality)`; the lineality consists of the
/// functionals vanishing on the whole cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCone {
    #[serde(with = "serde_qmat")]
    pub rays: Vec<QVec>,
    #[serde(with = "serde_qmat")]
    pub lineality: Vec<QVec>,
}

/// Extreme rays of the dual cone as primitive integer vectors.
pub fn dual_rays(cone: &ClosedCone) -> Result<DualCone, ConeError> {
    check_guard(cone.dim())?;
    Ok(cone.dual())
}

/// Quotient by the lineality space `L = C ∩ −C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quotient {
    pub dim: usize,
    /// Rows of the projection matrix; its kernel is `L`.
    #[serde(with = "serde_qmat")]
    pub projection: Vec<QVec>,
    pub cone: ClosedCone,
}

impl Quotient {
    pub fn project(&self, v: &[Rational]) -> QVec {
        self.projection.iter().map(|row| dot(row, v)).collect()
    }
}

pub fn pointed_quotient(cone: &ClosedCone) -> Quotient {
    let d = cone.dim();
    let lin = &cone.generators.lineality;
    let projection: Vec<QVec> = if lin.is_empty() {
        (0..d).map(|i| unit(d, i)).collect()
    } else {
        nullspace(lin, d)
    };
    let k = projection.len();
    let rays: Vec<QVec> = cone
        .generators
        .rays
        .iter()
        .map(|r| projection.iter().map(|p| dot(p, r)).collect())
        .collect();
    let image = ClosedCone::from_generators(Generators {
        dim: k,
        lineality: vec![],
        rays,
    });
    Quotient {
        dim: k,
        projection,
        cone: image,
    }
}

/// Outcome of separating a point from a cone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Separation {
    /// The point lies in the closure, with coefficients over the closure's generators.
    InClosure {
        #[serde(with = "serde_qvec")]
        ray_coeffs: QVec,
        #[serde(with = "serde_qvec")]
        line_coeffs: QVec,
    },
    /// `f ≥ 0` on the cone and `f·x < 0`.
    Separated {
        #[serde(with = "serde_qvec")]
        functional: QVec,
    },
}

pub fn separate(cone: &RationalCone, x: &[Rational]) -> Result<Separation, ConeError> {
    cone.check_dim(x)?;
    check_guard(cone.dim())?;
    let closed = cone.closure();
    Ok(separate_closed(&closed, x))
}

pub fn separate_closed(closed: &ClosedCone, x: &[Rational]) -> Separation {
    match conic_membership(&closed.generators.rays, &closed.generators.lineality, x) {
        Membership::Inside {
            ray_coeffs,
            line_coeffs,
        } => Separation::InClosure {
            ray_coeffs,
            line_coeffs,
        },
        Membership::Outside { separator } => Separation::Separated {
            functional: separator,
        },
    }
}

/// `R_max(x → y)` on a closed cone, computed by the primal program
/// `sup { β ≥ 0 : x − βy ∈ C }` and by the dual rays, `min f·x / f·y` over rays with `f·y > 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeRate {
    pub r_max: ExtValue,
    pub primal: ExtValue,
    pub dual: ExtValue,
    /// Dual ray attaining the minimum.
    #[serde(with = "crate::rational::serde_opt_qvec")]
    pub argmin: Option<QVec>,
}

impl ConeRate {
    pub fn agree(&self) -> bool {
        self.primal == self.dual
    }

    pub fn interval(&self) -> RateInterval {
        RateInterval {
            lower: self.r_max.clone(),
            upper: self.r_max.clone(),
            lower_witness: None,
            upper_source: Some("dual rays".to_string()),
        }
    }
}

pub fn rate_region_cone(
    cone: &RationalCone,
    x: &[Rational],
    y: &[Rational],
) -> Result<ConeRate, ConeError> {
    cone.check_dim(x)?;
    cone.check_dim(y)?;
    check_guard(cone.dim())?;
    let closed = cone.closure();
    rate_closed(&closed, x, y)
}

pub fn rate_closed(
    closed: &ClosedCone,
    x: &[Rational],
    y: &[Rational],
) -> Result<ConeRate, ConeError> {
    if !closed.contains(x) {
        return Err(ConeError::NotInClosure("x"));
    }
    if !closed.contains(y) {
        return Err(ConeError::NotInClosure("y"));
    }
    let primal = primal_rate(closed, x, y);
    let dual = closed.dual();
    let mut best: Option<(Rational, QVec)> = None;
    for f in &dual.rays {
        let fy = dot(f, y);
        if fy.is_positive() {
            let r = dot(f, x) / fy;
            if best.as_ref().is_none_or(|(b, _)| r < *b) {
                best = Some((r, f.clone()));
            }
        }
    }
    let (dual_value, argmin) = match best {
        Some((r, f)) => (ExtValue::Exact(r), Some(f)),
        None => (ExtValue::Infinite, None),
    };
    Ok(ConeRate {
        r_max: dual_value.clone(),
        primal,
        dual: dual_value,
        argmin,
    })
}

fn primal_rate(closed: &ClosedCone, x: &[Rational], y: &[Rational]) -> ExtValue {
    // Variables: β, ray coefficients λ ≥ 0, free line coefficients μ.
    let rays = &closed.generators.rays;
    let lines = &closed.generators.lineality;
    let n = 1 + rays.len() + lines.len();
    let mut objective = vec![Rational::zero(); n];
    objective[0] = Rational::one();
    let mut lp = LinearProgram::new(n).maximize(objective);
    for j in 0..lines.len() {
        lp = lp.with_free(1 + rays.len() + j);
    }
    for i in 0..closed.dim() {
        // βy_i + Σ λ r_i + Σ μ l_i = x_i
        let mut row = vec![y[i].clone()];
        row.extend(rays.iter().map(|r| r[i].clone()));
        row.extend(lines.iter().map(|l| l[i].clone()));
        lp.add(row, Relation::Eq, x[i].clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => ExtValue::Exact(value),
        LpOutcome::Unbounded => ExtValue::Infinite,
        LpOutcome::Infeasible => unreachable!("β = 0 is feasible for x in the cone"),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericalReport {
    pub numerical: bool,
    pub quotient_dim: usize,
    #[serde(with = "serde_qmat")]
    pub dual_rays: Vec<QVec>,
    /// The order-embedding functional when the space is numerical.
    #[serde(with = "crate::rational::serde_opt_qvec")]
    pub embedding: Option<QVec>,
    /// A lineality direction of the closure missing from the cone itself, which
    /// shows that the embedding would not reflect the order.
    #[serde(with = "crate::rational::serde_opt_qvec")]
    pub unreflected: Option<QVec>,
}

/// Whether the ordered space embeds into the rationals by a single order-reflecting functional.
///
/// Requires the closure's pointed quotient to have exactly one dual extreme ray `f`,
/// and the cone to contain the whole kernel of `f` so that `f(v) ≥ 0` implies `v ≥ 0`.
pub fn is_numerical(cone: &RationalCone) -> Result<NumericalReport, ConeError> {
    check_guard(cone.dim())?;
    let closed = cone.closure();
    let q = pointed_quotient(&closed);
    let dual = closed.dual();
    let mut unreflected = None;
    for l in closed.lines_both_signs() {
        if !cone.contains(&l)? {
            unreflected = Some(l);
            break;
        }
    }
    let one_ray = dual.rays.len() == 1 && q.dim == 1;
    let numerical = one_ray && unreflected.is_none();
    Ok(NumericalReport {
        numerical,
        quotient_dim: q.dim,
        embedding: if one_ray {
            Some(dual.rays[0].clone())
        } else {
            None
        },
        dual_rays: dual.rays,
        unreflected,
    })
}

/// `inf { λ ∈ ℚ : λg − x ∈ C }` over the closure; `Infinite` if no such `λ`.
pub fn unit_gauge(closed: &ClosedCone, g: &[Rational], x: &[Rational]) -> ExtValue {
    let rays = &closed.generators.rays;
    let lines = &closed.generators.lineality;
    let n = 1 + rays.len() + lines.len();
    let mut objective = vec![Rational::zero(); n];
    objective[0] = Rational::one();
    let mut lp = LinearProgram::new(n).minimize(objective).with_free(0);
    for j in 0..lines.len() {
        lp = lp.with_free(1 + rays.len() + j);
    }
    for i in 0..closed.dim() {
        // λg_i − Σ λ_r r_i − Σ μ l_i = x_i
        let mut row = vec![g[i].clone()];
        row.extend(rays.iter().map(|r| -&r[i]));
        row.extend(lines.iter().map(|l| -&l[i]));
        lp.add(row, Relation::Eq, x[i].clone());
    }
    match lp.solve() {
        LpOutcome::Optimal { value, .. } => ExtValue::Exact(-value),
        LpOutcome::Unbounded => ExtValue::Approx(f64::NEG_INFINITY),
        LpOutcome::Infeasible => ExtValue::Infinite,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReciprocalRow {
    #[serde(with = "serde_qvec")]
    pub x: QVec,
    #[serde(with = "serde_qvec")]
    pub y: QVec,
    pub forward: ExtValue,
    pub backward: ExtValue,
    #[serde(with = "crate::rational::serde_opt_q")]
    pub product: Option<Rational>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReciprocalReport {
    pub numerical: bool,
    pub rows: Vec<ReciprocalRow>,
}

/// For each pair with both rates finite, the product `R(x→y)·R(y→x)` must be 1 on a
/// numerical cone and at most 1 in general.
pub fn reciprocal_rate_check(
    cone: &RationalCone,
    samples: &[(QVec, QVec)],
) -> Result<ReciprocalReport, ConeError> {
    let numerical = is_numerical(cone)?.numerical;
    let closed = cone.closure();
    let mut rows = Vec::new();
    for (x, y) in samples {
        cone.check_dim(x)?;
        cone.check_dim(y)?;
        let forward = rate_closed(&closed, x, y)?.r_max;
        let backward = rate_closed(&closed, y, x)?.r_max;
        let product = match (forward.exact(), backward.exact()) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        let ok = match &product {
            Some(p) if numerical => p.is_one(),
            Some(p) => p <= &Rational::one(),
            None => true,
        };
        rows.push(ReciprocalRow {
            x: x.clone(),
            y: y.clone(),
            forward,
            backward,
            product,
            ok,
        });
    }
    Ok(ReciprocalReport { numerical, rows })
}

/// `f = Σ λ_i ray_i + Σ μ_j line_j` over the dual cone, with `λ ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub dual: DualCone,
    #[serde(with = "serde_qvec")]
    pub ray_coeffs: QVec,
    #[serde(with = "serde_qvec")]
    pub line_coeffs: QVec,
}

pub fn decompose_functional(
    closed: &ClosedCone,
    f: &[Rational],
) -> Result<Decomposition, ConeError> {
    if f.len() != closed.dim() {
        return Err(ConeError::DimensionMismatch {
            expected: closed.dim(),
            found: f.len(),
        });
    }
    check_guard(closed.dim())?;
    let dual = closed.dual();
    match conic_membership(&dual.rays, &dual.lineality, f) {
        Membership::Inside {
            ray_coeffs,
            line_coeffs,
        } => Ok(Decomposition {
            dual,
            ray_coeffs,
            line_coeffs,
        }),
        Membership::Outside { .. } => Err(ConeError::NotInDual),
    }
}

/// Order-unit test by perturbation: for every `±e_i` some `g + ε(±e_i)` stays in the cone.
pub fn is_order_unit_by_perturbation(closed: &ClosedCone, g: &[Rational]) -> bool {
    if !closed.contains(g) {
        return false;
    }
    let d = closed.dim();
    let ineq = &closed.inequalities;
    (0..d)
        .flat_map(|i| [unit(d, i), neg(&unit(d, i))])
        .all(|e| {
            ineq.equalities.iter().all(|a| dot(a, &e).is_zero())
                && ineq
                    .inequalities
                    .iter()
                    .all(|a| dot(a, g).is_positive() || !dot(a, &e).is_negative())
        })
}

/// Order-unit test by absorption: some `v + λg` lies in the cone, for every given `v`.
pub fn is_order_unit_by_absorption(closed: &ClosedCone, g: &[Rational], probes: &[QVec]) -> bool {
    closed.contains(g)
        && probes
            .iter()
            .all(|v| !matches!(unit_gauge(closed, g, &neg(v)), ExtValue::Infinite))
}

/// A random element of the cone: a nonnegative integer combination of its generators.
pub fn sample_point(closed: &ClosedCone, rng: &mut impl Rng, max_coeff: i64) -> QVec {
    let mut p = vec![Rational::zero(); closed.dim()];
    for r in &closed.generators.rays {
        p = add(&p, &scale(r, &int(rng.random_range(0..=max_coeff))));
    }
    for l in &closed.generators.lineality {
        p = add(
            &p,
            &scale(l, &int(rng.random_range(-max_coeff..=max_coeff))),
        );
    }
    p
}
