//! Bounds on the regularized rate `G → K2` (the Shannon capacity in bits), and the
//! sandwich `ω ≤ lovasz ≤ χ`.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::clique::{clique_number, Bounded};
use super::coloring::chromatic_number;
use super::expr::GraphInstance;
use super::fractional::fractional_chromatic;
use super::lovasz::{lovasz_complement, LovaszResult};
use super::{guard, Graph, GraphError};
use crate::monoid::{Budget, RateInterval};
use crate::rational::{ExtValue, Rational};

/// Largest power materialized for clique search, overridable like the other guards.
const POWER_GUARD: usize = 4096;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PowerClique {
    pub power: u32,
    pub clique: usize,
    /// False when the search ran out of budget and `clique` is only a lower bound.
    pub exact: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapacityReport {
    pub interval: RateInterval,
    pub cliques: Vec<PowerClique>,
    pub lovasz: Option<LovaszResult>,
    #[serde(with = "crate::rational::serde_opt_q")]
    pub fractional_chromatic: Option<Rational>,
}

/// `lower = max_n log2 ω(G^{∗n}) / n` over `n ≤ max_power`; `upper = min(log2 lovasz, log2 χ_f)`.
pub fn capacity_bounds(
    g: &Graph,
    max_power: u32,
    tol: f64,
    budget: &Budget,
) -> Result<CapacityReport, GraphError> {
    if g.is_edgeless() {
        return Err(GraphError::NoEdge);
    }
    let limit = guard(POWER_GUARD);
    let mut cliques = Vec::new();
    let mut lower = 0.0f64;
    let mut lower_witness = None;
    let inst = GraphInstance::new();
    for k in 1..=max_power.max(1) {
        let size = (g.n() as u128).saturating_pow(k);
        if size > limit as u128 {
            return Err(GraphError::GuardExceeded {
                n: size.min(usize::MAX as u128) as usize,
                guard: limit,
            });
        }
        let c = inst.clique_of_product(&vec![g.clone(); k as usize], budget);
        let (w, exact) = (c.value().len(), c.is_exact());
        cliques.push(PowerClique {
            power: k,
            clique: w,
            exact,
        });
        let rate = (w as f64).log2() / k as f64;
        if rate > lower + 1e-12 {
            lower = rate;
            lower_witness = Some((k, 1));
        }
    }

    let lov = lovasz_complement(g, tol).ok();
    let chi_f = fractional_chromatic(g).ok();
    let mut upper = f64::INFINITY;
    let mut upper_source = None;
    if let Some(l) = &lov {
        upper = l.upper.log2();
        upper_source = Some("log2 lovasz".to_string());
    }
    if let Some(c) = chi_f.as_ref().and_then(|c| c.to_f64()) {
        if c.log2() < upper {
            upper = c.log2();
            upper_source = Some("log2 fractional chromatic".to_string());
        }
    }
    let upper = if upper.is_finite() {
        ExtValue::Approx(upper)
    } else {
        ExtValue::Infinite
    };
    Ok(CapacityReport {
        interval: RateInterval {
            lower: ExtValue::Approx(lower),
            upper,
            lower_witness,
            upper_source,
        },
        cliques,
        lovasz: lov,
        fractional_chromatic: chi_f,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SandwichReport {
    pub clique: Bounded<usize>,
    pub lovasz: LovaszResult,
    pub chromatic: Bounded<usize>,
    /// `Some(true)` when `ω ≤ lovasz ≤ χ` holds within tolerance, `None` if a search was cut off.
    pub holds: Option<bool>,
}

pub fn sandwich_check(g: &Graph, tol: f64, budget: &Budget) -> Result<SandwichReport, GraphError> {
    let lovasz = lovasz_complement(g, tol)?;
    let clique = clique_number(g, budget);
    let chromatic = chromatic_number(g, budget);
    let holds = match (&clique, &chromatic) {
        (Bounded::Exact(w), Bounded::Exact(c)) => {
            Some(*w as f64 <= lovasz.upper + tol && lovasz.lower <= *c as f64 + tol)
        }
        _ => None,
    };
    Ok(SandwichReport {
        clique,
        lovasz,
        chromatic,
        holds,
    })
}
