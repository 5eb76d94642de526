use serde_json::json;

use remono::major::{
    major_leq, majorization_failure, rate_upper_renyi, renyi as renyi_entropy, FiniteDistribution,
    MajorInstance, MajorOrder, RenyiFunctional, RenyiOrder,
};
use remono::monoid::{rate_bounds, Functional};

use super::budget;
use crate::args::Global;
use crate::input::load_distribution;
use crate::output::{CliError, CliResult, Output, Status};

/// Copy counts are refused once an n-fold product would exceed this many entries.
const PRODUCT_ENTRY_LIMIT: f64 = (1u64 << 20) as f64;

pub fn leq(p: &str, q: &str) -> CliResult {
    let (p, q) = (load_distribution(p)?, load_distribution(q)?);
    let holds = major_leq(&p, &q);
    let mut out = Output::new(
        Status::from_bool(holds),
        json!({ "majorizes": holds, "failure_prefix": majorization_failure(&p, &q) }),
    )
    .row("P majorizes Q", holds);
    if let Some(k) = majorization_failure(&p, &q) {
        out = out.row("first failing prefix", k);
    }
    Ok(out)
}

pub fn renyi(p: &str, t: &str, g: &Global) -> CliResult {
    let p = load_distribution(p)?;
    let order = RenyiOrder::parse(t).map_err(|e| CliError::Usage(format!("--t: {e}")))?;
    let h = renyi_entropy(&p, order);
    Ok(Output::new(
        Status::Computed,
        json!({ "order": order, "entropy": h, "tol": g.tol }),
    )
    .row(format!("H_{order}"), format!("{h:.9} bits")))
}

pub fn rate(p: &str, q: &str, resolution: usize, max_copies: u32, g: &Global) -> CliResult {
    let (p, q) = (load_distribution(p)?, load_distribution(q)?);
    let largest = p.support_size().max(q.support_size()).max(1) as f64;
    let upper = rate_upper_renyi(&p, &q, resolution);
    // The witness search takes m copies of Q up to about n times the upper bound.
    let reach = upper.value.map_or(8.0 * max_copies as f64, |u| {
        (u * max_copies as f64).max(max_copies as f64)
    });
    if reach * largest.log2() > PRODUCT_ENTRY_LIMIT.log2() {
        return Err(CliError::Guard(format!(
            "products of up to {reach:.0} copies are too large; lower --max-copies"
        )));
    }
    let inst = MajorInstance::new(MajorOrder::MajorizedBy);
    let grid = [
        RenyiOrder::Finite(0.0),
        RenyiOrder::Finite(0.5),
        RenyiOrder::Finite(1.0),
        RenyiOrder::Finite(2.0),
        RenyiOrder::Infinity,
    ];
    let mut functionals: Vec<RenyiFunctional> = grid.iter().map(|&t| RenyiFunctional(t)).collect();
    if let Some(t) = upper.argmin {
        functionals.push(RenyiFunctional(t));
    }
    let refs: Vec<&dyn Functional<FiniteDistribution>> = functionals
        .iter()
        .map(|f| f as &dyn Functional<_>)
        .collect();
    let interval = rate_bounds(&inst, &p, &q, max_copies, None, &refs, &budget(g));
    let upper_text = match (upper.value, upper.argmin) {
        (Some(v), Some(t)) => {
            format!("{v:.6} (inf over t of H_t(P)/H_t(Q), attained near t = {t})")
        }
        (Some(v), None) => format!("{v:.6}"),
        _ => "inf (Q is a point mass)".into(),
    };
    let mut out = Output::new(
        Status::Computed,
        json!({ "interval": &interval, "renyi": &upper, "tol": g.tol }),
    )
    .row("lower", &interval.lower)
    .row("upper", upper_text);
    if let Some((n, m)) = interval.lower_witness {
        out = out.row("witness", format!("{n} copies of P yield {m} copies of Q"));
    }
    Ok(out)
}
