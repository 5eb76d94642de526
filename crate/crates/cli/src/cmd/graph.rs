use std::path::Path;

use serde_json::json;

use remono::formats::{write_dimacs, GraphDocument};
use remono::graphs::expr::verify_expr_map;
use remono::graphs::{
    capacity_bounds, chromatic_number, clique_number, disjunctive_product, distribute_catalyst,
    fractional_chromatic, graph_join, hom_search, lovasz_complement, Bounded, Graph, GraphError,
    GraphExpr, GraphInstance,
};
use remono::monoid::manycopy_leq;
use remono::rational::{display_rational, format_rational};
use remono::TriState;

use super::budget;
use crate::args::Global;
use crate::input::load_graph;
use crate::output::{CliError, CliResult, Output, Status};

fn graph_error(e: GraphError) -> CliError {
    match e {
        GraphError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
        _ => CliError::Data(e.to_string()),
    }
}

fn bounded(b: &Bounded<usize>) -> String {
    match b {
        Bounded::Exact(v) => v.to_string(),
        Bounded::BudgetExceeded { best } => format!("≥ {best} (budget exhausted)"),
    }
}

pub fn invariants(file: &Path, g: &Global) -> CliResult {
    let graph = load_graph(file)?;
    let b = budget(g);
    let clique = clique_number(&graph, &b);
    let chromatic = chromatic_number(&graph, &b);
    // Both are optional: they are skipped above their size guards.
    let chi_f = fractional_chromatic(&graph).ok();
    let lovasz = lovasz_complement(&graph, g.tol).ok();
    let status = if clique.is_exact() && chromatic.is_exact() {
        Status::Computed
    } else {
        Status::Unknown
    };
    let result = json!({
        "vertices": graph.n(),
        "edges": graph.edge_count(),
        "clique": clique,
        "chromatic": chromatic,
        "fractional_chromatic": chi_f.as_ref().map(format_rational),
        "lovasz": lovasz,
    });
    let mut out = Output::new(status, result)
        .row("vertices", graph.n())
        .row("edges", graph.edge_count())
        .row("clique number", bounded(&clique))
        .row("chromatic number", bounded(&chromatic));
    out = out.row(
        "fractional chromatic",
        chi_f
            .as_ref()
            .map_or("skipped (size guard)".into(), display_rational),
    );
    out = out.row(
        "lovasz (complement)",
        lovasz.map_or("skipped (size guard)".into(), |l| {
            format!("{:.6} in [{:.6}, {:.6}]", l.value, l.lower, l.upper)
        }),
    );
    Ok(out)
}

pub fn hom(source: &Path, target: &Path, g: &Global) -> CliResult {
    let (s, t) = (load_graph(source)?, load_graph(target)?);
    let r = hom_search(&s, &t, &budget(g));
    let status = Status::from_tristate(&r);
    Ok(match r {
        TriState::Yes(h) => Output::new(status, json!({ "exists": true, "map": h.map }))
            .row("homomorphism", "found")
            .row(
                "map",
                h.map
                    .iter()
                    .enumerate()
                    .map(|(u, v)| format!("{}→{}", u + 1, v + 1))
                    .collect::<Vec<_>>()
                    .join(" "),
            ),
        TriState::No(reason) => {
            Output::new(status, json!({ "exists": false, "refutation": reason }))
                .row("homomorphism", "none")
                .row("reason", format!("{reason:?}"))
        }
        TriState::Unknown => Output::new(status, json!({ "exists": null }))
            .row("homomorphism", "unknown (budget exhausted)"),
    })
}

pub fn product(a: &Path, b: &Path, join: bool) -> CliResult {
    let (ga, gb) = (load_graph(a)?, load_graph(b)?);
    let p = if join {
        graph_join(&ga, &gb)
    } else {
        disjunctive_product(&ga, &gb)
    };
    Ok(Output::new(Status::Computed, GraphDocument::from(&p)).text(write_dimacs(&p)))
}

pub fn capacity(file: &Path, max_power: u32, g: &Global) -> CliResult {
    let graph = load_graph(file)?;
    let r = capacity_bounds(&graph, max_power, g.tol, &budget(g)).map_err(graph_error)?;
    let exact = r.cliques.iter().all(|c| c.exact);
    let status = if exact {
        Status::Computed
    } else {
        Status::Unknown
    };
    let mut out = Output::new(status, json!({ "report": &r, "tol": g.tol }))
        .row("lower", format!("{:.6}", r.interval.lower.to_f64()))
        .row("upper", format!("{:.6}", r.interval.upper.to_f64()));
    if let Some(src) = &r.interval.upper_source {
        out = out.row("upper from", src);
    }
    for c in &r.cliques {
        let note = if c.exact { "" } else { " (lower bound)" };
        out = out.row(format!("ω(G^{})", c.power), format!("{}{note}", c.clique));
    }
    Ok(out)
}

/// Names atoms after the input they came from.
fn describe(e: &GraphExpr, x: &Graph, y: &Graph) -> String {
    match e {
        GraphExpr::Atom(a) if a == x => "x".into(),
        GraphExpr::Atom(a) if a == y => "y".into(),
        GraphExpr::Atom(a) if a.n() == 1 => "1".into(),
        GraphExpr::Atom(a) => format!("G{}", a.n()),
        GraphExpr::Product(cs) => {
            let mut parts: Vec<(String, usize)> = Vec::new();
            for c in cs {
                let d = describe(c, x, y);
                match parts.last_mut() {
                    Some((last, k)) if *last == d => *k += 1,
                    _ => parts.push((d, 1)),
                }
            }
            parts
                .iter()
                .map(|(d, k)| {
                    if *k == 1 {
                        d.clone()
                    } else {
                        format!("{d}^{k}")
                    }
                })
                .collect::<Vec<_>>()
                .join("∗")
        }
        GraphExpr::Join(cs) => format!(
            "join({})",
            cs.iter()
                .map(|c| describe(c, x, y))
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

/// Flat catalysts up to this size are included as graph documents.
const CATALYST_DOCUMENT_LIMIT: u128 = 1024;

pub fn catalyst(
    x: &Path,
    x_power: u32,
    y: &Path,
    y_power: u32,
    copies: u32,
    g: &Global,
) -> CliResult {
    let (gx, gy) = (load_graph(x)?, load_graph(y)?);
    if x_power == 0 || y_power == 0 || copies == 0 {
        return Err(CliError::Usage(
            "--x-power, --y-power and --copies must be positive".into(),
        ));
    }
    let (ex, ey) = (
        GraphExpr::power(&gx, x_power),
        GraphExpr::power(&gy, y_power),
    );
    let inst = GraphInstance::new();
    let w = match manycopy_leq(&inst, &ex, &ey, copies, &budget(g)) {
        TriState::Yes(w) => w,
        TriState::No(_) => {
            return Ok(Output::new(Status::Refuted, json!({ "copies": null }))
                .row("n·x ≥ n·y", format!("fails for every n ≤ {copies}")))
        }
        TriState::Unknown => {
            return Ok(Output::new(Status::Unknown, json!({ "copies": null }))
                .row("n·x ≥ n·y", "unknown (budget exhausted)"))
        }
    };
    let out = distribute_catalyst(&ex, &ey, w.copies, &w.witness)
        .map_err(|e| CliError::Data(e.to_string()))?;
    let verified = verify_expr_map(&out.source, &out.target, &out.hom.map);
    let name = describe(&out.catalyst, &gx, &gy);
    let size = out.catalyst.size();
    let document =
        (size <= CATALYST_DOCUMENT_LIMIT).then(|| GraphDocument::from(&out.catalyst.flatten()));
    let result = json!({
        "copies": w.copies,
        "catalyst": name,
        "catalyst_vertices": size as u64,
        "catalyst_graph": document,
        "map": out.hom.map,
        "verified": verified,
    });
    let status = if verified {
        Status::Computed
    } else {
        Status::Unknown
    };
    Ok(Output::new(status, result)
        .row("copies", w.copies)
        .row("catalyst", format!("{name} ({size} vertices)"))
        .row(
            "y∗z → x∗z",
            if verified {
                "verified"
            } else {
                "verification FAILED"
            },
        ))
}
