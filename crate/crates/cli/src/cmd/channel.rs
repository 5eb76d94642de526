use std::path::Path;

use serde_json::json;

use remono::channels::{
    conversion_search, distinguishability_graph, induced_hom, tensor as tensor_channels,
    verify_conversion, ConversionRefutation, SearchOptions, StochasticChannel,
};
use remono::formats::{write_dimacs, GraphDocument};
use remono::rational::display_rational;
use remono::TriState;

use crate::args::Global;
use crate::input::load_channel;
use crate::output::{CliError, CliResult, Output, Status};

fn channel_text(c: &StochasticChannel) -> String {
    let rows: Vec<String> = c
        .rows()
        .iter()
        .map(|r| r.iter().map(display_rational).collect::<Vec<_>>().join(" "))
        .collect();
    format!(
        "{} inputs, {} outputs\n{}\n",
        c.inputs(),
        c.outputs(),
        rows.join("\n")
    )
}

pub fn graph(path: &Path) -> CliResult {
    let c = load_channel(path)?;
    let g = distinguishability_graph(&c);
    Ok(Output::new(Status::Computed, GraphDocument::from(&g)).text(write_dimacs(&g)))
}

pub fn verify(p: &Path, q: &Path, enc: &Path, dec: &Path) -> CliResult {
    let (p, q) = (load_channel(p)?, load_channel(q)?);
    let (enc, dec) = (load_channel(enc)?, load_channel(dec)?);
    let ok = verify_conversion(&p, &q, &enc, &dec).map_err(|e| CliError::Data(e.to_string()))?;
    let mut out =
        Output::new(Status::from_bool(ok), json!({ "converts": ok })).row("dec ∘ P ∘ enc = Q", ok);
    if ok {
        let hom = induced_hom(&p, &q, &enc, &dec).map_err(|e| CliError::Data(e.to_string()))?;
        out = out
            .with_result(json!({ "converts": true, "graph_map": hom.map }))
            .row(
                "graph map",
                hom.map
                    .iter()
                    .enumerate()
                    .map(|(c, a)| format!("{}→{}", c + 1, a + 1))
                    .collect::<Vec<_>>()
                    .join(" "),
            );
    }
    Ok(out)
}

pub fn search(
    p: &Path,
    q: &Path,
    restarts: usize,
    iterations: usize,
    seed: u64,
    g: &Global,
) -> CliResult {
    let (p, q) = (load_channel(p)?, load_channel(q)?);
    let opts = SearchOptions {
        restarts,
        iterations,
        seed,
        jobs: g.jobs,
        nodes: g.budget_nodes,
    };
    let r = conversion_search(&p, &q, &opts);
    let status = Status::from_tristate(&r);
    Ok(match r {
        TriState::Yes(w) => Output::new(
            status,
            json!({ "converts": true, "enc": &w.enc, "dec": &w.dec }),
        )
        .row("conversion", "found")
        .text(format!(
            "encoder\n{}decoder\n{}",
            channel_text(&w.enc),
            channel_text(&w.dec)
        )),
        TriState::No(reason) => {
            let ConversionRefutation::NecessaryConditionFails { graph } = &reason;
            Output::new(status, json!({ "converts": false, "refutation": &reason }))
                .row("conversion", "impossible")
                .row("reason", format!("no homomorphism f(Q) → f(P): {graph:?}"))
        }
        TriState::Unknown => Output::new(status, json!({ "converts": null }))
            .row("conversion", "unknown")
            .row(
                "note",
                "the graph condition holds but no exact witness was found",
            ),
    })
}

pub fn tensor(p: &Path, q: &Path) -> CliResult {
    let (p, q) = (load_channel(p)?, load_channel(q)?);
    let t = tensor_channels(&p, &q);
    Ok(Output::new(Status::Computed, &t).text(channel_text(&t)))
}
