//! Loading input files and inline arguments. Any JSON input may also be a machine
//! report from an earlier run, in which case its `result` is read.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde_json::Value;

use remono::channels::StochasticChannel;
use remono::cone::RationalCone;
use remono::formats::{parse_graph, parse_json, parse_vector, GraphDocument};
use remono::graphs::Graph;
use remono::major::FiniteDistribution;
use remono::rxn::{Multiset, ReactionSystem};
use remono::QVec;

use crate::output::{CliError, Report};

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(path.display().to_string(), 0, format!("cannot read: {e}")))
}

fn envelope(text: &str) -> Option<Value> {
    if !text.trim_start().starts_with('{') {
        return None;
    }
    serde_json::from_str::<Report>(text).ok().map(|r| r.result)
}

/// A JSON document of type `T`, or a report wrapping one.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let origin = path.display().to_string();
    let text = read(path)?;
    if let Some(result) = envelope(&text) {
        return serde_json::from_value(result)
            .map_err(|e| CliError::input(origin, 0, format!("report result: {e}")));
    }
    parse_json(&text).map_err(|e| CliError::input(origin, e.line, e.message))
}

pub fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let origin = path.display().to_string();
    let text = read(path)?;
    if let Some(result) = envelope(&text) {
        let doc: GraphDocument = serde_json::from_value(result).map_err(|e| {
            CliError::input(
                origin.clone(),
                0,
                format!("report result is not a graph: {e}"),
            )
        })?;
        return doc
            .to_graph()
            .map_err(|e| CliError::input(origin, e.line, e.message));
    }
    parse_graph(&text).map_err(|e| CliError::input(origin, e.line, e.message))
}

pub fn load_channel(path: &Path) -> Result<StochasticChannel, CliError> {
    load_json(path)
}

pub fn load_cone(path: &Path) -> Result<RationalCone, CliError> {
    load_json(path)
}

pub fn load_system(path: &Path) -> Result<ReactionSystem, CliError> {
    let origin = path.display().to_string();
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        return load_json(path);
    }
    ReactionSystem::parse(&text).map_err(|e| CliError::input(origin, e.line, e.message))
}

/// A distribution file, or an inline list such as `4/5,1/5`.
pub fn load_distribution(arg: &str) -> Result<FiniteDistribution, CliError> {
    let path = Path::new(arg);
    if path.is_file() {
        return load_json(path);
    }
    let v = parse_vector(arg).map_err(|e| CliError::input(arg, 0, e.message))?;
    FiniteDistribution::new(v).map_err(|e| CliError::input(arg, 0, e))
}

pub fn vector(flag: &str, text: &str) -> Result<QVec, CliError> {
    let path = Path::new(text);
    if path.is_file() {
        let raw: Vec<String> = load_json(path)?;
        return raw
            .iter()
            .map(|s| remono::rational::parse_rational(s).map_err(|e| CliError::input(text, 0, e)))
            .collect();
    }
    parse_vector(text).map_err(|e| CliError::input(flag, 0, e.message))
}

pub fn multiset(flag: &str, text: &str) -> Result<Multiset, CliError> {
    Multiset::parse(text).map_err(|e| CliError::input(flag, 0, e))
}

/// Comma-separated positive integers.
pub fn integers(flag: &str, text: &str) -> Result<Vec<u64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<u64>().map_err(|_| {
                CliError::input(
                    flag,
                    0,
                    format!("expected a nonnegative integer, found {s:?}"),
                )
            })
        })
        .collect()
}
