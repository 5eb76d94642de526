use remono::numsg::{gaps as gap_report, normalize as normalize_generators, NumsgError};

use crate::input::integers;
use crate::output::{braces, CliError, CliResult, Output, Status};

fn numsg_error(e: NumsgError) -> CliError {
    CliError::Usage(format!("--gen: {e}"))
}

pub fn normalize(gen: &str) -> CliResult {
    let s = normalize_generators(&integers("--gen", gen)?).map_err(numsg_error)?;
    Ok(Output::new(Status::Computed, &s).summary(format!(
        "d={}; normalized {}",
        s.d,
        braces(&s.normalized)
    )))
}

pub fn gaps(gen: &str) -> CliResult {
    let s = normalize_generators(&integers("--gen", gen)?).map_err(numsg_error)?;
    let r = gap_report(&s.normalized).map_err(numsg_error)?;
    let result = serde_json::json!({ "d": s.d, "normalized": s.normalized, "gaps": r.gaps, "frobenius": r.frobenius });
    Ok(Output::new(Status::Computed, result).summary(format!(
        "d={}; gaps {}; frobenius {}",
        s.d,
        braces(&r.gaps),
        r.frobenius
    )))
}
