use std::path::Path;

use serde::Deserialize;
use serde_json::json;

use remono::cone::{
    dual_rays, hahn_banach_extend, is_numerical, rate_region_cone, separate, ConeError,
    ExtensionError, RationalCone, Separation,
};
use remono::rational::{display_vec, serde_q, serde_qmat, unit};
use remono::{ExtValue, QVec, Rational};

use crate::input::{load_cone, load_json, vector};
use crate::output::{CliError, CliResult, Output, Status};

fn cone_error(e: ConeError) -> CliError {
    match e {
        ConeError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
        _ => CliError::Data(e.to_string()),
    }
}

fn load_vector(cone: &RationalCone, flag: &str, text: &str) -> Result<QVec, CliError> {
    let v = vector(flag, text)?;
    if v.len() != cone.dim() {
        return Err(CliError::Usage(format!(
            "{flag} has {} entries, the cone has dimension {}",
            v.len(),
            cone.dim()
        )));
    }
    Ok(v)
}

pub fn contains(path: &Path, v: &str) -> CliResult {
    let cone = load_cone(path)?;
    let v = load_vector(&cone, "--v", v)?;
    let inside = cone.contains(&v).map_err(cone_error)?;
    Ok(
        Output::new(Status::from_bool(inside), json!({ "contains": inside }))
            .row("contains", inside),
    )
}

pub fn close(path: &Path) -> CliResult {
    let cone = load_cone(path)?;
    let closed = cone.closure().to_cone();
    let text = serde_json::to_string_pretty(&closed).expect("cone documents serialize");
    Ok(Output::new(Status::Computed, &closed).text(text))
}

pub fn dual(path: &Path) -> CliResult {
    let cone = load_cone(path)?;
    let d = dual_rays(&cone.closure()).map_err(cone_error)?;
    let mut out = Output::new(Status::Computed, &d)
        .row("rays", d.rays.len())
        .row("lineality", d.lineality.len());
    for r in &d.rays {
        out = out.row("ray", display_vec(r));
    }
    for l in &d.lineality {
        out = out.row("line", display_vec(l));
    }
    Ok(out)
}

pub fn separate_cmd(path: &Path, v: &str) -> CliResult {
    let cone = load_cone(path)?;
    let v = load_vector(&cone, "--v", v)?;
    let s = separate(&cone, &v).map_err(cone_error)?;
    Ok(match &s {
        Separation::InClosure { .. } => Output::new(Status::Computed, &s).row("in closure", true),
        Separation::Separated { functional } => Output::new(Status::Refuted, &s)
            .row("in closure", false)
            .row("separating functional", display_vec(functional)),
    })
}

pub fn rate(path: &Path, x: &str, y: &str) -> CliResult {
    let cone = load_cone(path)?;
    let (x, y) = (load_vector(&cone, "--x", x)?, load_vector(&cone, "--y", y)?);
    let r = rate_region_cone(&cone, &x, &y).map_err(cone_error)?;
    let mut out = Output::new(Status::Computed, &r)
        .summary(format!("Rmax = {}", r.r_max))
        .row("primal", &r.primal)
        .row("dual", &r.dual);
    if let Some(a) = &r.argmin {
        out = out.row("attained by", display_vec(a));
    }
    if matches!(r.r_max, ExtValue::Infinite) {
        out = out.row("note", "no dual ray is positive on y");
    }
    Ok(out)
}

pub fn numerical(path: &Path) -> CliResult {
    let cone = load_cone(path)?;
    let r = is_numerical(&cone).map_err(cone_error)?;
    let mut out = Output::new(Status::from_bool(r.numerical), &r)
        .row("numerical", r.numerical)
        .row("pointed quotient dimension", r.quotient_dim);
    if let Some(e) = &r.embedding {
        out = out.row("embedding", display_vec(e));
    }
    if let Some(u) = &r.unreflected {
        out = out.row("unreflected direction", display_vec(u));
    }
    Ok(out)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ExtendInput {
    #[serde(with = "serde_qmat")]
    forms: Vec<QVec>,
    #[serde(with = "serde_qmat")]
    basis: Vec<QVec>,
    #[serde(with = "values")]
    values: Vec<Rational>,
    /// Directions to extend along; the standard basis when absent.
    #[serde(with = "serde_qmat", default)]
    full_basis: Vec<QVec>,
}

mod values {
    use super::*;
    use serde::Deserializer;

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        #[derive(Deserialize)]
        struct Q(#[serde(with = "serde_q")] Rational);
        Ok(Vec::<Q>::deserialize(d)?.into_iter().map(|q| q.0).collect())
    }
}

pub fn extend(file: &Path) -> CliResult {
    let input: ExtendInput = load_json(file)?;
    let full = if input.full_basis.is_empty() {
        let d = input.forms.first().map_or(0, Vec::len);
        (0..d).map(|i| unit(d, i)).collect()
    } else {
        input.full_basis
    };
    match hahn_banach_extend(&input.forms, &input.basis, &input.values, &full) {
        Ok(ext) => {
            let status = if ext.dominated {
                Status::Computed
            } else {
                Status::Unknown
            };
            Ok(Output::new(status, &ext)
                .row("functional", display_vec(&ext.functional))
                .row("steps", ext.steps.len())
                .row("dominated", ext.dominated))
        }
        Err(e @ ExtensionError::NotDominated(_)) => Ok(Output::new(
            Status::Refuted,
            json!({ "error": e.to_string() }),
        )
        .row("extension", e.to_string())),
        Err(e) => Err(CliError::Data(e.to_string())),
    }
}
