use std::path::Path;

use num_traits::{One, Signed, Zero};
use serde_json::json;

use remono::farkas::Membership;
use remono::rational::display_rational;
use remono::rxn::{
    atom_conservation_laws, conservation_laws, functional_order_leq, monotone_rays, reachable_leq,
    verify_path, AtomExpansion, Multiset, ReachRefutation, ReactionSystem, RxnError,
};
use remono::{Rational, TriState};

use super::budget;
use crate::args::Global;
use crate::input::{load_system, multiset};
use crate::output::{CliError, CliResult, Output, Status};

fn rxn_error(e: RxnError) -> CliError {
    match e {
        RxnError::GuardExceeded { .. } => CliError::Guard(e.to_string()),
        _ => CliError::Data(e.to_string()),
    }
}

/// A linear form over species, e.g. `2 H2 + O2 - H2O`.
pub(super) fn form(names: &[String], f: &[Rational]) -> String {
    let mut s = String::new();
    for (name, c) in names.iter().zip(f) {
        if c.is_zero() {
            continue;
        }
        let sign = if c.is_negative() { "-" } else { "+" };
        if s.is_empty() {
            if c.is_negative() {
                s.push('-');
            }
        } else {
            s.push_str(&format!(" {sign} "));
        }
        let a = c.abs();
        if !a.is_one() {
            s.push_str(&display_rational(&a));
            s.push(' ');
        }
        s.push_str(name);
    }
    if s.is_empty() {
        "0".into()
    } else {
        s
    }
}

fn operands(sys: &ReactionSystem, x: &str, y: &str) -> Result<(Multiset, Multiset), CliError> {
    let (x, y) = (multiset("--x", x)?, multiset("--y", y)?);
    sys.counts(&x).map_err(rxn_error)?;
    sys.counts(&y).map_err(rxn_error)?;
    Ok((x, y))
}

pub fn reach(path: &Path, x: &str, y: &str, g: &Global) -> CliResult {
    let sys = load_system(path)?;
    let (x, y) = operands(&sys, x, y)?;
    let r = reachable_leq(&sys, &x, &y, &budget(g));
    let status = Status::from_tristate(&r);
    Ok(match r {
        TriState::Yes(p) => {
            let verified = verify_path(&sys, &x, &y, &p);
            let mut out = Output::new(
                status,
                json!({ "reachable": true, "path": &p, "verified": verified }),
            )
            .row("reachable", "yes")
            .row("steps", p.steps.len())
            .row("verified", verified);
            for (i, &r) in p.steps.iter().enumerate() {
                out = out.row(format!("step {}", i + 1), &sys.reactions()[r]);
            }
            out
        }
        TriState::No(reason) => {
            let why = match &reason {
                ReachRefutation::Exhausted { states } => {
                    format!("all {states} reachable states visited")
                }
                ReachRefutation::Separated { functional } => {
                    format!(
                        "monotone {} would have to increase from x to y",
                        form(sys.species(), functional)
                    )
                }
                ReachRefutation::InertMismatch { species } => {
                    format!("inert species differ: {}", species.join(", "))
                }
            };
            Output::new(status, json!({ "reachable": false, "refutation": reason }))
                .row("reachable", "no")
                .row("reason", why)
        }
        TriState::Unknown => Output::new(status, json!({ "reachable": null }))
            .row("reachable", "unknown (budget exhausted)"),
    })
}

pub fn laws(path: &Path, atoms: bool) -> CliResult {
    let sys = load_system(path)?;
    let laws = conservation_laws(&sys);
    let mut result = json!({
        "species": sys.species(),
        "laws": laws.iter().map(|l| remono::rational::format_vec(l)).collect::<Vec<_>>(),
    });
    let mut out =
        Output::new(Status::Computed, serde_json::Value::Null).row("conservation laws", laws.len());
    for l in &laws {
        out = out.row("law", form(sys.species(), l));
    }
    if atoms {
        let exp = AtomExpansion::from_formulas(&sys).map_err(rxn_error)?;
        let a = atom_conservation_laws(&sys, &exp);
        out = out.row("atom laws", a.atom_basis.len());
        for (g, f) in a.atom_basis.iter().zip(&a.species_basis) {
            out = out.row(
                "atoms",
                format!("{}  =  {}", form(&a.atoms, g), form(sys.species(), f)),
            );
        }
        let all_atomic = a.species_basis.len() == laws.len();
        out = out.row("every law is an atom count", all_atomic);
        result["atoms"] = serde_json::to_value(&a).expect("atom laws serialize");
        result["every_law_is_atomic"] = all_atomic.into();
    }
    Ok(out.with_result(result))
}

pub fn monotones(path: &Path) -> CliResult {
    let sys = load_system(path)?;
    let m = monotone_rays(&sys).map_err(rxn_error)?;
    let mut out = Output::new(
        Status::Computed,
        json!({ "species": sys.species(), "cone": &m }),
    )
    .row("extreme rays", m.rays.len())
    .row("conserved directions", m.lineality.len());
    for r in &m.rays {
        out = out.row("ray", form(sys.species(), r));
    }
    for l in &m.lineality {
        out = out.row("law", form(sys.species(), l));
    }
    Ok(out)
}

pub fn forder(path: &Path, x: &str, y: &str) -> CliResult {
    let sys = load_system(path)?;
    let (x, y) = operands(&sys, x, y)?;
    let m = functional_order_leq(&sys, &x, &y).map_err(rxn_error)?;
    Ok(match &m {
        Membership::Inside { ray_coeffs, .. } => {
            let mut out = Output::new(Status::Computed, &m).row("every monotone decreases", true);
            for (r, c) in sys.reactions().iter().zip(ray_coeffs) {
                if !c.is_zero() {
                    out = out.row(format!("{} ×", display_rational(c)), r);
                }
            }
            out
        }
        Membership::Outside { separator } => Output::new(Status::Refuted, &m)
            .row("every monotone decreases", false)
            .row("monotone larger on y", form(sys.species(), separator)),
    })
}
