use serde_json::{json, Value};

use remono::channels::{distinguishability_graph, ChannelInstance, StochasticChannel};
use remono::graphs::{fractional_chromatic, lovasz_complement, Graph, GraphExpr, GraphInstance};
use remono::major::{FiniteDistribution, MajorInstance, MajorOrder, RenyiFunctional, RenyiOrder};
use remono::monoid::{rate_bounds, slice as rate_slice, Functional};
use remono::rational::{display_rational, dot, format_rational, neg, to_f64};
use remono::rxn::{monotone_rays, Multiset, ReactionInstance};
use remono::{MonoidInstance, QVec, RateInterval};

use super::budget;
use crate::args::{Global, Instance, Orientation, Pair};
use crate::input::{load_channel, load_distribution, load_graph, load_system, multiset};
use crate::output::{CliError, CliResult, Output, Status};

fn slice_output<I: MonoidInstance>(
    inst: &I,
    x: &I::Elem,
    y: &I::Elem,
    n_max: u32,
    m_max: u32,
    g: &Global,
) -> Output {
    let s = rate_slice(inst, x, y, n_max, m_max, &budget(g));
    let best = s.best_slope();
    let status = if s.unknown.is_empty() {
        Status::Computed
    } else {
        Status::Unknown
    };
    let result = json!({
        "n_max": n_max,
        "m_max": m_max,
        "points": s.pairs(),
        "unknown": s.unknown,
        "best_slope": best.as_ref().map(|(r, _)| format_rational(r)),
        "best_point": best.as_ref().map(|(_, p)| p),
    });
    let mut out = Output::new(status, result)
        .row("witnessed points", s.points.len())
        .row("undecided points", s.unknown.len());
    if let Some((r, (n, m))) = &best {
        out = out.row(
            "best slope",
            format!("{} at (n, m) = ({n}, {m})", display_rational(r)),
        );
    }
    let grid: Vec<String> = (0..=n_max)
        .rev()
        .map(|n| {
            (0..=m_max)
                .map(|m| {
                    if s.contains(n, m) {
                        '#'
                    } else if s.unknown.contains(&(n, m)) {
                        '?'
                    } else {
                        '.'
                    }
                })
                .collect()
        })
        .collect();
    out.text(format!(
        "rows n = {n_max}..0, columns m = 0..{m_max}\n{}\n",
        grid.join("\n")
    ))
}

fn bounds_output(interval: RateInterval) -> Output {
    let mut out = Output::new(Status::Computed, &interval)
        .row("lower", &interval.lower)
        .row("upper", &interval.upper);
    if let Some((n, m)) = interval.lower_witness {
        out = out.row("lower witnessed at", format!("(n, m) = ({n}, {m})"));
    }
    if let Some(src) = &interval.upper_source {
        out = out.row("upper from", src);
    }
    out
}

fn need_system(pair: &Pair) -> Result<ReactionInstance, CliError> {
    let path = pair
        .system
        .as_ref()
        .ok_or_else(|| CliError::Usage("--system is required for --instance rxn".into()))?;
    Ok(ReactionInstance {
        system: load_system(path)?,
    })
}

fn rxn_operands(inst: &ReactionInstance, pair: &Pair) -> Result<(Multiset, Multiset), CliError> {
    let (x, y) = (multiset("--x", &pair.x)?, multiset("--y", &pair.y)?);
    for m in [&x, &y] {
        inst.system
            .counts(m)
            .map_err(|e| CliError::Data(e.to_string()))?;
    }
    Ok((x, y))
}

fn major_instance(pair: &Pair) -> MajorInstance {
    MajorInstance::new(match pair.order {
        Orientation::Majorizes => MajorOrder::Majorizes,
        Orientation::MajorizedBy => MajorOrder::MajorizedBy,
    })
}

fn graph_path(s: &str) -> &std::path::Path {
    std::path::Path::new(s)
}

pub fn slice(pair: &Pair, n_max: u32, m_max: u32, g: &Global) -> CliResult {
    Ok(match pair.instance {
        Instance::Graph => {
            let (x, y) = (
                load_graph(graph_path(&pair.x))?,
                load_graph(graph_path(&pair.y))?,
            );
            slice_output(
                &GraphInstance::new(),
                &GraphExpr::from(x),
                &GraphExpr::from(y),
                n_max,
                m_max,
                g,
            )
        }
        Instance::Channel => {
            let (x, y) = (
                load_channel(graph_path(&pair.x))?,
                load_channel(graph_path(&pair.y))?,
            );
            slice_output(&ChannelInstance::default(), &x, &y, n_max, m_max, g)
        }
        Instance::Major => {
            let (x, y) = (load_distribution(&pair.x)?, load_distribution(&pair.y)?);
            slice_output(&major_instance(pair), &x, &y, n_max, m_max, g)
        }
        Instance::Rxn => {
            let inst = need_system(pair)?;
            let (x, y) = rxn_operands(&inst, pair)?;
            slice_output(&inst, &x, &y, n_max, m_max, g)
        }
    })
}

type GraphMonotone = Box<dyn Fn(&Graph) -> f64 + Sync>;

/// `log2` of a multiplicative graph monotone, or `+∞` above the size guards.
fn graph_monotones(tol: f64) -> Vec<(&'static str, GraphMonotone)> {
    vec![
        (
            "log2 fractional chromatic",
            Box::new(|g: &Graph| {
                fractional_chromatic(g).map_or(f64::INFINITY, |r| to_f64(&r).log2())
            }),
        ),
        (
            "log2 lovasz(complement)",
            Box::new(move |g: &Graph| {
                lovasz_complement(g, tol).map_or(f64::INFINITY, |l| l.value.log2())
            }),
        ),
    ]
}

struct Lifted<E> {
    name: String,
    f: Box<dyn Fn(&E) -> f64 + Sync>,
}

impl<E> Functional<E> for Lifted<E> {
    fn name(&self) -> String {
        self.name.clone()
    }
    fn eval(&self, x: &E) -> f64 {
        (self.f)(x)
    }
}

/// Keeps only monotones that are finite on `y`; an infinite value there would
/// be mistaken for a bound.
fn finite_on<E>(fs: Vec<Lifted<E>>, y: &E) -> Vec<Lifted<E>> {
    fs.into_iter().filter(|f| (f.f)(y).is_finite()).collect()
}

fn run_bounds<I: MonoidInstance>(
    inst: &I,
    x: &I::Elem,
    y: &I::Elem,
    n_max: u32,
    m_max: Option<u32>,
    fs: &[Lifted<I::Elem>],
    g: &Global,
) -> Output {
    let refs: Vec<&dyn Functional<I::Elem>> =
        fs.iter().map(|f| f as &dyn Functional<I::Elem>).collect();
    bounds_output(rate_bounds(inst, x, y, n_max, m_max, &refs, &budget(g)))
}

pub fn bounds(pair: &Pair, n_max: u32, m_max: Option<u32>, g: &Global) -> CliResult {
    Ok(match pair.instance {
        Instance::Graph => {
            let (x, y) = (
                GraphExpr::from(load_graph(graph_path(&pair.x))?),
                GraphExpr::from(load_graph(graph_path(&pair.y))?),
            );
            let fs = graph_monotones(g.tol)
                .into_iter()
                .map(|(name, f)| Lifted::<GraphExpr> {
                    name: name.into(),
                    f: Box::new(move |e: &GraphExpr| f(&e.flatten())),
                })
                .collect();
            run_bounds(
                &GraphInstance::new(),
                &x,
                &y,
                n_max,
                m_max,
                &finite_on(fs, &y),
                g,
            )
        }
        Instance::Channel => {
            let (x, y) = (
                load_channel(graph_path(&pair.x))?,
                load_channel(graph_path(&pair.y))?,
            );
            let fs = graph_monotones(g.tol)
                .into_iter()
                .map(|(name, f)| Lifted::<StochasticChannel> {
                    name: name.into(),
                    f: Box::new(move |c: &StochasticChannel| f(&distinguishability_graph(c))),
                })
                .collect();
            run_bounds(
                &ChannelInstance::default(),
                &x,
                &y,
                n_max,
                m_max,
                &finite_on(fs, &y),
                g,
            )
        }
        Instance::Major => {
            let (x, y) = (load_distribution(&pair.x)?, load_distribution(&pair.y)?);
            let inst = major_instance(pair);
            // Rényi entropies only grow in the majorized-by direction.
            let fs: Vec<RenyiFunctional> = match pair.order {
                Orientation::MajorizedBy => [
                    RenyiOrder::Finite(0.0),
                    RenyiOrder::Finite(0.5),
                    RenyiOrder::Finite(1.0),
                    RenyiOrder::Finite(2.0),
                    RenyiOrder::Infinity,
                ]
                .into_iter()
                .map(RenyiFunctional)
                .collect(),
                Orientation::Majorizes => Vec::new(),
            };
            let refs: Vec<&dyn Functional<FiniteDistribution>> =
                fs.iter().map(|f| f as &dyn Functional<_>).collect();
            let mut out =
                bounds_output(rate_bounds(&inst, &x, &y, n_max, m_max, &refs, &budget(g)));
            out.result["tol"] = json!(g.tol);
            out
        }
        Instance::Rxn => {
            let inst = need_system(pair)?;
            let (x, y) = rxn_operands(&inst, pair)?;
            let cone = monotone_rays(&inst.system).map_err(|e| CliError::Guard(e.to_string()))?;
            let mut rays: Vec<QVec> = cone.rays.clone();
            for l in &cone.lineality {
                rays.push(l.clone());
                rays.push(neg(l));
            }
            let species = inst.system.clone();
            let fs: Vec<Lifted<Multiset>> = rays
                .into_iter()
                .map(|r| {
                    let sys = species.clone();
                    Lifted::<Multiset> {
                        name: format!("[{}]", super::rxn::form(sys.species(), &r)),
                        f: Box::new(move |m: &Multiset| {
                            sys.vector(m).map_or(f64::NAN, |v| to_f64(&dot(&r, &v)))
                        }),
                    }
                })
                .collect();
            let mut out = run_bounds(&inst, &x, &y, n_max, m_max, &fs, g);
            out.result["monotones"] = Value::from(fs.len());
            out
        }
    })
}
