mod channel;
mod cone;
mod graph;
mod major;
mod numsg;
mod rate;
mod rxn;

use remono::Budget;

use crate::args::{
    ChannelCmd, Cli, Command, ConeCmd, Global, GraphCmd, MajorCmd, NumsgCmd, RateCmd, RxnCmd,
};
use crate::output::CliResult;

pub fn budget(g: &Global) -> Budget {
    Budget {
        nodes: g.budget_nodes,
        depth: g.budget_depth,
        jobs: g.jobs,
        ..Budget::default()
    }
}

/// Runs the subcommand and returns its name (`"graph hom"`) with the outcome.
pub fn dispatch(cli: &Cli) -> (&'static str, CliResult) {
    let g = &cli.global;
    match &cli.command {
        Command::Graph(c) => match c {
            GraphCmd::Invariants { file } => ("graph invariants", graph::invariants(file, g)),
            GraphCmd::Hom { source, target } => ("graph hom", graph::hom(source, target, g)),
            GraphCmd::Product { a, b, join } => ("graph product", graph::product(a, b, *join)),
            GraphCmd::Capacity { file, max_power } => {
                ("graph capacity", graph::capacity(file, *max_power, g))
            }
            GraphCmd::Catalyst {
                x,
                x_power,
                y,
                y_power,
                copies,
            } => (
                "graph catalyst",
                graph::catalyst(x, *x_power, y, *y_power, *copies, g),
            ),
        },
        Command::Cone(c) => match c {
            ConeCmd::Contains { cone: path, v } => ("cone contains", cone::contains(path, v)),
            ConeCmd::Close { cone: path } => ("cone close", cone::close(path)),
            ConeCmd::Dual { cone: path } => ("cone dual", cone::dual(path)),
            ConeCmd::Separate { cone: path, v } => ("cone separate", cone::separate_cmd(path, v)),
            ConeCmd::Rate { cone: path, x, y } => ("cone rate", cone::rate(path, x, y)),
            ConeCmd::Numerical { cone: path } => ("cone numerical", cone::numerical(path)),
            ConeCmd::Extend { file } => ("cone extend", cone::extend(file)),
        },
        Command::Rxn(c) => match c {
            RxnCmd::Reach { system, x, y } => ("rxn reach", rxn::reach(system, x, y, g)),
            RxnCmd::Laws { system, atoms } => ("rxn laws", rxn::laws(system, *atoms)),
            RxnCmd::Monotones { system } => ("rxn monotones", rxn::monotones(system)),
            RxnCmd::Forder { system, x, y } => ("rxn forder", rxn::forder(system, x, y)),
        },
        Command::Channel(c) => match c {
            ChannelCmd::Graph { channel: path } => ("channel graph", channel::graph(path)),
            ChannelCmd::Verify { p, q, enc, dec } => {
                ("channel verify", channel::verify(p, q, enc, dec))
            }
            ChannelCmd::Search {
                p,
                q,
                restarts,
                iterations,
                seed,
            } => (
                "channel search",
                channel::search(p, q, *restarts, *iterations, *seed, g),
            ),
            ChannelCmd::Tensor { p, q } => ("channel tensor", channel::tensor(p, q)),
        },
        Command::Major(c) => match c {
            MajorCmd::Leq { p, q } => ("major leq", major::leq(p, q)),
            MajorCmd::Renyi { p, t } => ("major renyi", major::renyi(p, t, g)),
            MajorCmd::Rate {
                p,
                q,
                resolution,
                max_copies,
            } => ("major rate", major::rate(p, q, *resolution, *max_copies, g)),
        },
        Command::Numsg(c) => match c {
            NumsgCmd::Normalize { gen } => ("numsg normalize", numsg::normalize(gen)),
            NumsgCmd::Gaps { gen } => ("numsg gaps", numsg::gaps(gen)),
        },
        Command::Rate(c) => match c {
            RateCmd::Slice { pair, n_max, m_max } => {
                ("rate slice", rate::slice(pair, *n_max, *m_max, g))
            }
            RateCmd::Bounds { pair, n_max, m_max } => {
                ("rate bounds", rate::bounds(pair, *n_max, *m_max, g))
            }
        },
    }
}
