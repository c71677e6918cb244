//! Command-line front end. [`run_command`] does all the work and returns the
//! exit status with the captured output, so the binary is a thin wrapper.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::cache::{Cache, CacheRecord};
use crate::campaign::{
    parse_n_range, prepare_output, run_campaign, to_table, witness_summary, write_reports,
    CampaignKind, CampaignPlan, DEFAULT_MAX_ANCHOR, DEFAULT_MAX_VERTICES,
};
use crate::domination::{
    build_np_gadget, domination_number, minimum_set, nonsplit_domination_number, DominationKind,
};
use crate::error::{Error, Result};
use crate::expr::parse_graph;
use crate::formulas::KnownFamily;
use crate::graph::Graph;
use crate::numbers::{NumberEngine, NumberKind, NumberOptions, Semantics, ThresholdOutcome};
use crate::ENGINE_VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_EXACTNESS: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "nsdcp",
    version,
    about = "Exact pebbling and non-split domination numbers of small graphs"
)]
struct Cli {
    /// Result cache file (JSON lines); overrides NSDCP_CACHE.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Ignore any configured cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Vertex and edge counts, labels and digest of a graph.
    Info { graph: String },
    /// Non-split domination number, with a minimum set.
    GammaNs { graph: String },
    /// Exact cover, domination cover or non-split domination cover number.
    Number(NumberArgs),
    /// Check every configuration of one size.
    Verify {
        #[command(flatten)]
        number: NumberArgs,
        /// Configuration size.
        #[arg(short = 'N', long = "size")]
        size: u64,
    },
    /// The hardness gadget: the graph joined to an adjacent pair.
    Gadget { graph: String },
    /// Compare closed forms with exact values over a range of instances.
    Campaign(CampaignArgs),
}

#[derive(Debug, Args)]
struct NumberArgs {
    graph: String,
    #[arg(long, value_parser = ["cover", "dcp", "nsdcp"])]
    kind: String,
    #[arg(long, value_parser = ["contains", "exact-support"], default_value = "contains")]
    mode: String,
    /// Node cap per solver call; needed beyond 10 vertices or 64 pebbles.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Debug, Args)]
struct CampaignArgs {
    /// Comma-separated, e.g. middle_path,middle_cycle.
    #[arg(long, value_delimiter = ',', default_value = "middle_path,middle_cycle")]
    families: Vec<String>,
    /// Inclusive range such as 2..4.
    #[arg(long, default_value = "2..4")]
    n_range: String,
    /// Output directory for campaign.csv, campaign.json and campaign.txt.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "nsdcp")]
    kinds: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "contains,exact-support")]
    modes: Vec<String>,
    #[arg(long, default_value_t = DEFAULT_MAX_VERTICES)]
    max_vertices: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ANCHOR)]
    max_anchor: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

fn status_for(e: &Error) -> i32 {
    match e {
        Error::Exactness(_) => EXIT_EXACTNESS,
        _ => EXIT_USAGE,
    }
}

/// Parses and runs one command line (`argv[0]` is the program name).
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutput {
                    status: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandOutput {
                    status: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut out = String::new();
    match execute(&cli, &mut out) {
        Ok(()) => CommandOutput {
            status: EXIT_OK,
            stdout: out,
            stderr: String::new(),
        },
        Err(e) => CommandOutput {
            status: status_for(&e),
            stdout: out,
            stderr: format!("error: {e}\n"),
        },
    }
}

fn open_cache(cli: &Cli) -> Option<Cache> {
    if cli.no_cache {
        return None;
    }
    cli.cache.clone().map(Cache::open).or_else(Cache::from_env)
}

fn graph(expr: &str) -> Result<Graph> {
    parse_graph(expr).map_err(|e| match e {
        Error::Io(io) => Error::Usage(format!("cannot read graph for {expr:?}: {io}")),
        other => other,
    })
}

fn set_names(g: &Graph, set: crate::VertexSet) -> String {
    let names: Vec<&str> = set.iter().map(|v| g.name(v)).collect();
    format!("{{{}}}", names.join(", "))
}

fn execute(cli: &Cli, out: &mut String) -> Result<()> {
    match &cli.command {
        Command::Info { graph: expr } => {
            let g = graph(expr)?;
            info(&g, expr, out);
        }
        Command::GammaNs { graph: expr } => {
            let g = graph(expr)?;
            if !g.is_connected() {
                return Err(Error::Disconnected);
            }
            let set = minimum_set(&g, DominationKind::NonsplitDominating)?;
            let _ = writeln!(out, "gamma_ns: {}", set.len());
            let _ = writeln!(out, "set: {}", set_names(&g, set));
        }
        Command::Number(args) => number(cli, args, out)?,
        Command::Verify { number, size } => verify(number, *size, out)?,
        Command::Gadget { graph: expr } => {
            let g = graph(expr)?;
            let gadget = build_np_gadget(&g)?;
            info(&gadget, &format!("gadget({expr})"), out);
            let _ = writeln!(out, "edge list:");
            for (u, v) in gadget.edges() {
                let _ = writeln!(out, "  {u} {v}  # {} {}", gadget.name(u), gadget.name(v));
            }
            let gamma = domination_number(&g)?;
            let _ = writeln!(out, "gamma(G): {gamma}");
            let _ = writeln!(out, "gamma(G) + 1: {}", gamma + 1);
            let _ = writeln!(out, "gamma_ns(G*): {}", nonsplit_domination_number(&gadget)?);
        }
        Command::Campaign(args) => campaign(cli, args, out)?,
    }
    Ok(())
}

fn info(g: &Graph, expr: &str, out: &mut String) {
    let _ = writeln!(out, "graph: {expr}");
    let _ = writeln!(out, "vertices: {}", g.vertex_count());
    let _ = writeln!(out, "edges: {}", g.edge_count());
    let _ = writeln!(out, "connected: {}", if g.is_connected() { "yes" } else { "no" });
    let _ = writeln!(out, "digest: {}", g.canonical_key());
    let names: Vec<String> = (0..g.vertex_count())
        .map(|v| format!("{v}:{}", g.name(v)))
        .collect();
    let _ = writeln!(out, "labels: {}", names.join(" "));
}

fn parse_number_args(args: &NumberArgs) -> Result<(NumberKind, Semantics, NumberOptions)> {
    let options = NumberOptions {
        budget: args.budget,
        check_witnesses: true,
    };
    Ok((args.kind.parse()?, args.mode.parse()?, options))
}

fn number(cli: &Cli, args: &NumberArgs, out: &mut String) -> Result<()> {
    let g = graph(&args.graph)?;
    let (kind, semantics, options) = parse_number_args(args)?;
    let engine = NumberEngine::new(&g, kind, semantics, options)?;
    let cache = open_cache(cli);
    let digest = g.canonical_key();
    let _ = writeln!(out, "graph: {}", args.graph);
    let _ = writeln!(out, "kind: {kind}");
    let _ = writeln!(out, "mode: {semantics}");
    if let Some(record) = cache.as_ref().and_then(|c| c.get(&digest, kind, semantics)) {
        let _ = writeln!(out, "value: {}", record.value);
        let _ = writeln!(
            out,
            "worst witness: {} ({})",
            record.worst_witness,
            witness_summary(&g, &record.worst_witness)
        );
        let _ = writeln!(out, "source: cache");
        return Ok(());
    }
    let result = engine.compute()?;
    if let Some(cache) = &cache {
        cache.put(&CacheRecord::from_result(&result));
    }
    let _ = writeln!(out, "value: {}", result.value);
    let _ = writeln!(
        out,
        "worst witness: {} ({})",
        result.worst_witness,
        witness_summary(&g, &result.worst_witness)
    );
    let _ = writeln!(
        out,
        "stacked bound: {} (vertex {})",
        result.stacked_bound.value,
        g.name(result.stacked_bound.vertex)
    );
    let _ = writeln!(out, "configurations checked: {}", result.stats.configurations_checked);
    let _ = writeln!(out, "nodes explored: {}", result.stats.nodes_explored);
    let _ = writeln!(out, "sweeps: {}", result.stats.sweeps);
    let _ = writeln!(out, "source: computed ({ENGINE_VERSION})");
    Ok(())
}

fn verify(args: &NumberArgs, size: u64, out: &mut String) -> Result<()> {
    let g = graph(&args.graph)?;
    let (kind, semantics, options) = parse_number_args(args)?;
    let report = NumberEngine::new(&g, kind, semantics, options)?.verify(size)?;
    let _ = writeln!(out, "graph: {}", args.graph);
    let _ = writeln!(out, "kind: {kind}");
    let _ = writeln!(out, "mode: {semantics}");
    let _ = writeln!(out, "size: {size}");
    match &report.outcome {
        ThresholdOutcome::AllSolvable => {
            let _ = writeln!(out, "result: all solvable");
        }
        ThresholdOutcome::Counterexample(c) => {
            let _ = writeln!(out, "result: counterexample");
            let _ = writeln!(out, "counterexample: {c}");
        }
    }
    let _ = writeln!(out, "configurations checked: {}", report.stats.configurations_checked);
    Ok(())
}

fn campaign(cli: &Cli, args: &CampaignArgs, out: &mut String) -> Result<()> {
    let (n_min, n_max) = parse_n_range(&args.n_range)?;
    let plan = CampaignPlan {
        families: args
            .families
            .iter()
            .map(|f| f.trim().parse::<KnownFamily>())
            .collect::<Result<_>>()?,
        n_min,
        n_max,
        kinds: args
            .kinds
            .iter()
            .map(|k| k.trim().parse::<CampaignKind>())
            .collect::<Result<_>>()?,
        modes: args
            .modes
            .iter()
            .map(|m| m.trim().parse::<Semantics>())
            .collect::<Result<_>>()?,
        max_vertices: args.max_vertices,
        max_anchor: args.max_anchor,
        workers: args.workers,
    };
    prepare_output(&args.out).map_err(|e| {
        Error::Usage(format!("output directory {} is not writable: {e}", args.out.display()))
    })?;
    let cache = open_cache(cli);
    let report = run_campaign(&plan, cache.as_ref())?;
    write_reports(&report, &args.out)?;
    out.push_str(&to_table(&report));
    let _ = writeln!(out, "reports written to {}", args.out.display());
    Ok(())
}
