//! Command-line front end.

use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use crate::ga::{solve, solve_exact, GaConfig, Model, SolveResult};
use crate::generate::{gen_random_graph, GenFlags};
use crate::graph::{load_graph, to_dot, EdgeSelection, Graph, GraphFormat};
use crate::metrics::{evaluate, ObjectiveSpec, Sense};
use crate::peeling::{peel, PeelMode};
use crate::report::{named_edges, Report, SCHEMA_VERSION};
use crate::spanning::{spanning_tree_count, DEFAULT_ENUMERATION_CAP};
use crate::tree::{decode_tree, greedy_tree, Decoded, DegreeSequence};
use crate::variants::{solve_variant, solve_variant_exact, VariantKind, VariantSpec};

#[derive(Debug, Parser)]
#[command(
    name = "densetree",
    version,
    about = "Dense and sparse spanning trees via genetic search"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Genetic search for an optimal spanning tree.
    Solve(SolveArgs),
    /// Exhaustive optimum over all spanning trees.
    Exact(ExactArgs),
    /// Constrained variant: k-subtree, Steiner, conflict pairs, degree bound.
    Variant(VariantArgs),
    /// Repeatedly remove the tree path between the two top hubs.
    PeelNodes(SolveArgs),
    /// Repeatedly remove the tree edges with the largest degree sum.
    PeelEdges(SolveArgs),
    /// Build the greedy tree of a degree sequence.
    GreedyTree(GreedyArgs),
    /// Evaluate objectives on a given spanning tree.
    Metrics(MetricsArgs),
    /// Generate a random host graph.
    GenRandom(GenArgs),
    /// Count spanning trees.
    Count(CountArgs),
}

#[derive(Debug, Args)]
struct Input {
    /// Input graph file.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// `edge-list` or `adjacency-csv`.
    #[arg(long, default_value = "edge-list")]
    format: String,
}

#[derive(Debug, Args)]
struct Outputs {
    /// Write the JSON report here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Write a Graphviz rendering here.
    #[arg(long, value_name = "PATH")]
    dot: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Objective {
    /// `cvec:4,2,2,2`, `spow:2`, `spow:1/2`, `wiener` or `subtrees`.
    #[arg(long, default_value = "spow:2")]
    objective: String,
    #[arg(long, default_value = "max")]
    sense: String,
}

#[derive(Debug, Args)]
struct GaArgs {
    /// `key = value` file with search settings; flags override it.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// 1: direct edge set, 2: Kruskal-decoded.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    gens: Option<usize>,
    #[arg(long)]
    stall: Option<usize>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    outputs: Outputs,
    #[command(flatten)]
    objective: Objective,
    #[command(flatten)]
    ga: GaArgs,
}

#[derive(Debug, Args)]
struct ExactArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    outputs: Outputs,
    #[command(flatten)]
    objective: Objective,
    /// Refuse graphs with more spanning trees than this.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
}

#[derive(Debug, Args)]
struct VariantArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    outputs: Outputs,
    #[command(flatten)]
    objective: Objective,
    #[command(flatten)]
    ga: GaArgs,
    /// `k-subtree:K`, `steiner:a,b,c`, `conflicts:A-B,C-D` or `degree-bound:K`.
    #[arg(long)]
    variant: String,
    /// Solve exhaustively instead of by genetic search.
    #[arg(long)]
    exact: bool,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    cap: u64,
}

#[derive(Debug, Args)]
struct GreedyArgs {
    /// Comma-separated degree sequence.
    #[arg(long)]
    degrees: String,
    #[command(flatten)]
    outputs: Outputs,
}

#[derive(Debug, Args)]
struct MetricsArgs {
    #[command(flatten)]
    input: Input,
    /// Comma-separated tree edge labels; defaults to every edge.
    #[arg(long)]
    labels: Option<String>,
    /// Evaluate only this objective.
    #[arg(long)]
    objective: Option<String>,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    connected: bool,
    #[arg(long)]
    planted_star: bool,
    #[arg(long)]
    planted_path: bool,
    /// Write the edge list here instead of standard output.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    input: Input,
}

/// Runs the CLI on `argv` (program name first) with the process streams.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// Like [`run_cli`] with explicit output streams. Returns the exit code:
/// 0 on success, 2 for usage errors, 1 for anything else.
pub fn run_cli_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<()> {
    match cmd {
        Command::Solve(a) => {
            let g = read_graph(&a.input)?;
            let spec = objective(&a.objective)?;
            let cfg = ga_config(&a.ga)?;
            let t = Instant::now();
            let r = solve(&g, &spec, &cfg)?;
            finish_solve("solve", &g, &spec, &r, Some(&cfg), t, &a.outputs, out)
        }
        Command::Exact(a) => {
            let g = read_graph(&a.input)?;
            let spec = objective(&a.objective)?;
            let t = Instant::now();
            let r = solve_exact(&g, &spec, a.cap)?;
            finish_solve("exact", &g, &spec, &r, None, t, &a.outputs, out)
        }
        Command::Variant(a) => {
            let g = read_graph(&a.input)?;
            let spec = objective(&a.objective)?;
            let cfg = ga_config(&a.ga)?;
            let v = VariantSpec::new(VariantKind::parse(&a.variant, &g)?, spec.clone());
            let t = Instant::now();
            let r = if a.exact {
                solve_variant_exact(&g, &v, a.cap)?
            } else {
                solve_variant(&g, &v, &cfg)?
            };
            if !r.feasible {
                return Err(Error::NoFeasible);
            }
            print_tree(out, &g, &r)?;
            let mut report = Report::from_solve("variant", &g, &spec, &r, (!a.exact).then_some(&cfg), ms(t));
            report.variant = Some(v.kind);
            write_outputs(&a.outputs, &report, || {
                to_dot(&g, Some(r.best_selection.labels()), true)
            })
        }
        Command::PeelNodes(a) => run_peel("peel-nodes", PeelMode::Nodes, a, out),
        Command::PeelEdges(a) => run_peel("peel-edges", PeelMode::Edges, a, out),
        Command::GreedyTree(a) => {
            let degrees = parse_list::<usize>(&a.degrees, "degree")?;
            let tree = greedy_tree(&DegreeSequence::new(degrees))?;
            let g = Graph::from_pairs(tree.order(), tree.edges())?;
            writeln!(out, "edges:")?;
            for e in g.edges() {
                writeln!(out, "  {} {}", g.name(e.u), g.name(e.v))?;
            }
            let labels: Vec<usize> = (1..=g.edge_count()).collect();
            let report = Report {
                schema_version: SCHEMA_VERSION,
                command: "greedy-tree".into(),
                objective: None,
                sense: None,
                variant: None,
                value: None,
                feasible: true,
                edges: named_edges(&g, &labels),
                edge_labels: labels,
                generations: 0,
                evaluations: 0,
                wall_time_ms: 0,
                seed: None,
                model: None,
                config: None,
                peeling: None,
            };
            write_outputs(&a.outputs, &report, || to_dot(&g, None, false))
        }
        Command::Metrics(a) => {
            let g = read_graph(&a.input)?;
            let labels = match &a.labels {
                Some(text) => parse_list::<usize>(text, "label")?,
                None => (1..=g.edge_count()).collect(),
            };
            let sel = EdgeSelection::new(labels)?;
            let kinds: Vec<String> = match &a.objective {
                Some(k) => vec![k.clone()],
                None => ["spow:2", "spow:3", "spow:1/2", "cvec:4,2,2,2", "wiener", "subtrees"]
                    .map(String::from)
                    .to_vec(),
            };
            let depth = (g.vertex_count().max(2) - 1).max(4);
            let tree = match decode_tree(&g, &sel, depth)? {
                Decoded::Tree(t) => t,
                Decoded::Infeasible { components } => {
                    return Err(Error::InvalidSelection(format!(
                        "labels do not form a spanning tree ({components} components)"
                    )))
                }
            };
            for k in kinds {
                let spec = ObjectiveSpec::parse(&k, Sense::Maximize)?;
                let value = if matches!(spec.kind, crate::metrics::ObjectiveKind::SubtreeCount) {
                    crate::metrics::subtree_count(&tree).to_string()
                } else {
                    evaluate(&tree, &spec)?.to_string()
                };
                writeln!(out, "{k}: {value}")?;
            }
            Ok(())
        }
        Command::GenRandom(a) => {
            let flags = GenFlags {
                connected: a.connected,
                planted_star: a.planted_star,
                planted_path: a.planted_path,
            };
            let g = gen_random_graph(a.n, a.m, a.seed, flags)?;
            match &a.out {
                Some(path) => fs::write(path, g.to_edge_list())?,
                None => out.write_all(g.to_edge_list().as_bytes())?,
            }
            Ok(())
        }
        Command::Count(a) => {
            let g = read_graph(&a.input)?;
            writeln!(out, "{}", spanning_tree_count(&g))?;
            Ok(())
        }
    }
}

fn run_peel(name: &str, mode: PeelMode, a: SolveArgs, out: &mut dyn Write) -> Result<()> {
    let g = read_graph(&a.input)?;
    let spec = objective(&a.objective)?;
    let cfg = ga_config(&a.ga)?;
    let t = Instant::now();
    let report = peel(&g, &spec, &cfg, mode)?;
    out.write_all(report.to_table().as_bytes())?;
    let report = Report::from_peeling(name, &spec, report, &cfg, ms(t));
    write_outputs(&a.outputs, &report, || to_dot(&g, None, false))
}

#[allow(clippy::too_many_arguments)]
fn finish_solve(
    name: &str,
    g: &Graph,
    spec: &ObjectiveSpec,
    r: &SolveResult,
    cfg: Option<&GaConfig>,
    started: Instant,
    outputs: &Outputs,
    out: &mut dyn Write,
) -> Result<()> {
    if !r.feasible {
        return Err(Error::NoFeasible);
    }
    print_tree(out, g, r)?;
    let report = Report::from_solve(name, g, spec, r, cfg, ms(started));
    write_outputs(outputs, &report, || to_dot(g, Some(r.best_selection.labels()), true))
}

fn print_tree(out: &mut dyn Write, g: &Graph, r: &SolveResult) -> Result<()> {
    writeln!(out, "value: {}", r.best_value)?;
    writeln!(out, "edges:")?;
    for l in r.best_selection.sorted() {
        let e = g.edge(l);
        writeln!(out, "  {} {} [{l}]", g.name(e.u), g.name(e.v))?;
    }
    Ok(())
}

fn write_outputs(outputs: &Outputs, report: &Report, dot: impl FnOnce() -> String) -> Result<()> {
    if let Some(path) = &outputs.out {
        fs::write(path, report.to_json() + "\n")?;
    }
    if let Some(path) = &outputs.dot {
        fs::write(path, dot())?;
    }
    Ok(())
}

fn read_graph(input: &Input) -> Result<Graph> {
    let format: GraphFormat = input.format.parse()?;
    load_graph(BufReader::new(open(&input.input)?), format)
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn objective(o: &Objective) -> Result<ObjectiveSpec> {
    ObjectiveSpec::parse(&o.objective, o.sense.parse()?)
}

fn ga_config(a: &GaArgs) -> Result<GaConfig> {
    let mut cfg = GaConfig::default();
    if let Some(path) = &a.config {
        cfg.apply_key_values(&fs::read_to_string(path)?)?;
    }
    if let Some(m) = &a.model {
        cfg.model = m.parse::<Model>()?;
    }
    if let Some(v) = a.seed {
        cfg.seed = v;
    }
    if let Some(v) = a.pop {
        cfg.population_size = v;
    }
    if let Some(v) = a.gens {
        cfg.max_generations = v;
    }
    if let Some(v) = a.stall {
        cfg.stall_generations = v;
    }
    if let Some(v) = a.alpha {
        cfg.alpha = v;
    }
    if a.threads.is_some() {
        cfg.threads = a.threads;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad {what} `{}`", s.trim())))
        })
        .collect()
}

fn ms(t: Instant) -> u64 {
    t.elapsed().as_millis() as u64
}
