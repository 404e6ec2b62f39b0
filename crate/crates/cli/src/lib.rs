//! The `chronograph` command line. [`run`] takes the full argument vector and
//! two sinks so it can be driven in-process by tests.
//!
//! Exit codes: 0 success, 1 infeasible or no result, 2 invalid input, 3 size
//! guard refused the instance.

use std::fmt::Display;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

use chronograph::design::{self, Property};
use chronograph::dissemination::{
    self, format_rational, harmonic, potential, Adversary, DisseminationState, FloodPhaseForwarder, Forwarder,
    PotentialAdversary, RandomForwarder, RandomTreeAdversary, StaticAdversary,
};
use chronograph::format::{parse_tg, to_tg};
use chronograph::journeys::{foremost_journeys, temporal_diameter};
use chronograph::linear::{self, LinearEdgeSpec};
use chronograph::{menger, opt, random, Error, NodeId, StaticGraph, TemporalGraph, Time};

#[derive(Debug, Parser)]
#[command(name = "chronograph", version, about = "Temporal graph algorithms")]
struct Cli {
    /// Output style; `kv` prints every line as `key=value`.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads; 0 picks the default. Never changes the output.
    #[arg(long, default_value_t = 0, global = true)]
    jobs: usize,
    /// Lift the size guards of brute-force routines.
    #[arg(long, global = true)]
    force: bool,
    /// Seed for randomized commands.
    #[arg(long, env = "CHRONOGRAPH_SEED", default_value_t = random::DEFAULT_SEED, global = true)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Kv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Summary statistics of a `.tg` file.
    Info { input: PathBuf },
    /// Foremost journeys from one source.
    Foremost {
        input: PathBuf,
        #[arg(long)]
        source: NodeId,
        #[arg(long, default_value_t = 1)]
        start: Time,
    },
    /// Temporal diameter.
    Diameter { input: PathBuf },
    /// Disjoint journeys and separators between two nodes.
    Menger {
        input: PathBuf,
        #[arg(long)]
        source: NodeId,
        #[arg(long)]
        sink: NodeId,
        /// Also run the exhaustive node-disjoint and separator searches.
        #[arg(long)]
        brute: bool,
    },
    /// Offline gathering schedule.
    Gather {
        input: PathBuf,
        #[arg(long)]
        sink: NodeId,
        /// `node:count,...`
        #[arg(long)]
        tokens: String,
    },
    /// Token dissemination simulation from the canonical start.
    Disseminate {
        #[arg(long, value_enum, default_value_t = ForwarderKind::Flood)]
        forwarder: ForwarderKind,
        #[arg(long, value_enum, default_value_t = AdversaryKind::Potential)]
        adversary: AdversaryKind,
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'k')]
        k: usize,
        /// Defaults to `n²·k + n`.
        #[arg(long)]
        max_rounds: Option<usize>,
        /// Print every round.
        #[arg(long)]
        trace: bool,
    },
    /// Labeling constructions and temporality searches.
    #[command(subcommand)]
    Design(DesignCommand),
    /// Temporal matching.
    Match {
        input: PathBuf,
        #[command(flatten)]
        mode: ExactOrApprox,
        #[arg(long, default_value_t = 1)]
        gap: Time,
    },
    /// Temporal TSP with costs 1 and 2.
    Ttsp {
        input: PathBuf,
        #[command(flatten)]
        mode: ExactOrApprox,
    },
    /// Temporal exploration.
    Explore {
        input: PathBuf,
        #[command(flatten)]
        mode: ExactOrGreedy,
        #[arg(long)]
        start: NodeId,
    },
    /// Linear availabilities.
    #[command(subcommand)]
    Linear(LinearCommand),
    /// Random temporal graphs.
    #[command(subcommand)]
    Random(RandomCommand),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true)))]
struct ExactOrApprox {
    #[arg(long, group = "mode")]
    exact: bool,
    #[arg(long, group = "mode")]
    approx: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("mode").required(true)))]
struct ExactOrGreedy {
    #[arg(long, group = "mode")]
    exact: bool,
    #[arg(long, group = "mode")]
    greedy: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ForwarderKind {
    Flood,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AdversaryKind {
    Potential,
    RandomTree,
    Line,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PropertyArg {
    AllPaths,
    Reachability,
}

impl From<PropertyArg> for Property {
    fn from(p: PropertyArg) -> Self {
        match p {
            PropertyArg::AllPaths => Property::AllPaths,
            PropertyArg::Reachability => Property::Reachability,
        }
    }
}

#[derive(Debug, Subcommand)]
enum DesignCommand {
    /// All-paths labeling of a DAG with one label per edge.
    Dag { input: PathBuf },
    /// All-paths labeling of the directed ring on `n` nodes.
    Ring {
        #[arg(short = 'n')]
        n: usize,
    },
    /// Reachability labeling of a strongly connected digraph.
    Reach { input: PathBuf },
    /// Exact temporality by exhaustive search.
    Temporality {
        input: PathBuf,
        #[arg(long, value_enum)]
        property: PropertyArg,
        #[arg(long)]
        max_age: Option<Time>,
    },
    /// Edge kernels: check one (`--check`) or search for a large one.
    Kernel {
        input: PathBuf,
        /// `u-v,...`
        #[arg(long)]
        check: Option<String>,
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
    },
}

#[derive(Debug, Subcommand)]
enum LinearCommand {
    /// Edges present at a time.
    Instance {
        input: PathBuf,
        #[arg(long)]
        time: BigUint,
    },
    /// Earliest common time of two specs such as `3x+4`.
    Pair {
        first: LinearEdgeSpec,
        second: LinearEdgeSpec,
        /// Defaults to a bound that never cuts off the first common time.
        #[arg(long)]
        lifetime: Option<BigUint>,
    },
    /// Earliest time all listed edges of an `.ltg` coexist.
    Set {
        input: PathBuf,
        /// `u-v,...`
        #[arg(long)]
        edges: String,
    },
}

#[derive(Debug, Subcommand)]
enum RandomCommand {
    /// Complete graph with one uniform label in `1..=r` per edge.
    Gen {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'r')]
        r: Time,
        #[arg(long)]
        undirected: bool,
    },
    /// Monte Carlo estimate, e.g. `journey:k=2,r=10`.
    Estimate {
        kind: random::EstimatorKind,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Closed-form values as exact rationals.
    Formulas {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'k')]
        k: u32,
        #[arg(short = 'r')]
        r: Time,
        #[arg(short = 'c', default_value_t = 0.0, allow_negative_numbers = true)]
        c: f64,
    },
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    /// No answer exists; the report is still printed.
    NoResult,
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_)
        | Error::InfeasibleAge { .. }
        | Error::Inseparable
        | Error::Incomplete(_)
        | Error::Timeout { .. }
        | Error::Undefined(_) => 1,
        Error::TooLarge(_) => 3,
        _ => 2,
    }
}

struct Report {
    format: Format,
    lines: Vec<String>,
}

impl Report {
    fn kv(&mut self, key: impl Display, value: impl Display) {
        self.lines.push(format!("{key}={value}"));
    }

    /// Multi-line content such as a `.tg` file: verbatim in text mode,
    /// one `key=line` per line in kv mode.
    fn body(&mut self, key: &str, text: &str) {
        for line in text.lines() {
            match self.format {
                Format::Text => self.lines.push(line.to_string()),
                Format::Kv => self.lines.push(format!("{key}={line}")),
            }
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        std::io::stdin().read_to_string(&mut text).map_err(|e| Failure::Input(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

fn load_tg(path: &Path) -> Result<TemporalGraph, Failure> {
    parse_tg(&read_input(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_static(path: &Path) -> Result<StaticGraph, Failure> {
    Ok(load_tg(path)?.underlying())
}

fn opt_time(t: Option<Time>) -> String {
    t.map_or_else(|| "none".to_string(), |t| t.to_string())
}

fn parse_pairs(raw: &str, sep: char) -> Result<Vec<(usize, usize)>, Failure> {
    raw.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p.split_once(sep).ok_or_else(|| Failure::Input(format!("expected `a{sep}b`, got `{p}`")))?;
            let num = |x: &str| x.trim().parse::<usize>().map_err(|_| Failure::Input(format!("invalid number `{x}`")));
            Ok((num(a)?, num(b)?))
        })
        .collect()
}

fn join<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Runs the command line `argv` (program name first). Returns the exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 { out.write_all(rendered.as_bytes()) } else { err.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    if cli.force {
        let _ = writeln!(err, "warning: --force disables size guards; exhaustive searches may not finish");
    }
    let mut report = Report { format: cli.format, lines: Vec::new() };
    let result = if cli.jobs > 0 {
        match rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, &mut report)),
            Err(e) => Err(Failure::Input(format!("thread pool: {e}"))),
        }
    } else {
        dispatch(&cli, &mut report)
    };
    for line in &report.lines {
        let _ = writeln!(out, "{line}");
    }
    match result {
        Ok(()) => 0,
        Err(Failure::NoResult) => 1,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli, r: &mut Report) -> Result<(), Failure> {
    match &cli.command {
        Command::Info { input } => info(&load_tg(input)?, r),
        Command::Foremost { input, source, start } => {
            let g = load_tg(input)?;
            let tree = foremost_journeys(&g, *source, *start)?;
            r.kv("source", source);
            r.kv("start", start);
            for v in 0..g.node_count() {
                if v == *source {
                    continue;
                }
                r.kv(format!("arrival.{v}"), opt_time(tree.arrival(v)));
                if let Some(j) = tree.journey(v) {
                    r.kv(format!("journey.{v}"), j);
                }
            }
            Ok(())
        }
        Command::Diameter { input } => {
            let d = temporal_diameter(&load_tg(input)?);
            r.kv("diameter", opt_time(d));
            d.map(drop).ok_or(Failure::NoResult)
        }
        Command::Menger { input, source, sink, brute } => {
            let g = load_tg(input)?;
            let od = menger::max_out_disjoint_journeys(&g, *source, *sink)?;
            r.kv("out_disjoint", od.count);
            r.kv("departure_separator", join(od.separator.iter().map(|(v, t)| format!("{v}@{t}"))));
            for (i, j) in od.journeys.iter().enumerate() {
                r.kv(format!("journey.{i}"), j);
            }
            if g.is_single_labeled() {
                r.kv("edge_disjoint", menger::max_edge_disjoint_journeys(&g, *source, *sink)?);
            }
            if *brute {
                let nd = menger::max_node_disjoint_journeys(&g, *source, *sink, cli.force)?;
                r.kv("node_disjoint", nd.count);
                match menger::min_node_separator(&g, *source, *sink, cli.force) {
                    Ok(sep) => r.kv("node_separator", format!("{}:{}", sep.len(), join(sep))),
                    Err(Error::Inseparable) => r.kv("node_separator", "inseparable"),
                    Err(e) => return Err(e.into()),
                }
                let es = menger::min_edge_separator_brute(&g, *source, *sink, cli.force)?;
                r.kv("edge_separator", format!("{}:{}", es.len(), join(es.iter().map(|(u, v)| format!("{u}-{v}")))));
            }
            Ok(())
        }
        Command::Gather { input, sink, tokens } => {
            let g = load_tg(input)?;
            let sources = parse_pairs(tokens, ':')?;
            let schedule = dissemination::offline_gather(&g, &sources, *sink)?;
            r.kv("tokens", schedule.deliveries.len());
            for d in &schedule.deliveries {
                r.kv(format!("delivery.{}", d.token), format!("from={} journey={}", d.source, d.journey));
            }
            Ok(())
        }
        Command::Disseminate { forwarder, adversary, n, k, max_rounds, trace } => {
            disseminate(cli.seed, *forwarder, *adversary, *n, *k, *max_rounds, *trace, r)
        }
        Command::Design(cmd) => design_cmd(cmd, cli.force, r),
        Command::Match { input, mode, gap } => {
            let g = load_tg(input)?;
            let m = if mode.exact {
                opt::temporal_matching_exact(&g, *gap)?
            } else {
                opt::temporal_matching_approx(&g, *gap)
            };
            r.kv("size", m.len());
            for (i, p) in m.picks.iter().enumerate() {
                r.kv(format!("pick.{i}"), format!("{} {} {}", p.u, p.v, p.t));
            }
            Ok(())
        }
        Command::Ttsp { input, mode } => {
            let inst = opt::parse_ttsp(&read_input(input)?).map_err(|e| Failure::Input(format!("{}: {e}", input.display())))?;
            let tour = if mode.exact { opt::ttsp_exact(&inst)? } else { opt::ttsp_approx(&inst)? };
            r.kv("cost", tour.cost);
            r.kv("tour", &tour);
            Ok(())
        }
        Command::Explore { input, mode, start } => {
            let g = load_tg(input)?;
            let e = if mode.exact { opt::explore_exact(&g, *start, cli.force)? } else { opt::explore_greedy(&g, *start)? };
            r.kv("arrival", e.arrival);
            r.kv("walk", &e.walk);
            Ok(())
        }
        Command::Linear(cmd) => linear_cmd(cmd, r),
        Command::Random(cmd) => random_cmd(cmd, cli, r),
    }
}

fn info(g: &TemporalGraph, r: &mut Report) -> Result<(), Failure> {
    r.kv("nodes", g.node_count());
    r.kv("directed", g.is_directed());
    r.kv("edges", g.edges().len());
    r.kv("labels", g.label_count());
    r.kv("lambda_min", opt_time(g.lambda_min()));
    r.kv("lambda_max", opt_time(g.lambda_max()));
    r.kv("age", opt_time(g.age().ok()));
    r.kv("max_labels_per_edge", g.max_labels_per_edge());
    r.kv("continuously_connected", g.is_continuously_connected());
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn disseminate(
    seed: u64,
    forwarder: ForwarderKind,
    adversary: AdversaryKind,
    n: usize,
    k: usize,
    max_rounds: Option<usize>,
    trace: bool,
    r: &mut Report,
) -> Result<(), Failure> {
    let state = DisseminationState::canonical(n, k)?;
    let mut fw: Box<dyn Forwarder> = match forwarder {
        ForwarderKind::Flood => Box::new(FloodPhaseForwarder::new(n, k)),
        ForwarderKind::Random => Box::new(RandomForwarder::new(seed)),
    };
    let mut adv: Box<dyn Adversary> = match adversary {
        AdversaryKind::Potential => Box::new(PotentialAdversary::new()),
        AdversaryKind::RandomTree => Box::new(RandomTreeAdversary::new(n, seed.wrapping_add(1))),
        AdversaryKind::Line => Box::new(StaticAdversary::new((1..n).map(|v| (v - 1, v)).collect())),
    };
    let limit = max_rounds.unwrap_or(n * n * k.max(1) + n);
    let sim = dissemination::simulate(fw.as_mut(), adv.as_mut(), state, limit)?;
    r.kv("nodes", n);
    r.kv("tokens", k);
    r.kv("rounds", sim.rounds);
    r.kv("flood_bound", k * n.saturating_sub(1));
    r.kv("initial_potential", format_rational(&sim.initial_potential));
    r.kv("final_potential", format_rational(&potential(&sim.state)));
    r.kv("complete_potential", format_rational(&(harmonic(k) * num_bigint::BigInt::from(n))));
    if let Some(max) = sim.trace.iter().filter(|rec| rec.matched == Some(true)).map(|rec| &rec.increase).max() {
        r.kv("max_matched_increase", format_rational(max));
    }
    if trace {
        for rec in &sim.trace {
            r.lines.push(rec.trace_line());
        }
    }
    Ok(())
}

fn labeling_report(g: &StaticGraph, labeling: &TemporalGraph, property: Property, r: &mut Report) -> Result<(), Failure> {
    r.body("tg", &to_tg(labeling));
    r.kv("max_labels_per_edge", labeling.max_labels_per_edge());
    r.kv("labels", labeling.label_count());
    r.kv("verified", design::verify_labeling(g, labeling, property)?);
    Ok(())
}

fn design_cmd(cmd: &DesignCommand, force: bool, r: &mut Report) -> Result<(), Failure> {
    match cmd {
        DesignCommand::Dag { input } => {
            let g = load_static(input)?;
            labeling_report(&g, &design::label_dag_all_paths(&g)?, Property::AllPaths, r)
        }
        DesignCommand::Ring { n } => {
            let labeling = design::label_ring_all_paths(*n)?;
            let g = StaticGraph::directed_ring(*n)?;
            labeling_report(&g, &labeling, Property::AllPaths, r)?;
            r.kv("temporality", labeling.max_labels_per_edge());
            Ok(())
        }
        DesignCommand::Reach { input } => {
            let g = load_static(input)?;
            labeling_report(&g, &design::label_reachability(&g)?, Property::Reachability, r)
        }
        DesignCommand::Temporality { input, property, max_age } => {
            let g = load_static(input)?;
            if !force && (g.n > design::EXACT_MAX_NODES || g.edges.len() > design::EXACT_MAX_EDGES) {
                return Err(Error::TooLarge(format!(
                    "exact temporality supports n ≤ {} and m ≤ {}",
                    design::EXACT_MAX_NODES,
                    design::EXACT_MAX_EDGES
                ))
                .into());
            }
            let t = design::temporality_exact(&g, (*property).into(), *max_age)?;
            r.body("tg", &to_tg(&t.witness));
            r.kv("temporality", t.value);
            Ok(())
        }
        DesignCommand::Kernel { input, check, budget } => {
            let g = load_static(input)?;
            match check {
                Some(raw) => {
                    let kernel = parse_pairs(raw, '-')?;
                    r.kv("kernel", design::is_edge_kernel(&g, &kernel)?);
                }
                None => {
                    let s = design::edge_kernel_lower_bound(&g, *budget);
                    r.kv("lower_bound", s.size);
                    r.kv("kernel", join(s.kernel.iter().map(|(u, v)| format!("{u}-{v}"))));
                    r.kv("checks", s.checks);
                    r.kv("complete", s.complete);
                }
            }
            Ok(())
        }
    }
}

fn load_ltg(path: &Path) -> Result<linear::LinearTemporalGraph, Failure> {
    linear::parse_ltg(&read_input(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn linear_cmd(cmd: &LinearCommand, r: &mut Report) -> Result<(), Failure> {
    let earliest = |r: &mut Report, t: Option<BigUint>| {
        r.kv("earliest", t.as_ref().map_or_else(|| "none".to_string(), |t| t.to_string()));
        t.map(drop).ok_or(Failure::NoResult)
    };
    match cmd {
        LinearCommand::Instance { input, time } => {
            let g = load_ltg(input)?;
            let edges = g.instance(time);
            r.kv("time", time);
            r.kv("count", edges.len());
            r.kv("edges", join(edges.iter().map(|(u, v)| format!("{u}-{v}"))));
            Ok(())
        }
        LinearCommand::Pair { first, second, lifetime } => {
            let lifetime = lifetime.clone().unwrap_or_else(|| {
                // max b + lcm(a) bounds the first common time from above.
                let a = (&first.a).max(&BigUint::from(1u32)) * (&second.a).max(&BigUint::from(1u32));
                (&first.b).max(&second.b) + a + 1u32
            });
            let t = linear::coexist_pair(first, second, &lifetime)?;
            earliest(r, t)
        }
        LinearCommand::Set { input, edges } => {
            let g = load_ltg(input)?;
            let t = linear::coexist_set(&g, &parse_pairs(edges, '-')?)?;
            earliest(r, t)
        }
    }
}

fn random_cmd(cmd: &RandomCommand, cli: &Cli, r: &mut Report) -> Result<(), Failure> {
    match cmd {
        RandomCommand::Gen { n, r: range, undirected } => {
            let g = random::gen_uniform_single_label(*n, *range, !undirected, cli.seed)?;
            r.body("tg", &to_tg(&g));
            Ok(())
        }
        RandomCommand::Estimate { kind, trials } => {
            let est = random::monte_carlo(*kind, *trials, cli.seed, cli.jobs)?;
            r.lines.push(est.to_string());
            Ok(())
        }
        RandomCommand::Formulas { n, k, r: range, c } => {
            r.kv("p_journey", format_rational(&random::p_journey_closed_form(*k, *range)?));
            r.kv("p_journey_upper_bound", format_rational(&random::p_journey_upper_bound(*k)));
            r.kv("p_journey_k_over_2k", format_rational(&random::p_journey_bound_k_over_2k(*k)));
            if (*k as usize) < *n {
                r.kv("expected_journeys", format_rational(&random::expected_journeys(*n, *k, *range)?));
            }
            r.kv("p_arrival_by_2", format_rational(&random::p_arrival_by_2(*n, *range)?));
            r.kv("diameter_threshold", format!("{:.6}", random::diameter_threshold(*n, *range, *c)?));
            Ok(())
        }
    }
}
