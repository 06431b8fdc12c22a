use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use turan3_core::format::{parse_col3, parse_hg3, write_col3, write_hg3};
use turan3_core::iso::{are_isomorphic, embeds_into};
use turan3_core::patterns::contains;
use turan3_core::ramsey::{build_deduction, check_coloring, search_coloring, ColoringConfig, ColoringOutcome};
use turan3_core::turan::{evaluate, reproduce_table, LookupPolicy, TableOptions};
use turan3_core::{
    catalog, construct, max_edges, ConstraintSet, ConstructionSpec, Error, Flags, Hypergraph3, PatternName,
    Required, SearchConfig, Status, TableName, TuranQuery,
};

const EXIT_DISAGREEMENT: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "turan3", version, about = "Exact extremal and Ramsey computations on small 3-graphs")]
struct Cli {
    #[command(flatten)]
    run: RunOptions,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
struct RunOptions {
    /// Worker threads for the search.
    #[arg(long, global = true, env = "TURAN3_THREADS", default_value_t = 1)]
    threads: usize,
    /// Wall-clock limit in seconds; hitting it yields a lower bound only.
    #[arg(long, global = true, env = "TURAN3_TIME_LIMIT")]
    time_limit: Option<u64>,
    /// Search node limit.
    #[arg(long, global = true)]
    node_limit: Option<u64>,
    /// Write a JSON run record to this path.
    #[arg(long, global = true)]
    #[serde(skip)]
    record: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Maximize edges under forbidden, required and excluded constraints.
    Search {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        constraints: ConstraintArgs,
        /// Graphs (.hg3) the result must not embed into.
        #[arg(long = "exclude")]
        excluded: Vec<PathBuf>,
        /// Comma-separated structural flags: connected, intersecting, no_common_vertex.
        #[arg(long, default_value = "")]
        flags: String,
        /// Collect every optimum up to isomorphism.
        #[arg(long)]
        enumerate: bool,
    },
    /// Evaluate an ordinary, higher-order or conditional Turán number.
    Turan {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        constraints: ConstraintArgs,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long)]
        enumerate: bool,
    },
    /// Reproduce a table of known values.
    Table {
        #[arg(long)]
        name: TableName,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
        /// Search rows up to this n; larger rows are checked by construction only.
        #[arg(long, default_value_t = 0)]
        search_max_n: usize,
    },
    /// Write a named construction as .hg3.
    Construct {
        kind: ConstructionKind,
        #[arg(long)]
        n: Option<usize>,
        /// Block sizes for clique-union, comma-separated.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report whether a graph contains a pattern.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        pattern: PatternName,
    },
    /// Compare two graphs for isomorphism and embedding.
    Iso {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    #[command(subcommand)]
    Ramsey(RamseyCommand),
}

#[derive(Subcommand, Debug)]
enum RamseyCommand {
    /// Build and check the deduction for r colors.
    Verify {
        #[arg(long)]
        r: usize,
        /// Use table values for every lookup instead of searching.
        #[arg(long)]
        cited_only: bool,
    },
    /// Search for a coloring without a monochromatic copy of a pattern.
    Witness {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        colors: usize,
        #[arg(long)]
        pattern: PatternName,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a .col3 coloring for a monochromatic pattern.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        pattern: PatternName,
    },
}

#[derive(Args, Debug)]
struct ConstraintArgs {
    /// Comma-separated forbidden patterns.
    #[arg(long, value_delimiter = ',')]
    forbid: Vec<PatternName>,
    /// Pattern the result must contain.
    #[arg(long)]
    require: Option<PatternName>,
    /// Graph (.hg3) the result must contain.
    #[arg(long, conflicts_with = "require")]
    require_file: Option<PathBuf>,
}

impl ConstraintArgs {
    fn required(&self) -> Result<Option<Required>> {
        Ok(match (&self.require, &self.require_file) {
            (Some(p), _) => Some(Required::Pattern(*p)),
            (None, Some(path)) => Some(Required::Graph(read_hg3(path)?)),
            (None, None) => None,
        })
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum TableFormat {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ConstructionKind {
    Star,
    Comet,
    H0,
    Complete,
    HiltonMilner,
    CliqueUnion,
}

/// What a subcommand printed and how the process should exit.
struct Report {
    stdout: String,
    outcome: Value,
    code: u8,
}

impl Report {
    fn json(outcome: Value, code: u8) -> Self {
        Report { stdout: format!("{outcome}\n"), outcome, code }
    }
}

#[derive(Serialize)]
struct RunRecord<'a> {
    command_line: Vec<String>,
    config: &'a RunOptions,
    outcome: &'a Value,
    exit_code: u8,
    wall_ms: u64,
    version: &'static str,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(error_code(&e));
        }
    };
    print!("{}", report.stdout);
    if let Some(path) = &cli.run.record {
        let record = RunRecord {
            command_line: std::env::args().collect(),
            config: &cli.run,
            outcome: &report.outcome,
            exit_code: report.code,
            wall_ms: start.elapsed().as_millis() as u64,
            version: env!("CARGO_PKG_VERSION"),
        };
        let text = serde_json::to_string(&record).expect("record serializes");
        if let Err(e) = fs::write(path, text + "\n") {
            eprintln!("error: writing {}: {e}", path.display());
            return ExitCode::from(EXIT_USAGE);
        }
    }
    ExitCode::from(report.code)
}

fn error_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Disagreement { .. } | Error::InvalidStep { .. }) => EXIT_DISAGREEMENT,
        _ => EXIT_USAGE,
    }
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::LowerBoundOnly => EXIT_UNKNOWN,
        _ => 0,
    }
}

fn search_config(run: &RunOptions, enumerate: bool) -> SearchConfig {
    SearchConfig {
        time_limit: run.time_limit.map(Duration::from_secs),
        node_limit: run.node_limit,
        enumerate_all: enumerate,
        ..Default::default()
    }
    .with_workers(run.threads)
}

fn read_hg3(path: &Path) -> Result<Hypergraph3> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_hg3(&text).with_context(|| format!("parsing {}", path.display()))
}

fn write_or_print(output: Option<&Path>, text: &str, summary: Value) -> Result<Report> {
    match output {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            Ok(Report::json(summary, 0))
        }
        None => Ok(Report { stdout: text.to_string(), outcome: summary, code: 0 }),
    }
}

fn execute(cli: &Cli) -> Result<Report> {
    let run = &cli.run;
    match &cli.command {
        Command::Search { n, constraints, excluded, flags, enumerate } => {
            let mut cs = ConstraintSet::forbidding(&constraints.forbid).with_flags(Flags::parse(flags)?);
            if let Some(req) = constraints.required()? {
                cs = cs.requiring(req);
            }
            if !excluded.is_empty() {
                cs = cs.excluding(excluded.iter().map(|p| read_hg3(p)).collect::<Result<_>>()?);
            }
            let out = max_edges(*n, &cs, &search_config(run, *enumerate))?;
            let record = out.record(format!("n={n} {}", cs.describe()));
            Ok(Report::json(serde_json::to_value(record)?, status_code(out.status)))
        }
        Command::Turan { n, constraints, order, enumerate } => {
            let query = match constraints.required()? {
                Some(req) if *order == 1 => TuranQuery::conditional(*n, &constraints.forbid, req),
                Some(_) => anyhow::bail!("--require cannot be combined with --order above 1"),
                None => TuranQuery::of_order(*n, &constraints.forbid, *order),
            };
            let v = evaluate(&query, &search_config(run, *enumerate))?;
            Ok(Report::json(serde_json::to_value(v.record())?, status_code(v.status)))
        }
        Command::Table { name, format, search_max_n } => {
            let mut options = TableOptions { search_max_n: *search_max_n, ..Default::default() };
            options.config = SearchConfig { time_limit: options.config.time_limit, ..search_config(run, false) };
            if let Some(t) = run.time_limit {
                options.config.time_limit = Some(Duration::from_secs(t));
            }
            let report = reproduce_table(*name, &options)?;
            let code = if report.all_agree() { 0 } else { EXIT_DISAGREEMENT };
            let stdout = match format {
                TableFormat::Csv => report.to_csv(),
                TableFormat::Json => report
                    .rows
                    .iter()
                    .map(|r| serde_json::to_string(&json!({ "table": name.to_string(), "row": r })).map(|s| s + "\n"))
                    .collect::<serde_json::Result<String>>()?,
            };
            Ok(Report { stdout, outcome: serde_json::to_value(&report)?, code })
        }
        Command::Construct { kind, n, sizes, output } => {
            let spec = construction_spec(*kind, *n, sizes)?;
            let g = construct(&spec)?;
            let summary = json!({ "construction": spec.to_string(), "n": g.n(), "edges": g.edge_count() });
            write_or_print(output.as_deref(), &write_hg3(&g), summary)
        }
        Command::Check { file, pattern } => {
            let g = read_hg3(file)?;
            let found = contains(&g, &catalog(*pattern));
            let word = if found.is_some() { "present" } else { "absent" };
            let outcome = json!({ "pattern": pattern.to_string(), "result": word, "embedding": found });
            Ok(Report { stdout: format!("{word}\n"), outcome, code: 0 })
        }
        Command::Iso { a, b } => {
            let (ga, gb) = (read_hg3(a)?, read_hg3(b)?);
            let iso = if are_isomorphic(&ga, &gb) { "isomorphic" } else { "not-isomorphic" };
            let emb = if embeds_into(&ga, &gb) { "embeds" } else { "none" };
            let outcome = json!({ "isomorphic": iso == "isomorphic", "embeds": emb == "embeds" });
            Ok(Report { stdout: format!("{iso}\n{emb}\n"), outcome, code: 0 })
        }
        Command::Ramsey(cmd) => ramsey(run, cmd),
    }
}

fn construction_spec(kind: ConstructionKind, n: Option<usize>, sizes: &[usize]) -> Result<ConstructionSpec> {
    if let ConstructionKind::CliqueUnion = kind {
        anyhow::ensure!(!sizes.is_empty(), "clique-union requires --sizes");
        return Ok(ConstructionSpec::CliqueUnion(sizes.to_vec()));
    }
    let n = n.context("--n is required for this construction")?;
    Ok(match kind {
        ConstructionKind::Star => ConstructionSpec::Star(n),
        ConstructionKind::Comet => ConstructionSpec::Comet(n),
        ConstructionKind::H0 => ConstructionSpec::H0(n),
        ConstructionKind::Complete => ConstructionSpec::Complete(n),
        ConstructionKind::HiltonMilner => ConstructionSpec::HiltonMilner(n),
        ConstructionKind::CliqueUnion => unreachable!("handled above"),
    })
}

fn ramsey(run: &RunOptions, cmd: &RamseyCommand) -> Result<Report> {
    match cmd {
        RamseyCommand::Verify { r, cited_only } => {
            let mut policy = if *cited_only { LookupPolicy::cited_only() } else { LookupPolicy::default() };
            policy.config = SearchConfig { time_limit: policy.config.time_limit, ..search_config(run, false) };
            if let Some(t) = run.time_limit {
                policy.config.time_limit = Some(Duration::from_secs(t));
            }
            let proof = build_deduction(*r, &policy)?;
            let code = if proof.valid { 0 } else { EXIT_DISAGREEMENT };
            Ok(Report::json(serde_json::to_value(&proof)?, code))
        }
        RamseyCommand::Witness { n, colors, pattern, output } => {
            let config = ColoringConfig {
                time_limit: run.time_limit.map(Duration::from_secs),
                node_limit: run.node_limit,
                ..Default::default()
            };
            let base = json!({ "n": n, "colors": colors, "pattern": pattern.to_string() });
            match search_coloring(*n, *colors, *pattern, &config)? {
                ColoringOutcome::Found(c) => {
                    let mut summary = base;
                    summary["outcome"] = "found".into();
                    write_or_print(output.as_deref(), &write_col3(&c), summary)
                }
                ColoringOutcome::NoneExists => {
                    let mut summary = base;
                    summary["outcome"] = "none-exists".into();
                    Ok(Report::json(summary, 0))
                }
                ColoringOutcome::Unknown => {
                    let mut summary = base;
                    summary["outcome"] = "unknown".into();
                    Ok(Report::json(summary, EXIT_UNKNOWN))
                }
            }
        }
        RamseyCommand::Check { file, pattern } => {
            let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
            let coloring = parse_col3(&text).with_context(|| format!("parsing {}", file.display()))?;
            let (stdout, outcome) = match check_coloring(&coloring, &catalog(*pattern)) {
                Some(m) => (
                    format!("present color={} embedding={:?}\n", m.color, m.embedding),
                    json!({ "result": "present", "color": m.color, "embedding": m.embedding }),
                ),
                None => ("absent\n".to_string(), json!({ "result": "absent" })),
            };
            Ok(Report { stdout, outcome, code: 0 })
        }
    }
}
