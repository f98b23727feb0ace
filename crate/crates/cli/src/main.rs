use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use clusterfan_core::claims::{ClaimOutcome, Suite, SuiteConfig, CLAIMS};
use clusterfan_core::cluster::{cluster_variables, enumerate, EnumerateOptions, ExchangeGraph};
use clusterfan_core::export::{fan_document, graph_document, Envelope, VariableEntry};
use clusterfan_core::fan::{coverage, quotient_project, seed_cones, verify_fan, PairwiseMode};
use clusterfan_core::ssyt::frozen_arrays;
use clusterfan_core::Error;

const COVERAGE_BOUND: u32 = 8;
const DEFAULT_PAIRS: usize = 20_000;
const LARGE_N_DEPTH: usize = 6;
const LARGE_N_SEEDS: usize = 50_000;

#[derive(Parser)]
#[command(name = "clusterfan", version, about = "Seeds, tableau labels and the seed-cone fan for GL_n base affine space")]
struct Cli {
    /// Output format for data on stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the full JSON document to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads (defaults to available parallelism).
    #[arg(long, global = true, env = "CLUSTERFAN_JOBS")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Pairwise {
    Full,
    Sampled,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate the exchange graph.
    Enumerate {
        #[command(flatten)]
        graph: GraphArgs,
        /// Include every polynomial in the JSON document.
        #[arg(long)]
        polynomials: bool,
    },
    /// Check the seed cones form a fan and sample coverage of the D-tight cone.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        checks: CheckArgs,
    },
    /// List the distinct cluster variables.
    Variables {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        polynomials: bool,
    },
    /// Export the fan and its projection modulo the frozen rays.
    Project {
        #[command(flatten)]
        graph: GraphArgs,
    },
    /// Recompute the reference claims and compare.
    PaperSuite {
        #[command(flatten)]
        checks: CheckArgs,
        /// Run only these claims (comma separated or repeated).
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// List the claim ids and exit.
        #[arg(long)]
        list: bool,
    },
}

#[derive(Args)]
struct GraphArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(3..=8))]
    n: u64,
    /// Stop after this many seeds (default 50000 for n >= 6).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    max_seeds: Option<u64>,
    /// Do not expand seeds at this distance from the initial seed (default 6 for n >= 6).
    #[arg(long)]
    max_depth: Option<usize>,
}

#[derive(Args)]
struct CheckArgs {
    /// Pairwise face check mode (default: full for n <= 5, sampled above).
    #[arg(long, value_enum)]
    pairwise: Option<Pairwise>,
    /// Number of random pairs in sampled mode.
    #[arg(long, default_value_t = DEFAULT_PAIRS, value_parser = positive)]
    pairs: usize,
    /// Random D-tight points for the coverage check.
    #[arg(long, default_value_t = 10_000, value_parser = positive)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    rng_seed: u64,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

impl CheckArgs {
    fn mode(&self, n: usize) -> PairwiseMode {
        let sampled = PairwiseMode::Sampled { pairs: self.pairs, rng_seed: self.rng_seed };
        match self.pairwise {
            Some(Pairwise::Full) => PairwiseMode::Full,
            Some(Pairwise::Sampled) => sampled,
            None if n <= 5 => PairwiseMode::Full,
            None => sampled,
        }
    }
}

enum Failure {
    /// Bad input, I/O or a resource limit.
    Environment(String),
    /// A computed result contradicts an expected property.
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_violation() {
            Failure::Violation(e.to_string())
        } else {
            Failure::Environment(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Environment(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Environment(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

struct Output {
    format: Format,
    out: Option<PathBuf>,
}

impl Output {
    /// Writes `doc` to the output file if given, then either `doc` (json
    /// without a file), a json `summary`, or `text` to stdout.
    fn emit<D: Serialize, S: Serialize>(&self, schema: &str, doc: D, summary: S, text: &str) -> Result<(), Failure> {
        let doc = Envelope::new(schema, doc);
        if let Some(path) = &self.out {
            let mut w = BufWriter::new(File::create(path).map_err(|e| io_context(path, e))?);
            serde_json::to_writer_pretty(&mut w, &doc)?;
            writeln!(w)?;
            w.flush().map_err(|e| io_context(path, e))?;
            log::info!("wrote {}", path.display());
        }
        let stdout = io::stdout();
        let mut w = stdout.lock();
        match (self.format, &self.out) {
            (Format::Json, None) => {
                serde_json::to_writer_pretty(&mut w, &doc)?;
                writeln!(w)?;
            }
            (Format::Json, Some(_)) => {
                serde_json::to_writer_pretty(&mut w, &Envelope::new(&format!("{schema}-summary"), summary))?;
                writeln!(w)?;
            }
            (Format::Text, _) => w.write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn io_context(path: &std::path::Path, e: io::Error) -> Failure {
    Failure::Environment(format!("{}: {e}", path.display()))
}

fn build_graph(args: &GraphArgs) -> Result<ExchangeGraph, Failure> {
    let n = args.n as usize;
    let unlimited = args.max_seeds.is_none() && args.max_depth.is_none();
    let options = EnumerateOptions {
        max_seeds: args.max_seeds.map(|s| s as usize).or((unlimited && n >= 6).then_some(LARGE_N_SEEDS)),
        max_depth: args.max_depth.or((unlimited && n >= 6).then_some(LARGE_N_DEPTH)),
        ..Default::default()
    };
    if unlimited && n >= 6 {
        log::info!("n = {n}: limiting to depth {LARGE_N_DEPTH} and {LARGE_N_SEEDS} seeds");
    }
    let start = Instant::now();
    let graph = enumerate(n, &options)?;
    log::info!("enumerated {} seeds in {:.2?}", graph.seeds().len(), start.elapsed());
    Ok(graph)
}

#[derive(Serialize)]
struct EnumerateSummary {
    n: usize,
    seeds: usize,
    mutable_vars: usize,
    edges: usize,
    depth_reached: usize,
    truncated: bool,
    unexpanded_seeds: usize,
    certificate_failures: usize,
}

fn summarize(graph: &ExchangeGraph) -> EnumerateSummary {
    let s = graph.stats();
    EnumerateSummary {
        n: graph.n(),
        seeds: s.seeds,
        mutable_vars: graph.mutable_variables().len(),
        edges: s.edges,
        depth_reached: s.depth_reached,
        truncated: s.truncated,
        unexpanded_seeds: s.unexpanded_seeds,
        certificate_failures: s.certificate_failures,
    }
}

fn cmd_enumerate(out: &Output, args: &GraphArgs, polynomials: bool) -> Outcome {
    let graph = build_graph(args)?;
    let summary = summarize(&graph);
    let mut text = format!("seeds={} mutable_vars={}\n", summary.seeds, summary.mutable_vars);
    text += &format!("edges={} depth={} truncated={}", summary.edges, summary.depth_reached, summary.truncated);
    if summary.truncated {
        text += &format!(" unexpanded={}", summary.unexpanded_seeds);
    }
    text += &format!("\ncertificate_failures={}\n", summary.certificate_failures);
    for c in graph.failed_certificates() {
        text += &format!("  failed certificate: {} at {}\n", c.new_label, c.vertex);
    }
    let ok = summary.certificate_failures == 0;
    out.emit("exchange-graph", graph_document(&graph, polynomials), &summary, &text)?;
    Ok(ok)
}

#[derive(Serialize)]
struct VerifyDocument {
    fan: clusterfan_core::fan::FanReport,
    coverage: clusterfan_core::fan::CoverageReport,
    fan_seconds: f64,
    coverage_seconds: f64,
}

fn cmd_verify(out: &Output, args: &GraphArgs, checks: &CheckArgs) -> Outcome {
    let graph = build_graph(args)?;
    let mode = checks.mode(graph.n());
    let start = Instant::now();
    let fan = verify_fan(&graph, mode);
    let fan_seconds = start.elapsed().as_secs_f64();
    log::info!("fan checks done in {fan_seconds:.2} s");
    let start = Instant::now();
    let cov = coverage(&graph, checks.samples, COVERAGE_BOUND, checks.rng_seed)?;
    let coverage_seconds = start.elapsed().as_secs_f64();
    log::info!("coverage done in {coverage_seconds:.2} s");

    // On a truncated graph missing cones are expected, so coverage is
    // reported but not judged.
    let ok = fan.passed() && (!graph.is_complete() || cov.passed());
    let mut text = format!(
        "n={} cones={} complete={}\nunimodular={}/{}\nadjacent_pairs={}\npairs_checked={}/{} mode={}\nviolations={}\n",
        fan.n,
        fan.cones,
        fan.enumeration_complete,
        fan.unimodular,
        fan.cones,
        fan.adjacent_pairs_checked,
        fan.pairs_checked,
        fan.pairs_total,
        match fan.pairwise {
            PairwiseMode::Full => "full",
            PairwiseMode::Sampled { .. } => "sampled",
        },
        fan.violations.len()
    );
    for v in fan.violations.iter().take(10) {
        text += &format!("  {:?} {} {:?}: {}\n", v.kind, v.first, v.second, v.detail);
    }
    text += &format!(
        "coverage: {}/{} covered, {} uncovered, {} double_interior, {} attempts{}\n",
        cov.covered,
        cov.samples,
        cov.uncovered,
        cov.double_interior,
        cov.attempts,
        if graph.is_complete() { "" } else { " (informational: graph truncated)" }
    );
    for e in cov.examples.iter().take(5) {
        text += &format!("  point {} interior_hits={} boundary_hits={}\n", e.point, e.interior_hits, e.boundary_hits);
    }
    text += &format!("runtime: fan {fan_seconds:.2} s, coverage {coverage_seconds:.2} s\n");
    text += if ok { "result: pass\n" } else { "result: FAIL\n" };
    let doc = VerifyDocument { fan, coverage: cov, fan_seconds, coverage_seconds };
    out.emit("verify-report", &doc, &doc, &text)?;
    Ok(ok)
}

#[derive(Serialize)]
struct VariablesDocument {
    n: usize,
    complete: bool,
    variables: Vec<VariableEntry>,
}

fn cmd_variables(out: &Output, args: &GraphArgs, polynomials: bool) -> Outcome {
    let graph = build_graph(args)?;
    let frozen = frozen_arrays(graph.n());
    let variables: Vec<VariableEntry> = cluster_variables(&graph)?
        .iter()
        .enumerate()
        .map(|(k, v)| VariableEntry {
            index: k,
            label: v.label().clone(),
            tableau: v.tableau(),
            frozen: frozen.contains(v.label()),
            degree: v.poly().degree(),
            terms: v.poly().len(),
            polynomial: polynomials.then(|| v.poly().to_string()),
        })
        .collect();
    let mut text = String::new();
    for v in &variables {
        text += &format!(
            "{:<12} {:<7} degree={} terms={}",
            v.tableau,
            if v.frozen { "frozen" } else { "mutable" },
            v.degree,
            v.terms
        );
        if let Some(p) = &v.polynomial {
            text += &format!("  {p}");
        }
        text.push('\n');
    }
    let mutable = variables.iter().filter(|v| !v.frozen).count();
    text += &format!("variables={} mutable={mutable} frozen={}\n", variables.len(), variables.len() - mutable);
    let doc = VariablesDocument { n: graph.n(), complete: graph.is_complete(), variables };
    let summary = serde_json::json!({ "n": doc.n, "variables": doc.variables.len(), "mutable": mutable });
    out.emit("variables", &doc, summary, &text)?;
    Ok(true)
}

#[derive(Serialize)]
struct ProjectDocument {
    fan: clusterfan_core::export::FanDocument,
    projected: clusterfan_core::fan::ProjectedFan,
}

fn cmd_project(out: &Output, args: &GraphArgs) -> Outcome {
    let graph = build_graph(args)?;
    let fan = fan_document(graph.n(), &seed_cones(&graph)?);
    let projected = quotient_project(&graph)?;
    let mut text = format!("basis: {}\n", projected.basis.join(" "));
    for r in &projected.rays {
        let coords: Vec<String> = r.coords.iter().map(i64::to_string).collect();
        text += &format!("{:<12} ({})\n", r.tableau, coords.join(","));
    }
    text += &format!("rays={} cones={}\n", projected.rays.len(), projected.cones.len());
    let summary = serde_json::json!({ "n": graph.n(), "rays": projected.rays.len(), "cones": projected.cones.len() });
    out.emit("fan", ProjectDocument { fan, projected }, summary, &text)?;
    Ok(true)
}

#[derive(Serialize)]
struct SuiteDocument {
    config: SuiteConfig,
    passed: usize,
    total: usize,
    claims: Vec<ClaimOutcome>,
}

fn cmd_paper_suite(out: &Output, checks: &CheckArgs, only: &[String], list: bool) -> Outcome {
    if list {
        let mut text = String::new();
        for c in CLAIMS {
            text += &format!("{:<18} {}\n", c.id, c.title);
        }
        let ids: Vec<&str> = CLAIMS.iter().map(|c| c.id).collect();
        out.emit("claims", &ids, &ids, &text)?;
        return Ok(true);
    }
    for id in only {
        if !CLAIMS.iter().any(|c| c.id == id) {
            let known: Vec<&str> = CLAIMS.iter().map(|c| c.id).collect();
            return Err(Failure::Environment(format!("unknown claim {id:?}; known: {}", known.join(", "))));
        }
    }
    let config = SuiteConfig {
        pairwise: checks.mode(5),
        samples: checks.samples,
        rng_seed: checks.rng_seed,
        ..SuiteConfig::default()
    };
    let mut suite = Suite::new(config);
    let mut outcomes = Vec::new();
    for c in CLAIMS.iter().filter(|c| only.is_empty() || only.iter().any(|o| o == c.id)) {
        log::info!("checking {}", c.id);
        let outcome = suite.run(c.id).expect("registered claim");
        log::info!("{} {} in {:.2} s", c.id, if outcome.passed { "passed" } else { "FAILED" }, outcome.seconds);
        outcomes.push(outcome);
    }
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let total = outcomes.len();
    let mut text = String::new();
    for o in &outcomes {
        text += &format!(
            "{:<4} {:<18} {:>8.2} s\n     expected: {}\n     computed: {}\n",
            if o.passed { "ok" } else { "FAIL" },
            o.id,
            o.seconds,
            o.expected,
            o.computed
        );
    }
    text += &format!("{passed}/{total} paper claims reproduced\n");
    let doc = SuiteDocument { config: suite.config().clone(), passed, total, claims: outcomes };
    out.emit("paper-suite", &doc, &doc, &text)?;
    Ok(passed == total)
}

fn run(cli: Cli) -> Outcome {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(Failure::Environment("--jobs must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| Failure::Environment(e.to_string()))?;
    }
    let out = Output { format: cli.format, out: cli.out };
    match &cli.command {
        Command::Enumerate { graph, polynomials } => cmd_enumerate(&out, graph, *polynomials),
        Command::Verify { graph, checks } => cmd_verify(&out, graph, checks),
        Command::Variables { graph, polynomials } => cmd_variables(&out, graph, *polynomials),
        Command::Project { graph } => cmd_project(&out, graph),
        Command::PaperSuite { checks, only, list } => cmd_paper_suite(&out, checks, only, *list),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Failure::Environment(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Violation(msg)) => {
            eprintln!("violation: {msg}");
            ExitCode::from(2)
        }
    }
}
