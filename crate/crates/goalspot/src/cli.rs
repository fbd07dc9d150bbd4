//! Command-line front end.
//!
//! Exit codes: 0 success or gate passed, 1 gate failed, 2 usage or data error.

use std::io::{self, BufRead, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use goalspot_core::demo::{demo_kb, demo_suite};
use goalspot_core::harness::random::random_queries;
use goalspot_core::harness::{
    parse_smoke_suite, run_smoke_with, synth_kb, SmokeReport, SmokeSuite, SynthParams,
};
use goalspot_core::{AnalysisOptions, KbError, KnowledgeBase};

use crate::api::{answer, QueryRequest, QueryResponse, Toggles};

#[derive(Debug, Parser)]
#[command(
    name = "goalspot",
    version,
    about = "Rank help goals for a free-text query"
)]
pub struct Cli {
    /// Knowledge base file (JSON). Defaults to the bundled spreadsheet-help demo.
    #[arg(long, global = true, value_name = "PATH")]
    pub kb: Option<PathBuf>,
    /// Number of goals to list, and the smoke-test window.
    #[arg(long = "top", global = true, value_name = "K", default_value_t = 5)]
    pub top: usize,
    /// Smoke suite file. Defaults to the bundled suite when --kb is not given.
    #[arg(long, global = true, value_name = "PATH")]
    pub suite: Option<PathBuf>,
    /// Minimum top-k hit rate for `smoke` to pass.
    #[arg(
        long = "min-rate",
        global = true,
        value_name = "R",
        default_value_t = 0.99
    )]
    pub min_rate: f64,
    #[arg(long, global = true, value_name = "N", default_value_t = 8080)]
    pub port: u16,
    #[arg(long, global = true, value_name = "S", default_value_t = 7)]
    pub seed: u64,
    /// Ignore function-word evidence about definiteness.
    #[arg(long = "no-definiteness", global = true)]
    pub no_definiteness: bool,
    /// Ignore noun/verb templates for zero-derivation terms.
    #[arg(long = "no-nounverb", global = true)]
    pub no_nounverb: bool,
    /// Print the factor decomposition under each result.
    #[arg(long, global = true)]
    pub explain: bool,
    /// Print posteriors at full precision instead of 6 decimals.
    #[arg(long = "full-precision", global = true)]
    pub full_precision: bool,
    /// Emit JSON instead of tab-separated text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rank goals for one query.
    Query {
        #[arg(required = true, num_args = 1..)]
        text: Vec<String>,
    },
    /// Read queries from stdin, ranking after each line.
    Repl,
    /// Load and validate a knowledge base.
    Validate,
    /// Run a smoke suite against the top-k gate.
    Smoke,
    /// Write a synthetic knowledge base.
    Synth {
        #[arg(long, default_value_t = 1000)]
        goals: usize,
        #[arg(long, default_value_t = 5000)]
        terms: usize,
        #[arg(long, default_value_t = 145_000)]
        links: usize,
        /// Output file; stdout when omitted.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Time single-threaded ranking on random queries.
    Bench {
        #[arg(long, default_value_t = 1000)]
        queries: usize,
        /// Benchmark a synthetic knowledge base of 1,000 goals, 5,000 terms
        /// and 145,000 links instead of --kb.
        #[arg(long = "large")]
        large: bool,
    },
    /// Serve the HTTP query API.
    Serve {
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

pub const OK: u8 = 0;
pub const GATE_FAILED: u8 = 1;
pub const DATA_ERROR: u8 = 2;

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<u8, Failure>;

pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(message)) => {
            eprintln!("goalspot: {message}");
            ExitCode::from(DATA_ERROR)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    if cli.top == 0 {
        return Err(Failure("--top must be at least 1".into()));
    }
    match &cli.command {
        Command::Query { text } => query(cli, &text.join(" ")),
        Command::Repl => repl(cli),
        Command::Validate => validate(cli),
        Command::Smoke => smoke(cli),
        Command::Synth {
            goals,
            terms,
            links,
            out,
        } => synth(
            SynthParams::new(*goals, *terms, *links, cli.seed),
            out.as_deref(),
        ),
        Command::Bench {
            queries,
            large,
        } => bench(cli, *queries, *large),
        Command::Serve { host } => serve(cli, host),
    }
}

fn load(cli: &Cli) -> Result<KnowledgeBase, Failure> {
    match &cli.kb {
        None => Ok(demo_kb()),
        Some(path) => {
            KnowledgeBase::from_path(path).map_err(|e| Failure(describe_kb_error(path, &e)))
        }
    }
}

fn describe_kb_error(path: &Path, e: &KbError) -> String {
    let mut s = format!("{}: {e}", path.display());
    if let KbError::Invalid(violations) = e {
        for v in violations {
            s.push_str(&format!("\n  {v}"));
        }
    }
    s
}

fn request(cli: &Cli, text: &str) -> QueryRequest {
    QueryRequest {
        text: text.to_string(),
        top_k: cli.top,
        explain: cli.explain,
        toggles: Toggles {
            definiteness: !cli.no_definiteness,
            noun_verb: !cli.no_nounverb,
        },
    }
}

fn print_response(cli: &Cli, response: &QueryResponse, out: &mut impl Write) -> io::Result<()> {
    if cli.json {
        serde_json::to_writer_pretty(&mut *out, response)?;
        return writeln!(out);
    }
    for r in &response.results {
        if cli.full_precision {
            writeln!(
                out,
                "{}\t{}\t{}\t{}",
                r.rank, r.posterior, r.goal_id, r.title
            )?;
        } else {
            writeln!(
                out,
                "{}\t{:.6}\t{}\t{}",
                r.rank, r.posterior, r.goal_id, r.title
            )?;
        }
        for f in r.factors.iter().flatten() {
            let outcome = serde_json::to_value(f.outcome).expect("outcomes serialize");
            let outcome = outcome.as_str().unwrap_or_default();
            match (f.count, f.effective_prob) {
                (Some(n), _) => {
                    writeln!(out, "\t\t{}\t{outcome}\t{}\tcount={n}", f.node_id, f.factor)?
                }
                (None, Some(p)) => writeln!(
                    out,
                    "\t\t{}\t{outcome}\t{}\teffective={p}",
                    f.node_id, f.factor
                )?,
                (None, None) => writeln!(out, "\t\t{}\t{outcome}\t{}", f.node_id, f.factor)?,
            }
        }
    }
    Ok(())
}

fn query(cli: &Cli, text: &str) -> Outcome {
    let kb = load(cli)?;
    let response = answer(&kb, &request(cli, text))?;
    print_response(cli, &response, &mut io::stdout().lock())?;
    Ok(OK)
}

fn repl(cli: &Cli) -> Outcome {
    let kb = load(cli)?;
    let stdin = io::stdin();
    let mut out = io::stdout().lock();
    writeln!(
        out,
        "{} ({} goals). Enter a query per line; :quit or end of input exits.",
        kb.meta().name,
        kb.goals().len()
    )?;
    for line in stdin.lock().lines() {
        let line = line?;
        let text = line.trim();
        if text == ":quit" || text == ":q" {
            break;
        }
        match answer(&kb, &request(cli, text)) {
            Ok(response) => print_response(cli, &response, &mut out)?,
            Err(e) => eprintln!("goalspot: {e}"),
        }
        writeln!(out)?;
        out.flush()?;
    }
    Ok(OK)
}

fn validate(cli: &Cli) -> Outcome {
    let kb = load(cli)?;
    let name = cli
        .kb
        .as_ref()
        .map_or_else(|| "bundled demo".to_string(), |p| p.display().to_string());
    println!(
        "{name}: valid ({} goals, {} nodes, {} links)",
        kb.goals().len(),
        kb.nodes().len(),
        kb.links().len()
    );
    Ok(OK)
}

fn load_suite(cli: &Cli) -> Result<SmokeSuite, Failure> {
    match (&cli.suite, &cli.kb) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            let name = path
                .file_stem()
                .map_or_else(String::new, |s| s.to_string_lossy().into_owned());
            parse_smoke_suite(&text, &name).map_err(|e| Failure(format!("{}: {e}", path.display())))
        }
        (None, None) => Ok(demo_suite()),
        (None, Some(_)) => Err(Failure("--suite is required with --kb".into())),
    }
}

fn print_smoke(report: &SmokeReport, elapsed: f64) {
    println!(
        "suite {}: {} cases, top-{} hits {}, rate {:.6} (threshold {:.6}) {} in {:.3}s",
        report.suite,
        report.cases,
        report.k,
        report.hits,
        report.top_k_rate,
        report.threshold,
        if report.passed { "PASS" } else { "FAIL" },
        elapsed
    );
    for c in report.failures() {
        println!(
            "miss\tline {}\t{}\texpected {}\tbest rank {}\ttop {}",
            c.line,
            c.query,
            c.expected.join(","),
            c.rank_of_best_expected,
            c.top.join(",")
        );
    }
}

fn smoke(cli: &Cli) -> Outcome {
    if !cli.min_rate.is_finite() {
        return Err(Failure("--min-rate must be a number".into()));
    }
    let kb = load(cli)?;
    let suite = load_suite(cli)?;
    let options = AnalysisOptions {
        definiteness: !cli.no_definiteness,
        noun_verb: !cli.no_nounverb,
    };
    let started = Instant::now();
    let report = run_smoke_with(&kb, &suite, cli.top, cli.min_rate, options)?;
    let elapsed = started.elapsed().as_secs_f64();
    if cli.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        print_smoke(&report, elapsed);
    }
    Ok(if report.passed { OK } else { GATE_FAILED })
}

fn synth(params: SynthParams, out: Option<&Path>) -> Outcome {
    let kb = synth_kb(&params)?;
    let json = kb.to_json();
    match out {
        Some(path) => std::fs::write(path, json + "\n")
            .map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        None => println!("{json}"),
    }
    Ok(OK)
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    sorted[((sorted.len() - 1) as f64 * q).round() as usize]
}

fn bench(cli: &Cli, queries: usize, large: bool) -> Outcome {
    if queries == 0 {
        return Err(Failure("--queries must be at least 1".into()));
    }
    let started = Instant::now();
    let kb = if large {
        let kb = synth_kb(&SynthParams::word_processor_scale(cli.seed))?;
        // Time a load from the serialized form, as a file would be read.
        let json = kb.to_json();
        let reload = Instant::now();
        let kb = KnowledgeBase::from_json(&json)?;
        println!(
            "load\t{:.3}s (from JSON, {} bytes)",
            reload.elapsed().as_secs_f64(),
            json.len()
        );
        kb
    } else {
        let kb = load(cli)?;
        println!("load\t{:.3}s", started.elapsed().as_secs_f64());
        kb
    };
    println!(
        "kb\t{} goals, {} nodes, {} links",
        kb.goals().len(),
        kb.nodes().len(),
        kb.links().len()
    );
    let texts = random_queries(&kb, queries, 8, cli.seed);
    let mut times = Vec::with_capacity(queries);
    for text in &texts {
        let t = Instant::now();
        answer(&kb, &request(cli, text))?;
        times.push(t.elapsed().as_secs_f64() * 1e3);
    }
    times.sort_by(f64::total_cmp);
    println!(
        "rank\t{} queries: median {:.3} ms, p95 {:.3} ms, max {:.3} ms",
        queries,
        percentile(&times, 0.5),
        percentile(&times, 0.95),
        times[times.len() - 1]
    );
    Ok(OK)
}

fn serve(cli: &Cli, host: &str) -> Outcome {
    let kb = Arc::new(load(cli)?);
    let addr: SocketAddr = format!("{host}:{}", cli.port)
        .parse()
        .map_err(|e| Failure(format!("bad address {host}:{}: {e}", cli.port)))?;
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(addr)
            .await
            .map_err(|e| Failure(format!("cannot listen on {addr}: {e}")))?;
        eprintln!(
            "goalspot: serving {} on http://{}",
            kb.meta().name,
            listener.local_addr()?
        );
        crate::server::serve(kb, listener).await?;
        Ok(OK)
    })
}
