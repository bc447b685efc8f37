use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use symtwist::cli;
use symtwist::exec::with_jobs;
use symtwist::verify::{run_suite, Bounds, Suite, VerifyConfig};
use symtwist::Error;

#[derive(Parser)]
#[command(name = "symtwist", version, about = "Invariants of quadratic forms over Q and their Galois twists")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Cmd {
    /// Invariants of a form file {"rank": n, "gram": [...]}.
    Invariants {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Twist a form by a representation through a corpus torsor.
    Twist {
        /// Request file {form, representation, torsor}.
        #[arg(long, conflicts_with_all = ["form", "rep", "torsor"])]
        request: Option<PathBuf>,
        #[arg(long, requires_all = ["rep", "torsor"])]
        form: Option<PathBuf>,
        #[arg(long)]
        rep: Option<PathBuf>,
        #[arg(long)]
        torsor: Option<String>,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Ramification data for a config file of components.
    Ramify {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (0: all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, default_value_t = 6)]
        max_rank: usize,
        #[arg(long, default_value_t = 24)]
        max_group_order: usize,
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

fn emit<T: serde::Serialize>(format: Format, value: &T, table: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("serializable")),
        Format::Table => print!("{}", table()),
    }
}

fn run(cmd: Cmd) -> Result<bool, Error> {
    match cmd {
        Cmd::Invariants { file, format } => {
            let inv = cli::cmd_invariants(&file)?;
            emit(format, &inv, || cli::invariants_table(&inv));
            Ok(true)
        }
        Cmd::Twist { request, form, rep, torsor, corpus, format } => {
            let req = match (request, form, rep, torsor) {
                (Some(r), ..) => cli::load_request_file(&r)?,
                (None, Some(f), Some(r), Some(t)) => cli::load_request(&f, &r, &t)?,
                _ => return Err(Error::Parse("give --request, or --form with --rep and --torsor".into())),
            };
            let corpus = cli::load_corpus(corpus.as_deref())?;
            let rec = cli::cmd_twist(&req, &corpus)?;
            emit(format, &rec, || rec.to_table());
            Ok(rec.passed())
        }
        Cmd::Ramify { config, format } => {
            let rep = cli::cmd_ramify(&config)?;
            emit(format, &rep, || rep.to_table());
            Ok(rep.passed())
        }
        Cmd::Verify { suite, seed, jobs, max_rank, max_group_order, corpus, format } => {
            let suite: Suite = suite.parse()?;
            let mut cfg = VerifyConfig::new(seed, Bounds { max_rank, max_group_order });
            cfg.corpus = cli::load_corpus(corpus.as_deref())?;
            let start = Instant::now();
            let report = with_jobs(Some(jobs), || run_suite(suite, &cfg));
            let elapsed = start.elapsed();
            emit(format, &report, || format!("{}wall time {:.2?}\n", report.to_table(), elapsed));
            if format == Format::Json {
                eprintln!("wall time {elapsed:.2?}");
            }
            Ok(report.passed)
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(args.cmd) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
