// Copyright 2026 The adhash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adhash_core::adaptivity::{AdaptivityConfig, Budget};
use adhash_core::engine::{Engine, EngineConfig, EngineError};
use adhash_core::partition::SubjectHash;
use adhash_core::planner::PlanError;
use adhash_core::query::QueryError;
use adhash_core::rdf::NTriplesError;
use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;

mod session;

use session::{parse_hash, Session};

#[derive(Debug, Parser)]
#[command(name = "adhash", version, about = "In-memory distributed RDF engine with workload-adaptive redistribution")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StatsKind {
    Adaptivity,
    Predicates,
    Balance,
}

#[derive(Debug, clap::Args)]
struct AdaptiveArgs {
    #[arg(long, value_enum, default_value = "on")]
    adaptive: Switch,
    /// Queries an edge needs before its pattern is redistributed.
    #[arg(long, default_value_t = 10)]
    freq_threshold: u64,
    /// Replica budget per worker, in percent of its own triples.
    #[arg(long, default_value_t = 20.0)]
    budget_pct: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load an N-Triples file and write a session file.
    Load {
        file: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Subject hash: `mod` or `mult:<seed>`.
        #[arg(long, default_value = "mod", value_parser = parse_hash)]
        hash: SubjectHash,
        /// Session file to write; defaults to `<file>.session.json`.
        #[arg(long)]
        session: Option<PathBuf>,
    },
    /// Run one query.
    Query {
        session: PathBuf,
        #[arg(long)]
        file: PathBuf,
        /// Print the distributed plan.
        #[arg(long)]
        explain: bool,
        /// Print per-step message counts.
        #[arg(long)]
        trace_messages: bool,
        /// Print the projected variable names first.
        #[arg(long)]
        header: bool,
    },
    /// Replay a `;`-separated list of queries.
    Workload {
        session: PathBuf,
        #[arg(long)]
        file: PathBuf,
        #[command(flatten)]
        adaptive: AdaptiveArgs,
        /// Print one line per query: index, mode, rows, payload rows.
        #[arg(long)]
        per_query: bool,
    },
    /// Print statistics. `adaptivity` replays `--workload` first.
    Stats {
        session: PathBuf,
        #[arg(value_enum, default_value = "predicates")]
        kind: StatsKind,
        #[arg(long)]
        workload: Option<PathBuf>,
        #[command(flatten)]
        adaptive: AdaptiveArgs,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(PathBuf, #[source] io::Error),
    #[error("{0}: {1}")]
    Data(PathBuf, #[source] NTriplesError),
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("invalid session: {0}")]
    Session(String),
    #[error("{0}")]
    Config(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Data(..) | CliError::Query(_) => 2,
            CliError::Config(_) => 1,
            _ => 3,
        }
    }

    fn from_engine(path: &Path, e: EngineError) -> Self {
        match e {
            EngineError::Data(d) => CliError::Data(path.to_owned(), d),
            EngineError::Query(q) => CliError::Query(q),
            EngineError::Plan(p) => CliError::Plan(p),
            EngineError::Workers(w) => CliError::Config(w.to_string()),
        }
    }
}

fn load_engine(data: &Path, config: EngineConfig) -> Result<Engine, CliError> {
    let file = File::open(data).map_err(|e| CliError::Io(data.to_owned(), e))?;
    Engine::load_ntriples(BufReader::new(file), config).map_err(|e| CliError::from_engine(data, e))
}

fn open_session(path: &Path, adaptive: Option<&AdaptiveArgs>) -> Result<Engine, CliError> {
    let session = Session::read(path)?;
    let mut config = EngineConfig { workers: session.workers, hash: session.subject_hash()?, ..EngineConfig::default() };
    match adaptive {
        Some(a) => {
            if a.budget_pct < 0.0 || !a.budget_pct.is_finite() {
                return Err(CliError::Config(format!("--budget-pct must be a non-negative number, got {}", a.budget_pct)));
            }
            config.adaptive = a.adaptive == Switch::On;
            config.adaptivity = AdaptivityConfig { threshold: a.freq_threshold, budget: Budget::Percent(a.budget_pct) };
        }
        None => config.adaptive = false,
    }
    load_engine(&session.data, config)
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(path.to_owned(), e))
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), CliError> {
    match cli.command {
        Command::Load { file, workers, hash, session } => {
            if workers == 0 {
                return Err(CliError::Config("--workers must be at least 1".into()));
            }
            let engine = load_engine(&file, EngineConfig { workers, hash, adaptive: false, ..EngineConfig::default() })?;
            let data = fs::canonicalize(&file).map_err(|e| CliError::Io(file.clone(), e))?;
            let session_path = session.unwrap_or_else(|| {
                let mut name = file.as_os_str().to_owned();
                name.push(".session.json");
                PathBuf::from(name)
            });
            Session { data, workers, hash: hash.to_string() }.write(&session_path)?;
            let balance = engine.balance();
            let _ = writeln!(out, "session\t{}", session_path.display());
            let _ = writeln!(out, "triples\t{}", engine.cluster().total_triples());
            let _ = writeln!(out, "terms\t{}", engine.dictionary().len());
            let _ = writeln!(out, "load_ms\t{:.3}", engine.load_time().as_secs_f64() * 1e3);
            let _ = writeln!(out, "worker\ttriples");
            for (w, n) in engine.cluster().sizes().iter().enumerate() {
                let _ = writeln!(out, "{w}\t{n}");
            }
            let _ = write!(out, "{}", balance.to_tsv());
        }
        Command::Query { session, file, explain, trace_messages, header } => {
            let mut engine = open_session(&session, None)?;
            let text = read_text(&file)?;
            let outcome = engine.execute_text(&text).map_err(|e| CliError::from_engine(&file, e))?;
            if header {
                let _ = writeln!(out, "{}", outcome.header().join("\t"));
            }
            for row in outcome.table.decode(engine.dictionary()) {
                let _ = writeln!(out, "{}", row.join("\t"));
            }
            if explain {
                let _ = writeln!(out, "# explain\tmode={}", outcome.mode);
                match (&outcome.plan, outcome.query.resolve(engine.dictionary())) {
                    (Some(plan), Some(q)) => {
                        let _ = write!(out, "{}", plan.explain(&q, engine.dictionary()));
                    }
                    (None, Some(q)) => match engine.plan(&q) {
                        Ok(plan) => {
                            let _ = write!(out, "{}", plan.explain(&q, engine.dictionary()));
                        }
                        Err(e) => log::warn!("no distributed plan: {e}"),
                    },
                    (_, None) => {
                        let _ = writeln!(out, "no plan: a constant does not occur in the data");
                    }
                }
            }
            if trace_messages {
                let _ = writeln!(out, "# trace");
                let _ = outcome.trace.write_tsv(&mut *out);
            }
        }
        Command::Workload { session, file, adaptive, per_query } => {
            let mut engine = open_session(&session, Some(&adaptive))?;
            let text = read_text(&file)?;
            let mut index = 0;
            let summary = engine.run_workload_with(&text, |_, result| {
                index += 1;
                if per_query {
                    match result {
                        Ok(o) => {
                            let _ = writeln!(
                                out,
                                "{index}\t{}\t{}\t{}\t{}",
                                o.mode,
                                o.table.len(),
                                o.payload_rows(),
                                o.redistribution_rows()
                            );
                        }
                        Err(e) => {
                            let _ = writeln!(out, "{index}\terror\t{e}");
                        }
                    }
                }
            });
            let _ = write!(out, "{}", summary.to_tsv());
            eprintln!("elapsed_ms\t{:.3}", summary.elapsed.as_secs_f64() * 1e3);
        }
        Command::Stats { session, kind, workload, adaptive } => {
            let mut engine = open_session(&session, Some(&adaptive))?;
            match kind {
                StatsKind::Predicates => {
                    let _ = engine.stats().write_tsv(engine.dictionary(), &mut *out);
                }
                StatsKind::Balance => {
                    let _ = writeln!(out, "worker\ttriples");
                    for (w, n) in engine.cluster().sizes().iter().enumerate() {
                        let _ = writeln!(out, "{w}\t{n}");
                    }
                    let _ = write!(out, "{}", engine.balance().to_tsv());
                }
                StatsKind::Adaptivity => {
                    if let Some(path) = workload {
                        engine.run_workload(&read_text(&path)?);
                    }
                    match engine.adaptivity() {
                        Some(a) => {
                            let _ = write!(out, "{}", a.report(engine.dictionary()));
                        }
                        None => {
                            let _ = writeln!(out, "adaptivity is off");
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
