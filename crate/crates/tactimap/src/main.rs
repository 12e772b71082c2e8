use std::collections::BTreeMap;
use std::net::{Ipv4Addr, SocketAddr};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::{Parser, Subcommand};
use tactimap::config::{EngineConfig, MapRegistry};
use tactimap::harness::{default_question_bank, parse_question_bank, render_csv, session_metrics};
use tactimap::server::{serve, ServeConfig};
use tactimap::session::{verify_replay, SessionLog};
use tactimap::svg::parse_map;
use tactimap_core::study::{score_answers, summarize_sessions, AnswerSheet};
use tactimap_core::validate::{has_errors, validate_map, Severity};

#[derive(Parser)]
#[command(name = "tactimap", version, about = "Audio-tactile map exploration service")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the WebSocket session service.
    Serve {
        /// Map profile served as `load_map{map_id}` under its file stem.
        #[arg(long)]
        map: Option<PathBuf>,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Write one JSON Lines log per session into this directory.
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Replay a session log and write the transcript.
    Replay {
        #[arg(long)]
        log: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Maps referenced by id in the log, besides the built-in fixture.
        #[arg(long)]
        map: Vec<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Check a map profile against the legibility rules.
    Validate {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Export learning times, gesture counts and L/R/S scores as CSV.
    Study {
        /// Session logs; the session name is the file stem.
        #[arg(long, required = true, num_args = 1..)]
        logs: Vec<PathBuf>,
        /// Answer sheets (JSON); matched to logs by their `session` field.
        #[arg(long, num_args = 0..)]
        answers: Vec<PathBuf>,
        /// Question bank (JSON list); defaults to the bundled fixture bank.
        #[arg(long)]
        bank: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn engine_config(path: Option<&Path>) -> anyhow::Result<EngineConfig> {
    path.map(EngineConfig::load).transpose().map(Option::unwrap_or_default)
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

async fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Serve {
            map,
            port,
            config,
            record,
        } => {
            let engine = engine_config(config.as_deref())?;
            let mut registry = MapRegistry::default();
            if let Some(path) = &map {
                let id = registry.insert_file(path)?;
                tracing::info!(map_id = %id, "map registered");
            }
            let handle = serve(ServeConfig {
                addr: SocketAddr::from((Ipv4Addr::UNSPECIFIED, port)),
                engine,
                registry: Arc::new(registry),
                record_dir: record,
            })
            .await?;
            println!("listening on ws://{}", handle.local_addr);
            tokio::select! {
                r = handle.join() => r?,
                _ = tokio::signal::ctrl_c() => {}
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Replay { log, out, map, config } => {
            let engine = engine_config(config.as_deref())?;
            let mut registry = MapRegistry::default();
            for path in &map {
                registry.insert_file(path)?;
            }
            let log = SessionLog::parse_jsonl(&read(&log)?)?;
            let transcript = verify_replay(&log, engine, Arc::new(registry))?;
            std::fs::write(&out, transcript).with_context(|| format!("writing {}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { map, config } => {
            let rules = engine_config(config.as_deref())?.validation;
            let doc = match parse_map(&read(&map)?) {
                Ok(doc) => doc,
                Err(e) => {
                    println!("error\tparse\t-\t{e}");
                    return Ok(ExitCode::FAILURE);
                }
            };
            let issues = validate_map(&doc, &rules);
            for issue in &issues {
                let severity = match issue.severity {
                    Severity::Error => "error",
                    Severity::Warning => "warning",
                };
                println!(
                    "{severity}\t{}\t{}\t{}",
                    issue.code,
                    issue.element_id.as_deref().unwrap_or("-"),
                    issue.message
                );
            }
            println!("{}: {} elements, {} issues", map.display(), doc.len(), issues.len());
            Ok(if has_errors(&issues) {
                ExitCode::FAILURE
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Study {
            logs,
            answers,
            bank,
            out,
        } => {
            let bank = match bank {
                Some(path) => parse_question_bank(&read(&path)?)?,
                None => default_question_bank(),
            };
            let mut sheets = BTreeMap::new();
            for path in &answers {
                let sheet: AnswerSheet =
                    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
                sheets.insert(sheet.session.clone(), sheet);
            }
            let mut metrics = Vec::new();
            let mut scores = Vec::new();
            for path in &logs {
                let name = stem(path);
                let log =
                    SessionLog::parse_jsonl(&read(path)?).with_context(|| format!("parsing {}", path.display()))?;
                metrics.push(session_metrics(&name, &log).with_context(|| format!("{}", path.display()))?);
                let sheet = sheets.remove(&name).unwrap_or_else(|| AnswerSheet {
                    session: name.clone(),
                    answers: Vec::new(),
                });
                scores.push(score_answers(&bank, &sheet)?);
            }
            let summary = summarize_sessions(&metrics, &scores)?;
            std::fs::write(&out, render_csv(&summary)).with_context(|| format!("writing {}", out.display()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt().with_writer(std::io::stderr).init();
    match run(Cli::parse()).await {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
