use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use kontakt_cli::model::{parse_point, PointEntry};
use kontakt_cli::report::Report;
use kontakt_cli::{corpus, emit_json, emit_text, parse_model, print_model, run_model, Registry, RunOptions};

#[derive(Parser)]
#[command(name = "kontakt", version, about = "Exact checks for k-contact models")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct Output {
    /// Also write the JSON report to this file.
    #[arg(long, value_name = "PATH")]
    json: Option<PathBuf>,
    /// Format of the report on stdout.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Record per-check wall time (makes JSON non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every check directive of a model file.
    Check {
        /// Model file.
        model: PathBuf,
        /// Evaluate point-aware checks here, e.g. "x=0,t=0" (unnamed coordinates are 0).
        #[arg(long, value_name = "POINT")]
        at: Option<String>,
        /// Cap on the length of Lie flag growth vectors.
        #[arg(long, value_name = "N")]
        max_flag: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Built-in example models.
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
    /// Syntax and reference check only.
    Parse {
        /// Model file.
        model: PathBuf,
        /// Print the normalised model.
        #[arg(long)]
        print: bool,
    },
    /// List the available check kinds.
    Kinds,
}

#[derive(Subcommand)]
enum CorpusCmd {
    /// Entry names with object counts.
    List,
    /// Check every entry as one report.
    Run {
        /// Only entries whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
        #[command(flatten)]
        out: Output,
    },
    /// Print the source of one entry.
    Show { name: String },
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("kontakt: {msg}");
    ExitCode::from(2)
}

fn read(path: &Path) -> Result<String, ExitCode> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn model_name(path: &Path) -> String {
    path.file_stem().map_or_else(|| "model".into(), |s| s.to_string_lossy().into_owned())
}

fn finish(report: &Report, out: &Output) -> ExitCode {
    let json = emit_json(report);
    if let Some(p) = &out.json {
        if let Err(e) = std::fs::write(p, &json) {
            return usage(format!("{}: {e}", p.display()));
        }
    }
    match out.format {
        Format::Json => print!("{json}"),
        Format::Text => print!("{}", emit_text(report)),
    }
    if report.all_ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, ExitCode> {
    let registry = Registry::standard();
    match cli.cmd {
        Cmd::Check { model, at, max_flag, out } => {
            let text = read(&model)?;
            let m = parse_model(&text, &model_name(&model), &registry)
                .map_err(|e| usage(format!("{}:{e}", model.display())))?;
            let at: Option<Vec<PointEntry>> = match at {
                None => None,
                Some(s) => Some(parse_point(&s).map_err(|(_, msg)| usage(format!("--at: {msg}")))?),
            };
            let opts = RunOptions {
                at,
                max_flag,
                timing: out.timing,
            };
            Ok(finish(&run_model(&m, &registry, &opts), &out))
        }
        Cmd::Corpus { cmd } => match cmd {
            CorpusCmd::List => {
                for name in corpus::select(None) {
                    let m = corpus::load(name, &registry).expect("listed").map_err(|e| usage(format!("{name}:{e}")))?;
                    let n = m.count();
                    println!(
                        "{name:16} charts={} fields={} forms={} dists={} algebras={} checks={}",
                        n.charts, n.fields, n.forms, n.dists, n.algebras, n.checks
                    );
                }
                Ok(ExitCode::SUCCESS)
            }
            CorpusCmd::Run { filter, out } => {
                if corpus::select(filter.as_deref()).is_empty() {
                    return Err(usage(format!("no corpus entry matches {}", filter.unwrap_or_default())));
                }
                let opts = RunOptions {
                    timing: out.timing,
                    ..Default::default()
                };
                Ok(finish(&corpus::run(filter.as_deref(), &registry, &opts), &out))
            }
            CorpusCmd::Show { name } => match corpus::source(&name) {
                Some(s) => {
                    print!("{s}");
                    Ok(ExitCode::SUCCESS)
                }
                None => Err(usage(format!("unknown corpus entry {name}"))),
            },
        },
        Cmd::Parse { model, print } => {
            let text = read(&model)?;
            let m = parse_model(&text, &model_name(&model), &registry)
                .map_err(|e| usage(format!("{}:{e}", model.display())))?;
            if print {
                print!("{}", print_model(&m));
            } else {
                let n = m.count();
                println!(
                    "ok: charts={} fields={} forms={} dists={} algebras={} checks={}",
                    n.charts, n.fields, n.forms, n.dists, n.algebras, n.checks
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Kinds => {
            for k in registry.iter() {
                let sig = k.signature();
                let mut args: Vec<&str> = sig.fixed.iter().map(|a| a.noun()).collect();
                if let Some((a, _)) = sig.rest {
                    args.push(a.noun());
                    args.push("...");
                }
                println!("{:16} [{}] {}", k.name(), args.join(", "), k.summary());
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    run(Cli::parse()).unwrap_or_else(|code| code)
}
