use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dml_cli::{
    builtin_corpus, export, parse_corpus, render_report, render_stable, run_harnesses, summarize, CorpusEntry,
    ExportTarget, RunOptions, Selection, BOUNDS_ENV,
};
use dml_core::Bounds;

/// Checks De Morgan law theorems for finite quantales and module lattices.
#[derive(Parser)]
#[command(name = "dml", version)]
struct Cli {
    /// Bound overrides such as `module=32,lattice=256`, applied after the
    /// environment defaults.
    #[arg(long, global = true)]
    bounds: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a corpus.
    Validate(CorpusArgs),
    /// Run the harnesses and print the report.
    Run(RunArgs),
    /// Export Hasse diagrams, spectra or reports for one entry.
    Export(ExportArgs),
    /// Print the builtin corpus.
    ListBuiltins,
}

#[derive(Args)]
struct CorpusArgs {
    /// Corpus file; the builtin corpus when omitted.
    corpus: Option<PathBuf>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Annihilator laws and their equivalences.
    #[arg(long)]
    laws: bool,
    /// Spectra, μ, Ψ and the regular core.
    #[arg(long)]
    spectra: bool,
    /// Module-level characterizations.
    #[arg(long)]
    modules: bool,
    /// Colon properties and the SDML variants.
    #[arg(long)]
    sdml: bool,
    /// Worker threads.
    #[arg(long, short)]
    jobs: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Omit the timing section.
    #[arg(long)]
    stable_only: bool,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    corpus: CorpusArgs,
    /// Entry id.
    #[arg(long, short)]
    entry: String,
    /// What to export; repeat for several.
    #[arg(long, short, value_enum)]
    what: Vec<ExportTarget>,
    /// Output file, or directory when several targets are given.
    #[arg(long, short)]
    out: PathBuf,
}

fn bounds(flag: Option<&str>) -> Result<Bounds, String> {
    let mut b = Bounds::default();
    if let Ok(env) = std::env::var(BOUNDS_ENV) {
        b = b.with_overrides(&env).map_err(|e| format!("{BOUNDS_ENV}: {e}"))?;
    }
    if let Some(flag) = flag {
        b = b.with_overrides(flag).map_err(|e| format!("--bounds: {e}"))?;
    }
    Ok(b)
}

fn load(args: &CorpusArgs, bounds: &Bounds) -> Result<Vec<CorpusEntry>, String> {
    match &args.corpus {
        Some(path) => parse_corpus(path, bounds),
        None => builtin_corpus(bounds),
    }
    .map_err(|e| e.to_string())
}

/// Writes to stdout; a closed pipe is not an error.
fn emit(text: &str) -> Result<(), String> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.to_string()),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("dml: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode, String> {
    let bounds = bounds(cli.bounds.as_deref())?;
    match cli.command {
        Command::Validate(args) => {
            let mut text = String::new();
            for e in &load(&args, &bounds)? {
                let _ = match e.build(&bounds) {
                    Ok(s) => writeln!(text, "{}\t{}\t{} elements", e.id, e.spec, s.order()),
                    Err(err) => writeln!(text, "{}\t{}\tskipped: {err}", e.id, e.spec),
                };
            }
            emit(&text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Run(args) => {
            let entries = load(&args.corpus, &bounds)?;
            let options = RunOptions {
                selection: Selection {
                    laws: args.laws,
                    spectra: args.spectra,
                    modules: args.modules,
                    sdml: args.sdml,
                },
                bounds,
                jobs: args.jobs,
            };
            let reports = run_harnesses(&entries, &options).map_err(|e| e.to_string())?;
            let text = if args.stable_only {
                render_stable(&reports)
            } else {
                render_report(&reports)
            };
            match &args.out {
                Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?,
                None => emit(&text)?,
            }
            let summary = summarize(&reports);
            eprintln!(
                "{} entries, {} skipped, {} disagreements, {} pinned failures",
                summary.entries, summary.skipped, summary.disagreements, summary.expectation_failures
            );
            Ok(if summary.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Export(args) => {
            let entries = load(&args.corpus, &bounds)?;
            let entry = entries
                .iter()
                .find(|e| e.id == args.entry)
                .ok_or_else(|| format!("no entry with id `{}`", args.entry))?;
            let mut text = String::new();
            for path in export(entry, &args.what, &args.out, &bounds).map_err(|e| e.to_string())? {
                let _ = writeln!(text, "{}", path.display());
            }
            emit(&text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ListBuiltins => {
            let mut text = String::new();
            for e in builtin_corpus(&bounds).map_err(|e| e.to_string())? {
                let _ = writeln!(text, "{}\t{}", e.id, e.spec);
            }
            emit(&text)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}
