//! The `restcheck` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::owl::{serialize, DEFAULT_BASE_IRI};
use crate::pipeline::{self, CheckOptions};
use crate::report::{render_diagnostics, render_json, render_text, CheckReport, Overall};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONSISTENT: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_DISAGREEMENT: i32 = 4;

/// Largest domain size accepted by `--oracle`.
pub const ORACLE_LIMIT: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "restcheck",
    version,
    about = "Consistency checking for REST resource and behavioral models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, clap::Args)]
struct Common {
    /// Model file holding a resource model and optionally a behavioral model
    #[arg(value_name = "FILE")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Base IRI of the generated ontology
    #[arg(long, value_name = "IRI", default_value = DEFAULT_BASE_IRI)]
    base_iri: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse the model and run the structural checks
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Write the OWL 2 functional-syntax ontology of the model
    Translate {
        #[command(flatten)]
        common: Common,
        /// Output file; standard output when omitted
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Decide whether every resource and state can be instantiated
    Check {
        #[command(flatten)]
        common: Common,
        /// Cross-check each verdict with the finite-model oracle, e.g. `bounded:3`
        #[arg(long, value_name = "bounded:K", value_parser = parse_oracle)]
        oracle: Option<u32>,
    },
}

fn parse_oracle(s: &str) -> Result<u32, String> {
    let k = s
        .strip_prefix("bounded:")
        .ok_or_else(|| format!("expected bounded:<k>, found '{s}'"))?;
    let k: u32 = k
        .parse()
        .map_err(|_| format!("'{k}' is not a natural number"))?;
    if k == 0 || k > ORACLE_LIMIT {
        return Err(format!("bound must be between 1 and {ORACLE_LIMIT}"));
    }
    Ok(k)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Validate,
    Translate,
    Check,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliConfig {
    pub command: CommandKind,
    pub input: PathBuf,
    /// Only used by `translate`.
    pub output: Option<PathBuf>,
    pub base_iri: String,
    pub format: Format,
    /// Only used by `check`.
    pub oracle_bound: Option<u32>,
}

impl From<Cli> for CliConfig {
    fn from(cli: Cli) -> Self {
        let (command, common, output, oracle_bound) = match cli.command {
            Command::Validate { common } => (CommandKind::Validate, common, None, None),
            Command::Translate { common, output } => (CommandKind::Translate, common, output, None),
            Command::Check { common, oracle } => (CommandKind::Check, common, None, oracle),
        };
        CliConfig {
            command,
            input: common.input,
            output,
            base_iri: common.base_iri,
            format: common.format,
            oracle_bound,
        }
    }
}

/// Parses `args` (program name first) and runs the command. Usage errors
/// exit with [`EXIT_INVALID`].
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli.into()),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            }
        }
    }
}

fn exit_code(overall: Overall) -> i32 {
    match overall {
        Overall::Consistent => EXIT_OK,
        Overall::Inconsistent => EXIT_INCONSISTENT,
        Overall::Invalid => EXIT_INVALID,
    }
}

fn emit(report: &CheckReport, format: Format) {
    match format {
        Format::Text => print!("{}", render_text(report)),
        Format::Json => {
            print!("{}", render_json(report));
            eprint!("{}", render_diagnostics(report));
        }
    }
}

pub fn run(config: &CliConfig) -> i32 {
    let source = match std::fs::read_to_string(&config.input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", config.input.display());
            return EXIT_IO;
        }
    };
    let file = config.input.display().to_string();
    match config.command {
        CommandKind::Validate => {
            let report = pipeline::validate(&source, &file);
            emit(&report, config.format);
            exit_code(report.overall)
        }
        CommandKind::Translate => match pipeline::translate(&source, &file, &config.base_iri) {
            Ok(t) => {
                let text = serialize(&t.ontology);
                let written = match &config.output {
                    Some(path) => {
                        std::fs::write(path, &text).map_err(|e| (path.display().to_string(), e))
                    }
                    None => std::io::stdout()
                        .write_all(text.as_bytes())
                        .map_err(|e| ("standard output".into(), e)),
                };
                match written {
                    Ok(()) => EXIT_OK,
                    Err((target, e)) => {
                        eprintln!("error: cannot write {target}: {e}");
                        EXIT_IO
                    }
                }
            }
            Err(report) => {
                emit(&report, config.format);
                exit_code(report.overall)
            }
        },
        CommandKind::Check => {
            let opts = CheckOptions {
                base_iri: config.base_iri.clone(),
                oracle_bound: config.oracle_bound.map(|k| k.min(ORACLE_LIMIT)),
            };
            let outcome = pipeline::check(&source, &file, &opts);
            if !outcome.disagreements.is_empty() {
                for d in &outcome.disagreements {
                    eprintln!("error[ORACLE_DISAGREEMENT] {d}");
                }
                return EXIT_DISAGREEMENT;
            }
            emit(&outcome.report, config.format);
            exit_code(outcome.report.overall)
        }
    }
}
