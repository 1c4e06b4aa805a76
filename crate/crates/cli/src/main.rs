use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use splitclosure::compat::DEFAULT_SEARCH_CAP;
use splitclosure::{OrderPolicy, RuleKind};
use splitclosure_cli::commands::{
    self, exit, CheckKind, ClosureCommand, CycleChoice, ExtractOptions,
};
use splitclosure_cli::{CliError, Input, Outcome};

#[derive(Parser)]
#[command(
    name = "splitclosure",
    version,
    about = "Amalgamate partial trees into circular split systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Read Newick trees and write the reduced union of their splits.
    Extract(ExtractArgs),
    /// Compute the closure of a splits file under a rule.
    Closure(ClosureArgs),
    /// Test weak compatibility or circularity (exit 0 yes, 1 no, 2 infeasible).
    Check(CheckArgs),
    /// Write the full splits of a splits file as a Nexus document.
    ExportNexus(ExportArgs),
}

#[derive(Args)]
struct ExtractArgs {
    /// Newick files; `-` reads standard input.
    #[arg(required = true)]
    trees: Vec<PathBuf>,
    /// Omit splits with a single taxon on one side.
    #[arg(long)]
    drop_trivial: bool,
    /// Comma-separated leaves to remove from every tree.
    #[arg(long, value_delimiter = ',')]
    prune: Vec<String>,
    /// Comma-separated taxa fixing the universe and its order.
    #[arg(long, value_delimiter = ',')]
    taxa: Option<Vec<String>>,
    /// With --taxa, append unknown tree labels instead of failing.
    #[arg(long, requires = "taxa")]
    grow_universe: bool,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    M,
    Y,
    My,
    Z,
}

#[derive(Args)]
struct ClosureArgs {
    /// Splits file; `-` reads standard input.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "my")]
    rule: RuleArg,
    /// Skip the weak-compatibility guard of the Y and MY rules.
    #[arg(long)]
    unguarded: bool,
    /// `canonical` or `random:<seed>`.
    #[arg(long, default_value = "canonical", value_parser = commands::parse_policy)]
    policy: OrderPolicy,
    /// Write one line per rule application to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    input: PathBuf,
    #[arg(
        long,
        conflicts_with = "circular",
        required_unless_present = "circular"
    )]
    weakly_compatible: bool,
    #[arg(long)]
    circular: bool,
    /// Largest universe searched exhaustively for a cycle.
    #[arg(long, default_value_t = DEFAULT_SEARCH_CAP, requires = "circular")]
    max_n: usize,
}

#[derive(Args)]
struct ExportArgs {
    input: PathBuf,
    /// `auto`, `none`, or a comma-separated ordering of all taxa.
    #[arg(long, default_value = "auto")]
    cycle: String,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(io)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(io)
    }
}

fn write(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let (outcome, output, trace): (Outcome, Option<PathBuf>, Option<PathBuf>) = match cli.command {
        Command::Extract(a) => {
            let texts = a
                .trees
                .iter()
                .map(|p| read(p))
                .collect::<Result<Vec<_>, _>>()?;
            let names: Vec<String> = a.trees.iter().map(|p| p.display().to_string()).collect();
            let inputs: Vec<Input> = names
                .iter()
                .zip(&texts)
                .map(|(path, text)| Input { path, text })
                .collect();
            let opts = ExtractOptions {
                drop_trivial: a.drop_trivial,
                prune: a.prune,
                taxa: a.taxa,
                grow_universe: a.grow_universe,
            };
            (commands::extract(&inputs, &opts)?, a.output, None)
        }
        Command::Closure(a) => {
            let text = read(&a.input)?;
            let path = a.input.display().to_string();
            let cmd = ClosureCommand {
                rule: match a.rule {
                    RuleArg::M => RuleKind::M,
                    RuleArg::Y => RuleKind::Y,
                    RuleArg::My => RuleKind::MY,
                    RuleArg::Z => RuleKind::Z,
                },
                unguarded: a.unguarded,
                policy: a.policy,
                trace: a.trace.is_some(),
            };
            (
                commands::closure_cmd(
                    Input {
                        path: &path,
                        text: &text,
                    },
                    &cmd,
                )?,
                a.output,
                a.trace,
            )
        }
        Command::Check(a) => {
            let text = read(&a.input)?;
            let path = a.input.display().to_string();
            let kind = if a.weakly_compatible {
                CheckKind::WeaklyCompatible
            } else {
                CheckKind::Circular { max_n: a.max_n }
            };
            (
                commands::check(
                    Input {
                        path: &path,
                        text: &text,
                    },
                    kind,
                )?,
                None,
                None,
            )
        }
        Command::ExportNexus(a) => {
            let text = read(&a.input)?;
            let path = a.input.display().to_string();
            let cycle: CycleChoice = commands::parse_cycle(&a.cycle);
            (
                commands::export_nexus(
                    Input {
                        path: &path,
                        text: &text,
                    },
                    &cycle,
                )?,
                a.output,
                None,
            )
        }
    };
    for m in &outcome.messages {
        eprintln!("{m}");
    }
    if let (Some(path), Some(text)) = (trace, &outcome.trace) {
        write(Some(&path), text)?;
    }
    if !outcome.output.is_empty() {
        write(output.as_deref(), &outcome.output)?;
    }
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit::ERROR
        }
    };
    ExitCode::from(code as u8)
}
