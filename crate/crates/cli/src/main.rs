use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use wordpron::lexicon::{ToyParams, ToyRules};
use wordpron_cli::{
    cmd_generate, cmd_inspect, cmd_predict, cmd_prepare, cmd_run, CliError, Overrides, RunConfig,
};

/// IGTREE word-pronunciation experiments.
#[derive(Parser)]
#[command(name = "wordpron", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Align a raw `word TAB phonemes [TAB morph TAB syllable TAB stress]` file.
    Prepare {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        /// Where unusable lines go (default: OUTPUT.rejects.tsv).
        #[arg(long)]
        rejects: Option<PathBuf>,
        /// Letter/phoneme seed scores replacing the built-in table.
        #[arg(long)]
        align_table: Option<PathBuf>,
    },
    /// Write a synthetic lexicon.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 2000)]
        words: usize,
        #[arg(long, value_enum, default_value = "naturalistic")]
        rules: RulesArg,
        /// Output file (default: standard output).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the experiments described by a config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        folds: Option<usize>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Transcribe words read from standard input with a trained system.
    Predict { system: PathBuf },
    /// Print statistics of a serialized tree or system artifact.
    InspectTree { path: PathBuf },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum RulesArg {
    Naturalistic,
    WindowDetermined,
}

fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Prepare {
            input,
            output,
            rejects,
            align_table,
        } => {
            let rejects = rejects.unwrap_or_else(|| {
                let mut name = output.clone().into_os_string();
                name.push(".rejects.tsv");
                name.into()
            });
            let s = cmd_prepare(&input, &output, &rejects, align_table.as_deref())?;
            eprintln!("{} entries written, {} rejected", s.accepted, s.rejected);
            if s.rejected > 0 {
                eprintln!("rejects listed in {}", rejects.display());
                return Ok(3);
            }
        }
        Command::Generate {
            seed,
            words,
            rules,
            output,
        } => {
            let rules = match rules {
                RulesArg::Naturalistic => ToyRules::Naturalistic,
                RulesArg::WindowDetermined => ToyRules::WindowDetermined,
            };
            if let Some(text) = cmd_generate(&ToyParams { seed, words, rules }, output.as_deref())?
            {
                print!("{text}");
            }
        }
        Command::Run {
            config,
            seed,
            folds,
            output_dir,
            workers,
        } => {
            let config = RunConfig::load(
                &config,
                &Overrides {
                    seed,
                    folds,
                    output_dir,
                    workers,
                },
            )?;
            let s = cmd_run(&config)?;
            eprintln!(
                "{} cells evaluated, {} files written to {}",
                s.cells,
                s.files.len(),
                s.output_dir.display()
            );
        }
        Command::Predict { system } => {
            let stdin = io::stdin();
            let stdout = io::stdout();
            cmd_predict(&system, stdin.lock(), stdout.lock(), io::stderr())?;
        }
        Command::InspectTree { path } => {
            print!("{}", cmd_inspect(&path)?);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => {
            let _ = io::stdout().flush();
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
