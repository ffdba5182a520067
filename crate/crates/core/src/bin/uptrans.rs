use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use uptrans::cli::{self, Command, Format};
use uptrans::eval::DEFAULT_BUDGET;

const STACK: usize = 1 << 30;

#[derive(Parser)]
#[command(name = "uptrans", version, about = "Transport definitions and proofs across type equivalences")]
struct Args {
    #[command(subcommand)]
    cmd: Cmd,
    /// Reduction step budget per evaluation.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Subcommand)]
enum Cmd {
    /// Abstraction check of every definition (the corpus when no file is given).
    Check { files: Vec<PathBuf> },
    /// Print the translations of every definition.
    Translate { files: Vec<PathBuf> },
    /// Process relations and transports.
    Transport { files: Vec<PathBuf> },
    /// Replay the embedded script, then the given files.
    Replay { files: Vec<PathBuf> },
    /// Decide goals directly and through the replaced goal.
    Bench { files: Vec<PathBuf> },
    /// Print the prelude in surface syntax.
    Export,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let (cmd, files) = match args.cmd {
        Cmd::Check { files } => (Command::Check, files),
        Cmd::Translate { files } => (Command::Translate, files),
        Cmd::Transport { files } => (Command::Transport, files),
        Cmd::Replay { files } => (Command::Replay, files),
        Cmd::Bench { files } => (Command::Bench, files),
        Cmd::Export => {
            return match cli::export_prelude() {
                Ok(text) => {
                    print!("{}", text);
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("uptrans: {}", e);
                    ExitCode::from(2)
                }
            };
        }
    };
    let budget = args.budget;
    // terms nest as deep as their unary literals
    let worker = std::thread::Builder::new()
        .stack_size(STACK)
        .spawn(move || cli::run(cmd, &files, budget).map_err(|e| e.to_string()))
        .expect("spawn worker");
    let result = match worker.join() {
        Ok(r) => r,
        Err(_) => {
            eprintln!("uptrans: internal error");
            return ExitCode::from(2);
        }
    };
    match result {
        Ok(reports) => {
            print!("{}", cli::emit_report(&reports, args.format));
            ExitCode::from(cli::exit_code(&reports) as u8)
        }
        Err(e) => {
            eprintln!("uptrans: {}", e);
            ExitCode::from(2)
        }
    }
}
