use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use fermi_scope_cli::{configure_threads, load_config, run, Command};

/// Fermi phase-space functions, symplectic capacities and Wigner comparisons.
#[derive(Parser)]
#[command(name = "fermi-scope", version, about)]
struct Cli {
    command: Command,
    /// JSON run configuration, or `-` for standard input
    #[arg(long)]
    config: PathBuf,
    /// Directory for output files (defaults to the config's outDir, then the working directory)
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| {
        let config = load_config(&cli.config)?;
        let out_dir = cli
            .out_dir
            .clone()
            .or_else(|| config.out_dir.clone())
            .unwrap_or_else(|| PathBuf::from("."));
        run(cli.command, &config, &out_dir)
    });
    match result {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("fermi-scope: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
