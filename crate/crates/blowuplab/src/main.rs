use std::path::PathBuf;
use std::process::ExitCode;

use blowuplab::config::{parse_config_for, Command};
use blowuplab::{run, EXIT_ERROR};
use clap::Parser;
use serde_json::json;

/// Numerical laboratory for type-II blowup of the radial semilinear heat equation.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    /// profiles, spectrum-ball, spectrum-selfsimilar, match, corrections,
    /// ansatz, simulate or verify; may also be given by the `command` key
    command: Option<String>,
    /// Flat key-value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for sampled checks (overrides `seed`)
    #[arg(long)]
    seed: Option<u64>,
    /// Suppress the summary on stdout
    #[arg(long)]
    quiet: bool,
}

fn fail(code: &str, message: &str) -> ExitCode {
    eprintln!("{}", json!({ "error": code, "message": message }));
    ExitCode::from(EXIT_ERROR as u8)
}

fn init_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("BLOWUPLAB_THREADS") else { return Ok(()) };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("BLOWUPLAB_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = init_threads() {
        return fail("environment", &msg);
    }
    let command = match cli.command.as_deref().map(|name| Command::from_name(name).ok_or(name)) {
        None => None,
        Some(Ok(c)) => Some(c),
        Some(Err(name)) => return fail("parse", &format!("unknown command {name:?}")),
    };
    let text = match &cli.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail("io", &format!("{}: {e}", path.display())),
        },
        None => String::new(),
    };
    let mut cfg = match parse_config_for(&text, command) {
        Ok(c) => c,
        Err(e) => return fail("parse", &e.to_string()),
    };
    if let Some(out) = cli.out {
        cfg.output_dir = out;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    let result = match run(&cfg) {
        Ok(r) => r,
        Err(e) => return fail("io", &format!("{}: {e}", cfg.output_dir.display())),
    };
    if let Some(err) = &result.error {
        eprintln!("{}", json!({ "error": err.code, "message": err.message }));
    }
    if !cli.quiet {
        for line in &result.lines {
            println!("{line}");
        }
    }
    ExitCode::from(result.exit_code as u8)
}
