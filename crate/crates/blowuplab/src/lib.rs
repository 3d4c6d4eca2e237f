//! Command line front end for `blowuplab-core`: configuration, artifact
//! output and the `verify` acceptance suite.
//!
//! A run is `parse_config` followed by [`run`], which computes everything in
//! memory and then writes the artifacts and a `manifest.json` into the output
//! directory. Exit codes: 0 success, 1 invalid input or domain error,
//! 2 verification failure.

// negated comparisons count NaN as a failed step
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;
pub mod verify;

use std::io;

use config::{Command, RunConfig};
use output::{manifest, write_dir, Artifacts, ErrorInfo};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

#[derive(Debug, Clone)]
pub struct RunResult {
    pub exit_code: i32,
    pub artifacts: Artifacts,
    /// Summary lines for stdout.
    pub lines: Vec<String>,
    pub error: Option<ErrorInfo>,
    /// Per-criterion results, for `verify` only.
    pub verify: Option<Vec<verify::Timed>>,
}

/// Runs the command without touching the disk.
pub fn execute(cfg: &RunConfig) -> RunResult {
    if cfg.command == Command::Verify {
        return execute_verify(cfg);
    }
    let outcome = match cfg.command {
        Command::Profiles => commands::profiles(cfg),
        Command::SpectrumBall => commands::spectrum_ball(cfg),
        Command::SpectrumSelfsimilar => commands::spectrum_selfsimilar(cfg),
        Command::Match => commands::matching(cfg),
        Command::Corrections => commands::corrections(cfg),
        Command::Ansatz => commands::ansatz(cfg),
        Command::Simulate => commands::simulate(cfg),
        Command::Verify => unreachable!(),
    };
    match outcome {
        Ok(out) => RunResult { exit_code: EXIT_OK, artifacts: out.artifacts, lines: out.summary, error: None, verify: None },
        Err(e) => RunResult {
            exit_code: EXIT_ERROR,
            artifacts: Artifacts::new(),
            lines: Vec::new(),
            error: Some(ErrorInfo { code: e.code().to_string(), message: e.to_string() }),
            verify: None,
        },
    }
}

fn execute_verify(cfg: &RunConfig) -> RunResult {
    if cfg.n != 5 || cfg.q != 0.5 || cfg.j != 1 || cfg.t != 1.0 {
        return RunResult {
            exit_code: EXIT_ERROR,
            artifacts: Artifacts::new(),
            lines: Vec::new(),
            error: Some(ErrorInfo {
                code: "domain".into(),
                message: "verify runs at the default parameters n = 5, q = 0.5, J = 1, T = 1".into(),
            }),
            verify: None,
        };
    }
    let suite = verify::run_suite(cfg.seed);
    let exit_code = if suite.passed() { EXIT_OK } else { EXIT_VERIFY_FAILED };
    RunResult {
        exit_code,
        lines: suite.results.iter().map(verify::Timed::line).collect(),
        artifacts: suite.artifacts,
        error: None,
        verify: Some(suite.results),
    }
}

/// Executes and writes artifacts plus manifest to `cfg.output_dir`.
pub fn run(cfg: &RunConfig) -> io::Result<RunResult> {
    let result = execute(cfg);
    let m = manifest(cfg, &result.artifacts, result.exit_code, result.error.as_ref());
    write_dir(&cfg.output_dir, &result.artifacts, &m)?;
    Ok(result)
}
