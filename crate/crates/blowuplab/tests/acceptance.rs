//! Acceptance criteria 1 to 10, one line each, with pinned limits and timings.
//! Exits nonzero if any criterion fails or overruns its runtime budget.

use std::process::ExitCode;

use blowuplab::verify::run_suite;

fn main() -> ExitCode {
    let suite = run_suite(0);
    println!("acceptance criteria (seed 0)");
    for t in &suite.results {
        println!("{}", t.detailed_line());
    }
    let failed = suite.results.iter().filter(|t| !t.passed()).count();
    println!("{} of {} criteria passed", suite.results.len() - failed, suite.results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
