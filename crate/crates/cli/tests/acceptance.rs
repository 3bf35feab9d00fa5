//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;

use brauer_cli::suite;

const SEED: u64 = 20_240_601;

fn main() -> ExitCode {
    let outcomes = suite::run_all(SEED);
    for o in &outcomes {
        let limit = o
            .limit
            .map(|l| format!(", limit {:.0}s", l.as_secs_f64()))
            .unwrap_or_default();
        println!("{} ({:.2}s{limit})", o.line(), o.elapsed.as_secs_f64());
        for f in &o.failures {
            println!("       {f}");
        }
    }
    let failed: Vec<u32> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id)
        .collect();
    if outcomes.len() == 10 && failed.is_empty() {
        println!("acceptance: 10/10 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
