//! Driving the verification suites from code and reading the structured
//! report; the `isotower` binary wraps exactly this.

use isotower::harness::{run_suite, Status, SuiteConfig};

fn main() {
    let cfg = SuiteConfig { d0: 3, d1: 4, trials: 60, seed: 42, ..Default::default() };
    let report = run_suite("tower", &cfg).unwrap();
    for check in &report.checks {
        let tag = match check.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        };
        println!("[{tag}] {}", check.id);
    }
    println!(
        "suite {}: {} pass / {} fail (seed {}, residue convention: {})",
        report.suite,
        report.summary.pass,
        report.summary.fail,
        report.environment.seed,
        report.environment.residue_convention
    );

    // Reports are deterministic: identical (config, seed) gives identical
    // bytes.
    let again = run_suite("tower", &cfg).unwrap();
    println!(
        "byte-identical rerun: {}",
        serde_json::to_string(&report).unwrap() == serde_json::to_string(&again).unwrap()
    );
}
