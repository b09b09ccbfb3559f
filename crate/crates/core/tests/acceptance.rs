//! One PASS/FAIL line per acceptance criterion, at full validation level.

use std::process::ExitCode;
use std::time::Instant;

use biharm::harness::{run_criterion, Level, RunReport, ValidationOptions, CRITERIA};

fn main() -> ExitCode {
    let opts = ValidationOptions::new(Level::Full);
    let mut report = RunReport::default();
    for n in 1..=CRITERIA.len() {
        let t = Instant::now();
        report.checks.push(run_criterion(n, &opts));
        report.time(format!("{n:02}"), t.elapsed().as_secs_f64());
        if let Some(line) = report.lines().last() {
            println!("{line}");
        }
    }
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let total: f64 = report.timings.iter().map(|t| t.seconds).sum();
    println!("{} of {} criteria pass ({total:.0} s)", CRITERIA.len() - failed.len(), CRITERIA.len());
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failing: {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
