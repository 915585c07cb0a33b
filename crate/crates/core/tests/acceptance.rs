//! One line per acceptance criterion, each against a wall-clock budget.

use std::time::{Duration, Instant};

use dms_core::verify::{run, RunConfig, Suite};

const BUDGETS: [(Suite, u64); 7] = [
    (Suite::Counting, 1),
    (Suite::Ginzburg, 1),
    (Suite::Strings, 60),
    (Suite::Spherical, 120),
    (Suite::Relations, 300),
    (Suite::Tilting, 300),
    (Suite::Fields, 600),
];

fn main() {
    let cfg = RunConfig::default();
    let mut failed = Vec::new();
    for (i, (suite, secs)) in BUDGETS.into_iter().enumerate() {
        let budget = Duration::from_secs(secs);
        let t0 = Instant::now();
        let report = run(suite, &cfg);
        let took = t0.elapsed();
        let (ok, why) = match &report {
            Ok(r) if r.pass && took <= budget => (true, String::new()),
            Ok(r) if r.pass => (false, " over budget".to_string()),
            Ok(r) => (false, format!(" {}", r.failures().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", "))),
            Err(e) => (false, format!(" error: {e}")),
        };
        println!(
            "criterion {} {}: {} ({:.3}s / {}s){}",
            i + 1,
            suite.name(),
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            secs,
            why
        );
        if !ok {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failing criteria: {failed:?}");
        std::process::exit(1);
    }
}
