//! Acceptance matrix: one pass/fail line per criterion. Criterion numbers
//! given as arguments restrict the run, e.g.
//! `cargo test --test acceptance -- 1 2 3`.

use gln_voronoi::checks::{summarize, Acceptance, CheckReport, CRITERIA};
use std::process::ExitCode;

fn main() -> ExitCode {
    let mut ids: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if ids.is_empty() {
        ids = (1..=CRITERIA.len() as u32).collect();
    }
    let mut reports: Vec<CheckReport> = Vec::new();
    if let Err(e) = Acceptance::default().run(&ids, &mut |r| reports.push(r)) {
        println!("acceptance run failed: {e}");
        return ExitCode::FAILURE;
    }
    let mut all = true;
    for &id in &ids {
        let s = summarize(CRITERIA[id as usize - 1], &reports);
        println!(
            "criterion {:>2} {} ({}; {} reports, {} failed, worst abs {:.2e}, worst rel {:.2e}) {}",
            id,
            if s.passed() { "PASS" } else { "FAIL" },
            s.criterion.tolerance,
            s.total,
            s.failed,
            s.worst_abs,
            s.worst_rel,
            s.criterion.title,
        );
        for r in reports.iter().filter(|r| s.criterion.checks.contains(&r.check.as_str()) && !r.passed()) {
            println!("    failed {} {:?} abs {:.3e} rel {:.3e}", r.check, r.params, r.abs_err, r.rel_err);
        }
        all &= s.passed();
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
