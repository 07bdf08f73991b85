//! Runs every acceptance criterion and prints one PASS/FAIL line for each.

use std::time::Instant;

use liouville::verify::{run_suite, SUITES};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for suite in SUITES {
        let start = Instant::now();
        let report = run_suite(suite.name).expect("suite name is valid");
        let seconds = start.elapsed().as_secs_f64();
        let total = report.cases.len();
        let passed = report.cases.iter().filter(|c| c.pass).count();
        let verdict = if report.overall_pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict}  {:<45} {passed}/{total} cases  {seconds:.2}s",
            suite.criterion, suite.title
        );
        for c in report.failures() {
            println!(
                "    {} [{}]: closed {} oracle {} error {:e} > tol {:e} {}",
                c.case_id, c.params, c.closed_value, c.oracle_value, c.rel_error, c.tolerance, c.note
            );
        }
        for c in report.cases.iter().filter(|c| c.pass && !c.note.is_empty()) {
            println!("    {}: {}", c.case_id, c.note);
        }
        if !report.overall_pass {
            failed.push(suite.criterion);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
