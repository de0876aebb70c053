//! Run the fast self-test suite and print one line per check.

use nonlocal_rd::verify::{verify_suite, Level};

fn main() {
    let report = verify_suite(Level::Fast);
    for c in &report.checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        println!("[{status}] {:>2} {}: measured {:.6e}, target {:.6e}, tol {:.1e}", c.criterion, c.name, c.measured, c.target, c.tol);
        if let Some(n) = &c.note {
            println!("          {n}");
        }
    }
    println!("{} passed, {} failed", report.passed, report.failed);
}
