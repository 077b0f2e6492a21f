//! One line per acceptance criterion; the test fails if any criterion does.

use std::io::Write;

use torsor::suite;

#[test]
fn acceptance() {
    let outcomes = suite::run_all();
    // the raw handle bypasses libtest's output capture
    let mut err = std::io::stderr().lock();
    writeln!(err).unwrap();
    for o in &outcomes {
        writeln!(err, "{}", o.line()).unwrap();
    }
    let failed: Vec<u32> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
