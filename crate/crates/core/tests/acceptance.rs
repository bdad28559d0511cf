//! Runs every acceptance criterion and prints one line per criterion.
//!
//! Criteria listed in `KNOWN_RED` are reported but do not fail the run;
//! each has an entry in the decisions ledger explaining why it cannot pass.

use tenspec_core::verify::{run, suite, VerifyConfig};

const KNOWN_RED: &[u8] = &[5];

fn main() {
    let ids = suite("all").expect("suite exists");
    let results = run(&ids, &VerifyConfig::default());
    let mut unexpected = Vec::new();
    for r in &results {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {:<28} {:>7.1}s  {}", r.id, r.name, r.seconds, r.detail);
        if !r.passed && !KNOWN_RED.contains(&r.id) {
            unexpected.push(r.id);
        }
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("{passed}/{} criteria passed", results.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
