//! Runs the eleven acceptance criteria on the full profile and prints one
//! PASS/FAIL line each.
//!
//! Criterion 7 compares the Lie pipelines against the published closed forms
//! and is known to fail: the computed stages differ from those forms in a few
//! corners and some terminal graphs are not forests. The failure is printed
//! like any other. This target exits non-zero when the set of failing
//! criteria differs from `KNOWN_FAILURES` in either direction.

use std::collections::BTreeSet;
use std::process::ExitCode;

use repgrowth::verify::{run_criterion, Profile, VerifyOptions, CRITERIA};

const KNOWN_FAILURES: [u8; 1] = [7];

fn main() -> ExitCode {
    let dot_dir = std::env::temp_dir().join(format!("repgrowth-acceptance-{}", std::process::id()));
    let opts = VerifyOptions {
        profile: Profile::Full,
        seed: 1,
        fault: None,
        dot_dir: Some(dot_dir.clone()),
    };
    let mut failing = BTreeSet::new();
    for id in 1..=CRITERIA {
        let r = run_criterion(id, &opts);
        println!("{r} ({} ms)", r.elapsed_ms);
        if !r.passed {
            failing.insert(id);
        }
    }
    let mut dot_ok = true;
    for name in ["sl8_gamma3", "so8_gamma3", "sp7_gamma8"] {
        let emitted = dot_dir.join(format!("{name}.dot")).is_file();
        println!(
            "{} DOT {name}.dot emitted",
            if emitted { "PASS" } else { "FAIL" }
        );
        dot_ok &= emitted;
    }
    let _ = std::fs::remove_dir_all(&dot_dir);
    let known: BTreeSet<u8> = KNOWN_FAILURES.into_iter().collect();
    if failing == known && dot_ok {
        println!("acceptance: failures match the known list {known:?}");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing {failing:?}, known {known:?}, DOT emitted: {dot_ok}");
        ExitCode::FAILURE
    }
}
