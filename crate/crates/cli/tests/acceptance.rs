//! The thirteen acceptance criteria, one test each. Criteria run one at a
//! time so that wall-clock budgets are not polluted by each other.
//!
//! `cargo test --test acceptance -- --nocapture` shows the summary lines.

use std::process::Command;
use std::sync::Mutex;

use pshosc::verify::run_criterion;

const SEED: u64 = 7;

static SERIAL: Mutex<()> = Mutex::new(());

fn check(id: &str) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let outcome = run_criterion(id, SEED).expect("known criterion");
    let timing = match outcome.budget {
        Some(b) => format!(" [{:.2}s of {}s]", outcome.elapsed.as_secs_f64(), b.as_secs_f64()),
        None => format!(" [{:.2}s]", outcome.elapsed.as_secs_f64()),
    };
    println!("{}{timing}", outcome.summary_line());
    assert!(outcome.pass, "{}", outcome.summary_line());
    assert!(outcome.within_budget(), "{id} exceeded its budget{timing}");
}

#[test]
fn c01() {
    check("C01");
}

#[test]
fn c02() {
    check("C02");
}

#[test]
fn c03() {
    check("C03");
}

#[test]
fn c04() {
    check("C04");
}

#[test]
fn c05() {
    check("C05");
}

#[test]
fn c06() {
    check("C06");
}

#[test]
fn c07() {
    check("C07");
}

#[test]
fn c08() {
    check("C08");
}

#[test]
fn c09() {
    check("C09");
}

#[test]
fn c10() {
    check("C10");
}

#[test]
fn c11() {
    check("C11");
}

#[test]
fn c12() {
    check("C12");
}

#[test]
fn c13() {
    check("C13");
    // and end to end: two runs of the binary at different thread counts
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_pshosc"))
            .args(["remez", "sweep", "--count", "40", "--seed", "7", "--threads", threads])
            .output()
            .expect("spawn pshosc");
        assert!(out.status.code().is_some_and(|c| c <= 1), "{}", String::from_utf8_lossy(&out.stderr));
        out.stdout
    };
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    assert_eq!(run("1"), run("3"));
}
