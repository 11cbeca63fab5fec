//! Bookkeeping for the acceptance suite: one outcome per criterion and a
//! summary line for each.

use std::fmt;
use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {} ({:.2} s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

/// Runs `check`, which returns pass/fail and a detail string, and times it.
pub fn run(id: u8, title: &'static str, check: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = check();
    let outcome = Outcome {
        id,
        title,
        passed,
        detail,
        elapsed: start.elapsed(),
    };
    println!("{outcome}");
    outcome
}

/// Accumulates sub-checks of one criterion into a single verdict.
#[derive(Debug)]
pub struct Checks {
    passed: bool,
    parts: Vec<String>,
}

impl Default for Checks {
    fn default() -> Self {
        Self::new()
    }
}

impl Checks {
    pub fn new() -> Self {
        Self {
            passed: true,
            parts: Vec::new(),
        }
    }

    pub fn check(&mut self, ok: bool, what: impl Into<String>) -> &mut Self {
        self.passed &= ok;
        let what = what.into();
        self.parts.push(if ok { what } else { format!("{what} [miss]") });
        self
    }

    pub fn finish(self) -> (bool, String) {
        (self.passed, self.parts.join("; "))
    }
}

pub fn within(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
