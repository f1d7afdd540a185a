//! Criterion runner for the `acceptance` test target.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub id: &'static str,
    pub passed: bool,
    pub elapsed: Duration,
    pub detail: String,
}

/// Runs criteria in order, printing one line per criterion as it finishes.
#[derive(Debug, Default)]
pub struct Runner {
    outcomes: Vec<Outcome>,
}

impl Runner {
    pub fn new() -> Self {
        Runner::default()
    }

    /// `check` returns a detail line on success and the reason on failure;
    /// a panic or a run over `budget` also counts as failure.
    pub fn run(
        &mut self,
        id: &'static str,
        title: &str,
        budget: Duration,
        check: impl FnOnce() -> Result<String, String>,
    ) -> &Outcome {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        let (mut passed, mut detail) = match result {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(p) => (false, format!("panicked: {}", panic_text(&*p))),
        };
        if passed && elapsed > budget {
            passed = false;
            detail = format!("over time budget; {detail}");
        }
        let line = format!(
            "{} {id} {title} [{:.2}s of {}s] {detail}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
        println!("{line}");
        self.outcomes.push(Outcome { id, passed, elapsed, detail });
        self.outcomes.last().expect("just pushed")
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn failures(&self) -> usize {
        self.outcomes.iter().filter(|o| !o.passed).count()
    }
}

fn panic_text(payload: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = payload.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = payload.downcast_ref::<String>() {
        s.clone()
    } else {
        "non-string payload".to_string()
    }
}

/// `Err(reason)` unless `cond`.
pub fn ensure(cond: bool, reason: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(reason())
    }
}
