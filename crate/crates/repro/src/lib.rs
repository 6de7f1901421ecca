//! Result lines for the acceptance run: one `PASS`/`FAIL` line per
//! numbered criterion, with the measured values alongside.

use std::fmt;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: u32,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "PASS" } else { "FAIL" };
        write!(f, "{verdict} [{:>2}] {}: {}", self.id, self.title, self.detail)
    }
}

/// Collects sub-results for one criterion; the criterion passes only if
/// every part does.
#[derive(Debug)]
pub struct Parts {
    pass: bool,
    notes: Vec<String>,
}

impl Default for Parts {
    fn default() -> Self {
        Self { pass: true, notes: Vec::new() }
    }
}

impl Parts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, ok: bool, note: impl Into<String>) {
        self.pass &= ok;
        let mark = if ok { "" } else { "✗ " };
        self.notes.push(format!("{mark}{}", note.into()));
    }

    pub fn finish(self, id: u32, title: &'static str) -> Check {
        Check { id, title, pass: self.pass, detail: self.notes.join("; ") }
    }
}

/// Runs one criterion, turning a panic into a `FAIL` line.
pub fn run(id: u32, title: &'static str, f: impl FnOnce() -> Check) -> Check {
    let start = Instant::now();
    let mut check = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(c) => c,
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Check { id, title, pass: false, detail: format!("panicked: {msg}") }
        }
    };
    check.detail.push_str(&format!(" [{:.1} s]", start.elapsed().as_secs_f64()));
    check
}

/// Least-squares slope of y against x.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
