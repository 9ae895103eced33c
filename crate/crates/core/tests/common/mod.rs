#![allow(dead_code)]

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::sync::{Arc, Mutex, OnceLock};

use cubic_resum::perturbation::{load_or_compute, HamiltonianConvention, WeakSeries};
use cubic_resum::strong::{analyze_level_pair, LevelPairAnalysis, MAX_STRONG_ORDER};
use cubic_resum::Precision;
use rug::ops::Pow;
use rug::Float;

/// Highest weak order any test needs: `K = 250` plus two.
pub const WEAK_ORDER: usize = 252;
pub const REF_BITS: u32 = 600;

pub fn cache_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("weak-cache")
}

/// Levels 0 and 1 through [`WEAK_ORDER`], generated in parallel on first use
/// and cached on disk between runs.
pub fn weak(level: u32, order: usize) -> WeakSeries {
    static CELL: OnceLock<[WeakSeries; 2]> = OnceLock::new();
    assert!(level <= 1 && order <= WEAK_ORDER);
    let both = CELL.get_or_init(|| {
        let dir = cache_dir();
        std::thread::scope(|s| {
            let dir = &dir;
            let h: Vec<_> = (0..2u32).map(|n| s.spawn(move || load_or_compute(dir, n, WEAK_ORDER, HamiltonianConvention::PaperMain).expect("weak cache"))).collect();
            let mut it = h.into_iter().map(|h| h.join().expect("generator thread"));
            [it.next().unwrap(), it.next().unwrap()]
        })
    });
    both[level as usize].truncate(order)
}

/// Level-pair analysis at order `k` with the default window, memoized.
pub fn level_pair(k: usize) -> Arc<LevelPairAnalysis> {
    static CELL: OnceLock<Mutex<HashMap<usize, Arc<Mutex<Option<Arc<LevelPairAnalysis>>>>>>> = OnceLock::new();
    let slot = CELL.get_or_init(Default::default).lock().unwrap().entry(k).or_default().clone();
    let mut guard = slot.lock().unwrap();
    if let Some(a) = guard.as_ref() {
        return a.clone();
    }
    let a = Arc::new(analyze_level_pair(&weak(0, k + 2), &weak(1, k + 2), k, MAX_STRONG_ORDER, Precision::for_order(k)).expect("level-pair analysis"));
    *guard = Some(a.clone());
    a
}

/// A value as printed with grouped digits and an optional parenthetical last
/// digit uncertainty, e.g. `0.51689 17642 53171 97821 1(0)`.
#[derive(Clone, Debug)]
pub struct Printed {
    pub value: Float,
    /// One unit of the last printed digit.
    pub unit: Float,
    pub paren: Option<u32>,
}

impl Printed {
    pub fn parse(text: &str) -> Printed {
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let (body, paren) = match compact.split_once('(') {
            Some((b, rest)) => (b.to_string(), Some(rest.trim_end_matches(')').parse::<u32>().expect("parenthetical digit"))),
            None => (compact.clone(), None),
        };
        let decimals = body.split_once('.').map_or(0, |(_, f)| f.len()) as i32;
        let value = Float::with_val(REF_BITS, Float::parse(&body).expect("printed number"));
        let unit = Float::with_val(REF_BITS, 10).pow(-decimals);
        Printed { value, unit, paren }
    }

    /// Agreement with every printed digit: `(paren + 1)` units, or one unit
    /// without a parenthetical digit.
    pub fn digit_tolerance(&self) -> Float {
        Float::with_val(REF_BITS, &self.unit * (self.paren.unwrap_or(0) + 1))
    }

    /// `factor` times the quoted uncertainty (at least one unit).
    pub fn scaled_uncertainty(&self, factor: u32) -> Float {
        Float::with_val(REF_BITS, &self.unit * (self.paren.unwrap_or(1).max(1) * factor))
    }
}

pub fn diff(a: &Float, b: &Float) -> Float {
    Float::with_val(REF_BITS, Float::with_val(REF_BITS, a) - b).abs()
}

pub fn sci(x: &Float) -> String {
    format!("{:.2e}", x.to_f64())
}

/// One acceptance criterion: named sub-checks and a single summary line.
pub struct Criterion {
    id: u32,
    title: &'static str,
    checks: Vec<(String, bool)>,
}

impl Criterion {
    pub fn new(id: u32, title: &'static str) -> Self {
        Criterion { id, title, checks: Vec::new() }
    }

    pub fn check(&mut self, ok: bool, detail: impl Into<String>) {
        self.checks.push((detail.into(), ok));
    }

    /// `|ours - reference| <= tol`.
    pub fn close(&mut self, what: &str, ours: &Float, reference: &Float, tol: &Float) {
        let d = diff(ours, reference);
        let ok = d <= *tol;
        self.check(ok, format!("{what}: diff {} vs tol {}", sci(&d), sci(tol)));
    }

    /// Prints the summary line outside the test harness capture, then fails
    /// the test if any sub-check failed.
    pub fn finish(self) {
        let pass = self.checks.iter().all(|(_, ok)| *ok);
        let details: Vec<String> = self.checks.iter().map(|(d, ok)| format!("[{}] {d}", if *ok { "ok" } else { "FAIL" })).collect();
        let line = format!("criterion {:>2} {}: {} | {}\n", self.id, if pass { "PASS" } else { "FAIL" }, self.title, details.join("; "));
        let mut out = std::io::stdout().lock();
        let _ = out.write_all(line.as_bytes());
        let _ = out.flush();
        assert!(pass, "{}", line.trim_end());
    }
}
