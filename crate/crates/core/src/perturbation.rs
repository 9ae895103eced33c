//! Exact weak-coupling coefficients of the cubic oscillator.
//!
//! The level-`N` eigenfunction of `-½∂² + ½x² + b x³` is written as
//! `e^{-x²/2} Σ_k b^k u_k(x)` with polynomial `u_k` of degree `3k + N`.
//! Matching powers of `b` gives, for the coefficients `c^k_n` of `u_k`,
//!
//! ```text
//! (n - N) c^k_n = ½ (n+2)(n+1) c^k_{n+2} - c^{k-1}_{n-3} + Σ_{j=1..k} e_j c^{k-j}_n
//! ```
//!
//! solved top-down in `n`. The row `n = N` is the solvability condition that
//! fixes `e_k`; the coefficient of `x^N` in `u_k` is pinned to zero for
//! `k >= 1`. Odd `e_k` vanish, and with `b² = -g/36` the physical series is
//! `E_L = e_{2L} (-1/36)^L`.

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::number::Precision;

/// Normalization of the cubic perturbation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HamiltonianConvention {
    /// `½x² + i √g x³ / 6`.
    PaperMain,
    /// `½x² + √g x³`.
    AppendixC,
}

impl HamiltonianConvention {
    pub fn tag(self) -> &'static str {
        match self {
            HamiltonianConvention::PaperMain => "paper-main",
            HamiltonianConvention::AppendixC => "appendix-c",
        }
    }

    /// `b²` per unit `g` for the cubic coupling `b`.
    fn b_squared(self) -> Rational {
        match self {
            HamiltonianConvention::PaperMain => Rational::from((-1, 36)),
            HamiltonianConvention::AppendixC => Rational::from(1),
        }
    }
}

impl fmt::Display for HamiltonianConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for HamiltonianConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper-main" => Ok(HamiltonianConvention::PaperMain),
            "appendix-c" => Ok(HamiltonianConvention::AppendixC),
            other => Err(Error::Parse(format!("unknown convention `{other}`"))),
        }
    }
}

/// `E_0..=E_K` for one level, exact.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakSeries {
    pub level: u32,
    pub coeffs: Vec<Rational>,
    pub convention: HamiltonianConvention,
}

impl WeakSeries {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn truncate(&self, order: usize) -> WeakSeries {
        WeakSeries { level: self.level, coeffs: self.coeffs[..=order.min(self.order())].to_vec(), convention: self.convention }
    }

    pub fn to_floats(&self, prec: Precision) -> Vec<Float> {
        self.coeffs.iter().map(|c| prec.rational(c)).collect()
    }

    /// First `L >= 1` whose sign differs from `(-1)^{L+1}`, if any.
    pub fn sign_violation(&self) -> Option<usize> {
        (1..self.coeffs.len()).find(|&l| {
            let expected = if l % 2 == 1 { std::cmp::Ordering::Greater } else { std::cmp::Ordering::Less };
            self.coeffs[l].cmp0() != expected
        })
    }
}

/// Result of a generation that may have been cut short.
#[derive(Clone, Debug)]
pub struct WeakRun {
    pub series: WeakSeries,
    /// `true` when the budget ran out before the requested order.
    pub partial: bool,
    pub requested: usize,
}

/// Exact `E_0..=E_order` for `level`.
pub fn weak_coefficients(level: u32, order: usize, convention: HamiltonianConvention) -> WeakSeries {
    weak_coefficients_with_budget(level, order, convention, None).series
}

/// Same as [`weak_coefficients`], but stops once `budget` wall time is spent
/// and returns the orders completed so far.
pub fn weak_coefficients_with_budget(level: u32, order: usize, convention: HamiltonianConvention, budget: Option<Duration>) -> WeakRun {
    let start = Instant::now();
    let n0 = level as usize;
    let kmax = 2 * order;

    // u_0: (n - N) c_n = ½ (n+2)(n+1) c_{n+2}, c_N = 1.
    let mut u0 = vec![Rational::new(); n0 + 1];
    u0[n0] = Rational::from(1);
    let mut n = n0 as i64 - 2;
    while n >= 0 {
        let i = n as usize;
        let v = Rational::from((i as u64 + 2) * (i as u64 + 1)) * &u0[i + 2] / 2u32;
        u0[i] = v / Rational::from(n - n0 as i64);
        n -= 2;
    }

    let mut u: Vec<Vec<Rational>> = vec![u0];
    let mut e: Vec<Rational> = vec![Rational::new()];
    let mut reached = 0usize;
    let mut partial = false;

    for k in 1..=kmax {
        if let Some(b) = budget {
            if k % 2 == 1 && start.elapsed() > b {
                partial = true;
                break;
            }
        }
        let deg = 3 * k + n0;
        let mut ck = vec![Rational::new(); deg + 1];
        let mut ek = Rational::new();
        let mut n = deg as i64;
        while n >= 0 {
            let i = n as usize;
            n -= 1;
            if (i + n0 + k) % 2 == 1 {
                continue;
            }
            let mut rhs = Rational::new();
            if i + 2 <= deg {
                let t = Rational::from((i as u64 + 2) * (i as u64 + 1)) * &ck[i + 2];
                rhs += t / 2u32;
            }
            if i >= 3 && i - 3 < u[k - 1].len() {
                rhs -= &u[k - 1][i - 3];
            }
            for j in (2..k).step_by(2) {
                if i < u[k - j].len() && u[k - j][i].cmp0() != std::cmp::Ordering::Equal {
                    rhs += Rational::from(&e[j] * &u[k - j][i]);
                }
            }
            if i == n0 {
                ek = -rhs;
            } else {
                if i < n0 && k % 2 == 0 {
                    rhs += Rational::from(&ek * &u[0][i]);
                }
                ck[i] = rhs / Rational::from(i as i64 - n0 as i64);
            }
        }
        e.push(ek);
        u.push(ck);
        if k % 2 == 0 {
            reached = k / 2;
        }
    }

    let b2 = convention.b_squared();
    let mut coeffs = Vec::with_capacity(reached + 1);
    coeffs.push(Rational::from((2 * level as i64 + 1, 2)));
    let mut factor = Rational::from(1);
    for l in 1..=reached {
        factor *= &b2;
        coeffs.push(Rational::from(&e[2 * l] * &factor));
    }
    WeakRun { series: WeakSeries { level, coeffs, convention }, partial, requested: order }
}

/// Asymptotic form of `E_L`:
/// `(-1)^{L+1} (6/π^{3/2}) (288^n / n!) Γ(L+n+½) / A^{L+n+½}` with `A = 24/5`.
#[derive(Clone, Debug)]
pub struct LargeOrderModel {
    pub action: Rational,
    pub level: u32,
}

impl LargeOrderModel {
    pub fn new(level: u32) -> Self {
        LargeOrderModel { action: Rational::from((24, 5)), level }
    }

    pub fn predict(&self, l: usize, prec: Precision) -> Float {
        let n = self.level as i64;
        let a = prec.rational(&self.action);
        let expo = prec.ratio(2 * (l as i64 + n) + 1, 2);
        let gamma = Float::with_val(prec.bits(), expo.gamma_ref());
        let apow = Float::with_val(prec.bits(), (&a).pow(&expo));
        let pi = prec.pi();
        let pi32 = Float::with_val(prec.bits(), (&pi).pow(prec.ratio(3, 2)));
        let level_factor = prec.int(288).pow(self.level) / prec.rational(&Rational::from(Integer::from(Integer::factorial(self.level))));
        let mut v = prec.int(6) / pi32 * level_factor * gamma / apow;
        if l % 2 == 0 {
            v = -v;
        }
        v
    }
}

/// `E_L` divided by its large-order prediction.
pub fn large_order_ratio(series: &WeakSeries, l: usize, prec: Precision) -> Result<Float> {
    if l > series.order() {
        return Err(Error::InsufficientOrder { have: series.order(), need: l });
    }
    let model = LargeOrderModel::new(series.level);
    Ok(prec.rational(&series.coeffs[l]) / model.predict(l, prec))
}

/// Coefficients produced by shifting away the quadratic term of the
/// rescaled `x³ + (u/2) x²` potential (with `u = g^{-2/5}`).
#[derive(Clone, Debug, PartialEq)]
pub struct StrongFormShift {
    /// `x -> x + shift·u`.
    pub shift: Rational,
    /// Coefficient of `u² x`, i.e. of `g^{-4/5} x`.
    pub linear: Rational,
    /// Constant `u³` term, i.e. coefficient of `g^{-6/5}`.
    pub constant: Rational,
    /// The level-independent coefficient `L_{N,3}` of `g^{1/5} g^{-6/5}`.
    pub universal_l3: Rational,
}

/// Computes the shift of the `½x² + √g x³` Hamiltonian's strong-coupling form
/// by expanding the translated cubic exactly.
pub fn appendix_c_strong_form(convention: HamiltonianConvention) -> Result<StrongFormShift> {
    if convention != HamiltonianConvention::AppendixC {
        return Err(Error::Domain("the shifted strong form is defined for the appendix-c normalization".into()));
    }
    // After x -> g^{-1/10} x the potential is x³ + (u/2) x²; every term is
    // homogeneous of degree 3 in (x, u), so track coefficients of x^k u^{3-k}.
    let potential = [Rational::new(), Rational::new(), Rational::from((1, 2)), Rational::from(1)];
    let shift = -(potential[2].clone() / Rational::from(3) / &potential[3]);
    // (x + s u)^k = Σ_j C(k, j) x^j (s u)^{k-j}
    let mut shifted = [Rational::new(), Rational::new(), Rational::new(), Rational::new()];
    for (k, ck) in potential.iter().enumerate() {
        for j in 0..=k {
            let binom = Integer::from(Integer::binomial_u(k as u32, j as u32));
            let term = Rational::from(ck * Rational::from(binom)) * Rational::from((&shift).pow(k as i32 - j as i32));
            shifted[j] += term;
        }
    }
    if shifted[2].cmp0() != std::cmp::Ordering::Equal {
        return Err(Error::Domain("quadratic term survived the shift".into()));
    }
    // The constant multiplies g^{1/5} u³ = g^{1/5} g^{-6/5}: that is order K = 3
    // of Σ L_{N,K} g^{-2K/5}, the same for every level.
    Ok(StrongFormShift { shift, linear: shifted[1].clone(), constant: shifted[0].clone(), universal_l3: shifted[0].clone() })
}

// ---------------------------------------------------------------------------
// Coefficient cache
// ---------------------------------------------------------------------------

/// Text form: `# convention=<tag> level=<N> order=<K>` then `L <num> <den>` lines.
pub fn encode_cache(series: &WeakSeries) -> String {
    let mut out = format!("# convention={} level={} order={}\n", series.convention.tag(), series.level, series.order());
    for (l, c) in series.coeffs.iter().enumerate() {
        out.push_str(&format!("{} {} {}\n", l, c.numer(), c.denom()));
    }
    out
}

pub fn decode_cache(text: &str) -> Result<WeakSeries> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty cache file".into()))?;
    let header = header.strip_prefix("# ").ok_or_else(|| Error::Parse("missing cache header".into()))?;
    let mut convention = None;
    let mut level = None;
    let mut order = None;
    for field in header.split_whitespace() {
        let (k, v) = field.split_once('=').ok_or_else(|| Error::Parse(format!("bad header field `{field}`")))?;
        match k {
            "convention" => convention = Some(v.parse::<HamiltonianConvention>()?),
            "level" => level = Some(v.parse::<u32>().map_err(|e| Error::Parse(e.to_string()))?),
            "order" => order = Some(v.parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?),
            _ => return Err(Error::Parse(format!("unknown header key `{k}`"))),
        }
    }
    let (convention, level, order) = match (convention, level, order) {
        (Some(c), Some(l), Some(o)) => (c, l, o),
        _ => return Err(Error::Parse("incomplete cache header".into())),
    };
    let mut coeffs = Vec::with_capacity(order + 1);
    for (expected, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
        let mut parts = line.split_whitespace();
        let idx: usize = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| Error::Parse(format!("bad line `{line}`")))?;
        if idx != expected {
            return Err(Error::Parse(format!("expected order {expected}, found {idx}")));
        }
        let num: Integer = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| Error::Parse(format!("bad numerator in `{line}`")))?;
        let den: Integer = parts.next().and_then(|s| s.parse().ok()).ok_or_else(|| Error::Parse(format!("bad denominator in `{line}`")))?;
        if den <= 0 {
            return Err(Error::Parse(format!("non-positive denominator in `{line}`")));
        }
        coeffs.push(Rational::from((num, den)));
    }
    if coeffs.len() != order + 1 {
        return Err(Error::Parse(format!("header says order {order}, found {} lines", coeffs.len())));
    }
    Ok(WeakSeries { level, coeffs, convention })
}

pub fn cache_path(dir: &Path, level: u32, convention: HamiltonianConvention) -> PathBuf {
    dir.join(format!("weak-{}-n{}.txt", convention.tag(), level))
}

/// Writes via a temporary file and rename so readers never see a torn file.
pub fn write_cache(path: &Path, series: &WeakSeries) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(encode_cache(series).as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_cache(path: &Path) -> Result<WeakSeries> {
    decode_cache(&fs::read_to_string(path)?)
}

/// Loads `level` from `dir` when the cached order suffices, otherwise
/// generates the series and (re)writes the cache.
pub fn load_or_compute(dir: &Path, level: u32, order: usize, convention: HamiltonianConvention) -> Result<WeakSeries> {
    let path = cache_path(dir, level, convention);
    if path.exists() {
        let cached = read_cache(&path)?;
        if cached.level != level || cached.convention != convention {
            return Err(Error::CacheMismatch(format!("{} holds level {} / {}", path.display(), cached.level, cached.convention)));
        }
        if cached.order() >= order {
            return Ok(cached.truncate(order));
        }
    }
    let series = weak_coefficients(level, order, convention);
    write_cache(&path, &series)?;
    Ok(series)
}
