use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::Float;

use super::mapping::{MappingSpec, MappingTag};
use super::saddle::saddle_constants;
use crate::error::{Error, Result};
use crate::number::{BigComplex, Precision};
use crate::roots::{poly_roots, polish_root};
use crate::series::{Polynomial, RhoPolynomialSeries};

/// Imaginary part, relative to modulus, below which a root counts as real.
const REAL_TOL: f64 = 1e-12;
/// Roots within this relative modulus of the largest compete on `|P_K|`.
const TIE_BAND: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RhoMode {
    RootsOfDerivative,
    RootsOfP,
    Fitted,
}

impl RhoMode {
    pub fn tag(self) -> &'static str {
        match self {
            RhoMode::RootsOfDerivative => "roots-of-dP",
            RhoMode::RootsOfP => "roots-of-P",
            RhoMode::Fitted => "fitted",
        }
    }
}

impl fmt::Display for RhoMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for RhoMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "roots" | "roots-of-dP" => Ok(RhoMode::RootsOfDerivative),
            "roots-of-P" => Ok(RhoMode::RootsOfP),
            "fitted" => Ok(RhoMode::Fitted),
            other => Err(Error::Parse(format!("unknown ρ mode `{other}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RhoChoice {
    pub rho: Float,
    /// Mode that actually produced `rho`.
    pub mode: RhoMode,
    /// Set when the requested mode failed and another one stood in.
    pub fell_back: bool,
}

/// Closed-form `ρ_K` for mappings (a) and (b); `R = A μ_c`.
pub fn fitted_rho(mapping: &MappingSpec, k: usize, prec: Precision) -> Option<Float> {
    let r = saddle_constants(mapping, prec).r;
    fitted_rho_with(mapping.tag, &r, k, prec)
}

fn fitted_rho_with(tag: MappingTag, r: &Float, k: usize, prec: Precision) -> Option<Float> {
    let (shift, num, den) = match tag {
        MappingTag::A => (3, prec.ratio(1294, 100), prec.ratio(1197, 100)),
        MappingTag::B => (2, prec.ratio(50, 10), prec.ratio(46, 10)),
        MappingTag::C => return None,
    };
    let bits = prec.bits();
    let kk = prec.int(k as i64);
    let base = Float::with_val(bits, Float::with_val(bits, (k + shift) as u32).ln() * prec.ratio(4, 5)).exp();
    let corr = prec.int(1) - num / (base + den);
    Some(Float::with_val(bits, r / &kk) * corr)
}

/// `ρ_K` from the roots of `P'_K` (or `P_K`): the largest-modulus real
/// positive root, ties within 1% broken by the smallest `|P_K|`.
pub fn select_rho(polys: &RhoPolynomialSeries, k: usize, mode: RhoMode, mapping: &MappingSpec, prec: Precision) -> Result<RhoChoice> {
    if k == 0 || k > polys.order() {
        return Err(Error::Domain(format!("ρ selection needs 1 <= K <= {}, got {k}", polys.order())));
    }
    if mode == RhoMode::Fitted {
        if let Some(rho) = fitted_rho(mapping, k, prec) {
            return Ok(RhoChoice { rho, mode, fell_back: false });
        }
        return root_choice(polys, k, RhoMode::RootsOfDerivative, prec).map(|c| RhoChoice { fell_back: true, ..c });
    }
    match root_choice(polys, k, mode, prec) {
        Ok(c) => Ok(c),
        Err(e) => match fitted_rho(mapping, k, prec) {
            Some(rho) => Ok(RhoChoice { rho, mode: RhoMode::Fitted, fell_back: true }),
            None => Err(e),
        },
    }
}

fn root_choice(polys: &RhoPolynomialSeries, k: usize, mode: RhoMode, prec: Precision) -> Result<RhoChoice> {
    let pk = polys.poly(k);
    let target = match mode {
        RhoMode::RootsOfP => pk.clone(),
        _ => pk.derivative(),
    };
    if target.degree() == 0 {
        return Err(Error::NotFound(format!("P_{k} has no ρ dependence to extremize")));
    }
    // Roots are located at reduced precision, then polished.
    let search = Precision::digits((prec.decimal_digits() / 2).max(40)).unwrap_or(prec);
    let low = Polynomial::new(target.coeffs.iter().map(|c| Float::with_val(search.bits(), c)).collect());
    let tol = Float::with_val(search.bits(), Float::i_exp(1, -(search.bits() as i32) / 2));
    let set = poly_roots(&low, &tol)?;
    let real: Vec<f64> = set
        .roots
        .iter()
        .filter(|z| z.re > 0 && z.im.to_f64().abs() <= REAL_TOL * z.abs().to_f64())
        .map(|z| z.re.to_f64())
        .collect();
    let max = real.iter().cloned().fold(f64::NAN, f64::max);
    if real.is_empty() || !max.is_finite() {
        return Err(Error::NotFound(format!("no real positive root for K = {k}")));
    }
    let mut best: Option<(Float, Float)> = None;
    for z in set.roots.iter().filter(|z| {
        let re = z.re.to_f64();
        re > 0.0 && z.im.to_f64().abs() <= REAL_TOL * z.abs().to_f64() && re >= max * (1.0 - TIE_BAND)
    }) {
        let start = BigComplex::from_real(Float::with_val(prec.bits(), &z.re));
        let polished = polish_root(&target, &start, prec, 200).re;
        let size = Float::with_val(prec.bits(), pk.eval(&polished).abs_ref());
        if best.as_ref().map_or(true, |(_, s)| size < *s) {
            best = Some((polished, size));
        }
    }
    let (rho, _) = best.expect("at least the maximal root is a candidate");
    Ok(RhoChoice { rho, mode, fell_back: false })
}

/// Per-order `ρ_K` values.
#[derive(Clone, Debug)]
pub struct RhoSchedule {
    pub mode: RhoMode,
    pub values: BTreeMap<usize, Float>,
    /// Orders at which the requested mode fell back to another one.
    pub fallbacks: Vec<usize>,
}

impl RhoSchedule {
    /// Closed forms only; fails for mapping (c), which has none.
    pub fn fitted(mapping: &MappingSpec, orders: impl IntoIterator<Item = usize>, prec: Precision) -> Result<Self> {
        let r = saddle_constants(mapping, prec).r;
        let mut values = BTreeMap::new();
        for k in orders {
            let rho = fitted_rho_with(mapping.tag, &r, k, prec).ok_or_else(|| Error::NotFound(format!("mapping ({}) has no fitted ρ_K", mapping.tag)))?;
            values.insert(k, rho);
        }
        Ok(RhoSchedule { mode: RhoMode::Fitted, values, fallbacks: Vec::new() })
    }

    pub fn build(polys: &RhoPolynomialSeries, mapping: &MappingSpec, mode: RhoMode, orders: impl IntoIterator<Item = usize>, prec: Precision) -> Result<Self> {
        if mode == RhoMode::Fitted && mapping.tag != MappingTag::C {
            return Self::fitted(mapping, orders, prec);
        }
        let mut values = BTreeMap::new();
        let mut fallbacks = Vec::new();
        for k in orders {
            let c = select_rho(polys, k, mode, mapping, prec)?;
            if c.fell_back {
                fallbacks.push(k);
            }
            values.insert(k, c.rho);
        }
        Ok(RhoSchedule { mode, values, fallbacks })
    }

    /// A single fixed `ρ` at every listed order.
    pub fn constant(rho: Float, orders: impl IntoIterator<Item = usize>) -> Self {
        RhoSchedule { mode: RhoMode::Fitted, values: orders.into_iter().map(|k| (k, rho.clone())).collect(), fallbacks: Vec::new() }
    }

    /// Every `ρ_K` multiplied by `factor`.
    pub fn scaled(mut self, factor: &Float) -> Self {
        for v in self.values.values_mut() {
            *v *= factor;
        }
        self
    }

    pub fn get(&self, k: usize) -> Option<&Float> {
        self.values.get(&k)
    }

    /// `K, rho` lines under a header.
    pub fn to_csv(&self, digits: usize) -> String {
        let mut out = String::from("K, rho\n");
        for (k, rho) in &self.values {
            out.push_str(&format!("{k}, {}\n", crate::number::fmt_real(rho, digits)));
        }
        out
    }
}
