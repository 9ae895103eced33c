use rug::float::Constant;
use rug::{Float, Rational};

use super::extract::StrongSeries;
use crate::error::{Error, Result};
use crate::number::{BigComplex, Precision};
use crate::odm::MappingTag;

/// Largest `|χ|` at which the strong series is summed directly.
pub const STRONG_RADIUS: f64 = 1.3;

/// `g` with a signed-zero imaginary part normalized to `+0`, so that the
/// negative real axis is read as `g + i0`.
fn upper_lip(g: &BigComplex) -> BigComplex {
    if g.im.is_zero() {
        BigComplex::new(g.re.clone(), Float::new(g.prec()))
    } else {
        g.clone()
    }
}

/// `χ = g^{-4/5}` on the principal branch.
pub fn chi_from_g(g: &BigComplex) -> Result<BigComplex> {
    if g.is_zero() {
        return Err(Error::Domain("χ is undefined at g = 0".into()));
    }
    let bits = g.prec();
    Ok(upper_lip(g).powf(&Float::with_val(bits, Rational::from((-4, 5)))))
}

/// `Σ c_n χ^n` by Horner's rule.
pub fn strong_series_at(series: &StrongSeries, chi: &BigComplex) -> BigComplex {
    let bits = chi.prec().max(series.coeffs.first().map_or(chi.prec(), |c| c.prec()));
    let mut acc = BigComplex::zero_bits(bits);
    for c in series.coeffs.iter().rev() {
        acc = acc.mul(chi);
        acc.re += c;
    }
    acc
}

/// Propagated coefficient uncertainty plus the last retained term at `|χ| = r`.
pub fn strong_series_uncertainty(series: &StrongSeries, r: &Float) -> Float {
    let bits = r.prec();
    let mut acc = Float::new(bits);
    let mut pw = Float::with_val(bits, 1);
    for u in &series.uncertainty {
        acc += Float::with_val(bits, u * &pw);
        pw *= r;
    }
    if let Some(last) = series.coeffs.last() {
        let pw_last = Float::with_val(bits, &pw / r);
        acc += Float::with_val(bits, last.abs_ref()) * pw_last;
    }
    acc
}

/// `E(g) = -1/(3g) + g^{1/5} E^qqc(g^{-4/5})` with principal powers; rejects
/// `|χ|` beyond [`STRONG_RADIUS`].
pub fn energy_from_strong(series: &StrongSeries, g: &BigComplex) -> Result<BigComplex> {
    let chi = chi_from_g(g)?;
    if chi.abs() >= STRONG_RADIUS {
        return Err(Error::Domain(format!("|χ| = {:.4} is outside the strong-series radius {STRONG_RADIUS}", chi.abs().to_f64())));
    }
    let g = upper_lip(g);
    let bits = g.prec();
    let fifth = g.powf(&Float::with_val(bits, Rational::from((1, 5))));
    let pole = g.scale(&Float::with_val(bits, 3)).recip().neg();
    Ok(pole.add(&fifth.mul(&strong_series_at(series, &chi))))
}

/// `lim E(g)/|g|^{1/5}` along `arg g = π`: `E^qqc_0 e^{iπ/5}`.
pub fn strong_limit_negative_axis(series: &StrongSeries) -> Result<BigComplex> {
    let c0 = series.coeffs.first().ok_or_else(|| Error::Domain("empty strong series".into()))?;
    let theta = Float::with_val(c0.prec(), Constant::Pi) / 5u32;
    Ok(BigComplex::from_polar(c0, &theta))
}

impl StrongSeries {
    /// Text form: `# level=<N> method=<tag> orderK=<K> digits=<d>` then `n value uncertainty` lines.
    pub fn encode(&self) -> String {
        let mut out = format!("# level={} method={} orderK={} digits={}\n", self.level, self.method, self.order_k, self.digits);
        let d = self.digits as usize;
        for (n, (c, u)) in self.coeffs.iter().zip(&self.uncertainty).enumerate() {
            out.push_str(&format!("{n} {} {}\n", crate::number::fmt_real(c, d), crate::number::fmt_real(u, 3)));
        }
        out
    }

    pub fn decode(text: &str) -> Result<StrongSeries> {
        let mut lines = text.lines();
        let header = lines.next().and_then(|h| h.strip_prefix("# ")).ok_or_else(|| Error::Parse("missing strong-series header".into()))?;
        let (mut level, mut method, mut order_k, mut digits) = (None, None, None, None);
        for field in header.split_whitespace() {
            let (k, v) = field.split_once('=').ok_or_else(|| Error::Parse(format!("bad header field `{field}`")))?;
            let bad = |e: std::num::ParseIntError| Error::Parse(format!("{k}: {e}"));
            match k {
                "level" => level = Some(v.parse::<u32>().map_err(bad)?),
                "method" => method = Some(v.parse::<MappingTag>()?),
                "orderK" => order_k = Some(v.parse::<usize>().map_err(bad)?),
                "digits" => digits = Some(v.parse::<u32>().map_err(bad)?),
                _ => return Err(Error::Parse(format!("unknown header key `{k}`"))),
            }
        }
        let (Some(level), Some(method), Some(order_k), Some(digits)) = (level, method, order_k, digits) else {
            return Err(Error::Parse("incomplete strong-series header".into()));
        };
        let prec = Precision::digits(digits)?;
        let mut coeffs = Vec::new();
        let mut uncertainty = Vec::new();
        for (expected, line) in lines.filter(|l| !l.trim().is_empty()).enumerate() {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 3 || parts[0].parse::<usize>().ok() != Some(expected) {
                return Err(Error::Parse(format!("bad strong-series line `{line}`")));
            }
            coeffs.push(prec.parse(parts[1])?);
            uncertainty.push(prec.parse(parts[2])?);
        }
        Ok(StrongSeries { level, method, order_k, digits, coeffs, uncertainty, truncated: false })
    }
}
