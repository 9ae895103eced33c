//! Continued fractions `f_{p-1} = 1 + a_p x / f_p` built from power series.
//!
//! The strong-coupling fraction expands `(E(χ) - E(0))/(E'(0) χ)` in `χ`;
//! the weak-coupling fraction expands `E(g)/E(0)` in `g`. Both are built by
//! repeated series division, with `a_p` read off the linear coefficient.

use std::fmt;

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::number::{fmt_real, BigComplex, Precision};
use crate::perturbation::WeakSeries;
use crate::series::PowerSeries;
use crate::strong::chi_from_g;

const GAMMA_LO: f64 = 1e-3;
const GAMMA_HI: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CfKind {
    StrongChi,
    WeakG,
}

impl CfKind {
    pub fn tag(self) -> &'static str {
        match self {
            CfKind::StrongChi => "strong-chi",
            CfKind::WeakG => "weak-g",
        }
    }
}

impl fmt::Display for CfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Replacement for the remainder `f_{p_max}`.
#[derive(Clone, Debug, PartialEq)]
pub enum Tail {
    Unit,
    /// `1/2 + 1/2 √(1 + 4γx)`, i.e. `a_p = γ` for every deeper level.
    Sqrt(Float),
}

#[derive(Clone, Debug)]
pub struct TailSpec {
    pub gamma: Float,
    pub p_max: usize,
}

impl TailSpec {
    pub fn tail(&self) -> Tail {
        Tail::Sqrt(self.gamma.clone())
    }
}

#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    pub kind: CfKind,
    /// `(E(0), E'(0))` for the strong kind, `(E(0), 0)` for the weak kind.
    pub normalization: (Float, Float),
    /// `a_1..a_p` (or `κ_1..κ_p`), stored from index 0.
    pub coeffs: Vec<Float>,
    pub uncertainty: Vec<Float>,
    /// Depth at which the construction stopped on a vanishing coefficient.
    pub breakdown: Option<usize>,
}

impl ContinuedFraction {
    pub fn depth(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient `a_p`, `p >= 1`.
    pub fn a(&self, p: usize) -> &Float {
        &self.coeffs[p - 1]
    }

    /// Sets uncertainties to the change against a fraction built from a
    /// less accurate input.
    pub fn with_uncertainty_from(mut self, other: &ContinuedFraction) -> Self {
        for (i, u) in self.uncertainty.iter_mut().enumerate() {
            if let Some(o) = other.coeffs.get(i) {
                *u = Float::with_val(u.prec(), &self.coeffs[i] - o).abs();
            }
        }
        self
    }

    /// `# kind=<k> pmax=<p> gamma=<γ|none>` then `p coeff unc` lines.
    pub fn export(&self, tail: Option<&TailSpec>, digits: usize) -> String {
        let (pmax, gamma) = match tail {
            Some(t) => (t.p_max, fmt_real(&t.gamma, digits)),
            None => (self.depth(), "none".to_string()),
        };
        let mut out = format!("# kind={} pmax={} gamma={}\n", self.kind, pmax, gamma);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{} {} {}\n", i + 1, fmt_real(c, digits), fmt_real(&self.uncertainty[i], 3)));
        }
        out
    }
}

/// `a_1, a_2, ...` of `f_0 = 1 + a_1 x/(1 + a_2 x/(...))` for `f_0(0) = 1`.
/// Stops early, recording the depth, when a linear coefficient vanishes.
fn coefficients(f0: PowerSeries<Float>) -> (Vec<Float>, Option<usize>) {
    let mut f = f0;
    let mut out = Vec::new();
    let mut p = 1;
    while f.order() >= 1 {
        let a = f.coeff(1).clone();
        if a.is_zero() {
            return (out, Some(p));
        }
        // (f - 1)/x = a + ..., f_next = a / ((f-1)/x)
        let rest = PowerSeries::new(f.coeffs()[1..].to_vec());
        let next = match rest.recip() {
            Ok(r) => r.scale(&a),
            Err(_) => return (out, Some(p)),
        };
        out.push(a);
        f = next;
        p += 1;
    }
    (out, None)
}

/// Strong fraction from `E(0), E'(0), ...`: expands `(E - E(0))/(E'(0) χ)`.
pub fn cf_from_series(series: &[Float]) -> Result<ContinuedFraction> {
    if series.len() < 3 {
        return Err(Error::InsufficientOrder { have: series.len().saturating_sub(1), need: 2 });
    }
    let e1 = &series[1];
    if e1.is_zero() {
        return Err(Error::NotInvertible("vanishing first derivative"));
    }
    let bits = e1.prec();
    let f0 = PowerSeries::new(series[1..].iter().map(|c| Float::with_val(bits, c / e1)).collect());
    let (coeffs, breakdown) = coefficients(f0);
    let uncertainty = vec![Float::new(bits); coeffs.len()];
    Ok(ContinuedFraction { kind: CfKind::StrongChi, normalization: (series[0].clone(), e1.clone()), coeffs, uncertainty, breakdown })
}

/// Weak fraction of `E(g)/E(0)`.
pub fn weak_cf(series: &WeakSeries, prec: Precision) -> Result<ContinuedFraction> {
    let c = series.to_floats(prec);
    if c.len() < 2 || c[0].is_zero() {
        return Err(Error::InsufficientOrder { have: c.len().saturating_sub(1), need: 1 });
    }
    let e0 = c[0].clone();
    let f0 = PowerSeries::new(c.iter().map(|x| Float::with_val(prec.bits(), x / &e0)).collect());
    let (coeffs, breakdown) = coefficients(f0);
    let uncertainty = vec![prec.zero(); coeffs.len()];
    Ok(ContinuedFraction { kind: CfKind::WeakG, normalization: (e0, prec.zero()), coeffs, uncertainty, breakdown })
}

/// Bottom-up value of `f_0(x)` with `p_max` levels.
pub fn cf_value(cf: &ContinuedFraction, x: &BigComplex, p_max: usize, tail: &Tail) -> Result<BigComplex> {
    if p_max > cf.depth() {
        return Err(Error::InsufficientOrder { have: cf.depth(), need: p_max });
    }
    let bits = x.prec();
    let one = BigComplex::one_bits(bits);
    let mut f = match tail {
        Tail::Unit => one.clone(),
        Tail::Sqrt(gamma) => {
            let inner = one.add(&x.scale(&Float::with_val(bits, gamma * 4u32)));
            let half = Float::with_val(bits, 0.5);
            one.add(&inner.sqrt()).scale(&half)
        }
    };
    for p in (1..=p_max).rev() {
        if f.is_zero() {
            return Err(Error::Breakdown { depth: p });
        }
        f = one.add(&x.scale(&cf.coeffs[p - 1]).div(&f));
    }
    Ok(f)
}

/// The represented function: `E(0) + E'(0) χ f_0(χ)` or `E(0) f_0(g)`.
pub fn cf_eval(cf: &ContinuedFraction, x: &BigComplex, p_max: usize, tail: &Tail) -> Result<BigComplex> {
    let f = cf_value(cf, x, p_max, tail)?;
    let bits = x.prec();
    let (e0, e1) = (&cf.normalization.0, &cf.normalization.1);
    Ok(match cf.kind {
        CfKind::StrongChi => x.mul(&f).scale(&Float::with_val(bits, e1)).add(&BigComplex::from_real(Float::with_val(bits, e0))),
        CfKind::WeakG => f.scale(&Float::with_val(bits, e0)),
    })
}

/// `E(g) = g^{1/5} E^qqc(χ) - 1/(3g)` from the strong fraction at `χ = g^{-4/5}`,
/// principal powers, negative real `g` read as `g + i0`.
pub fn cf_energy(cf: &ContinuedFraction, g: &BigComplex, p_max: usize, tail: &Tail) -> Result<BigComplex> {
    if cf.kind != CfKind::StrongChi {
        return Err(Error::Domain("E(g) reconstruction needs the strong fraction".into()));
    }
    let chi = chi_from_g(g)?;
    let bits = g.prec();
    let g = if g.im.is_zero() { BigComplex::new(g.re.clone(), Float::new(bits)) } else { g.clone() };
    let fifth = g.powf(&Float::with_val(bits, Rational::from((1, 5))));
    let pole = g.scale(&Float::with_val(bits, 3)).recip();
    Ok(fifth.mul(&cf_eval(cf, &chi, p_max, tail)?).sub(&pole))
}

/// Large-`χ` coefficient `c_0` of `f_0 ~ c_0 χ^{1/2}` for a square-root tail:
/// `c_{p_max} = √γ`, `c_{p-1} = a_p / c_p`.
pub fn asymptotic_coefficient(cf: &ContinuedFraction, p_max: usize, gamma: &Float) -> Float {
    let bits = gamma.prec();
    let mut c = Float::with_val(bits, gamma.sqrt_ref());
    for p in (1..=p_max).rev() {
        c = Float::with_val(bits, &cf.coeffs[p - 1] / &c);
    }
    c
}

/// `γ` making the strong fraction grow like `χ^{3/2}/3`.
pub fn calibrate_gamma(cf: &ContinuedFraction, p_max: usize) -> Result<TailSpec> {
    if cf.kind != CfKind::StrongChi {
        return Err(Error::Domain("γ calibration applies to the strong fraction".into()));
    }
    if p_max < 9 || p_max > cf.depth() {
        return Err(Error::Domain(format!("p_max must lie in 9..={}, got {p_max}", cf.depth())));
    }
    let bits = cf.normalization.1.prec();
    let third = Float::with_val(bits, 1) / 3u32;
    let h = |g: &Float| Float::with_val(bits, &cf.normalization.1 * asymptotic_coefficient(cf, p_max, g)) - &third;
    let mut lo = Float::with_val(bits, GAMMA_LO);
    let mut hi = Float::with_val(bits, GAMMA_HI);
    let (hlo, hhi) = (h(&lo), h(&hi));
    if hlo.is_sign_negative() == hhi.is_sign_negative() {
        return Err(Error::NotFound(format!("no γ in ({GAMMA_LO}, {GAMMA_HI}) at p_max = {p_max}")));
    }
    let lo_neg = hlo.is_sign_negative();
    for _ in 0..bits {
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        if h(&mid).is_sign_negative() == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(TailSpec { gamma: Float::with_val(bits, &lo + &hi) / 2u32, p_max })
}


#[cfg(test)]
mod props {
    use proptest::prelude::*;
    use rug::ops::Pow;

    use super::*;
    use crate::pade::pade;
    use crate::perturbation::HamiltonianConvention;

    /// `1 + x Σ_i w_i/(1 + t_i x)`: positive fraction coefficients.
    fn stieltjes(weights: &[(u32, u32)], order: usize) -> WeakSeries {
        let coeffs = (0..=order)
            .map(|n| match n {
                0 => Rational::from(1),
                _ => weights.iter().fold(Rational::new(), |acc, &(w, t)| acc + Rational::from(w) * Rational::from(-(t as i64)).pow(n as i32 - 1)),
            })
            .collect();
        WeakSeries { level: 0, coeffs, convention: HamiltonianConvention::PaperMain }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn even_depth_fraction_is_diagonal_pade(nodes in prop::sample::subsequence((1u32..=8).collect::<Vec<_>>(), 3..6), w in prop::collection::vec(1u32..9, 6), n in 1usize..4, x in 0.01f64..2.0) {
            let p = Precision::digits(60).unwrap();
            let weights: Vec<(u32, u32)> = nodes.iter().zip(&w).map(|(&t, &w)| (w, t)).collect();
            let series = stieltjes(&weights, 2 * n);
            let cf = weak_cf(&series, p).unwrap();
            prop_assert!(cf.breakdown.is_none() && cf.depth() == 2 * n);
            prop_assert!(cf.coeffs.iter().all(|k| *k > 0));
            let xv = p.f64(x);
            let via_cf = cf_eval(&cf, &BigComplex::from_real(xv.clone()), 2 * n, &Tail::Unit).unwrap();
            let via_pade = pade(&series.to_floats(p), n, n).unwrap().eval(&xv);
            let rel = Float::with_val(p.bits(), (via_cf.re - &via_pade) / &via_pade).abs().to_f64();
            prop_assert!(rel < 1e-40, "relative difference {rel:e}");
        }
    }
}
