use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::number::{BigComplex, Precision};
use crate::odm::{aitken_accelerate, AitkenOptions, MappingSpec, MappingTag, OdmEngine, OrderData, RhoSchedule};
use crate::series::PowerSeries;

/// Largest strong-coupling order the extraction will attempt.
pub const MAX_STRONG_ORDER: usize = 28;

/// Coefficients `E^qqc_0..E^qqc_n` of the small-`χ` expansion with per-entry
/// uncertainties.
#[derive(Clone, Debug)]
pub struct StrongSeries {
    pub level: u32,
    pub method: MappingTag,
    pub order_k: usize,
    pub digits: u32,
    pub coeffs: Vec<Float>,
    pub uncertainty: Vec<Float>,
    /// Set when fewer coefficients than requested could be produced.
    pub truncated: bool,
}

impl StrongSeries {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn truncate(&self, n: usize) -> StrongSeries {
        let m = (n + 1).min(self.len());
        StrongSeries { coeffs: self.coeffs[..m].to_vec(), uncertainty: self.uncertainty[..m].to_vec(), ..self.clone() }
    }

    pub fn as_power_series(&self) -> PowerSeries<Float> {
        PowerSeries::new(self.coeffs.clone())
    }
}

/// Index stride between `ε_n` and the `χ` coefficients: `χ = (g^{-1/α})^{4α/5}`.
pub fn chi_stride(mapping: &MappingSpec) -> Result<usize> {
    let s = Rational::from(&mapping.alpha * Rational::from((4, 5)));
    if *s.denom() != 1 {
        return Err(Error::Domain(format!("mapping ({}) does not expand in integer powers of χ", mapping.tag)));
    }
    Ok(s.numer().to_usize().unwrap_or(0))
}

/// `ε_0..ε_n` from one order-`K` polynomial: with `s = 1 - λ`,
/// `u(s) = λ h(λ)` and `z = s u^{-1/α}`, `ε_n = ρ^{-β+n/α} [z^n] φ(1-s) u^{-β}`.
pub fn strong_epsilons(data: &OrderData, mapping: &MappingSpec, n_max: usize, prec: Precision) -> Result<Vec<Float>> {
    let bits = prec.bits();
    let n = n_max;
    let phi = PowerSeries::new(data.phi().to_vec());
    let shifted = phi.taylor_shift(&prec.int(1));
    let mut psi: Vec<Float> = shifted.coeffs().iter().take(n + 1).enumerate().map(|(j, c)| if j % 2 == 1 { Float::with_val(bits, -c) } else { c.clone() }).collect();
    psi.resize(n + 1, prec.zero());

    // u(s) = Σ_i h_i (1-s)^{i+1}
    let mut u = vec![Rational::new(); n + 1];
    let mut pw = vec![Rational::new(); n + 1];
    pw[0] = Rational::from(1);
    for hc in mapping.h_coeffs() {
        for j in (1..=n).rev() {
            let prev = pw[j - 1].clone();
            pw[j] -= prev;
        }
        for j in 0..=n {
            u[j] += Rational::from(&hc * &pw[j]);
        }
    }
    let u: Vec<Float> = u.iter().map(|r| prec.rational(r)).collect();
    let u0 = u[0].clone();
    let unit = PowerSeries::new(u.iter().map(|c| Float::with_val(bits, c / &u0)).collect());
    let alpha = prec.rational(&mapping.alpha);
    let beta = prec.rational(&mapping.beta);
    let inv_alpha = Float::with_val(bits, alpha.recip_ref());
    let u_beta = unit.pow_unit(&Float::with_val(bits, -&beta))?.scale(&pow_real(&u0, &Float::with_val(bits, -&beta)));
    let u_alpha = unit.pow_unit(&Float::with_val(bits, -&inv_alpha))?.scale(&pow_real(&u0, &Float::with_val(bits, -&inv_alpha)));
    let z_of_s = PowerSeries::variable(&prec.zero(), n).mul(&u_alpha);
    let s_of_z = z_of_s.reverse()?;
    let psi_s = PowerSeries::new(psi).mul(&u_beta);
    let psi_z = psi_s.compose(&s_of_z)?;

    let rho = Float::with_val(bits, &data.rho);
    let ln_rho = Float::with_val(bits, rho.ln_ref());
    Ok((0..=n)
        .map(|j| {
            let expo = Float::with_val(bits, &inv_alpha * j as u32) - &beta;
            let f = Float::with_val(bits, &ln_rho * &expo).exp();
            Float::with_val(bits, psi_z.coeff(j) * &f)
        })
        .collect())
}

fn pow_real(x: &Float, e: &Float) -> Float {
    Float::with_val(x.prec(), Float::with_val(x.prec(), x.ln_ref()) * e).exp()
}

/// `χ` coefficients `0..=n_max` at a single order `K`.
pub fn strong_coeffs_at(engine: &OdmEngine, rho: &Float, k: usize, n_max: usize) -> Result<Vec<Float>> {
    let mapping = engine.mapping();
    let stride = chi_stride(mapping)?;
    let data = engine.order_data(k, rho)?;
    let eps = strong_epsilons(&data, mapping, n_max * stride, engine.prec())?;
    Ok((0..=n_max).map(|m| eps[m * stride].clone()).collect())
}

/// How the order sequence is turned into one value per coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrongEstimate {
    /// Value at `K`, uncertainty `|value(K) - value(K-2)|`.
    Plain,
    /// Parity-split Aitken over orders `k_min..=K`.
    Accelerated { k_min: usize },
}

/// Small-`χ` coefficients `0..=n_max` of the function summed by `engine`.
pub fn extract_strong_coeffs(engine: &OdmEngine, schedule: &RhoSchedule, k: usize, n_max: usize, level: u32, estimate: StrongEstimate) -> Result<StrongSeries> {
    let prec = engine.prec();
    let truncated = n_max > MAX_STRONG_ORDER || n_max + 1 > k;
    let n = n_max.min(MAX_STRONG_ORDER).min(k.saturating_sub(1));
    let rho_at = |kk: usize| schedule.get(kk).cloned().ok_or_else(|| Error::NotFound(format!("no ρ_K for K = {kk}")));
    let (coeffs, uncertainty) = match estimate {
        StrongEstimate::Plain => {
            if k < 3 {
                return Err(Error::InsufficientOrder { have: k, need: 3 });
            }
            let now = strong_coeffs_at(engine, &rho_at(k)?, k, n)?;
            let before = strong_coeffs_at(engine, &rho_at(k - 2)?, k - 2, n)?;
            let unc = now.iter().zip(&before).map(|(a, b)| Float::with_val(prec.bits(), a - b).abs()).collect();
            (now, unc)
        }
        StrongEstimate::Accelerated { k_min } => {
            if k < k_min + 2 {
                return Err(Error::InsufficientOrder { have: k - k_min + 1, need: 3 });
            }
            let mut rows = Vec::new();
            for kk in k_min..=k {
                rows.push(strong_coeffs_at(engine, &rho_at(kk)?, kk, n)?);
            }
            let opts = AitkenOptions::new(prec.floor());
            let mut vals = Vec::with_capacity(n + 1);
            let mut unc = Vec::with_capacity(n + 1);
            for j in 0..=n {
                let seq: Vec<_> = rows.iter().map(|r| BigComplex::from_real(r[j].clone())).collect();
                let acc = aitken_accelerate(&seq, &opts)?;
                vals.push(acc.value.re);
                unc.push(acc.error);
            }
            (vals, unc)
        }
    };
    Ok(StrongSeries { level, method: engine.mapping().tag, order_k: k, digits: prec.decimal_digits(), coeffs, uncertainty, truncated })
}

/// The strong-coupling function `Σ_m c_m χ^m` of the target, summed directly
/// from the order-`K` polynomial: `ρ^{-β} φ_K(λ) (λ h(λ))^{-β}` with `λ`
/// solving `(1-λ)(λ h(λ))^{-1/α} = ρ^{1/α} χ`. Only for `χ`-strides of 1.
pub fn strong_value_at(engine: &OdmEngine, data: &OrderData, chi: &BigComplex) -> Result<BigComplex> {
    let mapping = engine.mapping();
    if chi_stride(mapping)? != 1 {
        return Err(Error::Domain(format!("mapping ({}) expands in a root of χ", mapping.tag)));
    }
    let prec = engine.prec();
    let bits = prec.bits();
    let alpha = prec.rational(&mapping.alpha);
    let beta = prec.rational(&mapping.beta);
    let inv_alpha = Float::with_val(bits, alpha.recip_ref());
    let rho = Float::with_val(bits, &data.rho);
    let rho_pow = Float::with_val(bits, Float::with_val(bits, rho.ln_ref()) * &inv_alpha).exp();
    let z = chi.scale(&rho_pow);
    let lam = solve_lambda_of_z(mapping, &z, prec)?;
    let lh = lambda_h(mapping, &lam);
    let mut acc = BigComplex::from_real(Float::with_val(bits, &data.phi()[data.order]));
    for c in data.phi()[..data.order].iter().rev() {
        acc = acc.mul(&lam);
        acc.re += c;
    }
    let rho_beta = Float::with_val(bits, Float::with_val(bits, rho.ln_ref()) * &beta).exp();
    Ok(acc.mul(&lh.powf(&Float::with_val(bits, -&beta))).scale(&Float::with_val(bits, rho_beta.recip_ref())))
}

fn lambda_h(mapping: &MappingSpec, lam: &BigComplex) -> BigComplex {
    let bits = lam.prec();
    let mut h = BigComplex::zero_bits(bits);
    let mut pw = BigComplex::one_bits(bits);
    for c in mapping.h_coeffs() {
        h = h.add(&pw.scale(&Float::with_val(bits, &c)));
        pw = pw.mul(lam);
    }
    lam.mul(&h)
}

/// Newton on `G(λ) = (1-λ)(λh)^{-1/α} - z`, started from `λ = 1 - z`.
fn solve_lambda_of_z(mapping: &MappingSpec, z: &BigComplex, prec: Precision) -> Result<BigComplex> {
    let bits = prec.bits();
    let inv_alpha = Float::with_val(bits, prec.rational(&mapping.alpha).recip_ref());
    let one = BigComplex::one_bits(bits);
    let h_coeffs = mapping.h_coeffs();
    let mut lam = one.sub(z);
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 16));
    for _ in 0..(bits as usize) {
        let lh = lambda_h(mapping, &lam);
        // d(λh)/dλ = Σ (i+1) h_i λ^i
        let mut dlh = BigComplex::zero_bits(bits);
        let mut pw = BigComplex::one_bits(bits);
        for (i, c) in h_coeffs.iter().enumerate() {
            dlh = dlh.add(&pw.scale(&Float::with_val(bits, c * Rational::from(i as u32 + 1))));
            pw = pw.mul(&lam);
        }
        let p = lh.powf(&Float::with_val(bits, -&inv_alpha));
        let s = one.sub(&lam);
        let g = s.mul(&p).sub(z);
        let dp = p.div(&lh).mul(&dlh).scale(&Float::with_val(bits, -&inv_alpha));
        let dg = p.neg().add(&s.mul(&dp));
        let step = g.div(&dg);
        lam = lam.sub(&step);
        if !lam.is_finite() {
            break;
        }
        if step.abs() <= Float::with_val(bits, lam.abs() * &eps) {
            return Ok(lam);
        }
    }
    Err(Error::Inversion { step: 0, reason: "no λ for the requested χ".into() })
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;

    /// `ε_0..ε_3` from `ψ(λ) = φ(λ) λ^{-β}` and its derivatives at `λ = 1`.
    fn closed_forms(phi: &[f64], alpha: f64, beta: f64, rho: f64) -> [f64; 4] {
        let d = |k: usize| -> f64 {
            phi.iter().enumerate().skip(k).map(|(i, c)| c * (0..k).map(|j| (i - j) as f64).product::<f64>()).sum()
        };
        let (f0, f1, f2, f3) = (d(0), d(1), d(2), d(3));
        let p1 = f1 - beta * f0;
        let p2 = f2 - 2.0 * beta * f1 + beta * (beta + 1.0) * f0;
        let p3 = f3 - 3.0 * beta * f2 + 3.0 * beta * (beta + 1.0) * f1 - beta * (beta + 1.0) * (beta + 2.0) * f0;
        let r = |n: f64| rho.powf(-beta + n / alpha);
        [
            f0 * r(0.0),
            -p1 * r(1.0),
            (0.5 * p2 + p1 / alpha) * r(2.0),
            -((3.0 - alpha) / (2.0 * alpha * alpha) * p1 + p2 / alpha + p3 / 6.0) * r(3.0),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn general_reversion_matches_closed_forms(phi in prop::collection::vec(-2.0f64..2.0, 4..9), rho in 0.1f64..2.0) {
            let p = Precision::digits(40).unwrap();
            let mapping = MappingSpec::c();
            let mut values: Vec<Float> = phi.iter().map(|&c| p.f64(c)).collect();
            values.push(p.zero());
            let data = OrderData { order: phi.len() - 1, rho: p.f64(rho), values };
            let eps = strong_epsilons(&data, &mapping, 3, p).unwrap();
            let expect = closed_forms(&phi, 2.5, 0.2, rho);
            for (e, x) in eps.iter().zip(expect) {
                let scale = 1.0 + x.abs();
                prop_assert!((e.to_f64() - x).abs() < 1e-11 * scale, "{} vs {}", e.to_f64(), x);
            }
        }
    }
}
