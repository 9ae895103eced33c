use rug::{Float, Rational};

use super::mapping::{MappingSpec, MappingTag};
use crate::number::{BigComplex, Precision};
use crate::perturbation::LargeOrderModel;

/// Rate constant and domain edge of the method-(a) convergence model.
const RATE_A: f64 = 13.8;
const DOMAIN_EDGE_A: f64 = -1.351;

/// Saddle-point data controlling the large-order behaviour of a mapping.
#[derive(Clone, Debug)]
pub struct ConvergenceModel {
    pub mapping: MappingTag,
    pub mu_c: Float,
    pub lambda_c: Float,
    /// `1 - λ_K ~ C2 (K g)^{-1/α}` at fixed `g`.
    pub c2: Float,
    /// `R = A μ_c`.
    pub r: Float,
    /// Order-independent rate constant; only known for mapping (a) unless fitted.
    pub c3: Option<f64>,
    /// Largest residual of the two saddle equations at the solution.
    pub residual: Float,
}

/// Solves `-ζ/(λζ') = ln(-λ)` for `λ_c` in `(λ*, 0)`, `λ*` the critical point
/// of `ζ`, then `μ_c = -λ_c ζ'(λ_c)/ζ(λ_c)²`.
pub fn saddle_constants(mapping: &MappingSpec, prec: Precision) -> ConvergenceModel {
    let bits = prec.bits();
    let f = |l: &Float| -> Float {
        let z = mapping.zeta_real(l);
        let d = mapping.zeta_prime_real(l);
        let neg = Float::with_val(bits, -l);
        Float::with_val(bits, &z / Float::with_val(bits, l * &d)) + neg.ln()
    };
    // f → -∞ at 0⁻ and +∞ at λ*⁺
    let mut lo = mapping.critical_point(prec);
    let mut hi = prec.zero();
    let span = Float::with_val(bits, &hi - &lo);
    lo += Float::with_val(bits, &span * 1e-12);
    hi -= Float::with_val(bits, &span * 1e-12);
    for _ in 0..bits + 8 {
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        if f(&mid) > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda_c = Float::with_val(bits, &lo + &hi) / 2u32;
    let z = mapping.zeta_real(&lambda_c);
    let d = mapping.zeta_prime_real(&lambda_c);
    let mu_c = -Float::with_val(bits, &lambda_c * &d) / Float::with_val(bits, z.square_ref());

    let a = prec.rational(&LargeOrderModel::new(0).action);
    let r = Float::with_val(bits, &a * &mu_c);
    let inv_alpha = prec.rational(&Rational::from(mapping.alpha.recip_ref()));
    let scale = prec.rational(&mapping.endpoint_scale());
    let c2 = Float::with_val(bits, Float::with_val(bits, &r * &scale).ln() * &inv_alpha).exp();

    // σ = ln(-λ) - 1/(μζ): λζ²σ' = 0 and σ = 0
    let r1 = Float::with_val(bits, &mu_c * Float::with_val(bits, z.square_ref())) + Float::with_val(bits, &lambda_c * &d);
    let r2 = Float::with_val(bits, -&lambda_c).ln() - Float::with_val(bits, &mu_c * &z).recip();
    let residual = Float::with_val(bits, r1.abs()).max(&Float::with_val(bits, r2.abs()));

    let c3 = match mapping.tag {
        MappingTag::A => Some(-RATE_A),
        _ => None,
    };
    ConvergenceModel { mapping: mapping.tag, mu_c, lambda_c, c2, r, c3, residual }
}

/// Predicted behaviour of the order-`K` error at coupling `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorPrediction {
    /// Natural log of the predicted error, `None` without a rate constant.
    pub log_error: Option<f64>,
    /// `[C3 - C2 Re(g^{-1/α})]`, the coefficient of `K^{1-1/α}`.
    pub rate: Option<f64>,
    pub in_domain: bool,
}

/// `ln|error| ≈ [C3 - C2 Re(g^{-1/α})] K^{1-1/α}`; the domain is where the
/// bracket is negative (for mapping (a): `Re g^{-4/5} > -1.351`).
pub fn error_model(g: &BigComplex, k: usize, mapping: &MappingSpec, model: &ConvergenceModel) -> ErrorPrediction {
    let bits = g.prec();
    let inv_alpha = Float::with_val(bits, Rational::from(mapping.alpha.recip_ref()));
    let chi = g.powf(&Float::with_val(bits, -&inv_alpha)).re.to_f64();
    let c2 = model.c2.to_f64();
    let power = 1.0 - inv_alpha.to_f64();
    let rate = model.c3.map(|c3| c3 - c2 * chi);
    let in_domain = match (mapping.tag, model.c3) {
        (MappingTag::A, _) => chi > DOMAIN_EDGE_A,
        (_, Some(c3)) => c3 - c2 * chi < 0.0,
        (_, None) => chi > 0.0 || chi.is_nan(),
    };
    ErrorPrediction { log_error: rate.map(|r| r * (k as f64).powf(power)), rate, in_domain }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::digits(40).unwrap()
    }

    #[test]
    fn saddle_residuals_are_small() {
        for m in [MappingSpec::a(), MappingSpec::b(), MappingSpec::c()] {
            let c = saddle_constants(&m, p());
            assert!(c.residual.to_f64() < 1e-30, "{}: {}", m.tag, c.residual);
            assert!(c.lambda_c < 0 && c.mu_c > 0);
        }
    }

    #[test]
    fn mapping_a_reduces_to_closed_equation() {
        // -(1-λ)/(1+λ/4) = ln(-λ),  μ = -(1-λ)^{1/4}(1+λ/4)/λ
        let c = saddle_constants(&MappingSpec::a(), p());
        let l = c.lambda_c.to_f64();
        assert!((-(1.0 - l) / (1.0 + l / 4.0) - (-l).ln()).abs() < 1e-13);
        let mu = -(1.0 - l).powf(0.25) * (1.0 + l / 4.0) / l;
        assert!((mu - c.mu_c.to_f64()).abs() < 1e-12);
    }

    #[test]
    fn domain_flag_on_negative_axis() {
        let m = MappingSpec::a();
        let c = saddle_constants(&m, p());
        let pos = BigComplex::from_real(p().f64(5.0));
        assert!(error_model(&pos, 50, &m, &c).in_domain);
        let neg = BigComplex::from_real(p().f64(-0.5));
        assert!(!error_model(&neg, 50, &m, &c).in_domain);
    }
}
