use rug::{Float, Rational};

use super::mapping::{MappingSpec, MappingTag, Target};
use crate::error::{Error, Result};
use crate::number::Precision;
use crate::perturbation::WeakSeries;
use crate::series::{binomial_pow, Polynomial, RhoPolynomialSeries};

/// Weak coefficients of the mapped target to order `k`: `E_L` itself, or
/// `F_0 = 1/3`, `F_L = E_{L-1}`.
pub fn target_coefficients(series: &WeakSeries, mapping: &MappingSpec, k: usize) -> Result<Vec<Rational>> {
    let need = match mapping.target {
        Target::E => k,
        Target::F => k.saturating_sub(1),
    };
    if series.order() < need {
        return Err(Error::InsufficientOrder { have: series.order(), need });
    }
    Ok(match mapping.target {
        Target::E => series.coeffs[..=k].to_vec(),
        Target::F => {
            let mut out = vec![Rational::from((1, 3))];
            out.extend(series.coeffs[..k].iter().cloned());
            out
        }
    })
}

pub fn build_rho_polynomials(series: &WeakSeries, mapping: &MappingSpec, k: usize, prec: Precision) -> Result<RhoPolynomialSeries> {
    let target = target_coefficients(series, mapping, k)?;
    rho_polynomials_from_target(&target, mapping, prec)
}

/// `P_n(ρ) = Σ_{L≤n} T_L ρ^L [λ^{n-L}] h(λ)^L (1-λ)^{αβ-αL}` for `n ≤ len-1`.
pub fn rho_polynomials_from_target(target: &[Rational], mapping: &MappingSpec, prec: Precision) -> Result<RhoPolynomialSeries> {
    if target.is_empty() {
        return Err(Error::InsufficientOrder { have: 0, need: 1 });
    }
    let k = target.len() - 1;
    let bits = prec.bits();
    let ab = mapping.prefactor_exponent();
    let mut polys: Vec<Vec<Float>> = (0..=k).map(|n| vec![Float::new(bits); n + 1]).collect();
    for (l, t) in target.iter().enumerate() {
        let tl = Float::with_val(bits, t);
        let e = Rational::from(&ab - Rational::from(&mapping.alpha * l as u32));
        let mut m = binomial_pow(&Float::with_val(bits, &e), k - l).into_coeffs();
        if mapping.tag == MappingTag::B {
            for _ in 0..l {
                for i in (1..m.len()).rev() {
                    let prev = Float::with_val(bits, &m[i - 1] / 2u32);
                    m[i] -= prev;
                }
            }
        }
        for (j, c) in m.iter().enumerate() {
            polys[l + j][l] = Float::with_val(bits, &tl * c);
        }
    }
    RhoPolynomialSeries::new(polys.into_iter().map(Polynomial::new).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perturbation::{weak_coefficients, HamiltonianConvention};

    fn p() -> Precision {
        Precision::digits(40).unwrap()
    }

    #[test]
    fn p0_is_target_at_zero() {
        let s = weak_coefficients(0, 6, HamiltonianConvention::PaperMain);
        let pa = build_rho_polynomials(&s, &MappingSpec::a(), 6, p()).unwrap();
        assert!((pa.poly(0).coeffs[0].to_f64() - 1.0 / 3.0).abs() < 1e-30);
        let pc = build_rho_polynomials(&s, &MappingSpec::c(), 6, p()).unwrap();
        assert!((pc.poly(0).coeffs[0].to_f64() - 0.5).abs() < 1e-30);
    }

    #[test]
    fn p1_under_c_by_hand() {
        // (1-λ)^{1/2} E(ρλ(1-λ)^{-5/2}) = E_0 + (E_1 ρ - E_0/2) λ + ...
        let s = weak_coefficients(0, 3, HamiltonianConvention::PaperMain);
        let pc = build_rho_polynomials(&s, &MappingSpec::c(), 3, p()).unwrap();
        let c = &pc.poly(1).coeffs;
        assert!((c[0].to_f64() + 0.25).abs() < 1e-30);
        assert!((c[1].to_f64() - 11.0 / 288.0).abs() < 1e-30);
    }

    #[test]
    fn p2_under_b_by_hand() {
        // ζ = λ - λ/2 λ + 5/2 λ² + ... = λ + 2λ², prefactor (1-λ)^3, F = 1/3 + F_1 g + F_2 g²
        // φ_2 = F_2 ρ² + F_1 ρ (2 - 3) + (1/3)·3
        let s = weak_coefficients(0, 3, HamiltonianConvention::PaperMain);
        let pb = build_rho_polynomials(&s, &MappingSpec::b(), 3, p()).unwrap();
        let c = &pb.poly(2).coeffs;
        assert!((c[0].to_f64() - 1.0).abs() < 1e-30);
        assert!((c[1].to_f64() + 0.5).abs() < 1e-30);
        assert!((c[2].to_f64() - 11.0 / 288.0).abs() < 1e-30);
    }

    #[test]
    fn rejects_short_series() {
        let s = weak_coefficients(0, 3, HamiltonianConvention::PaperMain);
        assert!(build_rho_polynomials(&s, &MappingSpec::c(), 5, p()).is_err());
        assert!(build_rho_polynomials(&s, &MappingSpec::a(), 4, p()).is_ok());
    }
}
