use std::fmt;
use std::str::FromStr;

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::number::{BigComplex, Precision};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MappingTag {
    A,
    B,
    C,
}

impl MappingTag {
    pub fn tag(self) -> &'static str {
        match self {
            MappingTag::A => "a",
            MappingTag::B => "b",
            MappingTag::C => "c",
        }
    }
}

impl fmt::Display for MappingTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for MappingTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(MappingTag::A),
            "b" => Ok(MappingTag::B),
            "c" => Ok(MappingTag::C),
            other => Err(Error::Parse(format!("unknown mapping `{other}`"))),
        }
    }
}

/// Which function of `g` is mapped: the energy itself, or `F = 1/3 + g E`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    E,
    F,
}

/// `g = ρ ζ(λ)` with `ζ = λ h(λ) (1-λ)^{-α}`, `h = 1` or `1 - λ/2`, and the
/// prefactor `(1-λ)^{αβ}` applied to the target.
#[derive(Clone, Debug, PartialEq)]
pub struct MappingSpec {
    pub tag: MappingTag,
    pub alpha: Rational,
    pub beta: Rational,
    pub target: Target,
    pub prefactor: bool,
}

impl MappingSpec {
    /// `λ(1-λ)^{-5/4}` on `F`, prefactor `(1-λ)^{3/2}`.
    pub fn a() -> Self {
        MappingSpec { tag: MappingTag::A, alpha: Rational::from((5, 4)), beta: Rational::from((6, 5)), target: Target::F, prefactor: true }
    }

    /// `λ(1-λ/2)(1-λ)^{-5/2}` on `F`, prefactor `(1-λ)^3`.
    pub fn b() -> Self {
        MappingSpec { tag: MappingTag::B, alpha: Rational::from((5, 2)), beta: Rational::from((6, 5)), target: Target::F, prefactor: true }
    }

    /// `λ(1-λ)^{-5/2}` on `E`, prefactor `(1-λ)^{1/2}`.
    pub fn c() -> Self {
        MappingSpec { tag: MappingTag::C, alpha: Rational::from((5, 2)), beta: Rational::from((1, 5)), target: Target::E, prefactor: true }
    }

    pub fn from_tag(tag: MappingTag) -> Self {
        match tag {
            MappingTag::A => Self::a(),
            MappingTag::B => Self::b(),
            MappingTag::C => Self::c(),
        }
    }

    /// Same map on the plain target `E` for a function growing like `g^β`.
    pub fn with_beta(tag: MappingTag, beta: Rational) -> Self {
        MappingSpec { beta, target: Target::E, ..Self::from_tag(tag) }
    }

    pub fn without_prefactor(mut self) -> Self {
        self.prefactor = false;
        self
    }

    /// `αβ`, or zero when the prefactor is switched off.
    pub fn prefactor_exponent(&self) -> Rational {
        if self.prefactor {
            Rational::from(&self.alpha * &self.beta)
        } else {
            Rational::new()
        }
    }

    /// Coefficients of `h(λ)`.
    pub fn h_coeffs(&self) -> Vec<Rational> {
        match self.tag {
            MappingTag::B => vec![Rational::from(1), Rational::from((-1, 2))],
            _ => vec![Rational::from(1)],
        }
    }

    /// `lim_{λ→1} (1-λ)^α ζ(λ) = h(1)`.
    pub fn endpoint_scale(&self) -> Rational {
        self.h_coeffs().iter().fold(Rational::new(), |acc, c| acc + c)
    }

    pub fn zeta(&self, lambda: &BigComplex) -> BigComplex {
        let (h, _) = self.h(lambda);
        let alpha = self.alpha_float(lambda.prec());
        lambda.mul(&h).mul(&one_minus(lambda).powf(&Float::with_val(lambda.prec(), -&alpha)))
    }

    pub fn zeta_prime(&self, lambda: &BigComplex) -> BigComplex {
        let bits = lambda.prec();
        let (h, dh) = self.h(lambda);
        let alpha = self.alpha_float(bits);
        let om = one_minus(lambda);
        // ζ' = [h + λh' + αλh/(1-λ)] (1-λ)^{-α}
        let lh = lambda.mul(&h);
        let bracket = h.add(&lambda.mul(&dh)).add(&lh.scale(&alpha).div(&om));
        bracket.mul(&om.powf(&Float::with_val(bits, -&alpha)))
    }

    pub fn zeta_real(&self, lambda: &Float) -> Float {
        self.zeta(&BigComplex::from_real(lambda.clone())).re
    }

    pub fn zeta_prime_real(&self, lambda: &Float) -> Float {
        self.zeta_prime(&BigComplex::from_real(lambda.clone())).re
    }

    /// Real negative critical point of `ζ`, the end of the interval on
    /// which the saddle equation is solved.
    pub fn critical_point(&self, prec: Precision) -> Float {
        match self.tag {
            // λ(1-λ)^{-5/4}: 1 + λ/4 = 0
            MappingTag::A => prec.int(-4),
            // λ(1-λ)^{-5/2}: 1 + 3λ/2 = 0
            MappingTag::C => prec.ratio(-2, 3),
            // λ² - 2λ - 4 = 0
            MappingTag::B => prec.int(1) - prec.int(5).sqrt(),
        }
    }

    /// Prefactor `(1-λ)^{αβ}` at `λ`.
    pub fn prefactor_at(&self, lambda: &BigComplex) -> BigComplex {
        let e = Float::with_val(lambda.prec(), &self.prefactor_exponent());
        one_minus(lambda).powf(&e)
    }

    pub(crate) fn alpha_float(&self, bits: u32) -> Float {
        Float::with_val(bits, &self.alpha)
    }

    fn h(&self, lambda: &BigComplex) -> (BigComplex, BigComplex) {
        let bits = lambda.prec();
        match self.tag {
            MappingTag::B => {
                let half = Float::with_val(bits, 0.5);
                let h = BigComplex::one_bits(bits).sub(&lambda.scale(&half));
                (h, BigComplex::from_real(Float::with_val(bits, -0.5)))
            }
            _ => (BigComplex::one_bits(bits), BigComplex::from_real(Float::new(bits))),
        }
    }
}

pub(crate) fn one_minus(z: &BigComplex) -> BigComplex {
    BigComplex::one_bits(z.prec()).sub(z)
}
