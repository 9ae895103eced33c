use rug::{Float, Rational};

use super::accel::{aitken_accelerate, Accelerated, AitkenOptions};
use super::invert::invert_mapping;
use super::mapping::{MappingSpec, MappingTag, Target};
use super::polys::{rho_polynomials_from_target, target_coefficients};
use super::rho::RhoSchedule;
use crate::error::{Error, Result};
use crate::number::{BigComplex, Precision};
use crate::perturbation::WeakSeries;
use crate::series::RhoPolynomialSeries;

/// One order-`K` approximant evaluated at a coupling.
#[derive(Clone, Debug)]
pub struct OdmApproximant {
    pub mapping: MappingTag,
    pub order: usize,
    pub rho: Float,
    pub lambda: BigComplex,
    pub value: BigComplex,
    /// `|P_{K+1}(ρ_K) λ^{K+1}|` carried back to the energy; `None` at the last available order.
    pub error: Option<Float>,
    /// `false` when `λ` sits on the cut of the prefactor.
    pub in_sector: bool,
}

/// `P_0(ρ)..P_{K+1}(ρ)` at a fixed `ρ`, reusable across couplings.
#[derive(Clone, Debug)]
pub struct OrderData {
    pub order: usize,
    pub rho: Float,
    pub values: Vec<Float>,
}

impl OrderData {
    /// The degree-`K` polynomial `φ_K(λ) = Σ_{L≤K} P_L(ρ_K) λ^L`.
    pub fn phi(&self) -> &[Float] {
        &self.values[..=self.order]
    }
}

/// Mapped expansion of one weak series, ready to be summed at any order up to
/// its build order.
#[derive(Clone, Debug)]
pub struct OdmEngine {
    mapping: MappingSpec,
    polys: RhoPolynomialSeries,
    prec: Precision,
}

impl OdmEngine {
    /// Builds `P_L(ρ)` up to order `k_max + 1` when the series allows it, else `k_max`.
    pub fn new(series: &WeakSeries, mapping: &MappingSpec, k_max: usize, prec: Precision) -> Result<Self> {
        let target = match target_coefficients(series, mapping, k_max + 1) {
            Ok(t) => t,
            Err(_) => target_coefficients(series, mapping, k_max)?,
        };
        Self::from_target(&target, mapping, prec)
    }

    /// Same, from the weak coefficients of the mapped target itself.
    pub fn from_target(target: &[Rational], mapping: &MappingSpec, prec: Precision) -> Result<Self> {
        let polys = rho_polynomials_from_target(target, mapping, prec)?;
        Ok(OdmEngine { mapping: mapping.clone(), polys, prec })
    }

    pub fn mapping(&self) -> &MappingSpec {
        &self.mapping
    }

    pub fn polys(&self) -> &RhoPolynomialSeries {
        &self.polys
    }

    pub fn prec(&self) -> Precision {
        self.prec
    }

    pub fn max_order(&self) -> usize {
        self.polys.order()
    }

    pub fn order_data(&self, k: usize, rho: &Float) -> Result<OrderData> {
        if k > self.max_order() {
            return Err(Error::InsufficientOrder { have: self.max_order(), need: k });
        }
        let rho = Float::with_val(self.prec.bits(), rho);
        let values = self.polys.eval_at(&rho, k + 1);
        Ok(OrderData { order: k, rho, values })
    }

    pub fn approximant(&self, data: &OrderData, g: &BigComplex) -> Result<OdmApproximant> {
        let bits = self.prec.bits();
        let inv = invert_mapping(g, &data.rho, &self.mapping, self.prec)?;
        let lam = inv.lambda;
        let k = data.order;
        let mut acc = BigComplex::from_real(Float::with_val(bits, &data.values[k]));
        for c in data.values[..k].iter().rev() {
            acc = acc.mul(&lam);
            acc.re += c;
        }
        let pref = self.mapping.prefactor_at(&lam);
        let g_hi = BigComplex::new(Float::with_val(bits, &g.re), Float::with_val(bits, &g.im));
        let mut value = acc.div(&pref);
        let mut error = data.values.get(k + 1).map(|next| {
            let term = lam.pow_int(k as u32 + 1).scale(next);
            Float::with_val(bits, term.abs() / pref.abs())
        });
        if self.mapping.target == Target::F {
            let third = BigComplex::from_real(self.prec.ratio(1, 3));
            value = value.sub(&third).div(&g_hi);
            error = error.map(|e| e / g_hi.abs());
        }
        Ok(OdmApproximant { mapping: self.mapping.tag, order: k, rho: data.rho.clone(), lambda: lam, value, error, in_sector: inv.in_sector })
    }

    /// Order-`K` approximant at `g` with `ρ = ρ_K` from the schedule.
    pub fn sum(&self, schedule: &RhoSchedule, k: usize, g: &BigComplex) -> Result<OdmApproximant> {
        let rho = schedule.get(k).ok_or_else(|| Error::NotFound(format!("no ρ_K for K = {k} in the schedule")))?;
        self.approximant(&self.order_data(k, rho)?, g)
    }

    /// Parity-split Aitken extrapolation of the approximants at orders
    /// `k_min..=k`; `in_sector` is the conjunction over all orders used.
    pub fn sum_accelerated(&self, schedule: &RhoSchedule, k_min: usize, k: usize, g: &BigComplex) -> Result<(Accelerated, bool)> {
        let mut seq = Vec::with_capacity(k + 1 - k_min.min(k));
        let mut in_sector = true;
        for kk in k_min..=k {
            let a = self.sum(schedule, kk, g)?;
            in_sector &= a.in_sector;
            seq.push(a.value);
        }
        Ok((aitken_accelerate(&seq, &AitkenOptions::new(self.prec.floor()))?, in_sector))
    }
}

/// One-shot order-`K` sum of a weak series.
pub fn odm_sum(series: &WeakSeries, mapping: &MappingSpec, schedule: &RhoSchedule, k: usize, g: &BigComplex, prec: Precision) -> Result<OdmApproximant> {
    OdmEngine::new(series, mapping, k, prec)?.sum(schedule, k, g)
}
