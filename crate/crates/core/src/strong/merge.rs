use rug::{Float, Rational};

use super::extract::{extract_strong_coeffs, StrongEstimate, StrongSeries};
use crate::error::{Error, Result};
use crate::number::Precision;
use crate::odm::{MappingSpec, MappingTag, OdmEngine, RhoSchedule};
use crate::pade::pade;
use crate::perturbation::WeakSeries;
use crate::series::PowerSeries;

/// Search window for the merging point on the negative `χ` axis.
const CHI_LO: f64 = -1.6;
const CHI_HI: f64 = -1.1;

/// Weak coefficients of `Δ01 = (E_0 - E_1)²/4` and `S01 = (E_0 + E_1)/2`.
pub fn symmetric_weak_series(ground: &WeakSeries, excited: &WeakSeries) -> Result<(Vec<Rational>, Vec<Rational>)> {
    if ground.convention != excited.convention {
        return Err(Error::Domain("levels use different Hamiltonian conventions".into()));
    }
    let k = ground.order().min(excited.order());
    let half_diff: Vec<Rational> = (0..=k).map(|l| Rational::from(&ground.coeffs[l] - &excited.coeffs[l]) / 2u32).collect();
    let sum: Vec<Rational> = (0..=k).map(|l| Rational::from(&ground.coeffs[l] + &excited.coeffs[l]) / 2u32).collect();
    let delta = PowerSeries::new(half_diff.clone()).mul(&PowerSeries::new(half_diff)).into_coeffs();
    Ok((delta, sum))
}

/// Mapping (a) with the large-coupling exponent of `Δ01 ~ g^{2/5}`.
pub fn delta_mapping() -> MappingSpec {
    MappingSpec::with_beta(MappingTag::A, Rational::from((2, 5)))
}

/// Scale applied to the fitted mapping-(a) `ρ_K` when summing `Δ01` and `S01`.
pub const SYMMETRIC_RHO_SCALE: f64 = 0.88;

/// Fitted mapping-(a) schedule scaled by [`SYMMETRIC_RHO_SCALE`].
pub fn symmetric_schedule(orders: impl IntoIterator<Item = usize>, prec: Precision) -> Result<RhoSchedule> {
    Ok(RhoSchedule::fitted(&MappingSpec::a(), orders, prec)?.scaled(&prec.f64(SYMMETRIC_RHO_SCALE)))
}

/// Strong series of `Δ01` and `S01` by mapping-(a) summation of their weak series.
pub fn symmetric_strong_series(ground: &WeakSeries, excited: &WeakSeries, k: usize, n_max: usize, prec: Precision, estimate: StrongEstimate) -> Result<(StrongSeries, StrongSeries)> {
    let (delta, sum) = symmetric_weak_series(ground, excited)?;
    if delta.len() < k + 1 {
        return Err(Error::InsufficientOrder { have: delta.len() - 1, need: k });
    }
    let dm = delta_mapping();
    let d_engine = OdmEngine::from_target(&delta[..(k + 2).min(delta.len())], &dm, prec)?;
    let f_sum: Vec<Rational> = std::iter::once(Rational::from((1, 3))).chain(sum.iter().take(k + 1).cloned()).collect();
    let s_engine = OdmEngine::from_target(&f_sum[..(k + 2).min(f_sum.len())], &MappingSpec::a(), prec)?;
    let sched = symmetric_schedule(1..=k, prec)?;
    let d = extract_strong_coeffs(&d_engine, &sched, k, n_max, 0, estimate)?;
    let s = extract_strong_coeffs(&s_engine, &sched, k, n_max, 0, estimate)?;
    Ok((d, s))
}

/// Level-merging data of the two lowest levels.
#[derive(Clone, Debug)]
pub struct MergePair {
    pub delta: StrongSeries,
    pub sum: StrongSeries,
    pub chi_c: Float,
    pub chi_c_uncertainty: Float,
    /// `E^qqc(χ_c) = S01(χ_c)`.
    pub energy_at_chi_c: Float,
    pub energy_uncertainty: Float,
    /// `Δ01'(χ_c)`.
    pub slope: Float,
    /// Padé degrees `[m/n]` used for the central value.
    pub pade_orders: (usize, usize),
}

/// Forms `Δ01` and `S01` from the strong series of the two levels.
pub fn merge_analysis(ground: &StrongSeries, excited: &StrongSeries) -> Result<MergePair> {
    let n = ground.len().min(excited.len());
    let bits = ground.coeffs[0].prec();
    let half: Vec<Float> = (0..n).map(|i| Float::with_val(bits, &ground.coeffs[i] - &excited.coeffs[i]) / 2u32).collect();
    let hs = PowerSeries::new(half);
    let dcoeffs = hs.mul(&hs).into_coeffs();
    let scoeffs: Vec<Float> = (0..n).map(|i| Float::with_val(bits, &ground.coeffs[i] + &excited.coeffs[i]) / 2u32).collect();
    let unc: Vec<Float> = (0..n).map(|i| Float::with_val(bits, &ground.uncertainty[i] + &excited.uncertainty[i])).collect();
    let delta = StrongSeries { coeffs: dcoeffs, uncertainty: unc.clone(), level: 0, ..ground.clone() };
    let sum = StrongSeries { coeffs: scoeffs, uncertainty: unc, level: 0, ..ground.clone() };
    locate_merge(delta, sum)
}

/// `χ_c` as the real root of near-diagonal Padé approximants of `Δ01` in
/// `[-1.6, -1.1]`; the spread over degrees `±2` is the uncertainty.
pub fn locate_merge(delta: StrongSeries, sum: StrongSeries) -> Result<MergePair> {
    if delta.coeffs[0] <= 0 {
        return Err(Error::Domain("Δ01(0) must be positive".into()));
    }
    let n = delta.len() - 1;
    let bits = delta.coeffs[0].prec();
    let mut roots = Vec::new();
    let mut energies = Vec::new();
    let mut chosen = None;
    for shift in [0i64, -1, -2] {
        let total = n as i64 + 2 * shift;
        if total < 4 {
            continue;
        }
        for (m, d) in [((total / 2) as usize, (total - total / 2) as usize), ((total - total / 2) as usize, (total / 2) as usize)] {
            let Ok(p) = pade(&delta.coeffs, m, d) else { continue };
            let Some(root) = bisect(|x| p.eval(x), bits) else { continue };
            let e = match pade(&sum.coeffs, m, d) {
                Ok(ps) => ps.eval(&root),
                Err(_) => PowerSeries::new(sum.coeffs.clone()).eval(&root),
            };
            if chosen.is_none() {
                let h = Float::with_val(bits, Float::i_exp(1, -(bits as i32) / 3));
                let up = Float::with_val(bits, &root + &h);
                let dn = Float::with_val(bits, &root - &h);
                let slope = Float::with_val(bits, p.eval(&up) - p.eval(&dn)) / (h * 2u32);
                chosen = Some((root.clone(), e.clone(), slope, (m, d)));
            }
            roots.push(root);
            energies.push(e);
        }
    }
    let Some((chi_c, energy, slope, orders)) = chosen else {
        return Err(Error::NotFound(format!("no sign change of Δ01 on [{CHI_LO}, {CHI_HI}]")));
    };
    let spread = |v: &[Float], c: &Float| v.iter().map(|x| Float::with_val(bits, x - c).abs()).fold(Float::new(bits), |a, b| a.max(&b));
    let chi_c_uncertainty = spread(&roots, &chi_c);
    let energy_uncertainty = spread(&energies, &energy);
    Ok(MergePair { delta, sum, chi_c, chi_c_uncertainty, energy_at_chi_c: energy, energy_uncertainty, slope, pade_orders: orders })
}

fn bisect(f: impl Fn(&Float) -> Float, bits: u32) -> Option<Float> {
    let mut lo = Float::with_val(bits, CHI_LO);
    let mut hi = Float::with_val(bits, CHI_HI);
    let flo = f(&lo);
    let fhi = f(&hi);
    if !flo.is_finite() || !fhi.is_finite() || flo.is_sign_negative() == fhi.is_sign_negative() {
        return None;
    }
    let lo_neg = flo.is_sign_negative();
    for _ in 0..bits {
        let mid = Float::with_val(bits, &lo + &hi) / 2u32;
        if mid == lo || mid == hi {
            break;
        }
        let fm = f(&mid);
        if !fm.is_finite() {
            return None;
        }
        if fm.is_sign_negative() == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(Float::with_val(bits, &lo + &hi) / 2u32)
}

/// `E^qqc_GS = S01 - √Δ01` as a `χ` series.
pub fn reconstruct_ground_from_symmetric(pair: &MergePair) -> Result<StrongSeries> {
    reconstruct_level(pair, 0)
}

/// `E^qqc_ES = S01 + √Δ01` as a `χ` series.
pub fn reconstruct_excited_from_symmetric(pair: &MergePair) -> Result<StrongSeries> {
    reconstruct_level(pair, 1)
}

fn reconstruct_level(pair: &MergePair, level: u32) -> Result<StrongSeries> {
    let d = &pair.delta;
    if d.coeffs[0] <= 0 {
        return Err(Error::Domain("Δ01(0) must be positive".into()));
    }
    let n = d.len().min(pair.sum.len());
    let bits = d.coeffs[0].prec();
    let d0 = d.coeffs[0].clone();
    let unit = PowerSeries::new(d.coeffs[..n].iter().map(|c| Float::with_val(bits, c / &d0)).collect());
    let root = unit.pow_unit(&Float::with_val(bits, 0.5))?.scale(&Float::with_val(bits, d0.sqrt_ref()));
    let coeffs: Vec<Float> = (0..n)
        .map(|i| if level == 0 { Float::with_val(bits, &pair.sum.coeffs[i] - root.coeff(i)) } else { Float::with_val(bits, &pair.sum.coeffs[i] + root.coeff(i)) })
        .collect();
    // first-order propagation: δ√Δ ≈ δΔ / (2√Δ(0)) at each order
    let s0 = Float::with_val(bits, d0.sqrt_ref());
    let uncertainty = (0..n).map(|i| Float::with_val(bits, &pair.sum.uncertainty[i] + Float::with_val(bits, &d.uncertainty[i] / &s0) / 2u32)).collect();
    Ok(StrongSeries { level, coeffs, uncertainty, ..pair.sum.clone() })
}

/// Strong-coupling data of the two lowest levels from the order-`K`
/// summation of `Δ01` and `S01`.
#[derive(Clone, Debug)]
pub struct LevelPairAnalysis {
    pub merge: MergePair,
    pub ground: StrongSeries,
    pub excited: StrongSeries,
}

/// `Δ01`, `S01` through `χ^{n_max}`, the merging point, and both levels.
pub fn analyze_level_pair(ground: &WeakSeries, excited: &WeakSeries, k: usize, n_max: usize, prec: Precision) -> Result<LevelPairAnalysis> {
    let (delta, sum) = symmetric_strong_series(ground, excited, k, n_max, prec, StrongEstimate::Plain)?;
    let merge = locate_merge(delta, sum)?;
    let ground = reconstruct_ground_from_symmetric(&merge)?;
    let excited = reconstruct_excited_from_symmetric(&merge)?;
    Ok(LevelPairAnalysis { merge, ground, excited })
}
