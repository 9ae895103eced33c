use rug::Float;

use super::mapping::MappingSpec;
use crate::error::{Error, Result};
use crate::number::{BigComplex, Precision};

const ARC_STEPS: usize = 32;
const PATH_BITS: u32 = 192;

/// Preimage `λ` of `g` under `g = ρ ζ(λ)`, on the sheet continuous from
/// `λ = 0`.
#[derive(Clone, Debug)]
pub struct Inversion {
    pub lambda: BigComplex,
    /// `false` when `λ` sits on the cut `[1, ∞)` of the prefactor.
    pub in_sector: bool,
    /// Path points `(Re λ, Im λ)` visited by the continuation.
    pub trace: Vec<(f64, f64)>,
}

/// Continues the preimage first along `g ∈ (0, |g|]`, where `λ ∈ (0, 1)`, then
/// along the arc `|g| e^{iθ}` to `arg g`. A negative real `g` with a zero
/// imaginary part is read as `g + i0`.
pub fn invert_mapping(g: &BigComplex, rho: &Float, mapping: &MappingSpec, prec: Precision) -> Result<Inversion> {
    if g.is_zero() {
        return Err(Error::Domain("g = 0 has the trivial preimage; nothing to invert".into()));
    }
    if !rho.is_finite() || *rho <= 0 {
        return Err(Error::Domain(format!("mapping scale must be positive, got {rho}")));
    }
    let bits = prec.bits();
    let lo_bits = PATH_BITS.min(bits);
    let r = Float::with_val(lo_bits, g.abs());
    let rho_lo = Float::with_val(lo_bits, rho);
    let theta = if g.im.is_zero() && g.re.is_sign_negative() { Float::with_val(lo_bits, rug::float::Constant::Pi) } else { Float::with_val(lo_bits, g.arg()) };

    let mut trace = Vec::with_capacity(ARC_STEPS + 2);
    let lam0 = solve_real(&r, &rho_lo, mapping, lo_bits)?;
    let mut lam = BigComplex::from_real(lam0);
    trace.push(lam.to_f64_pair());

    let steps = if theta.is_zero() { 0 } else { ARC_STEPS };
    for j in 1..=steps {
        let t = Float::with_val(lo_bits, &theta * j as u32) / steps as u32;
        let target = BigComplex::from_polar(&r, &t);
        // predictor dλ/dθ = i g / (ρ ζ'(λ))
        let prev_t = Float::with_val(lo_bits, &theta * (j - 1) as u32) / steps as u32;
        let prev_g = BigComplex::from_polar(&r, &prev_t);
        let dtheta = Float::with_val(lo_bits, &t - &prev_t);
        let slope = BigComplex::new(Float::with_val(lo_bits, -&prev_g.im), prev_g.re.clone()).div(&mapping.zeta_prime(&lam).scale(&rho_lo));
        let guess = lam.add(&slope.scale(&dtheta));
        lam = newton(mapping, &rho_lo, &target, guess, lo_bits, 60).map_err(|reason| {
            let mut t = trace.clone();
            t.push(lam.to_f64_pair());
            Error::Inversion { step: j, reason: format!("{reason}; path {t:?}") }
        })?;
        trace.push(lam.to_f64_pair());
    }

    let start = BigComplex::new(Float::with_val(bits, &lam.re), Float::with_val(bits, &lam.im));
    let rho_hi = Float::with_val(bits, rho);
    let g_hi = if g.im.is_zero() && g.re.is_sign_negative() {
        BigComplex::new(Float::with_val(bits, &g.re), Float::new(bits))
    } else {
        BigComplex::new(Float::with_val(bits, &g.re), Float::with_val(bits, &g.im))
    };
    let lambda = newton(mapping, &rho_hi, &g_hi, start, bits, 60).map_err(|reason| Error::Inversion { step: steps + 1, reason })?;
    let cut_width = Float::with_val(bits, Float::i_exp(1, -(bits as i32) / 2));
    let in_sector = !(lambda.re >= 1 && Float::with_val(bits, lambda.im.abs_ref()) <= cut_width);
    Ok(Inversion { lambda, in_sector, trace })
}

fn newton(mapping: &MappingSpec, rho: &Float, target: &BigComplex, mut lam: BigComplex, bits: u32, max_iter: usize) -> std::result::Result<BigComplex, String> {
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 12));
    let mut last = None::<Float>;
    for _ in 0..max_iter {
        let f = mapping.zeta(&lam).scale(rho).sub(target);
        let d = mapping.zeta_prime(&lam).scale(rho);
        if d.is_zero() || !d.is_finite() {
            return Err("vanishing derivative".into());
        }
        let step = f.div(&d);
        lam = lam.sub(&step);
        if !lam.is_finite() {
            return Err("iterate left the finite plane".into());
        }
        let size = step.abs();
        let scale = Float::with_val(bits, lam.abs()).max(&Float::with_val(bits, 1e-30));
        if size <= Float::with_val(bits, &eps * &scale) {
            return Ok(lam);
        }
        if let Some(prev) = &last {
            // quadratic phase stalled at the rounding floor
            if size.to_f64() < 1e-8 * scale.to_f64() && size >= *prev {
                return Ok(lam);
            }
        }
        last = Some(size);
    }
    Err(format!("no convergence in {max_iter} Newton steps"))
}

/// Root of `ρ ζ(λ) = r` in `(0, 1)`, by Newton on `ln ζ` inside a bisection bracket.
fn solve_real(r: &Float, rho: &Float, mapping: &MappingSpec, bits: u32) -> Result<Float> {
    let goal = Float::with_val(bits, r / rho).ln();
    let mut lo = Float::new(bits);
    let mut hi = Float::with_val(bits, 1);
    let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 8));
    let f = |x: &Float| -> (Float, Float) {
        let z = mapping.zeta_real(x);
        let d = mapping.zeta_prime_real(x);
        (Float::with_val(bits, z.ln_ref()) - &goal, d / z)
    };
    let mut x = Float::with_val(bits, 0.5);
    for _ in 0..(bits as usize + 200) {
        let (fx, dx) = f(&x);
        if fx.is_zero() {
            return Ok(x);
        }
        if fx > 0 {
            hi = x.clone();
        } else {
            lo = x.clone();
        }
        let mut next = Float::with_val(bits, &x - Float::with_val(bits, &fx / &dx));
        if !(next > lo && next < hi) {
            next = Float::with_val(bits, &lo + &hi) / 2u32;
        }
        let moved = Float::with_val(bits, &next - &x).abs();
        x = next;
        if moved <= Float::with_val(bits, &eps * &x) || Float::with_val(bits, &hi - &lo) <= Float::with_val(bits, &eps * &x) {
            return Ok(x);
        }
    }
    Err(Error::Inversion { step: 0, reason: "real segment did not converge".into() })
}
