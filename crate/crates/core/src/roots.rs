//! All complex roots of a real polynomial at multiprecision.
//!
//! Aberth–Ehrlich simultaneous iteration with Newton-polygon starting
//! circles. When a sweep budget runs out, the unconverged roots are handed to
//! a deflated Newton pass before giving up.

use rug::Float;

use crate::error::{Error, Result};
use crate::number::{BigComplex, Precision};
use crate::series::Polynomial;

const MAX_SWEEPS: usize = 600;

/// Outcome of [`poly_roots`]: roots in no particular order plus the largest
/// scaled residual `|p(z)| / Σ |c_i| |z|^i` over all roots.
#[derive(Clone, Debug)]
pub struct RootSet {
    pub roots: Vec<BigComplex>,
    pub max_residual: f64,
    pub sweeps: usize,
}

/// Finds all roots of `p` (degree >= 1, nonzero leading coefficient).
///
/// `tol` is the relative step size at which a root counts as converged; the
/// float precision of the coefficients sets the arithmetic precision.
pub fn poly_roots(p: &Polynomial<Float>, tol: &Float) -> Result<RootSet> {
    let n = p.coeffs.len().saturating_sub(1);
    if n == 0 || p.coeffs[n].is_zero() {
        return Err(Error::Domain("polynomial needs degree >= 1 and a nonzero leading coefficient".into()));
    }
    let bits = p.coeffs.iter().map(|c| c.prec()).max().unwrap();
    let prec_zero = Float::new(bits);

    // Roots at the origin come off exactly.
    let shift = p.coeffs.iter().position(|c| !c.is_zero()).unwrap();
    let mut roots: Vec<BigComplex> = (0..shift).map(|_| BigComplex::new(prec_zero.clone(), prec_zero.clone())).collect();
    let q = Polynomial::new(p.coeffs[shift..].to_vec());
    let m = q.coeffs.len() - 1;
    if m == 0 {
        return Ok(RootSet { roots, max_residual: 0.0, sweeps: 0 });
    }

    let mut z = initial_guesses(&q, bits);
    let mut done = vec![false; m];
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && done.iter().any(|d| !d) {
        sweeps += 1;
        for i in 0..m {
            if done[i] {
                continue;
            }
            let (pv, dv) = eval_with_derivative(&q, &z[i]);
            if pv.is_zero() {
                done[i] = true;
                continue;
            }
            let ratio = pv.div(&dv);
            let mut sum = BigComplex::new(Float::new(bits), Float::new(bits));
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    sum = sum.add(&z[i].sub(zj).recip());
                }
            }
            let one = BigComplex::from_real(Float::with_val(bits, 1));
            let denom = one.sub(&ratio.mul(&sum));
            let step = ratio.div(&denom);
            if !step.is_finite() {
                // coincident iterates; nudge apart
                z[i] = z[i].add(&BigComplex::new(Float::with_val(bits, 1e-3), Float::with_val(bits, 1e-3)));
                continue;
            }
            z[i] = z[i].sub(&step);
            let scale = z[i].abs().max(&Float::with_val(bits, 1e-300));
            if Float::with_val(bits, step.abs() / scale) < *tol {
                done[i] = true;
            }
        }
    }

    if done.iter().any(|d| !d) {
        // deflated Newton on the stragglers
        for i in 0..m {
            if done[i] {
                continue;
            }
            for _ in 0..200 {
                let (pv, dv) = eval_with_derivative(&q, &z[i]);
                if pv.is_zero() {
                    done[i] = true;
                    break;
                }
                let mut corr = pv.div(&dv).recip();
                for (j, zj) in z.iter().enumerate() {
                    if j != i {
                        corr = corr.sub(&z[i].sub(zj).recip());
                    }
                }
                let step = corr.recip();
                if !step.is_finite() {
                    break;
                }
                z[i] = z[i].sub(&step);
                let scale = z[i].abs().max(&Float::with_val(bits, 1e-300));
                if Float::with_val(bits, step.abs() / scale) < *tol {
                    done[i] = true;
                    break;
                }
            }
        }
    }

    let max_residual = z.iter().map(|zi| scaled_residual(&q, zi)).fold(0.0, f64::max);
    if done.iter().any(|d| !d) {
        return Err(Error::NoConvergence {
            iterations: sweeps,
            residual: max_residual,
            partial: z.iter().map(BigComplex::to_f64_pair).collect(),
        });
    }
    roots.extend(z);
    Ok(RootSet { roots, max_residual, sweeps })
}

/// Newton polish of a single root at the polynomial's precision.
pub fn polish_root(p: &Polynomial<Float>, start: &BigComplex, prec: Precision, steps: usize) -> BigComplex {
    let mut z = BigComplex::new(Float::with_val(prec.bits(), &start.re), Float::with_val(prec.bits(), &start.im));
    let floor = prec.floor();
    for _ in 0..steps {
        let (pv, dv) = eval_with_derivative(p, &z);
        if dv.is_zero() {
            break;
        }
        let step = pv.div(&dv);
        z = z.sub(&step);
        if step.abs() <= Float::with_val(prec.bits(), z.abs() * &floor) {
            break;
        }
    }
    z
}

/// `|p(z)| / Σ|c_i||z|^i`.
pub fn scaled_residual(p: &Polynomial<Float>, z: &BigComplex) -> f64 {
    let (pv, _) = eval_with_derivative(p, z);
    let r = z.abs();
    let mut scale = Float::new(r.prec());
    for c in p.coeffs.iter().rev() {
        scale = scale * &r + Float::with_val(r.prec(), c.abs_ref());
    }
    if scale.is_zero() {
        return 0.0;
    }
    Float::with_val(r.prec(), pv.abs() / scale).to_f64()
}

fn eval_with_derivative(p: &Polynomial<Float>, z: &BigComplex) -> (BigComplex, BigComplex) {
    let bits = z.prec();
    let mut it = p.coeffs.iter().rev();
    let lead = it.next().unwrap();
    let mut v = BigComplex::from_real(Float::with_val(bits, lead));
    let mut d = BigComplex::new(Float::new(bits), Float::new(bits));
    for c in it {
        d = d.mul(z).add(&v);
        v = v.mul(z);
        v.re += c;
    }
    (v, d)
}

/// Starting points on circles whose radii come from the upper convex hull
/// of `(i, log|c_i|)`, the standard recipe for polynomials whose
/// coefficients span many orders of magnitude.
fn initial_guesses(p: &Polynomial<Float>, bits: u32) -> Vec<BigComplex> {
    let n = p.coeffs.len() - 1;
    let logs: Vec<f64> = p
        .coeffs
        .iter()
        .map(|c| if c.is_zero() { f64::NEG_INFINITY } else { Float::with_val(bits, c.abs_ref()).ln().to_f64() })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..=n {
        if logs[i] == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            let cross = (b as f64 - a as f64) * (logs[i] - logs[a]) - (i as f64 - a as f64) * (logs[b] - logs[a]);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut z = Vec::with_capacity(n);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        let k = b - a;
        let radius = ((logs[a] - logs[b]) / k as f64).exp();
        for j in 0..k {
            let theta = 2.0 * std::f64::consts::PI * (j as f64) / (k as f64) + 2.0 * std::f64::consts::PI * (a as f64) / (n as f64) + sigma;
            let r = Float::with_val(bits, radius);
            z.push(BigComplex::from_polar(&r, &Float::with_val(bits, theta)));
        }
    }
    z
}
