//! Padé approximants `[m/n]` of a power series.

use rug::Float;

use crate::error::{Error, Result};
use crate::number::BigComplex;
use crate::series::Polynomial;

/// Numerator of degree `m` and denominator of degree `n` with `q(0) = 1`,
/// matching `c_0..c_{m+n}`.
#[derive(Clone, Debug)]
pub struct Pade {
    pub num: Polynomial<Float>,
    pub den: Polynomial<Float>,
}

impl Pade {
    pub fn eval(&self, x: &Float) -> Float {
        let bits = x.prec();
        Float::with_val(bits, self.num.eval(x) / self.den.eval(x))
    }

    pub fn eval_complex(&self, x: &BigComplex) -> BigComplex {
        horner(&self.num.coeffs, x).div(&horner(&self.den.coeffs, x))
    }
}

fn horner(c: &[Float], x: &BigComplex) -> BigComplex {
    let mut acc = BigComplex::from_real(Float::with_val(x.prec(), c.last().unwrap()));
    for a in c[..c.len() - 1].iter().rev() {
        acc = acc.mul(x);
        acc.re += a;
    }
    acc
}

pub fn pade(coeffs: &[Float], m: usize, n: usize) -> Result<Pade> {
    if coeffs.len() < m + n + 1 {
        return Err(Error::InsufficientOrder { have: coeffs.len().saturating_sub(1), need: m + n });
    }
    let bits = coeffs.iter().map(|c| c.prec()).max().unwrap_or(64);
    let c = |i: i64| -> Float { if i < 0 { Float::new(bits) } else { Float::with_val(bits, &coeffs[i as usize]) } };
    // Σ_{j=1..n} q_j c_{m+i-j} = -c_{m+i}, i = 1..n
    let mut a: Vec<Vec<Float>> = (1..=n).map(|i| (1..=n).map(|j| c(m as i64 + i as i64 - j as i64)).collect()).collect();
    let mut b: Vec<Float> = (1..=n).map(|i| -c((m + i) as i64)).collect();
    let q = solve(&mut a, &mut b)?;
    let mut den = vec![Float::with_val(bits, 1)];
    den.extend(q);
    let num = (0..=m)
        .map(|i| {
            let mut acc = c(i as i64);
            for j in 1..=n.min(i) {
                acc += Float::with_val(bits, &den[j] * &coeffs[i - j]);
            }
            acc
        })
        .collect();
    Ok(Pade { num: Polynomial::new(num), den: Polynomial::new(den) })
}

/// Gaussian elimination with partial pivoting.
fn solve(a: &mut [Vec<Float>], b: &mut [Float]) -> Result<Vec<Float>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].clone().abs().partial_cmp(&a[j][col].clone().abs()).unwrap()).unwrap();
        if a[piv][col].is_zero() {
            return Err(Error::NotInvertible("singular Padé system"));
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let f = Float::with_val(a[row][col].prec(), &a[row][col] / &a[col][col]);
            for k in col..n {
                let t = Float::with_val(f.prec(), &f * &a[col][k]);
                a[row][k] -= t;
            }
            let t = Float::with_val(f.prec(), &f * &b[col]);
            b[row] -= t;
        }
    }
    let mut x = vec![Float::new(b.first().map_or(64, |v| v.prec())); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for k in row + 1..n {
            acc -= Float::with_val(acc.prec(), &a[row][k] * &x[k]);
        }
        x[row] = acc / &a[row][row];
    }
    Ok(x)
}
