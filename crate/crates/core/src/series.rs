//! Truncated power series and dense polynomials over any [`Scalar`].
//!
//! A series of order `K` stores `c_0..=c_K`. Binary operations return a
//! series whose order is the minimum of the operand orders; nothing claims
//! orders that were not earned.

use rug::{Float, Rational};

use crate::error::{Error, Result};
use crate::number::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries<T> {
    coeffs: Vec<T>,
}

impl<T: Scalar> PowerSeries<T> {
    /// Builds a series from `c_0..=c_K`; the truncation order is `len - 1`.
    ///
    /// Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least c_0");
        PowerSeries { coeffs }
    }

    /// The series `x` (identity) of the given order, using `template` for precision.
    pub fn variable(template: &T, order: usize) -> Self {
        let mut c = vec![template.zero_like(); order + 1];
        if order >= 1 {
            c[1] = template.one_like();
        }
        PowerSeries { coeffs: c }
    }

    pub fn constant(value: T, order: usize) -> Self {
        let mut c = vec![value.zero_like(); order + 1];
        c[0] = value;
        PowerSeries { coeffs: c }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &T {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        PowerSeries { coeffs: self.coeffs[..=n].to_vec() }
    }

    /// Index of the first nonzero coefficient, `None` for the zero series.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        PowerSeries { coeffs: (0..=n).map(|i| self.coeffs[i].add(&o.coeffs[i])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        PowerSeries { coeffs: (0..=n).map(|i| self.coeffs[i].sub(&o.coeffs[i])).collect() }
    }

    pub fn neg(&self) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(Scalar::neg).collect() }
    }

    pub fn scale(&self, s: &T) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect() }
    }

    /// Cauchy product truncated at `min(K_a, K_b)`.
    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        self.mul_to(o, n)
    }

    fn mul_to(&self, o: &Self, n: usize) -> Self {
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[0].zero_like();
            for i in 0..=k {
                let (a, b) = (&self.coeffs[i], &o.coeffs[k - i]);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            out.push(acc);
        }
        PowerSeries { coeffs: out }
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotInvertible("zero constant term"));
        }
        let n = self.order();
        let inv0 = c0.one_like().div(c0);
        let mut out = vec![inv0.clone()];
        for k in 1..=n {
            let mut acc = c0.zero_like();
            for i in 1..=k {
                acc = acc.add(&self.coeffs[i].mul(&out[k - i]));
            }
            out.push(acc.mul(&inv0).neg());
        }
        Ok(PowerSeries { coeffs: out })
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return PowerSeries { coeffs: vec![self.coeffs[0].zero_like()] };
        }
        let t = &self.coeffs[0];
        PowerSeries {
            coeffs: (1..=self.order()).map(|i| self.coeffs[i].mul(&t.from_int_like(i as i64))).collect(),
        }
    }

    /// Horner evaluation of the truncated sum.
    pub fn eval(&self, x: &T) -> T {
        let mut acc = self.coeffs[self.order()].clone();
        for c in self.coeffs[..self.order()].iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// `self ∘ inner`. The inner series must vanish at the origin.
    ///
    /// If `inner` is known to order `m` and starts at `x^v`, the composition
    /// is determined through order `m + v - 1`; the result carries the
    /// smaller of that and the outer order.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let v = inner.valuation().unwrap_or(usize::MAX);
        let n = if v == usize::MAX { self.order() } else { self.order().min(inner.order() + v - 1) };
        let mut inner_ext = inner.coeffs.clone();
        inner_ext.resize(n + 1, inner.coeffs[0].zero_like());
        let inner_ext = PowerSeries { coeffs: inner_ext };
        let mut acc = PowerSeries::constant(self.coeffs[n].clone(), n);
        for c in self.coeffs[..n].iter().rev() {
            acc = acc.mul_to(&inner_ext, n);
            acc.coeffs[0] = acc.coeffs[0].add(c);
        }
        Ok(acc)
    }

    /// Compositional inverse of a series with `f(0) = 0`, `f'(0) != 0`.
    pub fn reverse(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant);
        }
        let n = self.order();
        if n == 0 {
            return Ok(self.clone());
        }
        let f1 = &self.coeffs[1];
        if f1.is_zero() {
            return Err(Error::NotInvertible("vanishing linear term"));
        }
        // Coefficient-by-coefficient: [x^k] f(g) = 0 for k >= 2 fixes g_k,
        // because g_k enters [x^k] f(g) only through f_1 g_k.
        let zero = f1.zero_like();
        let mut g = vec![zero.clone(); n + 1];
        g[1] = f1.one_like().div(f1);
        // powers[j] = g^j truncated, rebuilt incrementally.
        for k in 2..=n {
            let gs = PowerSeries { coeffs: g[..=k].to_vec() };
            let mut pow = gs.clone();
            let mut target = zero.clone();
            for j in 2..=k {
                pow = pow.mul_to(&gs, k);
                target = target.add(&self.coeffs[j].mul(&pow.coeffs[k]));
            }
            g[k] = target.neg().div(f1);
        }
        Ok(PowerSeries { coeffs: g })
    }

    /// `f^e` for a series with `f(0) = 1`, via `f g' = e f' g`.
    pub fn pow_unit(&self, e: &T) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !c0.sub(&c0.one_like()).is_zero() {
            return Err(Error::Domain("pow_unit needs f(0) = 1".into()));
        }
        let n = self.order();
        let mut g = vec![c0.one_like()];
        for k in 1..=n {
            // k g_k = Σ_{j=1..k} (e j - (k - j)) f_j g_{k-j}
            let mut acc = c0.zero_like();
            for j in 1..=k {
                if self.coeffs[j].is_zero() {
                    continue;
                }
                let w = e.mul(&c0.from_int_like(j as i64)).sub(&c0.from_int_like((k - j) as i64));
                acc = acc.add(&w.mul(&self.coeffs[j]).mul(&g[k - j]));
            }
            g.push(acc.div(&c0.from_int_like(k as i64)));
        }
        Ok(PowerSeries { coeffs: g })
    }

    /// Shifts the expansion point: coefficients of `p(a + t)` in `t`
    /// (exact for a polynomial, i.e. when the series is read as one).
    pub fn taylor_shift(&self, a: &T) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = c[j + 1].mul(a);
                c[j] = c[j].add(&t);
            }
        }
        PowerSeries { coeffs: c }
    }
}

/// `(1 - λ)^e` to order `order`.
pub fn binomial_pow<T: Scalar>(exponent: &T, order: usize) -> PowerSeries<T> {
    let mut c = Vec::with_capacity(order + 1);
    c.push(exponent.one_like());
    for k in 1..=order {
        let num = exponent.from_int_like(k as i64 - 1).sub(exponent);
        let next = c[k - 1].mul(&num).div(&exponent.from_int_like(k as i64));
        c.push(next);
    }
    PowerSeries { coeffs: c }
}

/// Dense polynomial `Σ c_i x^i`, ascending coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<T> {
    pub coeffs: Vec<T>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn new(coeffs: Vec<T>) -> Self {
        Polynomial { coeffs }
    }

    /// Degree ignoring trailing zeros; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, x: &T) -> T {
        let mut it = self.coeffs.iter().rev();
        let mut acc = it.next().expect("empty polynomial").clone();
        for c in it {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Polynomial { coeffs: vec![self.coeffs[0].zero_like()] };
        }
        Polynomial {
            coeffs: (1..self.coeffs.len()).map(|i| self.coeffs[i].mul(&self.coeffs[i].from_int_like(i as i64))).collect(),
        }
    }
}

impl Polynomial<Rational> {
    pub fn to_float(&self, bits: u32) -> Polynomial<Float> {
        Polynomial { coeffs: self.coeffs.iter().map(|c| Float::with_val(bits, c)).collect() }
    }
}

/// Coefficients `P_0(ρ)..P_K(ρ)` of an order-dependent mapping expansion,
/// each a dense polynomial in `ρ` with `deg P_L = L`.
#[derive(Clone, Debug)]
pub struct RhoPolynomialSeries {
    polys: Vec<Polynomial<Float>>,
}

impl RhoPolynomialSeries {
    /// Validates the degree invariant.
    pub fn new(polys: Vec<Polynomial<Float>>) -> Result<Self> {
        for (l, p) in polys.iter().enumerate() {
            if p.coeffs.len() != l + 1 || p.coeffs[l].is_zero() {
                return Err(Error::Domain(format!("P_{l} must have degree exactly {l}")));
            }
        }
        if polys.is_empty() {
            return Err(Error::Domain("empty polynomial series".into()));
        }
        Ok(RhoPolynomialSeries { polys })
    }

    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn poly(&self, l: usize) -> &Polynomial<Float> {
        &self.polys[l]
    }

    pub fn polys(&self) -> &[Polynomial<Float>] {
        &self.polys
    }

    /// `P_0(ρ)..P_n(ρ)` for `n = min(order, upto)`.
    pub fn eval_at(&self, rho: &Float, upto: usize) -> Vec<Float> {
        self.polys[..=upto.min(self.order())].iter().map(|p| p.eval(rho)).collect()
    }

    pub fn truncate(&self, order: usize) -> Self {
        RhoPolynomialSeries { polys: self.polys[..=order.min(self.order())].to_vec() }
    }
}
