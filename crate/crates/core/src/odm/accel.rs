use rug::Float;

use crate::error::{Error, Result};
use crate::number::BigComplex;

#[derive(Clone, Debug)]
pub struct AitkenOptions {
    pub max_stages: usize,
    /// Relative size below which denominators and corrections count as noise.
    pub floor: Float,
}

impl AitkenOptions {
    pub fn new(floor: Float) -> Self {
        AitkenOptions { max_stages: 6, floor }
    }
}

/// Result of parity-split repeated Aitken acceleration.
#[derive(Clone, Debug)]
pub struct Accelerated {
    pub value: BigComplex,
    /// Distance to the other parity's result (or to the previous stage when
    /// only one parity is usable).
    pub error: Float,
    pub stages_used: usize,
    /// Stages of the subsequence holding the last input, stage 0 first.
    pub stages: Vec<Vec<BigComplex>>,
}

/// Repeated `S_n ↦ (S_n S_{n+2} - S_{n+1}²)/(S_n + S_{n+2} - 2 S_{n+1})` on one
/// sequence. Stops at a vanishing denominator, at a negligible correction, at
/// a correction larger than the previous stage's, or after `max_stages`.
/// Stage 0 is the input.
pub fn aitken_stages(seq: &[BigComplex], opts: &AitkenOptions) -> Vec<Vec<BigComplex>> {
    let mut stages = vec![seq.to_vec()];
    let mut last_correction: Option<Float> = None;
    while stages.len() <= opts.max_stages {
        let cur = stages.last().unwrap();
        if cur.len() < 3 {
            break;
        }
        let mut next = Vec::with_capacity(cur.len() - 2);
        let mut stable = true;
        for w in cur.windows(3) {
            let den = w[0].add(&w[2]).sub(&w[1].add(&w[1]));
            let scale = w[1].abs();
            let limit = Float::with_val(scale.prec(), &scale * &opts.floor);
            if den.abs() <= limit {
                stable = false;
                break;
            }
            let num = w[0].mul(&w[2]).sub(&w[1].mul(&w[1]));
            next.push(num.div(&den));
        }
        if !stable || next.is_empty() {
            break;
        }
        let last_prev = cur.last().unwrap();
        let correction = next.last().unwrap().sub(last_prev).abs();
        let tiny = Float::with_val(correction.prec(), last_prev.abs() * &opts.floor) * 10u32;
        if last_correction.as_ref().is_some_and(|c| correction > *c) {
            break;
        }
        stages.push(next);
        if correction <= tiny {
            break;
        }
        last_correction = Some(correction);
    }
    stages
}

/// Accelerates even- and odd-indexed terms separately; the value comes from
/// the parity that contains the last term.
pub fn aitken_accelerate(seq: &[BigComplex], opts: &AitkenOptions) -> Result<Accelerated> {
    if seq.len() < 3 {
        return Err(Error::InsufficientOrder { have: seq.len(), need: 3 });
    }
    let n = seq.len();
    let same: Vec<BigComplex> = seq.iter().enumerate().filter(|(i, _)| (n - 1 - i) % 2 == 0).map(|(_, v)| v.clone()).collect();
    let other: Vec<BigComplex> = seq.iter().enumerate().filter(|(i, _)| (n - 1 - i) % 2 == 1).map(|(_, v)| v.clone()).collect();
    let main = aitken_stages(&same, opts);
    let value = main.last().unwrap().last().unwrap().clone();
    let alt = if other.len() >= 3 { Some(aitken_stages(&other, opts)) } else { None };
    let error = match &alt {
        Some(st) if st.len() > 1 => value.sub(st.last().unwrap().last().unwrap()).abs(),
        _ => {
            let prev = if main.len() > 1 { main[main.len() - 2].last().unwrap() } else { &same[same.len().saturating_sub(2)] };
            value.sub(prev).abs()
        }
    };
    Ok(Accelerated { value, error, stages_used: main.len() - 1, stages: main })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::Precision;

    fn p() -> Precision {
        Precision::digits(60).unwrap()
    }

    fn real(x: Float) -> BigComplex {
        BigComplex::from_real(x)
    }

    #[test]
    fn constant_sequence_is_fixed() {
        let seq: Vec<_> = (0..7).map(|_| real(p().ratio(7, 3))).collect();
        let r = aitken_accelerate(&seq, &AitkenOptions::new(p().floor())).unwrap();
        assert_eq!(r.value, seq[0]);
        assert_eq!(r.stages_used, 0);
    }

    #[test]
    fn geometric_sequence_limit() {
        let seq: Vec<_> = (0..12).map(|n| real(p().int(1) + Float::with_val(p().bits(), Float::i_exp(1, -n)))).collect();
        let r = aitken_accelerate(&seq, &AitkenOptions::new(p().floor())).unwrap();
        let d = Float::with_val(p().bits(), &r.value.re - 1u32).abs().to_f64();
        assert!(d < 1e-55, "{d}");
    }

    #[test]
    fn alternating_parities_are_split() {
        // even and odd terms approach 1 from opposite sides at different rates
        let seq: Vec<_> = (0..14)
            .map(|n| {
                let t = if n % 2 == 0 { Float::with_val(p().bits(), Float::i_exp(1, -(n as i32))) } else { -Float::with_val(p().bits(), Float::i_exp(3, -(2 * n as i32))) };
                real(p().int(1) + t)
            })
            .collect();
        let r = aitken_accelerate(&seq, &AitkenOptions::new(p().floor())).unwrap();
        assert!(Float::with_val(p().bits(), &r.value.re - 1u32).abs().to_f64() < 1e-40);
    }

    #[test]
    fn short_input_rejected() {
        let seq: Vec<_> = (0..2).map(|_| real(p().int(1))).collect();
        assert!(aitken_accelerate(&seq, &AitkenOptions::new(p().floor())).is_err());
    }
}
