//! Continued fraction of the strong-coupling series with a square-root tail,
//! evaluated across the merging point.

use cubic_resum::contfrac::{calibrate_gamma, cf_energy, cf_eval, cf_from_series};
use cubic_resum::perturbation::{weak_coefficients, HamiltonianConvention};
use cubic_resum::strong::{analyze_level_pair, MAX_STRONG_ORDER};
use cubic_resum::{BigComplex, Precision};

fn main() {
    let k = 150;
    let prec = Precision::for_order(k);
    let ground = weak_coefficients(0, k + 2, HamiltonianConvention::PaperMain);
    let excited = weak_coefficients(1, k + 2, HamiltonianConvention::PaperMain);
    let pair = analyze_level_pair(&ground, &excited, k, MAX_STRONG_ORDER, prec).unwrap();
    let cf = cf_from_series(&pair.ground.coeffs).unwrap();
    for p in 1..=cf.depth() {
        let gamma = calibrate_gamma(&cf, p).map(|t| format!("{:.7}", t.gamma.to_f64())).unwrap_or_default();
        println!("a_{p:<2} = {:.16}  gamma_{p} = {gamma}", cf.a(p).to_f64());
    }
    let p_max = 20;
    let tail = calibrate_gamma(&cf, p_max).unwrap().tail();
    for chi in [-2.0, -1.5, -1.0, 0.0, 1.0] {
        let v = cf_eval(&cf, &BigComplex::from_real(prec.f64(chi)), p_max, &tail).unwrap();
        println!("E(chi = {chi:+.1}) = {:.16} {:+.16}i", v.re.to_f64(), v.im.to_f64());
    }
    for g in [-1, 1, 5] {
        let v = cf_energy(&cf, &BigComplex::from_real(prec.int(g)), p_max, &tail).unwrap();
        println!("E(g = {g:+}) = {:.18} {:+.18}i", v.re.to_f64(), v.im.to_f64());
    }
}
