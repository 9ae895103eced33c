//! Continued fraction of the weak-coupling series: positivity, linear growth
//! of the coefficients, and convergence at g = 1.

use cubic_resum::contfrac::{cf_eval, weak_cf, Tail};
use cubic_resum::perturbation::{weak_coefficients, HamiltonianConvention};
use cubic_resum::{BigComplex, Precision};

fn main() {
    let order = 120;
    let prec = Precision::for_order(order);
    let series = weak_coefficients(0, order, HamiltonianConvention::PaperMain);
    let cf = weak_cf(&series, prec).unwrap();
    for p in [1, 2, 10, 40, 80, 120] {
        let fit = (10.0 * p as f64 + 3.0 * if p % 2 == 0 { 1.0 } else { -1.0 }) / 96.0;
        println!("kappa_{p:<3} = {:.6}   (10p + 3(-1)^p)/96 = {fit:.6}", cf.a(p).to_f64());
    }
    let one = BigComplex::from_real(prec.int(1));
    let best = cf_eval(&cf, &one, order, &Tail::Unit).unwrap().re;
    for p in [20, 40, 60, 80, 100] {
        let v = cf_eval(&cf, &one, p, &Tail::Unit).unwrap().re;
        println!("E(1) with {p:>3} levels: {}  change vs {order}: {:.1e}", v.to_string_radix(10, Some(25)), (v.clone() - &best).abs().to_f64());
    }
}
