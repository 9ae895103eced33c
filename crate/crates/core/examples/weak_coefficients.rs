//! Exact perturbative coefficients of the three lowest levels and their
//! large-order behaviour.

use cubic_resum::perturbation::{large_order_ratio, weak_coefficients, HamiltonianConvention};
use cubic_resum::Precision;

fn main() {
    let order = 60;
    let prec = Precision::digits(40).unwrap();
    for level in 0..3 {
        let s = weak_coefficients(level, order, HamiltonianConvention::PaperMain);
        println!("level {level}");
        for l in 0..=6 {
            println!("  E_{l} = {}", s.coeffs[l]);
        }
        let ratio = large_order_ratio(&s, order, prec).unwrap();
        println!("  signs alternate through L = {}: {}", order, s.sign_violation().is_none());
        println!("  E_{order} / asymptotic form = {:.6}", ratio.to_f64());
    }
}
