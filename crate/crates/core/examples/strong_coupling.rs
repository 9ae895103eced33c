//! Strong-coupling expansion of the two lowest levels and the point where
//! they merge on the negative `χ` axis.

use cubic_resum::perturbation::{weak_coefficients, HamiltonianConvention};
use cubic_resum::strong::analyze_level_pair;
use cubic_resum::Precision;

fn main() {
    let k = 100;
    let prec = Precision::for_order(k);
    let ground = weak_coefficients(0, k + 2, HamiltonianConvention::PaperMain);
    let excited = weak_coefficients(1, k + 2, HamiltonianConvention::PaperMain);
    let pair = analyze_level_pair(&ground, &excited, k, 12, prec).unwrap();
    println!("ground-state strong-coupling coefficients (K = {k})");
    for (n, (c, u)) in pair.ground.coeffs.iter().zip(&pair.ground.uncertainty).enumerate() {
        println!("  E_{n:<2} = {:+.22}  +- {:.1e}", c.to_f64(), u.to_f64());
    }
    let m = &pair.merge;
    println!("chi_c = {}  +- {:.1e}", m.chi_c.to_string_radix(10, Some(14)), m.chi_c_uncertainty.to_f64());
    println!("E(chi_c) = {}  +- {:.1e}", m.energy_at_chi_c.to_string_radix(10, Some(14)), m.energy_uncertainty.to_f64());
    println!("Delta01'(chi_c) = {:.6}  Pade [{}/{}]", m.slope.to_f64(), m.pade_orders.0, m.pade_orders.1);
}
