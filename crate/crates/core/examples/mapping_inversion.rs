//! Inverting `g = ρ ζ(λ)` on the principal sheet for complex couplings.

use cubic_resum::odm::{invert_mapping, MappingSpec};
use cubic_resum::{BigComplex, Precision};

fn main() {
    let prec = Precision::digits(50).unwrap();
    let rho = prec.ratio(1, 4);
    for mapping in [MappingSpec::a(), MappingSpec::b(), MappingSpec::c()] {
        println!("mapping ({})", mapping.tag);
        for (r, theta) in [(0.5, 0.0), (5.0, 1.0), (20.0, 3.0), (1.0, -2.5)] {
            let g = BigComplex::from_polar(&prec.f64(r), &prec.f64(theta));
            let inv = invert_mapping(&g, &rho, &mapping, prec).unwrap();
            let back = mapping.zeta(&inv.lambda).scale(&rho);
            let (lr, li) = inv.lambda.to_f64_pair();
            println!("  g = {r} e^({theta} i)  lambda = {lr:+.12} {li:+.12}i  residual = {:.1e}", back.sub(&g).abs().to_f64());
        }
    }
}
