//! Saddle-point constants of the three mappings.

use cubic_resum::odm::{saddle_constants, MappingSpec};
use cubic_resum::Precision;

fn main() {
    let prec = Precision::digits(40).unwrap();
    for m in [MappingSpec::a(), MappingSpec::b(), MappingSpec::c()] {
        let c = saddle_constants(&m, prec);
        println!(
            "({}) mu_c = {:.12}  lambda_c = {:.12}  C2 = {:.8}  R = {:.8}  residual = {:.1e}",
            m.tag,
            c.mu_c.to_f64(),
            c.lambda_c.to_f64(),
            c.c2.to_f64(),
            c.r.to_f64(),
            c.residual.to_f64()
        );
    }
}
