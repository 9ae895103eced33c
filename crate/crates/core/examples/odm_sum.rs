//! Order-dependent-mapping sums at positive coupling: convergence with the
//! order for each mapping, then Aitken acceleration of mapping (a).

use cubic_resum::odm::{MappingSpec, MappingTag, OdmEngine, RhoMode, RhoSchedule};
use cubic_resum::perturbation::{weak_coefficients, HamiltonianConvention};
use cubic_resum::{BigComplex, Precision};

fn main() {
    let k_max = 55;
    let prec = Precision::for_order(k_max);
    let series = weak_coefficients(0, k_max + 1, HamiltonianConvention::PaperMain);
    let g = BigComplex::from_real(prec.ratio(1, 2));
    for mapping in [MappingSpec::a(), MappingSpec::b(), MappingSpec::c()] {
        let engine = OdmEngine::new(&series, &mapping, k_max, prec).unwrap();
        let mode = if mapping.tag == MappingTag::C { RhoMode::RootsOfDerivative } else { RhoMode::Fitted };
        let schedule = RhoSchedule::build(engine.polys(), &mapping, mode, 20..=k_max, prec).unwrap();
        println!("mapping ({}) at g = 1/2", mapping.tag);
        for k in [20, 30, 40, 50, 55] {
            let a = engine.sum(&schedule, k, &g).unwrap();
            println!("  K = {k:>2}  E = {}", a.value.re.to_string_radix(10, Some(30)));
        }
        if mapping.tag == MappingTag::A {
            let (acc, _) = engine.sum_accelerated(&schedule, 26, k_max, &g).unwrap();
            println!("  Aitken 26..{k_max}  E = {}  (+- {:.1e})", acc.value.re.to_string_radix(10, Some(30)), acc.error.to_f64());
        }
    }
}
