//! Complex energies on the negative coupling axis, approached from above.

use cubic_resum::odm::{MappingSpec, OdmEngine, RhoMode, RhoSchedule};
use cubic_resum::perturbation::{weak_coefficients, HamiltonianConvention};
use cubic_resum::{BigComplex, Precision};

fn main() {
    let k = 80;
    let prec = Precision::for_order(k);
    let mapping = MappingSpec::c();
    let series = weak_coefficients(0, k + 1, HamiltonianConvention::PaperMain);
    let engine = OdmEngine::new(&series, &mapping, k, prec).unwrap();
    let schedule = RhoSchedule::build(engine.polys(), &mapping, RhoMode::RootsOfDerivative, k - 2..=k, prec).unwrap();
    for (num, den) in [(-1, 10), (-1, 2), (-1, 1), (-5, 1), (-108, 5)] {
        let g = BigComplex::from_real(prec.ratio(num, den));
        let now = engine.sum(&schedule, k, &g).unwrap().value;
        let before = engine.sum(&schedule, k - 2, &g).unwrap().value;
        let change = now.sub(&before).abs().to_f64();
        println!("g = {:>6.2}  E = {:.20} + {:.20} i   |E_K - E_(K-2)| = {change:.1e}", num as f64 / den as f64, now.re.to_f64(), now.im.to_f64());
    }
}
