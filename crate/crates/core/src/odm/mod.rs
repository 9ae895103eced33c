//! Order-dependent conformal mapping (ODM) summation.
//!
//! The coupling is mapped as `g = ρ ζ(λ)` and the summed function, times a
//! prefactor `(1-λ)^{αβ}`, is re-expanded in `λ`. The coefficients are
//! polynomials `P_L(ρ)`; at order `K` the scale `ρ_K` is re-chosen and
//! `Σ_{L≤K} P_L(ρ_K) λ^L` is the approximant.

mod accel;
mod invert;
mod mapping;
mod polys;
mod rho;
mod saddle;
mod sum;

pub use accel::{aitken_accelerate, aitken_stages, Accelerated, AitkenOptions};
pub use invert::{invert_mapping, Inversion};
pub use mapping::{MappingSpec, MappingTag, Target};
pub use polys::{build_rho_polynomials, rho_polynomials_from_target, target_coefficients};
pub use rho::{fitted_rho, select_rho, RhoChoice, RhoMode, RhoSchedule};
pub use saddle::{error_model, saddle_constants, ConvergenceModel, ErrorPrediction};
pub use sum::{odm_sum, OdmApproximant, OdmEngine, OrderData};
