//! Strong-coupling expansion in `χ = g^{-4/5}`, its relation to `E(g)`, and
//! the merging of the two lowest levels.

mod extract;
mod merge;
mod scaling;

pub use extract::{chi_stride, extract_strong_coeffs, strong_coeffs_at, strong_epsilons, strong_value_at, StrongEstimate, StrongSeries, MAX_STRONG_ORDER};
pub use merge::{analyze_level_pair, delta_mapping, locate_merge, merge_analysis, reconstruct_excited_from_symmetric, reconstruct_ground_from_symmetric, symmetric_schedule, symmetric_strong_series, symmetric_weak_series, LevelPairAnalysis, MergePair, SYMMETRIC_RHO_SCALE};
pub use scaling::{chi_from_g, energy_from_strong, strong_limit_negative_axis, strong_series_at, strong_series_uncertainty, STRONG_RADIUS};
