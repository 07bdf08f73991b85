//! Radial and cylindrical integral-equation engine.

mod cyl;
mod kernel;
mod radial;

pub use cyl::{
    constant_fixed_point, cyl_apply, solve_fixed_point, ConvergenceLog, CylOperator, CylProfile, FixedPointFailure,
    FixedPointOptions, FixedPointSolution, UpdateRule,
};
pub use kernel::{kernel_j, kernel_j_log_coth, kernel_mass, kernel_mass_log_coth, kernel_moment};
pub use radial::{bootstrap_exponent, kelvin_transform, moving_sphere_deficit, ray_monotonicity_w, KelvinResult, RadialProfile, Source};
