//! Numerical verification of closed forms attached to conformally invariant
//! equations `(-Δ)^σ u = K u^τ`: special functions, powers of the Laplacian
//! on radial powers, the weighted Poisson extension, Pohozaev integrals and a
//! cylindrical integral-equation engine.
//!
//! Numeric code is generic over [`Real`] (`f32`, `f64`); the aliases below fix
//! `f64`.

// `!(x > 0)` rejects NaN along with the other invalid inputs
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// reference values are quoted to the digits they were computed with
#![allow(clippy::excessive_precision)]

pub mod error;
pub mod extension;
pub mod fraclap;
pub mod inteq;
pub mod params;
pub mod pohozaev;
pub mod quad;
pub mod scalar;
pub mod specfun;
pub mod sphere;
pub mod verify;

pub use error::{Error, Result};
pub use params::ConformalParams;
pub use quad::{integrate, integrate_nodes, integrate_power_weight, integrate_whole_line, Bound, Integral, Node, QuadratureSpec, Scheme};
pub use scalar::{ExactField, Real};
pub use sphere::sphere_area;

pub type Params = ConformalParams<f64>;
pub type Quad = QuadratureSpec<f64>;
pub type Hyp = specfun::Hyp2F1Args<f64>;
pub type Exact = num_rational::BigRational;
