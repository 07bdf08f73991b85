//! Pohozaev boundary integrals on the singular profile `M₀|x|^{-(n-2σ)/2}`,
//! the amplitude `M₀`, and the Kazdan–Warner integral.

mod fractional;
mod integer;
mod kazdan;

use serde::Serialize;

use crate::params::ConformalParams;
use crate::scalar::Real;

pub use fractional::{
    bracket_identity_check, bracket_term, feynman_check, m0_fractional, pohozaev_limit_fractional, q0_at_radius, q0_closed,
    q0_quadrature,
};
pub use integer::{
    boundary_functional, gm_coefficient_product, gm_coefficient_recursive, gm_product, gm_recursive, m0_integer,
    pohozaev_limit_integer,
};
pub use kazdan::{kazdan_warner, DerivativeTail};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PohozaevMode {
    Integer,
    Fractional,
}

/// Closed form and oracle for the limit of the Pohozaev boundary terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PohozaevReport<T> {
    pub mode: PohozaevMode,
    pub params: ConformalParams<T>,
    pub k_infinity: T,
    pub m0: T,
    pub closed_value: T,
    pub oracle_value: T,
    pub rel_error: T,
    /// `(n-2σ)/n - 1 = -2σ/n`.
    pub sign_factor: T,
}

impl<T: Real> PohozaevReport<T> {
    pub(crate) fn new(
        mode: PohozaevMode,
        params: ConformalParams<T>,
        k_infinity: T,
        m0: T,
        closed_value: T,
        oracle_value: T,
        sign_factor: T,
    ) -> Self {
        let rel_error = (closed_value - oracle_value).abs() / closed_value.abs().max(T::min_positive_value());
        Self {
            mode,
            params,
            k_infinity,
            m0,
            closed_value,
            oracle_value,
            rel_error,
            sign_factor,
        }
    }
}
