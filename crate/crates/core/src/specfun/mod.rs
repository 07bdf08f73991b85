//! Gamma-family functions and the Gauss hypergeometric function.

mod gamma;
mod hyper;

pub use gamma::{beta, gamma, lgamma, rgamma, sin_pi};
pub use hyper::{
    hyp2f1, hyp2f1_deriv, hyp2f1_euler_integral, hyp2f1_gauss_at_one, hyp2f1_ode_operator,
    hyp2f1_ode_residual, hyp2f1_second_deriv, hyp2f1_series, Hyp2F1Args,
};
