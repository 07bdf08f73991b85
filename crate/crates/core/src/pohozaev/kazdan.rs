//! The Kazdan–Warner integral `∫ (x·∇K) u^{2n/(n-2σ)} dx` for radial data.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inteq::RadialProfile;
use crate::params::ConformalParams;
use crate::scalar::Real;
use crate::sphere::sphere_area;

/// `K'(r) ≈ coefficient·r^{power}` beyond the last radius of the profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivativeTail<T> {
    pub coefficient: T,
    pub power: T,
}

impl<T: Real> DerivativeTail<T> {
    /// `K` constant at infinity.
    pub fn zero() -> Self {
        Self {
            coefficient: T::zero(),
            power: T::zero(),
        }
    }
}

/// `|𝕊ⁿ⁻¹| ∫₀^∞ r K'(r) u(r)^{2n/(n-2σ)} rⁿ⁻¹ dr`.
///
/// The grid part is the trapezoid rule in `ln r` (spectrally accurate for
/// integrands vanishing at both ends of a log grid). Below the first radius
/// `u` and `K'` are frozen at their first values; beyond the last radius `u`
/// follows the tail metadata and `K'` follows `tail`, both integrated in
/// closed form. A non-integrable tail is a [`Error::Divergence`].
pub fn kazdan_warner<T: Real>(
    profile: &RadialProfile<T>,
    k_prime: impl Fn(T) -> T,
    tail: DerivativeTail<T>,
    params: &ConformalParams<T>,
) -> Result<T> {
    let p = params.energy_exponent();
    let n = params.dim();
    let radii = profile.radii();
    let values = profile.values();
    let integrand = |r: T, u: T| r.powf(n + T::one()) * k_prime(r) * u.powf(p);
    let g: Vec<T> = radii.iter().zip(values).map(|(&r, &u)| integrand(r, u)).collect();
    if let Some(i) = g.iter().position(|v| !v.is_finite()) {
        return Err(Error::domain(format!("K' or u is not finite at r = {}", radii[i])));
    }
    let half = T::lit(0.5);
    let mut body = T::zero();
    for i in 0..radii.len() - 1 {
        let h = (radii[i + 1] / radii[i]).ln();
        body = body + half * h * (g[i] + g[i + 1]);
    }
    let r0 = radii[0];
    let head = values[0].powf(p) * k_prime(r0) * r0.powf(n + T::one()) / (n + T::one());
    let tail_value = if tail.coefficient == T::zero() || profile.tail_amplitude() == T::zero() {
        T::zero()
    } else {
        // coefficient·A^p ∫_{R}^∞ r^{n+q-ep} dr
        let k = n + tail.power - profile.tail_exponent() * p;
        if k >= -T::one() {
            return Err(Error::Divergence(format!(
                "Kazdan-Warner integrand decays like r^{k}; the tail exponent {} is too slow",
                profile.tail_exponent()
            )));
        }
        let r_max = radii[radii.len() - 1];
        tail.coefficient * profile.tail_amplitude().powf(p) * r_max.powf(k + T::one()) / -(k + T::one())
    };
    Ok(sphere_area::<T>(params.n())? * (head + body + tail_value))
}
