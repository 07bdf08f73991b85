//! Boundary integrals `∫_{∂B_r} g_m(u, u)` for the polyharmonic case.
//!
//! For `u = |x|^{-s}` the integral is `G_m(s)|𝕊ⁿ⁻¹| r^{n-2m-2s}` with
//!
//! `G_m(s) = 2(m-1)(n-2m-2s)F(s,m-1) + s²(s+2-n)² G_{m-2}(s+2)`,
//!
//! and at `s = (n-2m)/2` the first term drops, leaving
//! `g_m = ((n-2m)/2)²((n+2m-4)/2)² g_{m-2}`.

use crate::error::{Error, Result};
use crate::fraclap::poly_product;
use crate::params::ConformalParams;
use crate::scalar::{ExactField, Real};
use crate::sphere::sphere_area;

use super::{PohozaevMode, PohozaevReport};

fn check(n: u32, m: u32) -> Result<()> {
    if m == 0 || 2 * m >= n {
        return Err(Error::domain(format!("boundary integral needs 1 <= m and 2m < n, got n = {n}, m = {m}")));
    }
    Ok(())
}

fn half_square<F: ExactField>(k: i64) -> F {
    let h = F::from_ratio(k, 2);
    h.clone() * h
}

/// `∏_{i=0}^{m-1} ((n-2m+4i)/2)²`, the coefficient of `|𝕊ⁿ⁻¹|M₀²`.
pub fn gm_coefficient_product<F: ExactField>(n: u32, m: u32) -> Result<F> {
    check(n, m)?;
    let (n, m) = (n as i64, m as i64);
    Ok((0..m).fold(F::one(), |acc, i| acc * half_square(n - 2 * m + 4 * i)))
}

/// The same coefficient from the two-step recursion, bottoming out at
/// `g₁ = ((n-2)/2)²` or `g₂ = (n/2)²((n-4)/2)²`.
pub fn gm_coefficient_recursive<F: ExactField>(n: u32, m: u32) -> Result<F> {
    check(n, m)?;
    let n = n as i64;
    let mut k = m as i64;
    let mut acc = F::one();
    while k > 2 {
        acc = acc * half_square::<F>(n - 2 * k) * half_square(n + 2 * (k - 2));
        k -= 2;
    }
    let base = if k == 1 {
        half_square(n - 2)
    } else {
        half_square::<F>(n) * half_square(n - 4)
    };
    Ok(acc * base)
}

/// `G_m(s)` for a general exponent, with `G₀ = 1`,
/// `G₁ = s(n-2-s)` and `G₂ = f((n-6)s - s² + 2n - 8)`, `f = s(n-2-s)`,
/// each obtained by evaluating the boundary terms on `|x|^{-s}`.
pub fn boundary_functional<F: ExactField>(n: u32, m: u32, s: &F) -> F {
    let ni = n as i64;
    match m {
        0 => F::one(),
        1 => s.clone() * (F::from_int(ni - 2) - s.clone()),
        2 => {
            let f = s.clone() * (F::from_int(ni - 2) - s.clone());
            let bracket = F::from_int(ni - 6) * s.clone() - s.clone() * s.clone() + F::from_int(2 * ni - 8);
            f * bracket
        }
        _ => {
            let mi = m as i64;
            let first = F::from_int(2 * (mi - 1))
                * (F::from_int(ni - 2 * mi) - F::from_int(2) * s.clone())
                * poly_product(ni, m - 1, s);
            let q = s.clone() * (s.clone() + F::from_int(2 - ni));
            let shifted = s.clone() + F::from_int(2);
            first + q.clone() * q * boundary_functional(n, m - 2, &shifted)
        }
    }
}

fn to_real<T: Real, F: ExactField>(x: &F) -> T {
    T::lit(x.to_f64_lossy())
}

/// `|𝕊ⁿ⁻¹| M₀² ∏((n-2m+4i)/2)²`.
pub fn gm_product<T: Real>(params: &ConformalParams<T>, m0: T) -> Result<T> {
    let m = params.require_integer()?;
    let c: crate::Exact = gm_coefficient_product(params.n(), m)?;
    Ok(sphere_area::<T>(params.n())? * m0 * m0 * to_real::<T, _>(&c))
}

/// As [`gm_product`], with the coefficient from the exact recursion.
pub fn gm_recursive<T: Real>(params: &ConformalParams<T>, m0: T) -> Result<T> {
    let m = params.require_integer()?;
    let c: crate::Exact = gm_coefficient_recursive(params.n(), m)?;
    Ok(sphere_area::<T>(params.n())? * m0 * m0 * to_real::<T, _>(&c))
}

fn require_positive<T: Real>(k_infinity: T) -> Result<()> {
    if k_infinity > T::zero() && k_infinity.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("K(infinity) must be positive, got {k_infinity}")))
    }
}

/// `M₀ = (∏((n-2m+4i)/2)² / K∞)^{(n-2m)/(4m)}`.
pub fn m0_integer<T: Real>(params: &ConformalParams<T>, k_infinity: T) -> Result<T> {
    let m = params.require_integer()?;
    require_positive(k_infinity)?;
    let c: crate::Exact = gm_coefficient_product(params.n(), m)?;
    let e = params.riesz_exponent() / (T::lit(4.0) * params.sigma());
    Ok((to_real::<T, _>(&c) / k_infinity).powf(e))
}

/// Limit of the integer Pohozaev boundary terms on `u₀ = M₀|x|^{-(n-2m)/2}`.
///
/// Closed value `M₀²|𝕊ⁿ⁻¹|∏(...)²((n-2m)/n - 1)`; oracle value
/// `(n-2m)/n M₀^{2n/(n-2m)}|𝕊ⁿ⁻¹|K∞` minus the recursive `g_m`.
pub fn pohozaev_limit_integer<T: Real>(params: &ConformalParams<T>, k_infinity: T) -> Result<PohozaevReport<T>> {
    let m0 = m0_integer(params, k_infinity)?;
    let area = sphere_area::<T>(params.n())?;
    let ratio = params.riesz_exponent() / params.dim();
    let sign_factor = ratio - T::one();
    let closed = gm_product(params, m0)? * sign_factor;
    let first = ratio * m0.powf(params.energy_exponent()) * area * k_infinity;
    let oracle = first - gm_recursive(params, m0)?;
    Ok(PohozaevReport::new(PohozaevMode::Integer, *params, k_infinity, m0, closed, oracle, sign_factor))
}
