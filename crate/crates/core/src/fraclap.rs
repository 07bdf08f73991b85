//! Powers of `-Δ` acting on radial powers `|x|^{-s}`.
//!
//! `(-Δ)^m |x|^{-s} = F(s,m)|x|^{-s-2m}` with the product
//! `F(s,m) = ∏_{i=1}^m (s+2i-2)(n-2i-s)`, and for real `σ`
//! `(-Δ)^σ |x|^{-s} = λ(s)|x|^{-s-2σ}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::inteq::kernel_moment;
use crate::params::ConformalParams;
use crate::quad::QuadratureSpec;
use crate::scalar::{ExactField, Real};
use crate::specfun::{gamma, rgamma};

/// The profile `amplitude·|x|^{-s}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerProfile<T> {
    s: T,
    amplitude: T,
}

impl<T: Real> PowerProfile<T> {
    pub fn new(params: &ConformalParams<T>, s: T, amplitude: T) -> Result<Self> {
        if !(s > T::zero() && s < params.dim()) {
            return Err(Error::domain(format!("power exponent s = {s} must lie in (0, n)")));
        }
        if !(amplitude > T::zero() && amplitude.is_finite()) {
            return Err(Error::domain(format!("amplitude must be positive, got {amplitude}")));
        }
        Ok(Self { s, amplitude })
    }

    /// `M₀|x|^{-(n-2σ)/2}`, the singular profile of the critical equation.
    pub fn singular(params: &ConformalParams<T>, m0: T) -> Result<Self> {
        Self::new(params, params.slow_decay(), m0)
    }

    pub fn s(&self) -> T {
        self.s
    }

    pub fn amplitude(&self) -> T {
        self.amplitude
    }

    pub fn value(&self, r: T) -> T {
        self.amplitude * r.powf(-self.s)
    }

    /// `(-Δ)^σ` of the profile as a new power, `amplitude·λ(s)·|x|^{-s-2σ}`.
    pub fn frac_laplacian(&self, params: &ConformalParams<T>) -> Result<(T, T)> {
        let lambda = frac_power_constant(params, self.s)?;
        Ok((self.amplitude * lambda, self.s + params.sigma() + params.sigma()))
    }
}

/// `F(s, m) = ∏_{i=1}^m (s+2i-2)(n-2i-s)` in any field; `F(s, 0) = 1`.
pub fn poly_product<F: ExactField>(n: i64, m: u32, s: &F) -> F {
    let mut acc = F::one();
    for i in 1..=m as i64 {
        let left = s.clone() + F::from_int(2 * i - 2);
        let right = F::from_int(n - 2 * i) - s.clone();
        acc = acc * left * right;
    }
    acc
}

fn require_positive_s<T: Real>(s: T) -> Result<()> {
    if s > T::zero() && s.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("power exponent s = {s} must be positive")))
    }
}

/// `F(s, m)` for the integer order `m` of `params`.
pub fn poly_power_constant<T: Real + ExactField>(params: &ConformalParams<T>, s: T) -> Result<T> {
    let m = params.require_integer()?;
    require_positive_s(s)?;
    Ok(poly_product(params.n() as i64, m, &s))
}

/// `-(s+2m-2)F(s, m-1)`, the coefficient of `|x|^{-(s+2m-1)}` in the outward
/// normal derivative of `(-Δ)^{m-1}|x|^{-s}` on a sphere.
pub fn neumann_poly_coefficient<T: Real + ExactField>(params: &ConformalParams<T>, s: T) -> Result<T> {
    let m = params.require_integer()?;
    require_positive_s(s)?;
    let shift = T::int(2 * m as i64 - 2);
    Ok(-(s + shift) * poly_product(params.n() as i64, m - 1, &s))
}

/// `λ(s) = 4^σ Γ((s+2σ)/2)Γ((n-s)/2) / (Γ(s/2)Γ((n-2σ-s)/2))` for `0 < s ≤ n-2σ`.
///
/// At `s = n-2σ` the Riesz power is `σ`-harmonic and `λ = 0`.
pub fn frac_power_constant<T: Real>(params: &ConformalParams<T>, s: T) -> Result<T> {
    let sigma = params.sigma();
    let e = params.riesz_exponent();
    if !(s > T::zero() && s <= e) {
        return Err(Error::domain(format!("power exponent s = {s} must lie in (0, n - 2sigma] = (0, {e}]")));
    }
    let two = T::lit(2.0);
    let n = params.dim();
    let num = gamma((s + sigma + sigma) / two)? * gamma((n - s) / two)?;
    Ok(T::lit(4.0).powf(sigma) * num * rgamma(s / two) * rgamma((e - s) / two))
}

/// `C₂ = λ((n-2σ)/2) = 4^σ Γ²((n+2σ)/4)/Γ²((n-2σ)/4)`.
pub fn c2<T: Real>(params: &ConformalParams<T>) -> Result<T> {
    frac_power_constant(params, params.slow_decay())
}

/// `Γ((n-2σ)/2) / (4^σ π^{n/2} Γ(σ))`, the constant of the Riesz potential
/// `(-Δ)^{-σ} f = c ∫ |x-y|^{-(n-2σ)} f(y) dy`.
pub fn riesz_constant<T: Real>(params: &ConformalParams<T>) -> Result<T> {
    let sigma = params.sigma();
    let half_n = params.dim() / T::lit(2.0);
    Ok(gamma(params.slow_decay())? / (T::lit(4.0).powf(sigma) * T::PI().powf(half_n) * gamma(sigma)?))
}

/// `λ(s)` from the Riesz potential of `|y|^{-s-2σ}`, independently of the
/// Gamma-ratio formula: in cylindrical variables the potential at `|x| = 1`
/// is `∫ e^{((n-2σ)/2 - s)t} J(t) dt`, so `λ(s) = 1/(c · that)`.
/// Needs `0 < s < n-2σ`.
pub fn frac_power_constant_riesz<T: Real>(params: &ConformalParams<T>, s: T, spec: &QuadratureSpec<T>) -> Result<T> {
    let e = params.riesz_exponent();
    if !(s > T::zero() && s < e) {
        return Err(Error::domain(format!("power exponent s = {s} must lie in (0, n - 2sigma) = (0, {e})")));
    }
    let potential = kernel_moment(params, params.slow_decay() - s, spec)?;
    Ok(T::one() / (riesz_constant(params)? * potential))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn params(n: u32, sigma: f64) -> ConformalParams<f64> {
        ConformalParams::new(n, sigma).unwrap()
    }

    #[test]
    fn polyharmonic_examples() {
        assert_eq!(poly_power_constant(&params(3, 1.0), 1.0).unwrap(), 0.0);
        assert_eq!(poly_power_constant(&params(5, 1.0), 1.5).unwrap(), 2.25);
        assert_eq!(poly_power_constant(&params(9, 2.0), 2.5).unwrap(), 2025.0 / 16.0);
        assert!(poly_power_constant(&params(5, 0.5), 1.0).is_err());
    }

    #[test]
    fn neumann_examples() {
        for n in [3, 7, 10] {
            assert_eq!(neumann_poly_coefficient(&params(n, 1.0), 0.7).unwrap(), -0.7);
        }
        assert_eq!(neumann_poly_coefficient(&params(9, 2.0), 2.5).unwrap(), -405.0 / 8.0);
        assert_eq!(neumann_poly_coefficient(&params(5, 2.0), 0.5).unwrap(), -25.0 / 8.0);
    }

    #[test]
    fn exact_product() {
        use num_rational::BigRational;
        let s = BigRational::from_ratio(5, 2);
        assert_eq!(poly_product(9, 2, &s), BigRational::from_ratio(2025, 16));
        assert_eq!(poly_product(9, 0, &s), BigRational::from_int(1));
    }

    #[test]
    fn integer_orders_agree() {
        for m in 1..=3u32 {
            for n in [2 * m + 1, 2 * m + 4, 2 * m + 9] {
                let p = params(n, m as f64);
                let e = p.riesz_exponent();
                for k in 1..=20 {
                    let s = e * k as f64 / 21.0;
                    let a = frac_power_constant(&p, s).unwrap();
                    let b = poly_power_constant(&p, s).unwrap();
                    assert!((a / b - 1.0).abs() <= 1e-12, "n = {n}, m = {m}, s = {s}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn zero_at_riesz_exponent() {
        for (n, sigma) in [(3, 0.5), (4, 0.3), (7, 2.5), (6, 2.0)] {
            let p = params(n, sigma);
            assert!(frac_power_constant(&p, p.riesz_exponent()).unwrap().abs() <= 1e-12);
        }
        let p = params(3, 0.5);
        assert!(frac_power_constant(&p, 2.5).is_err());
        assert!(frac_power_constant(&p, 0.0).is_err());
    }

    #[test]
    fn c2_examples() {
        assert!((c2(&params(3, 0.5)).unwrap() - 2.0 / PI).abs() <= 1e-14);
        let p = params(4, 0.5);
        let want = 2.0 * (gamma(1.25f64).unwrap() / gamma(0.75f64).unwrap()).powi(2);
        assert!((frac_power_constant(&p, 1.5).unwrap() / want - 1.0).abs() <= 1e-14);
        assert!((want - 1.094_219_807_613_238_3).abs() < 1e-14);
    }

    #[test]
    fn riesz_oracle_matches_gamma_ratio() {
        let spec = QuadratureSpec::default();
        for (n, sigma, s) in [(3, 0.5, 1.0), (4, 0.5, 1.5), (5, 0.75, 1.0), (3, 0.25, 1.25), (6, 1.5, 1.5), (2, 0.6, 0.4)] {
            let p = params(n, sigma);
            let a = frac_power_constant(&p, s).unwrap();
            let b = frac_power_constant_riesz(&p, s, &spec).unwrap();
            assert!((a / b - 1.0).abs() < 1e-8, "n = {n}, sigma = {sigma}, s = {s}: {a} vs {b}");
        }
    }

    #[test]
    fn profile_type() {
        let p = params(3, 0.5);
        let u = PowerProfile::singular(&p, 2.0).unwrap();
        assert_eq!(u.s(), 1.0);
        assert_eq!(u.value(2.0), 1.0);
        let (c, e) = u.frac_laplacian(&p).unwrap();
        assert!((c - 4.0 / PI).abs() < 1e-14);
        assert_eq!(e, 2.0);
        assert!(PowerProfile::new(&p, 3.0, 1.0).is_err());
        assert!(PowerProfile::new(&p, 1.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn symmetric_about_half_exponent(n in 2u32..13, frac in 0.01f64..0.99, t in 0.01f64..0.99) {
            let p = params(n, frac * n as f64 / 2.0);
            let e = p.riesz_exponent();
            let s = t * e;
            let a = frac_power_constant(&p, s).unwrap();
            let b = frac_power_constant(&p, e - s).unwrap();
            prop_assert!((a / b - 1.0).abs() <= 1e-12, "{} vs {}", a, b);
        }

        #[test]
        fn lambda_positive_below_riesz_exponent(n in 2u32..13, frac in 0.01f64..0.99, t in 0.01f64..0.99) {
            let p = params(n, frac * n as f64 / 2.0);
            prop_assert!(frac_power_constant(&p, t * p.riesz_exponent()).unwrap() > 0.0);
            prop_assert!(c2(&p).unwrap() > 0.0);
        }
    }

    #[test]
    fn c2_positive_on_grid() {
        for n in 2..=12u32 {
            for k in 1..=9u32.min(5 * n) {
                let sigma = 0.1 * k as f64;
                if sigma >= n as f64 / 2.0 {
                    continue;
                }
                assert!(c2(&params(n, sigma)).unwrap() > 0.0, "n = {n}, sigma = {sigma}");
            }
        }
    }
}
