//! Boundary terms of the extended problem for `σ ∈ (0, 1)`.
//!
//! On the upper hemisphere of radius `R` the `Q₀` term reduces to
//! `-(C₀²M₀²/4)|𝕊ⁿ⁻¹| ∫₀¹ s^{(n-2)/2}(1-s)^{-σ}[((n-2σ)/2)²F² + 4s(1-s)F'²] ds`
//! with `F(s) = ₂F₁(a, a; n/2; s)`, `a = (n-2σ)/4`. Near `s = 1` the
//! derivative is written `F' = (2a²/n)(1-s)^{σ-1} ₂F₁(q, q; n/2+1; s)`,
//! `q = (n+2σ)/4`, so the singular factor is carried by explicit powers.

use crate::error::{Error, Result};
use crate::extension::{c0, n_constant, NormalizationVariant};
use crate::fraclap::c2;
use crate::params::ConformalParams;
use crate::quad::{integrate_nodes, integrate_power_weight, Bound, Node, QuadratureSpec};
use crate::scalar::Real;
use crate::specfun::{gamma, hyp2f1, Hyp2F1Args};
use crate::sphere::sphere_area;

use super::{PohozaevMode, PohozaevReport};

/// `F(s)` and `G(s) = ₂F₁(q, q; n/2+1; s)` at `(s, 1-s)`.
struct Family<T> {
    a: T,
    q: T,
    half_n: T,
}

impl<T: Real> Family<T> {
    fn new(params: &ConformalParams<T>) -> Result<Self> {
        params.require_fractional()?;
        let four = T::lit(4.0);
        Ok(Self {
            a: params.riesz_exponent() / four,
            q: (params.dim() + params.sigma() + params.sigma()) / four,
            half_n: params.dim() / T::lit(2.0),
        })
    }

    fn f(&self, s: T, w: T, spec: &QuadratureSpec<T>) -> Result<T> {
        hyp2f1(Hyp2F1Args::with_complement(self.a, self.a, self.half_n, s, w)?, spec)
    }

    fn g(&self, s: T, w: T, spec: &QuadratureSpec<T>) -> Result<T> {
        hyp2f1(Hyp2F1Args::with_complement(self.q, self.q, self.half_n + T::one(), s, w)?, spec)
    }

    /// `2a²/n`, so that `F' = (2a²/n)(1-s)^{σ-1} G`.
    fn slope(&self) -> T {
        self.a * self.a / self.half_n
    }
}

/// `∫₀¹ s^{n/2-1}(1-s)^{-σ}(s(1-s)F'² + a²F²) ds`.
fn energy_integral<T: Real>(params: &ConformalParams<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let fam = Family::new(params)?;
    let sigma = params.sigma();
    let one = T::one();
    let half = T::lit(0.5);
    let a2 = fam.a * fam.a;
    let k = fam.slope();
    let mut failure = None;
    let mut keep = |r: Result<T>| match r {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            T::zero()
        }
    };
    // s^{n/2-1} weight near 0
    let left = integrate_power_weight(
        fam.half_n,
        half,
        |s| {
            let w = one - s;
            let v = (|| -> Result<T> {
                let f = fam.f(s, w, spec)?;
                let fp = k * w.powf(sigma - one) * fam.g(s, w, spec)?;
                Ok(w.powf(-sigma) * (s * w * fp * fp + a2 * f * f))
            })();
            keep(v)
        },
        spec,
    );
    // v = 1 - s; the integrand is v^{-σ} a²F² + k² s (1-v)^... v^{σ-1} G² up to the smooth factor
    let e = sigma.min(one - sigma);
    let right = integrate_power_weight(
        e,
        half,
        |v| {
            let s = one - v;
            let r = (|| -> Result<T> {
                let f = fam.f(s, v, spec)?;
                let g = fam.g(s, v, spec)?;
                let smooth = s.powf(fam.half_n - one);
                Ok(smooth * (a2 * f * f * v.powf(one - e - sigma) + s * k * k * g * g * v.powf(sigma - e)))
            })();
            keep(r)
        },
        spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(left? + right?)
}

/// `Γ²(n/2)Γ(σ)Γ(1-σ) / (Γ²((n-2σ)/4)Γ²((n+2σ)/4))`, the limit of the
/// bracket `s^{n/2}(1-s)^{1-σ}F F'` at `s = 1`.
fn bracket_limit<T: Real>(params: &ConformalParams<T>) -> Result<T> {
    let fam = Family::new(params)?;
    let sigma = params.sigma();
    let gn = gamma(fam.half_n)?;
    let ga = gamma(fam.a)?;
    let gq = gamma(fam.q)?;
    Ok(gn * gn * gamma(sigma)? * gamma(T::one() - sigma)? / (ga * ga * gq * gq))
}

/// `s^{n/2}(1-s)^{1-σ} F(s)F'(s)` for `s ∈ [0, 1]`.
pub fn bracket_term<T: Real>(params: &ConformalParams<T>, s: T, spec: &QuadratureSpec<T>) -> Result<T> {
    if !(s >= T::zero() && s <= T::one()) {
        return Err(Error::domain(format!("bracket is evaluated for s in [0, 1], got {s}")));
    }
    let fam = Family::new(params)?;
    let w = T::one() - s;
    // (1-s)^{1-σ} F' = (2a²/n) G
    Ok(s.powf(fam.half_n) * fam.f(s, w, spec)? * fam.slope() * fam.g(s, w, spec)?)
}

/// `(lhs, rhs)`: the closed bracket limit and the quadrature of its integral form.
pub fn bracket_identity_check<T: Real>(params: &ConformalParams<T>, spec: &QuadratureSpec<T>) -> Result<(T, T)> {
    Ok((bracket_limit(params)?, energy_integral(params, spec)?))
}

/// `-C₀²M₀²|𝕊ⁿ⁻¹| Γ²(n/2)Γ(σ)Γ(1-σ) / (Γ²((n+2σ)/4)Γ²((n-2σ)/4))`.
pub fn q0_closed<T: Real>(params: &ConformalParams<T>, m0: T) -> Result<T> {
    let c = c0(params)?;
    Ok(-c * c * m0 * m0 * sphere_area::<T>(params.n())? * bracket_limit(params)?)
}

/// The `Q₀` term from its integral over `s = r²/R² ∈ (0, 1)`.
pub fn q0_quadrature<T: Real>(params: &ConformalParams<T>, m0: T, spec: &QuadratureSpec<T>) -> Result<T> {
    let c = c0(params)?;
    // the [.] bracket is 4 times the energy integrand
    Ok(-c * c * m0 * m0 * sphere_area::<T>(params.n())? * energy_integral(params, spec)?)
}

/// The `Q₀` term as the integral over `|x| = r ∈ (0, R)` on the hemisphere
/// of radius `R`, before the substitution `s = r²/R²`:
/// `-(C₀²M₀²/2) R^{-n}|𝕊ⁿ⁻¹| ∫₀^R rⁿ⁻¹(1-r²/R²)^{-σ}[((n-2σ)/2)²F² + 4(r²(R²-r²)/R⁴)F'²] dr`.
pub fn q0_at_radius<T: Real>(params: &ConformalParams<T>, m0: T, radius: T, spec: &QuadratureSpec<T>) -> Result<T> {
    if !(radius > T::zero() && radius.is_finite()) {
        return Err(Error::domain(format!("radius must be positive, got {radius}")));
    }
    let fam = Family::new(params)?;
    let sigma = params.sigma();
    let one = T::one();
    let two = T::lit(2.0);
    let e2 = params.slow_decay() * params.slow_decay();
    let k = fam.slope();
    let nm1 = params.n() as i32 - 1;
    let r2 = radius * radius;
    let mut failure = None;
    let r = integrate_nodes(
        |node: Node<T>| {
            let r = node.from_lower;
            let d = node.to_upper;
            let s = r * r / r2;
            // 1 - r²/R² = d(2R - d)/R²
            let w = d * (two * radius - d) / r2;
            let v = (|| -> Result<T> {
                let f = fam.f(s, w, spec)?;
                let g = fam.g(s, w, spec)?;
                let bracket = e2 * f * f + T::lit(4.0) * s * k * k * g * g * w.powf(sigma + sigma - one);
                Ok(r.powi(nm1) * w.powf(-sigma) * bracket)
            })();
            match v {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::zero()
                }
            }
        },
        T::zero(),
        Bound::Finite(radius),
        spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let c = c0(params)?;
    Ok(-c * c * m0 * m0 / two * radius.powi(-(params.n() as i32)) * sphere_area::<T>(params.n())? * r?.value)
}

/// `M₀ = (C₂/K∞)^{(n-2σ)/(4σ)}`.
pub fn m0_fractional<T: Real>(params: &ConformalParams<T>, k_infinity: T) -> Result<T> {
    params.require_fractional()?;
    if !(k_infinity > T::zero() && k_infinity.is_finite()) {
        return Err(Error::domain(format!("K(infinity) must be positive, got {k_infinity}")));
    }
    let e = params.riesz_exponent() / (T::lit(4.0) * params.sigma());
    Ok((c2(params)? / k_infinity).powf(e))
}

/// Limit of the fractional Pohozaev boundary terms on `U₀`.
///
/// Closed value `M₀²C₀|𝕊ⁿ⁻¹|Γ(1-σ)Γ(n/2)/Γ²((n-2σ)/4)·((n-2σ)/n - 1)`;
/// oracle value `N (n-2σ)/(2n)|𝕊ⁿ⁻¹|M₀^{2n/(n-2σ)}K∞` plus the quadrature `Q₀`.
pub fn pohozaev_limit_fractional<T: Real>(
    params: &ConformalParams<T>,
    k_infinity: T,
    spec: &QuadratureSpec<T>,
) -> Result<PohozaevReport<T>> {
    let m0 = m0_fractional(params, k_infinity)?;
    let n = params.dim();
    let e = params.riesz_exponent();
    let area = sphere_area::<T>(params.n())?;
    let ga = gamma(e / T::lit(4.0))?;
    let amplitude = m0 * m0 * c0(params)? * area * gamma(T::one() - params.sigma())? * gamma(n / T::lit(2.0))? / (ga * ga);
    let sign_factor = e / n - T::one();
    let closed = amplitude * sign_factor;
    let big_n = n_constant(params, NormalizationVariant::GammaOneMinusSigma)?;
    let first = big_n * e / (n + n) * area * m0.powf(params.energy_exponent()) * k_infinity;
    let oracle = first + q0_quadrature(params, m0, spec)?;
    Ok(PohozaevReport::new(PohozaevMode::Fractional, *params, k_infinity, m0, closed, oracle, sign_factor))
}

/// `(A^{-μ}B^{-ν}, Γ(μ+ν)/(Γ(μ)Γ(ν)) ∫₀¹ s^{μ-1}(1-s)^{ν-1}(sA + (1-s)B)^{-(μ+ν)} ds)`.
pub fn feynman_check<T: Real>(a: T, b: T, mu: T, nu: T, spec: &QuadratureSpec<T>) -> Result<(T, T)> {
    for (name, v) in [("A", a), ("B", b), ("mu", mu), ("nu", nu)] {
        if !(v > T::zero() && v.is_finite()) {
            return Err(Error::domain(format!("{name} must be positive, got {v}")));
        }
    }
    let one = T::one();
    let half = T::lit(0.5);
    let k = mu + nu;
    let left = integrate_power_weight(mu, half, |s| (one - s).powf(nu - one) * (s * a + (one - s) * b).powf(-k), spec)?;
    let right = integrate_power_weight(nu, half, |v| (one - v).powf(mu - one) * ((one - v) * a + v * b).powf(-k), spec)?;
    let lhs = a.powf(-mu) * b.powf(-nu);
    let rhs = gamma(k)? / (gamma(mu)? * gamma(nu)?) * (left + right);
    Ok((lhs, rhs))
}
