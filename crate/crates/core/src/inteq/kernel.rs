//! The cylindrical kernel `J(t) = ∫_{𝕊ⁿ⁻¹} (eᵗ + e⁻ᵗ - 2ξ₁)^{-(n-2σ)/2} dξ`
//! and its mass `C(n, σ) = ∫ J`.

use crate::error::{Error, Result};
use crate::params::ConformalParams;
use crate::quad::{integrate, integrate_nodes, integrate_power_weight, Bound, Node, QuadratureSpec};
use crate::scalar::Real;
use crate::sphere::sphere_area;

/// `J(t)`; even in `t`.
///
/// With `v = 1 - ξ₁` the denominator is `4 sinh²(t/2) + 2v`, which stays
/// accurate for small `|t|`. For `n = 2` the full circle is integrated.
pub fn kernel_j<T: Real>(params: &ConformalParams<T>, t: T, spec: &QuadratureSpec<T>) -> Result<T> {
    if t.is_nan() {
        return Err(Error::domain("kernel argument is NaN"));
    }
    let n = params.n();
    let p = params.slow_decay();
    let two = T::lit(2.0);
    let t = t.abs();
    if t == T::zero() {
        return kernel_j_at_zero(params, spec);
    }
    let floor = T::lit(TINY_T).max(T::min_positive_value().sqrt().sqrt());
    if t < floor {
        return kernel_j_tiny(params, t, floor, spec);
    }
    let eps = {
        let s = two * (t / two).sinh();
        s * s
    };
    if n == 2 {
        // θ = √ε sinh w resolves the peak of width √ε at θ = 0
        let root = eps.sqrt();
        let upper = (T::PI() / root).asinh();
        let r = integrate(
            |w: T| {
                let theta = root * w.sinh();
                let s = two * (theta / two).sin();
                (eps + s * s).powf(-p) * root * w.cosh()
            },
            T::zero(),
            Bound::Finite(upper),
            spec,
        )?;
        return Ok(two * r.value);
    }
    // ε + 2v = ε eʷ, so the peak of width ε at v = 0 becomes a smooth exponential
    let q = T::int(n as i64 - 3) / two;
    let upper = (T::lit(4.0) / eps).ln_1p();
    let half_eps = eps / two;
    let ln_eps = eps.ln();
    let r = integrate_nodes(
        |node: Node<T>| {
            let w = node.from_lower;
            let ew = w.exp();
            let weight = if n == 3 {
                T::one()
            } else {
                let v = half_eps * w.exp_m1();
                let rest = half_eps * ew * node.to_upper.exp_m1();
                (v * rest).powf(q)
            };
            weight * ((T::one() - p) * (ln_eps + w)).exp()
        },
        T::zero(),
        Bound::Finite(upper),
        spec,
    )?;
    Ok(sphere_area::<T>(n - 1)? * r.value / two)
}

/// Below this argument `4 sinh²(t/2)` is too small for the angular
/// quadrature to resolve; `J` is continued by its leading singular term.
const TINY_T: f64 = 1e-60;

/// `J(t)` for `0 < t < floor` from `J(floor)` and the leading behaviour at the
/// origin: `t^{2σ-1}` for `σ < 1/2`, `-|𝕊ⁿ⁻²| ln t` for `σ = 1/2`
/// (`-2 ln t` when `n = 2`), bounded for `σ > 1/2`. The neglected terms
/// only affect integrals over `(0, floor)`, whose total weight is of order
/// `floor^{2σ}`.
fn kernel_j_tiny<T: Real>(params: &ConformalParams<T>, t: T, floor: T, spec: &QuadratureSpec<T>) -> Result<T> {
    let at_floor = kernel_j(params, floor, spec)?;
    let sigma = params.sigma();
    let half = T::lit(0.5);
    if sigma < half {
        Ok(at_floor * (t / floor).powf(sigma + sigma - T::one()))
    } else if sigma == half {
        let coefficient = if params.n() == 2 { T::lit(2.0) } else { sphere_area::<T>(params.n() - 1)? };
        Ok(at_floor + coefficient * (floor / t).ln())
    } else {
        Ok(at_floor)
    }
}

fn kernel_j_at_zero<T: Real>(params: &ConformalParams<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let sigma = params.sigma();
    let half = T::lit(0.5);
    if sigma <= half {
        return Err(Error::Divergence(format!("J(0) is infinite for sigma = {sigma} <= 1/2")));
    }
    let n = params.n();
    let p = params.slow_decay();
    let two = T::lit(2.0);
    if n == 2 {
        let e = sigma + sigma - T::one();
        // (2 sin(θ/2))^{-2p} = θ^{e-1} (θ / (2 sin(θ/2)))^{2p}
        let g = |theta: T| {
            if theta == T::zero() {
                T::one()
            } else {
                (theta / (two * (theta / two).sin())).powf(two * p)
            }
        };
        return Ok(two * integrate_power_weight(e, T::PI(), g, spec)?);
    }
    // the integrand behaves like v^{σ - 3/2} at the origin
    let e = sigma - half;
    let q = T::int(n as i64 - 3) / two;
    let scale = two.powf(-p);
    let left = integrate_power_weight(e, T::one(), |v| (two - v).powf(q), spec)?;
    let right = integrate_nodes(
        |node: Node<T>| (node.x * node.to_upper).powf(q) * node.x.powf(-p),
        T::one(),
        Bound::Finite(two),
        spec,
    )?;
    Ok(sphere_area::<T>(n - 1)? * scale * (left + right.value))
}

/// `C(n, σ) = 2 ∫₀^∞ J(t) dt` by nested quadrature.
pub fn kernel_mass<T: Real>(params: &ConformalParams<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let mut failure = None;
    let r = integrate_nodes(
        |node: Node<T>| match kernel_j(params, node.from_lower, spec) {
            Ok(j) => j,
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        },
        T::zero(),
        Bound::Infinity,
        spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(T::lit(2.0) * r?.value)
}

/// `∫ e^{κt} J(t) dt = 2 ∫₀^∞ cosh(κt) J(t) dt`, finite for `|κ| < (n-2σ)/2`.
pub fn kernel_moment<T: Real>(params: &ConformalParams<T>, kappa: T, spec: &QuadratureSpec<T>) -> Result<T> {
    if !(kappa.abs() < params.slow_decay()) {
        return Err(Error::Divergence(format!(
            "kernel moment needs |kappa| < {}, got {kappa}",
            params.slow_decay()
        )));
    }
    if kappa == T::zero() {
        return kernel_mass(params, spec);
    }
    let mut failure = None;
    let r = integrate_nodes(
        |node: Node<T>| match kernel_j(params, node.from_lower, spec) {
            Ok(j) if j == T::zero() => j,
            Ok(j) => (kappa * node.from_lower).cosh() * j,
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        },
        T::zero(),
        Bound::Infinity,
        spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(T::lit(2.0) * r?.value)
}

/// `J(t) = 2π ln coth(|t|/2)`, the closed form for `n = 3, σ = 1/2`.
pub fn kernel_j_log_coth<T: Real>(t: T) -> T {
    // ln coth(t/2) = ln((1+q)/(1-q)), q = e^{-|t|}
    let t = t.abs();
    T::TAU() * ((-t).exp().ln_1p() - (-(-t).exp_m1()).ln())
}

/// `C(3, 1/2) = 8π ∫₀^∞ ln coth u du`, integrated independently of [`kernel_j`].
pub fn kernel_mass_log_coth<T: Real>(spec: &QuadratureSpec<T>) -> Result<T> {
    let r = integrate(
        |u: T| (-(u + u)).exp().ln_1p() - (-(-(u + u)).exp_m1()).ln(),
        T::zero(),
        Bound::Infinity,
        spec,
    )?;
    Ok(T::lit(8.0) * T::PI() * r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec<f64> {
        QuadratureSpec::default()
    }

    fn params(n: u32, sigma: f64) -> ConformalParams<f64> {
        ConformalParams::new(n, sigma).unwrap()
    }

    #[test]
    fn closed_form_three_half() {
        let p = params(3, 0.5);
        let c = 1f64.cosh();
        let want = PI * ((c + 1.0) / (c - 1.0)).ln();
        let got = kernel_j(&p, 1.0, &spec()).unwrap();
        assert!((got / want - 1.0).abs() < 1e-10);
        for t in [1e-6, 0.05, 0.7, 3.0, 15.0] {
            let got = kernel_j(&p, t, &spec()).unwrap();
            assert!((got / kernel_j_log_coth(t) - 1.0).abs() < 1e-10, "t = {t}");
        }
    }

    #[test]
    fn symmetric() {
        for (n, sigma) in [(2, 0.3), (3, 0.25), (4, 0.5), (5, 1.5), (7, 2.5)] {
            let p = params(n, sigma);
            for t in [0.01, 0.4, 2.0, 9.0] {
                let a = kernel_j(&p, t, &spec()).unwrap();
                let b = kernel_j(&p, -t, &spec()).unwrap();
                assert!((a - b).abs() <= 1e-12 * a.abs());
            }
        }
    }

    #[test]
    fn large_t_asymptotics() {
        for (n, sigma) in [(2, 0.3), (3, 0.5), (4, 0.5), (5, 1.5)] {
            let p = params(n, sigma);
            let t = 20.0;
            let scaled = kernel_j(&p, t, &spec()).unwrap() * (t * p.slow_decay()).exp();
            let area = sphere_area::<f64>(n).unwrap();
            assert!((scaled / area - 1.0).abs() < 1e-6, "n = {n}: {scaled} vs {area}");
        }
    }

    #[test]
    fn origin() {
        assert!(matches!(kernel_j(&params(3, 0.5), 0.0, &spec()), Err(Error::Divergence(_))));
        assert!(matches!(kernel_j(&params(4, 0.25), 0.0, &spec()), Err(Error::Divergence(_))));
        // σ > 1/2: J(0) is finite and continuous
        for (n, sigma) in [(2, 0.75), (3, 0.9), (5, 1.5), (7, 2.5)] {
            let p = params(n, sigma);
            let at0 = kernel_j(&p, 0.0, &spec()).unwrap();
            let near = kernel_j(&p, 1e-9, &spec()).unwrap();
            assert!((at0 / near - 1.0).abs() < 1e-4, "n = {n}, sigma = {sigma}: {at0} vs {near}");
        }
    }

    #[test]
    fn mass_three_half_two_paths() {
        let direct = kernel_mass(&params(3, 0.5), &spec()).unwrap();
        let reduced = kernel_mass_log_coth::<f64>(&spec()).unwrap();
        let want = PI.powi(3);
        assert!((direct / want - 1.0).abs() < 1e-6, "{direct}");
        assert!((reduced / want - 1.0).abs() < 1e-10, "{reduced}");
    }

    #[test]
    fn mass_finite_and_positive() {
        for (n, sigma) in [(3, 0.25), (4, 0.5), (5, 1.5), (7, 2.5), (2, 0.5)] {
            let c = kernel_mass(&params(n, sigma), &spec()).unwrap();
            assert!(c.is_finite() && c > 0.0, "n = {n}, sigma = {sigma}: {c}");
        }
    }

    #[test]
    fn moment_reduces_to_mass_and_grows() {
        let p = params(5, 0.75);
        let c = kernel_mass(&p, &spec()).unwrap();
        let m = kernel_moment(&p, 0.5, &spec()).unwrap();
        assert!(m > c);
        assert_eq!(kernel_moment(&p, 0.0, &spec()).unwrap(), c);
        assert!(matches!(kernel_moment(&p, 1.75, &spec()), Err(Error::Divergence(_))));
    }

    #[test]
    fn mass_stable_under_tighter_tolerance() {
        let p = params(4, 0.5);
        let a = kernel_mass(&p, &spec()).unwrap();
        let b = kernel_mass(&p, &spec().with_rel_tol(5e-11)).unwrap();
        assert!((a / b - 1.0).abs() < 1e-8);
    }
}
