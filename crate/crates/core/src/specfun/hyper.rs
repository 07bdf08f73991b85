//! Gauss hypergeometric function `₂F₁(a, b; c; z)` for real arguments.
//!
//! Strategy by argument:
//! - `|z| ≤ 1/2`: Gauss power series;
//! - `1/2 < z < 1`: Euler integral by double-exponential quadrature, after
//!   an Euler transformation when `c - a - b < 0`;
//! - `z = 1`: Gauss summation formula;
//! - `-9 ≤ z < -1/2`: Euler integral (the integrand is smooth there).
//!
//! Internally every evaluation carries the pair `(z, 1 - z)`, so arguments
//! close to 1 keep their relative distance to the branch point.

use serde::Serialize;

use super::gamma::{gamma, rgamma};
use crate::error::{Error, Result};
use crate::quad::{integrate_power_weight, QuadratureSpec};
use crate::scalar::Real;

/// Most negative admissible argument.
const Z_MIN: f64 = -9.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyp2F1Args<T> {
    pub a: T,
    pub b: T,
    pub c: T,
    pub z: T,
    /// `1 - z`, possibly supplied with more relative precision than `z`.
    pub one_minus_z: T,
}

impl<T: Real> Hyp2F1Args<T> {
    pub fn new(a: T, b: T, c: T, z: T) -> Result<Self> {
        Self::with_complement(a, b, c, z, T::one() - z)
    }

    /// Like [`new`](Self::new) with `1 - z` given separately, for `z` near 1.
    pub fn with_complement(a: T, b: T, c: T, z: T, one_minus_z: T) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite() && z.is_finite() && one_minus_z.is_finite()) {
            return Err(Error::domain("hypergeometric parameters must be finite"));
        }
        if c <= T::zero() && c == c.floor() {
            return Err(Error::domain(format!("2F1 is undefined for c = {c}")));
        }
        if z < T::lit(Z_MIN) || z > T::one() || one_minus_z < T::zero() {
            return Err(Error::domain(format!("2F1 argument z = {z} outside [-9, 1]")));
        }
        if ((T::one() - z) - one_minus_z).abs() > T::lit(4.0) * T::epsilon() * (T::one() + z.abs()) {
            return Err(Error::domain("supplied 1 - z is inconsistent with z"));
        }
        let args = Self { a, b, c, z, one_minus_z };
        if one_minus_z == T::zero() && !args.terminates() && c - a - b <= T::zero() {
            return Err(Error::Divergence(format!(
                "2F1({a}, {b}; {c}; 1) diverges since c - a - b = {} <= 0",
                c - a - b
            )));
        }
        Ok(args)
    }

    fn terminates(&self) -> bool {
        let neg_int = |x: T| x <= T::zero() && x == x.floor();
        neg_int(self.a) || neg_int(self.b)
    }

    fn shifted(&self, k: T) -> Result<Self> {
        Self::with_complement(self.a + k, self.b + k, self.c + k, self.z, self.one_minus_z)
    }
}

/// `₂F₁(a, b; c; z)`.
pub fn hyp2f1<T: Real>(args: Hyp2F1Args<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let Hyp2F1Args { a, b, c, z, one_minus_z: w } = args;
    if z == T::zero() {
        return Ok(T::one());
    }
    if args.terminates() || z.abs() <= T::lit(0.5) {
        return hyp2f1_series(args, spec);
    }
    if w == T::zero() {
        return hyp2f1_gauss_at_one(a, b, c);
    }
    if z > T::zero() && c - a - b < T::zero() {
        // Euler: F(a,b;c;z) = (1-z)^{c-a-b} F(c-a, c-b; c; z)
        let inner = Hyp2F1Args { a: c - a, b: c - b, ..args };
        return Ok(w.powf(c - a - b) * integral_or_series(inner, spec)?);
    }
    integral_or_series(args, spec)
}

fn integral_or_series<T: Real>(args: Hyp2F1Args<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let symmetric = Hyp2F1Args { a: args.b, b: args.a, ..args };
    for candidate in [args, symmetric] {
        if candidate.c > candidate.b && candidate.b > T::zero() {
            return hyp2f1_euler_integral(candidate, spec);
        }
    }
    if args.z.abs() < T::one() {
        hyp2f1_series(args, spec)
    } else {
        Err(Error::domain(format!(
            "no convergent representation for 2F1({}, {}; {}; {})",
            args.a, args.b, args.c, args.z
        )))
    }
}

/// Gauss series, truncated once three consecutive terms fall below
/// `min(spec.rel_tol, ε)·(1-|z|)` relative to the partial sum; the factor
/// `1-|z|` bounds the geometric tail.
pub fn hyp2f1_series<T: Real>(args: Hyp2F1Args<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let Hyp2F1Args { a, b, c, z, .. } = args;
    if z.abs() >= T::one() && !args.terminates() {
        return Err(Error::domain("Gauss series requires |z| < 1"));
    }
    let mut term = T::one();
    let mut sum = T::one();
    let mut small = 0;
    let tol = spec.rel_tol.min(T::epsilon()) * (T::one() - z.abs()).max(T::epsilon());
    for k in 0..10_000 {
        let k = T::int(k);
        term = term * (a + k) * (b + k) / ((c + k) * (k + T::one())) * z;
        sum = sum + term;
        if term.abs() <= tol * sum.abs() {
            small += 1;
            if small == 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence {
        what: "hypergeometric series",
        best: sum.as_f64(),
        err_estimate: term.abs().as_f64(),
    })
}

/// Euler integral
/// `Γ(c)/(Γ(b)Γ(c-b)) ∫₀¹ tᵇ⁻¹(1-t)ᶜ⁻ᵇ⁻¹(1-zt)⁻ᵃ dt`, valid for `c > b > 0`
/// and `z ≤ 1` (at `z = 1` additionally `c - a - b > 0`).
///
/// The interval is split at 1/2 and each half is written in the distance to
/// its endpoint; strong endpoint powers are removed by substitution.
pub fn hyp2f1_euler_integral<T: Real>(args: Hyp2F1Args<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let Hyp2F1Args { a, b, c, z, one_minus_z: w } = args;
    if !(c > b && b > T::zero()) {
        return Err(Error::domain(format!("Euler integral needs c > b > 0, got b = {b}, c = {c}")));
    }
    if w == T::zero() && c - a - b <= T::zero() {
        return Err(Error::Divergence("Euler integral at z = 1 needs c - a - b > 0".into()));
    }
    let one = T::one();
    let half = T::lit(0.5);
    // t near 0: t^{b-1} (1-t)^{c-b-1} (1-zt)^{-a}
    let left = integrate_power_weight(b, half, |t| (one - t).powf(c - b - one) * (one - z * t).powf(-a), spec)?;
    // s = 1 - t near 0: s^{c-b-1} (1-s)^{b-1} (w + zs)^{-a}
    let right = if w == T::zero() {
        integrate_power_weight(c - b - a, half, |s| (one - s).powf(b - one) * z.powf(-a), spec)?
    } else if a > T::zero() && c - b - a > T::lit(1e-3) && w < T::lit(1e-8) {
        // (w + zs)^{-a} overflows for tiny w; s^a (w + zs)^{-a} stays bounded
        integrate_power_weight(c - b - a, half, |s| (one - s).powf(b - one) * (s / (w + z * s)).powf(a), spec)?
    } else {
        integrate_power_weight(c - b, half, |s| (one - s).powf(b - one) * (w + z * s).powf(-a), spec)?
    };
    Ok(gamma(c)? * rgamma(b) * rgamma(c - b) * (left + right))
}

/// `Γ(c)Γ(c-a-b)/(Γ(c-a)Γ(c-b))`, the value at `z = 1`.
pub fn hyp2f1_gauss_at_one<T: Real>(a: T, b: T, c: T) -> Result<T> {
    let excess = c - a - b;
    if excess <= T::zero() {
        return Err(Error::Divergence(format!("2F1 at z = 1 diverges since c - a - b = {excess} <= 0")));
    }
    Ok(gamma(c)? * gamma(excess)? * rgamma(c - a) * rgamma(c - b))
}

/// `d/dz ₂F₁ = (ab/c) ₂F₁(a+1, b+1; c+1; z)`.
pub fn hyp2f1_deriv<T: Real>(args: Hyp2F1Args<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let Hyp2F1Args { a, b, c, .. } = args;
    if a == T::zero() || b == T::zero() {
        return Ok(T::zero());
    }
    Ok(a * b / c * hyp2f1(args.shifted(T::one())?, spec)?)
}

/// Second derivative, from two applications of the derivative formula.
pub fn hyp2f1_second_deriv<T: Real>(args: Hyp2F1Args<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let Hyp2F1Args { a, b, c, .. } = args;
    let outer = a * b / c;
    if outer == T::zero() {
        return Ok(T::zero());
    }
    Ok(outer * hyp2f1_deriv(args.shifted(T::one())?, spec)?)
}

/// `z(1-z)F'' + (c - (a+b+1)z)F' - abF` for given values of `F, F', F''`.
pub fn hyp2f1_ode_operator<T: Real>(args: &Hyp2F1Args<T>, f: T, fp: T, fpp: T) -> T {
    let Hyp2F1Args { a, b, c, z, one_minus_z: w } = *args;
    z * w * fpp + (c - (a + b + T::one()) * z) * fp - a * b * f
}

/// Residual of the hypergeometric equation at the computed function values.
pub fn hyp2f1_ode_residual<T: Real>(args: Hyp2F1Args<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    if !(args.z > T::zero() && args.z < T::one()) {
        return Err(Error::domain("ODE residual is evaluated for z in (0, 1)"));
    }
    let f = hyp2f1(args, spec)?;
    let fp = hyp2f1_deriv(args, spec)?;
    let fpp = hyp2f1_second_deriv(args, spec)?;
    Ok(hyp2f1_ode_operator(&args, f, fp, fpp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn spec() -> QuadratureSpec<f64> {
        QuadratureSpec::default()
    }

    fn f(a: f64, b: f64, c: f64, z: f64) -> f64 {
        hyp2f1(Hyp2F1Args::new(a, b, c, z).unwrap(), &spec()).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn value_at_zero() {
        assert_eq!(f(0.3, -2.5, 1.7, 0.0), 1.0);
    }

    #[test]
    fn logarithm_closed_form() {
        for z in [0.1f64, 0.3, 0.5, 0.6, 0.75, 0.9, 0.99, -0.3, -0.8, -4.0, -9.0] {
            let want = -(1.0 - z).ln() / z;
            assert!(rel(f(1.0, 1.0, 2.0, z), want) < 1e-9, "z = {z}");
        }
        assert!(rel(f(1.0, 1.0, 2.0, 0.5), 2.0 * 2f64.ln()) < 1e-10);
    }

    // reference values from mpmath at 25 digits
    #[test]
    fn against_reference_table() {
        let table = [
            ((0.3, 0.7, 1.9, 0.97), 1.219134176643887563858416),
            ((2.5, 1.2, 1.5, 0.8), 28.9743228906855224398749),
            ((0.25, 0.25, 1.0, 0.999), 1.17195710515182017580082),
            ((1.75, 1.75, 3.5, 0.9), 4.875886896958588334054086),
            ((-0.4, 1.3, 0.6, 0.75), -0.1464002702363034155356605),
            ((1.2, 0.4, 2.2, -7.5), 0.5568113425826083550458758),
            ((0.5, 0.5, 1.5, -0.7), 0.9096164028350779395582868),
        ];
        for ((a, b, c, z), want) in table {
            let got = f(a, b, c, z);
            assert!(rel(got, want) < 1e-9, "2F1({a},{b};{c};{z}) = {got}, want {want}");
        }
    }

    #[test]
    fn arcsine_closed_form() {
        // F(1/2, 1/2; 3/2; x²) = asin(x)/x
        for x in [0.3f64, 0.8, 0.95, 0.999] {
            assert!(rel(f(0.5, 0.5, 1.5, x * x), x.asin() / x) < 1e-9, "x = {x}");
        }
    }

    #[test]
    fn gauss_value_at_one() {
        // family a = b = (n-2σ)/4, c = n/2 with n = 3, σ = 1/2
        assert!(rel(f(0.5, 0.5, 1.5, 1.0), PI / 2.0) < 1e-15);
        let args = Hyp2F1Args::new(0.5, 0.5, 1.5, 1.0).unwrap();
        let integral = hyp2f1_euler_integral(args, &spec()).unwrap();
        assert!(rel(integral, PI / 2.0) < 1e-9);
    }

    #[test]
    fn divergence_at_one() {
        assert!(matches!(Hyp2F1Args::new(1.0, 1.0, 2.0, 1.0), Err(Error::Divergence(_))));
        assert!(matches!(hyp2f1_gauss_at_one(1.0, 1.0, 1.5), Err(Error::Divergence(_))));
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(Hyp2F1Args::new(1.0, 1.0, -2.0, 0.5), Err(Error::Domain(_))));
        assert!(matches!(Hyp2F1Args::new(1.0, 1.0, 2.0, 1.5), Err(Error::Domain(_))));
        assert!(matches!(Hyp2F1Args::new(1.0, 1.0, 2.0, -10.0), Err(Error::Domain(_))));
    }

    #[test]
    fn terminating_polynomial() {
        // F(-2, b; c; z) = 1 - 2bz/c + b(b+1)z²/(c(c+1))
        let (b, c, z) = (1.5, 2.5, 0.9);
        let want = 1.0 - 2.0 * b * z / c + b * (b + 1.0) * z * z / (c * (c + 1.0));
        assert!(rel(f(-2.0, b, c, z), want) < 1e-14);
    }

    #[test]
    fn derivative_examples() {
        let d = |a, b, c, z| hyp2f1_deriv(Hyp2F1Args::new(a, b, c, z).unwrap(), &spec()).unwrap();
        assert!(rel(d(1.0, 1.0, 2.0, 0.0), 0.5) < 1e-15);
        assert!(rel(d(1.0, 1.0, 2.0, 0.5), 4.0 - 4.0 * 2f64.ln()) < 1e-10);
        assert!(rel(d(0.5, 0.5, 2.0, 0.0), 0.125) < 1e-15);
    }

    #[test]
    fn derivative_matches_central_difference() {
        let tight = QuadratureSpec::tight();
        for (a, b, c) in [(0.5, 0.5, 1.5), (0.6, 0.6, 2.0), (0.875, 0.875, 2.5)] {
            for z in [0.2, 0.45, 0.55, 0.8] {
                let h = 1e-4;
                let g = |z| hyp2f1(Hyp2F1Args::new(a, b, c, z).unwrap(), &tight).unwrap();
                let fd = (g(z + h) - g(z - h)) / (2.0 * h);
                let exact = hyp2f1_deriv(Hyp2F1Args::new(a, b, c, z).unwrap(), &tight).unwrap();
                assert!(rel(fd, exact) < 1e-6, "({a},{b},{c},{z}): {fd} vs {exact}");
            }
        }
    }

    #[test]
    fn ode_residual_examples() {
        let args = Hyp2F1Args::new(1.0, 1.0, 2.0, 0.3).unwrap();
        assert!(hyp2f1_ode_residual(args, &spec()).unwrap().abs() < 1e-8);
        let a = (5.0 - 1.5) / 4.0;
        let args = Hyp2F1Args::new(a, a, 2.5, 0.5).unwrap();
        assert!(hyp2f1_ode_residual(args, &spec()).unwrap().abs() < 1e-8);

        let args = Hyp2F1Args::new(1.0, 1.0, 2.0, 0.3).unwrap();
        let fv = hyp2f1(args, &spec()).unwrap();
        let fp = hyp2f1_deriv(args, &spec()).unwrap();
        let fpp = hyp2f1_second_deriv(args, &spec()).unwrap();
        let perturbed = hyp2f1_ode_operator(&args, fv + 0.01, fp, fpp);
        assert!((perturbed + 0.01).abs() < 1e-9);
    }

    #[test]
    fn complement_is_honoured_near_one() {
        // F(1,1;2;z) = -ln(w)/z with w = 1 - z tiny
        let w = 1e-13;
        let z = 1.0 - w;
        let args = Hyp2F1Args::with_complement(1.0, 1.0, 2.0, z, w).unwrap();
        let got = hyp2f1(args, &spec()).unwrap();
        assert!(rel(got, -w.ln() / z) < 1e-9);
    }

    proptest! {
        #[test]
        fn series_matches_integral_on_family(n in 2u32..10, sigma in 0.05f64..0.95, z in 0.0f64..0.5) {
            let a = (n as f64 - 2.0 * sigma) / 4.0;
            let args = Hyp2F1Args::new(a, a, n as f64 / 2.0, z).unwrap();
            let s = hyp2f1_series(args, &spec()).unwrap();
            let i = hyp2f1_euler_integral(args, &spec()).unwrap();
            prop_assert!(rel(i, s) <= 1e-9);
        }

        #[test]
        fn euler_transformation(a in 0.1f64..2.0, b in 0.1f64..2.0, dc in 0.1f64..2.0, z in 0.0f64..0.9) {
            let c = b + dc;
            let lhs = f(a, b, c, z);
            let rhs = (1.0 - z).powf(c - a - b) * f(c - a, c - b, c, z);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        }

        #[test]
        fn pfaff_transformation(a in 0.1f64..2.0, b in 0.1f64..2.0, dc in 0.1f64..2.0, z in 0.0f64..0.9) {
            let c = b + dc;
            let lhs = f(a, b, c, z);
            let rhs = (1.0 - z).powf(-a) * f(a, c - b, c, z / (z - 1.0));
            prop_assert!((lhs - rhs).abs() <= 1e-9 * (1.0 + lhs.abs()));
        }
    }
}
