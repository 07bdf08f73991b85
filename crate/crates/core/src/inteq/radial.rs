//! Radial profiles on logarithmic grids, the Kelvin transform and the
//! moving-sphere and ray-monotonicity diagnostics.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::ConformalParams;
use crate::scalar::Real;

/// `u(rᵢ)` on increasing radii, with the decay `u ~ amplitude·r^{-exponent}`
/// used beyond the last radius.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialProfile<T> {
    radii: Vec<T>,
    values: Vec<T>,
    tail_exponent: T,
    tail_amplitude: T,
}

impl<T: Real> RadialProfile<T> {
    pub fn new(radii: Vec<T>, values: Vec<T>, tail_exponent: T, tail_amplitude: T) -> Result<Self> {
        if radii.len() < 3 || radii.len() != values.len() {
            return Err(Error::domain("profile needs at least three radii and one value per radius"));
        }
        if !(radii[0] > T::zero()) || radii.windows(2).any(|w| !(w[1] > w[0])) || !radii[radii.len() - 1].is_finite() {
            return Err(Error::domain("radii must be positive, finite and strictly increasing"));
        }
        if values.iter().any(|v| !(v.is_finite() && *v >= T::zero())) {
            return Err(Error::domain("profile values must be finite and nonnegative"));
        }
        if !tail_exponent.is_finite() || !(tail_amplitude.is_finite() && tail_amplitude >= T::zero()) {
            return Err(Error::domain("tail metadata must be finite with a nonnegative amplitude"));
        }
        Ok(Self {
            radii,
            values,
            tail_exponent,
            tail_amplitude,
        })
    }

    pub fn from_fn(radii: Vec<T>, f: impl Fn(T) -> T, tail_exponent: T, tail_amplitude: T) -> Result<Self> {
        let values = radii.iter().map(|&r| f(r)).collect();
        Self::new(radii, values, tail_exponent, tail_amplitude)
    }

    /// `len` radii equally spaced in `ln r` from `r_min` to `r_max`.
    pub fn log_grid(r_min: T, r_max: T, len: usize) -> Result<Vec<T>> {
        if !(r_min > T::zero() && r_max > r_min) || len < 3 {
            return Err(Error::domain("log grid needs 0 < r_min < r_max and at least three points"));
        }
        let (a, b) = (r_min.ln(), r_max.ln());
        let step = (b - a) / T::int(len as i64 - 1);
        Ok((0..len).map(|i| (a + step * T::int(i as i64)).exp()).collect())
    }

    /// The standard bubble `(1 + r²)^{-(n-2σ)/2}`.
    pub fn bubble(params: &ConformalParams<T>, radii: Vec<T>) -> Result<Self> {
        let p = params.slow_decay();
        Self::from_fn(radii, |r| (T::one() + r * r).powf(-p), p + p, T::one())
    }

    /// The slow-decay power `c·r^{-(n-2σ)/2}`.
    pub fn power(params: &ConformalParams<T>, c: T, radii: Vec<T>) -> Result<Self> {
        let p = params.slow_decay();
        Self::from_fn(radii, |r| c * r.powf(-p), p, c)
    }

    pub fn radii(&self) -> &[T] {
        &self.radii
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn tail_exponent(&self) -> T {
        self.tail_exponent
    }

    pub fn tail_amplitude(&self) -> T {
        self.tail_amplitude
    }

    /// Whether the tail is one of the two decays `(n-2σ)/2` or `n-2σ`.
    pub fn has_standard_tail(&self, params: &ConformalParams<T>) -> bool {
        let p = params.slow_decay();
        let tol = T::lit(1e-12) * (T::one() + p);
        (self.tail_exponent - p).abs() <= tol || (self.tail_exponent - p - p).abs() <= tol
    }

    /// Same profile with every value multiplied by `c`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(
            self.radii.clone(),
            self.values.iter().map(|v| *v * c).collect(),
            self.tail_exponent,
            self.tail_amplitude * c,
        )
    }

    /// CSV with header `r,u`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,u\n");
        for (r, u) in self.radii.iter().zip(&self.values) {
            let _ = writeln!(out, "{:.16e},{:.16e}", r.as_f64(), u.as_f64());
        }
        out
    }
}

/// Where an interpolated value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Grid,
    Tail,
    /// Below the first radius: power-law extrapolation of the first interval.
    Extrapolated,
}

/// Monotone cubic Hermite interpolant of `ln u` against `ln r`.
struct LogLogInterpolant<T> {
    x: Vec<T>,
    y: Vec<T>,
    d: Vec<T>,
}

impl<T: Real> LogLogInterpolant<T> {
    fn new(profile: &RadialProfile<T>) -> Result<Self> {
        if profile.values.iter().any(|v| !(*v > T::zero())) {
            return Err(Error::domain("log-log interpolation needs positive values"));
        }
        let x: Vec<T> = profile.radii.iter().map(|r| r.ln()).collect();
        let y: Vec<T> = profile.values.iter().map(|v| v.ln()).collect();
        let n = x.len();
        let h: Vec<T> = x.windows(2).map(|w| w[1] - w[0]).collect();
        // the ratio keeps slopes accurate when ln u is large
        let v = &profile.values;
        let delta: Vec<T> = (0..n - 1).map(|i| (v[i + 1] / v[i]).ln() / h[i]).collect();
        let mut d = vec![T::zero(); n];
        for i in 1..n - 1 {
            d[i] = (h[i] * delta[i - 1] + h[i - 1] * delta[i]) / (h[i - 1] + h[i]);
        }
        // one-sided three-point estimates at the ends
        d[0] = ((h[0] + h[0] + h[1]) * delta[0] - h[0] * delta[1]) / (h[0] + h[1]);
        d[n - 1] = ((h[n - 2] + h[n - 2] + h[n - 3]) * delta[n - 2] - h[n - 2] * delta[n - 3]) / (h[n - 2] + h[n - 3]);
        if d[0] * delta[0] < T::zero() {
            d[0] = T::zero();
        }
        if d[n - 1] * delta[n - 2] < T::zero() {
            d[n - 1] = T::zero();
        }
        // Fritsch–Carlson limiting
        for i in 0..n - 1 {
            if delta[i] == T::zero() {
                d[i] = T::zero();
                d[i + 1] = T::zero();
                continue;
            }
            if i > 0 && delta[i - 1] * delta[i] <= T::zero() {
                d[i] = T::zero();
            }
            let alpha = d[i] / delta[i];
            let beta = d[i + 1] / delta[i];
            let norm = alpha * alpha + beta * beta;
            if norm > T::lit(9.0) {
                let s = T::lit(3.0) / norm.sqrt();
                d[i] = s * alpha * delta[i];
                d[i + 1] = s * beta * delta[i];
            }
        }
        Ok(Self { x, y, d })
    }

    fn eval_log(&self, xq: T) -> T {
        let n = self.x.len();
        if xq <= self.x[0] {
            return self.y[0] + self.d[0] * (xq - self.x[0]);
        }
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&xq).unwrap()) {
            Ok(i) => return self.y[i],
            Err(i) => (i - 1).min(n - 2),
        };
        let h = self.x[i + 1] - self.x[i];
        let s = (xq - self.x[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let two = T::lit(2.0);
        let three = T::lit(3.0);
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = three * s2 - two * s3;
        let h11 = s3 - s2;
        h00 * self.y[i] + h10 * h * self.d[i] + h01 * self.y[i + 1] + h11 * h * self.d[i + 1]
    }
}

fn evaluate<T: Real>(profile: &RadialProfile<T>, interp: &LogLogInterpolant<T>, rho: T) -> (T, Source) {
    let r_min = profile.radii[0];
    let r_max = profile.radii[profile.radii.len() - 1];
    if rho > r_max {
        (profile.tail_amplitude * rho.powf(-profile.tail_exponent), Source::Tail)
    } else if rho < r_min {
        (interp.eval_log(rho.ln()).exp(), Source::Extrapolated)
    } else {
        (interp.eval_log(rho.ln()).exp(), Source::Grid)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KelvinResult<T> {
    pub profile: RadialProfile<T>,
    /// Provenance of `u(λ²/rᵢ)` for each radius.
    pub sources: Vec<Source>,
}

impl<T> KelvinResult<T> {
    /// Indices whose preimage radius fell inside the grid.
    pub fn grid_covered(&self) -> impl Iterator<Item = usize> + '_ {
        self.sources.iter().enumerate().filter(|(_, s)| **s == Source::Grid).map(|(i, _)| i)
    }

    pub fn extrapolated(&self) -> impl Iterator<Item = usize> + '_ {
        self.sources.iter().enumerate().filter(|(_, s)| **s == Source::Extrapolated).map(|(i, _)| i)
    }
}

/// `u_λ(r) = (λ/r)^{n-2σ} u(λ²/r)` on the radii of `profile`.
pub fn kelvin_transform<T: Real>(profile: &RadialProfile<T>, params: &ConformalParams<T>, lambda: T) -> Result<KelvinResult<T>> {
    if !(lambda > T::zero() && lambda.is_finite()) {
        return Err(Error::domain("Kelvin radius must be positive"));
    }
    let interp = LogLogInterpolant::new(profile)?;
    let e = params.riesz_exponent();
    let l2 = lambda * lambda;
    let mut values = Vec::with_capacity(profile.radii.len());
    let mut sources = Vec::with_capacity(profile.radii.len());
    for &r in &profile.radii {
        let (u, source) = evaluate(profile, &interp, l2 / r);
        values.push((lambda / r).powf(e) * u);
        sources.push(source);
    }
    // as r → ∞ the image samples u near 0, where the first interval's power law holds
    let r0 = profile.radii[0];
    let d0 = interp.d[0];
    let tail_exponent = e + d0;
    let tail_amplitude = lambda.powf(e) * profile.values[0] * (l2 / r0).powf(d0);
    let profile = RadialProfile::new(profile.radii.clone(), values, tail_exponent, tail_amplitude)?;
    Ok(KelvinResult { profile, sources })
}

/// `min_{rᵢ < λ} (u_λ(rᵢ) - u(rᵢ))`; nonnegative when `u_λ ≥ u` holds on the
/// grid inside the sphere.
pub fn moving_sphere_deficit<T: Real>(profile: &RadialProfile<T>, params: &ConformalParams<T>, lambda: T) -> Result<T> {
    let k = kelvin_transform(profile, params, lambda)?;
    profile
        .radii
        .iter()
        .zip(profile.values.iter().zip(k.profile.values.iter()))
        .filter(|(r, _)| **r < lambda)
        .map(|(_, (u, ul))| *ul - *u)
        .reduce(T::min)
        .ok_or_else(|| Error::domain("no grid radius lies inside the sphere"))
}

/// `min_i (W(r_{i+1}) - W(rᵢ))` with `W = r^{(n-2σ)/2} u`; nonnegative when
/// `W` is nondecreasing along the ray at grid resolution.
pub fn ray_monotonicity_w<T: Real>(profile: &RadialProfile<T>, params: &ConformalParams<T>) -> T {
    let p = params.slow_decay();
    let w: Vec<T> = profile.radii.iter().zip(&profile.values).map(|(r, u)| r.powf(p) * *u).collect();
    w.windows(2).map(|w| w[1] - w[0]).fold(T::infinity(), T::min)
}

/// `(τ^q - 1)/(τ - 1)`, built by the recurrence `s ← τs + 1` from `s = 0`.
pub fn bootstrap_exponent<T: Real>(tau: T, q: u32) -> Result<T> {
    if !(tau > T::one()) || !tau.is_finite() {
        return Err(Error::domain(format!("bootstrap needs tau > 1, got {tau}")));
    }
    if q < 1 {
        return Err(Error::domain("bootstrap needs q >= 1"));
    }
    let mut s = T::zero();
    for _ in 0..q {
        s = tau * s + T::one();
        if !s.is_finite() {
            return Err(Error::Overflow(format!("bootstrap exponent overflows at tau = {tau}, q = {q}")));
        }
    }
    Ok(s)
}
