//! The weighted Poisson extension for `σ ∈ (0, 1)`.
//!
//! `U(x, t) = (𝒫_σ * u)(x, t)` with `𝒫_σ(x, t) = β t^{2σ} (|x|² + t²)^{-(n+2σ)/2}`
//! solves `Δ_b U = 0` in the upper half-space, `b = 1 - 2σ`. For the singular
//! profile `u₀ = M₀|x|^{-(n-2σ)/2}`
//!
//! `U₀ = C₀ M₀ r^{-(n-2σ)/2} ₂F₁(a, a; n/2; z)`, `a = (n-2σ)/4`,
//! `r² = |x|² + t²`, `z = |x|²/r²`.
//!
//! Points are radial in `x`: a point is `(|x|, t)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fraclap::c2;
use crate::params::ConformalParams;
use crate::quad::{integrate, integrate_power_weight, Bound, QuadratureSpec};
use crate::scalar::Real;
use crate::specfun::{gamma, hyp2f1, hyp2f1_deriv, Hyp2F1Args};
use crate::sphere::sphere_area;

/// A point of the upper half-space with the extension value there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtensionSample<T> {
    pub r: T,
    pub t: T,
    /// `|x|²/r²`.
    pub z: T,
    pub value: T,
}

/// `C₀ = Γ²((n+2σ)/4) / (Γ(n/2)Γ(σ))`.
pub fn c0<T: Real>(params: &ConformalParams<T>) -> Result<T> {
    params.require_fractional()?;
    let g = gamma((params.dim() + params.sigma() + params.sigma()) / T::lit(4.0))?;
    Ok(g * g / (gamma(params.dim() / T::lit(2.0))? * gamma(params.sigma())?))
}

/// `β(n, σ) = (2/|𝕊ⁿ⁻¹|) Γ(n/2 + σ) / (Γ(n/2)Γ(σ))`.
pub fn beta_constant<T: Real>(params: &ConformalParams<T>) -> Result<T> {
    params.require_fractional()?;
    let half_n = params.dim() / T::lit(2.0);
    let sigma = params.sigma();
    Ok(T::lit(2.0) / sphere_area::<T>(params.n())? * gamma(half_n + sigma)? / (gamma(half_n)? * gamma(sigma)?))
}

/// `β |𝕊ⁿ⁻¹| ∫₀^∞ ρⁿ⁻¹ (ρ² + 1)^{-(n+2σ)/2} dρ`, which is 1.
pub fn beta_normalization<T: Real>(params: &ConformalParams<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    let k = (params.dim() + params.sigma() + params.sigma()) / T::lit(2.0);
    let radial = radial_beta(params.n(), k, spec)?;
    Ok(beta_constant(params)? * sphere_area::<T>(params.n())? * radial)
}

/// `∫₀^∞ qⁿ⁻¹ (q² + 1)^{-k} dq` by quadrature; equals `B(n/2, k - n/2)/2`.
pub fn radial_beta<T: Real>(n: u32, k: T, spec: &QuadratureSpec<T>) -> Result<T> {
    let nf = T::from_u32(n).unwrap();
    if !(k > nf / T::lit(2.0)) {
        return Err(Error::Divergence(format!("radial integral needs k > n/2, got k = {k}")));
    }
    let one = T::one();
    let r = integrate(
        |q: T| {
            if q <= one {
                q.powi(n as i32 - 1) * (q * q + one).powf(-k)
            } else {
                let inv = q.recip();
                q.powf(nf - one - k - k) * (inv * inv + one).powf(-k)
            }
        },
        T::zero(),
        Bound::Infinity,
        spec,
    )?;
    Ok(r.value)
}

fn check_point<T: Real>(x: T, t: T) -> Result<()> {
    if !(x >= T::zero() && t >= T::zero() && x.is_finite() && t.is_finite()) || (x == T::zero() && t == T::zero()) {
        return Err(Error::domain(format!("extension point (|x|, t) = ({x}, {t}) must be a nonzero point with t >= 0")));
    }
    Ok(())
}

/// `(r, z, 1 - z)` at `(|x|, t)`.
fn similarity<T: Real>(x: T, t: T) -> (T, T, T) {
    let r2 = x * x + t * t;
    (r2.sqrt(), x * x / r2, t * t / r2)
}

fn family<T: Real>(params: &ConformalParams<T>, z: T, w: T) -> Result<Hyp2F1Args<T>> {
    let a = params.riesz_exponent() / T::lit(4.0);
    Hyp2F1Args::with_complement(a, a, params.dim() / T::lit(2.0), z, w)
}

/// `U₀(x, t)` from the hypergeometric closed form.
pub fn bubble_extension_closed<T: Real>(params: &ConformalParams<T>, m0: T, x: T, t: T, spec: &QuadratureSpec<T>) -> Result<T> {
    Ok(bubble_extension_sample(params, m0, x, t, spec)?.value)
}

pub fn bubble_extension_sample<T: Real>(
    params: &ConformalParams<T>,
    m0: T,
    x: T,
    t: T,
    spec: &QuadratureSpec<T>,
) -> Result<ExtensionSample<T>> {
    check_point(x, t)?;
    let (r, z, w) = similarity(x, t);
    let f = hyp2f1(family(params, z, w)?, spec)?;
    let value = c0(params)? * m0 * r.powf(-params.slow_decay()) * f;
    Ok(ExtensionSample { r, t, z, value })
}

/// `U₀(x, t)` by quadrature of the convolution, independently of `₂F₁`.
///
/// With `μ = (n+2σ)/2`, `ν = (n-2σ)/4` the Feynman parametrization of
/// `(|x-y|² + t²)^{-μ} |y|^{-2ν}` and the radial integral in `y` leave
/// `β M₀ t^{2σ} Γ(μ+ν)/(Γ(μ)Γ(ν)) |𝕊ⁿ⁻¹| R ∫₀¹ s^{(n+2σ)/4-1}(1-s)^{ν-1}((1-s)|x|² + t²)^{-(n+2σ)/4} ds`
/// where `R = ∫₀^∞ qⁿ⁻¹(q²+1)^{-(μ+ν)} dq`.
pub fn bubble_extension_quadrature<T: Real>(params: &ConformalParams<T>, m0: T, x: T, t: T, spec: &QuadratureSpec<T>) -> Result<T> {
    params.require_fractional()?;
    check_point(x, t)?;
    if t == T::zero() {
        return Err(Error::domain("the convolution oracle needs t > 0"));
    }
    let n = params.dim();
    let sigma = params.sigma();
    let two_sigma = sigma + sigma;
    let mu = (n + two_sigma) / T::lit(2.0);
    let nu = (n - two_sigma) / T::lit(4.0);
    let k = mu + nu;
    let q = (n + two_sigma) / T::lit(4.0);
    let one = T::one();
    let half = T::lit(0.5);
    let (x2, t2) = (x * x, t * t);
    let left = integrate_power_weight(q, half, |s| (one - s).powf(nu - one) * ((one - s) * x2 + t2).powf(-q), spec)?;
    // v = 1 - s
    let right = integrate_power_weight(nu, half, |v| (one - v).powf(q - one) * (v * x2 + t2).powf(-q), spec)?;
    let feynman = gamma(k)? / (gamma(mu)? * gamma(nu)?);
    let radial = sphere_area::<T>(params.n())? * radial_beta(params.n(), k, spec)?;
    Ok(beta_constant(params)? * m0 * t.powf(two_sigma) * feynman * radial * (left + right))
}

/// `Δ_b U = U_xx + ((n-1)/|x|)U_x + U_tt + (b/t)U_t` at `(|x|, t)` by central
/// differences of step `h`; needs `|x| > 2h` and `t > 2h`.
pub fn weighted_laplacian_fd<T: Real, F>(params: &ConformalParams<T>, mut field: F, x: T, t: T, h: T) -> Result<T>
where
    F: FnMut(T, T) -> Result<T>,
{
    let two = T::lit(2.0);
    if !(h > T::zero() && t > two * h && x > two * h) {
        return Err(Error::domain(format!("step h = {h} must satisfy 0 < 2h < min(|x|, t) = {}", x.min(t))));
    }
    let c = field(x, t)?;
    let (xp, xm) = (field(x + h, t)?, field(x - h, t)?);
    let (tp, tm) = (field(x, t + h)?, field(x, t - h)?);
    let h2 = h * h;
    let uxx = (xp - two * c + xm) / h2;
    let ux = (xp - xm) / (two * h);
    let utt = (tp - two * c + tm) / h2;
    let ut = (tp - tm) / (two * h);
    let nm1 = params.dim() - T::one();
    Ok(uxx + nm1 / x * ux + utt + params.b() / t * ut)
}

/// `Δ_b U₀` by finite differences of the closed form. The hypergeometric
/// values should be accurate to well below `h²`, so a tight spec is advised.
pub fn weighted_laplacian_residual<T: Real>(
    params: &ConformalParams<T>,
    m0: T,
    x: T,
    t: T,
    h: T,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    params.require_fractional()?;
    weighted_laplacian_fd(params, |xx, tt| bubble_extension_closed(params, m0, xx, tt, spec), x, t, h)
}

/// `-t^{1-2σ} ∂_t U₀(x, t) = C₀M₀ r^{-(n-2σ)/2-2} t^{2-2σ} ((n-2σ)/2 F(z) + 2z F'(z))`.
pub fn neumann_quotient<T: Real>(params: &ConformalParams<T>, m0: T, x: T, t: T, spec: &QuadratureSpec<T>) -> Result<T> {
    params.require_fractional()?;
    check_point(x, t)?;
    if t == T::zero() {
        return Err(Error::domain("the Neumann quotient is evaluated at t > 0"));
    }
    let (r, z, w) = similarity(x, t);
    let args = family(params, z, w)?;
    let f = hyp2f1(args, spec)?;
    let fp = hyp2f1_deriv(args, spec)?;
    let e = params.slow_decay();
    let two = T::lit(2.0);
    let sigma = params.sigma();
    Ok(c0(params)? * m0 * r.powf(-e - two) * t.powf(two - sigma - sigma) * (e * f + two * z * fp))
}

/// `t = 0.1·|x|·2^{-k}`, `k = 0..len`.
pub fn neumann_ladder<T: Real>(x: T, len: usize) -> Vec<T> {
    (0..len).map(|k| T::lit(0.1) * x * T::lit(0.5).powi(k as i32)).collect()
}

/// Limit of the Neumann quotient as `t → 0`, extrapolated from the values at
/// `t_sequence` (strictly decreasing, at least four points) with the
/// correction powers `t^{2-2σ}, t², t^{4-2σ}, t⁴` (as many as the points allow).
pub fn neumann_trace<T: Real>(params: &ConformalParams<T>, m0: T, x: T, t_sequence: &[T], spec: &QuadratureSpec<T>) -> Result<T> {
    if t_sequence.len() < 4 {
        return Err(Error::domain("Neumann trace needs at least four t values"));
    }
    if !(t_sequence[t_sequence.len() - 1] > T::zero()) || t_sequence.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::domain("t values must be positive and strictly decreasing"));
    }
    let values = t_sequence
        .iter()
        .map(|&t| neumann_quotient(params, m0, x, t, spec))
        .collect::<Result<Vec<T>>>()?;
    let two = T::lit(2.0);
    let sigma = params.sigma();
    let powers = [two - sigma - sigma, two, T::lit(4.0) - sigma - sigma, T::lit(4.0)];
    let k = (t_sequence.len() - 1).min(powers.len());
    let full = extrapolate(t_sequence, &values, &powers[..k])?;
    let coarse = extrapolate(&t_sequence[1..], &values[1..], &powers[..k - 1])?;
    let err = (full - coarse).abs();
    if !(err <= T::lit(1e-3) * full.abs()) {
        return Err(Error::NonConvergence {
            what: "Neumann trace extrapolation",
            best: full.as_f64(),
            err_estimate: err.as_f64(),
        });
    }
    Ok(full)
}

/// Value at `t = 0` of `g(t) = g₀ + Σ cⱼ t^{pⱼ}` fitted through the last
/// `powers.len() + 1` samples.
pub fn extrapolate<T: Real>(ts: &[T], values: &[T], powers: &[T]) -> Result<T> {
    let k = powers.len() + 1;
    if ts.len() < k || values.len() != ts.len() {
        return Err(Error::domain("extrapolation needs one more sample than correction powers"));
    }
    let ts = &ts[ts.len() - k..];
    let values = &values[values.len() - k..];
    let scale = ts[0];
    let mut a: Vec<Vec<T>> = ts
        .iter()
        .zip(values)
        .map(|(&t, &v)| {
            let mut row = vec![T::one()];
            row.extend(powers.iter().map(|&p| (t / scale).powf(p)));
            row.push(v);
            row
        })
        .collect();
    solve_augmented(&mut a)?;
    Ok(a[0][k])
}

/// Gaussian elimination with partial pivoting on an augmented `k × (k+1)`
/// matrix; the solution is left in the last column.
fn solve_augmented<T: Real>(a: &mut [Vec<T>]) -> Result<()> {
    let k = a.len();
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col] == T::zero() {
            return Err(Error::domain("extrapolation abscissae are degenerate"));
        }
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for (row, line) in a.iter_mut().enumerate() {
            if row != col {
                let f = line[col] / pivot_row[col];
                for (x, &v) in line.iter_mut().zip(&pivot_row).skip(col) {
                    *x = *x - f * v;
                }
            }
        }
    }
    for (row, line) in a.iter_mut().enumerate() {
        line[k] = line[k] / line[row];
    }
    Ok(())
}

/// `2C₀M₀ Γ(n/2)Γ(1-σ)/Γ²((n-2σ)/4) · |x|^{-(n+2σ)/2}`.
pub fn neumann_trace_closed<T: Real>(params: &ConformalParams<T>, m0: T, x: T) -> Result<T> {
    params.require_fractional()?;
    let a = params.riesz_exponent() / T::lit(4.0);
    let ga = gamma(a)?;
    let g = gamma(params.dim() / T::lit(2.0))? * gamma(T::one() - params.sigma())? / (ga * ga);
    let e = (params.dim() + params.sigma() + params.sigma()) / T::lit(2.0);
    Ok(T::lit(2.0) * c0(params)? * m0 * g * x.powf(-e))
}

/// Which Gamma factor enters the extension constant `N_{n,σ}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationVariant {
    /// `Γ(1-σ)`, as produced by the trace computation.
    GammaOneMinusSigma,
    /// `Γ(σ)`, as in the final displayed formula.
    GammaSigma,
}

/// `N_{n,σ} = 2 (C₀/C₂) Γ(n/2) Γ(·) / Γ²((n-2σ)/4)`.
pub fn n_constant<T: Real>(params: &ConformalParams<T>, variant: NormalizationVariant) -> Result<T> {
    params.require_fractional()?;
    let a = params.riesz_exponent() / T::lit(4.0);
    let ga = gamma(a)?;
    let g = match variant {
        NormalizationVariant::GammaOneMinusSigma => gamma(T::one() - params.sigma())?,
        NormalizationVariant::GammaSigma => gamma(params.sigma())?,
    };
    Ok(T::lit(2.0) * c0(params)? / c2(params)? * gamma(params.dim() / T::lit(2.0))? * g / (ga * ga))
}

/// The measured `N_{n,σ}` and its distance to both candidate formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalizationVerdict<T> {
    /// `trace / ((-Δ)^σ u₀)(x)`.
    pub measured: T,
    pub gamma_one_minus_sigma: T,
    pub gamma_sigma: T,
    pub rel_error_one_minus_sigma: T,
    pub rel_error_sigma: T,
    pub chosen: NormalizationVariant,
}

/// Measures `N_{n,σ}` from the extrapolated Neumann trace at `(|x|, ·)` and
/// compares with both formulas. At `σ = 1/2` they coincide, so the verdict
/// is only informative for `σ ≠ 1/2`.
pub fn n_constant_verdict<T: Real>(params: &ConformalParams<T>, x: T, spec: &QuadratureSpec<T>) -> Result<NormalizationVerdict<T>> {
    let trace = neumann_trace(params, T::one(), x, &neumann_ladder(x, 4), spec)?;
    let frac = c2(params)? * x.powf(-(params.dim() + params.sigma() + params.sigma()) / T::lit(2.0));
    let measured = trace / frac;
    let a = n_constant(params, NormalizationVariant::GammaOneMinusSigma)?;
    let b = n_constant(params, NormalizationVariant::GammaSigma)?;
    let ea = (measured / a - T::one()).abs();
    let eb = (measured / b - T::one()).abs();
    let chosen = if ea <= eb {
        NormalizationVariant::GammaOneMinusSigma
    } else {
        NormalizationVariant::GammaSigma
    };
    Ok(NormalizationVerdict {
        measured,
        gamma_one_minus_sigma: a,
        gamma_sigma: b,
        rel_error_one_minus_sigma: ea,
        rel_error_sigma: eb,
        chosen,
    })
}
