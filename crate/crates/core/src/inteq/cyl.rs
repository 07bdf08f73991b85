//! The cylindrical convolution `T[V](t) = K∞ ∫ J(s) V^τ(t-s) ds` on a uniform
//! grid in `t = ln r`, and a fixed-point solver for `V = T[V]`.

use std::fmt::Write as _;

use serde::Serialize;

use super::kernel::kernel_j;
use crate::error::{Error, Result};
use crate::params::ConformalParams;
use crate::quad::{integrate_nodes, Bound, Node, QuadratureSpec};
use crate::scalar::Real;

/// `V(tᵢ)` on the uniform grid `tᵢ = t_min + i·step`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CylProfile<T> {
    t_min: T,
    step: T,
    values: Vec<T>,
}

impl<T: Real> CylProfile<T> {
    pub fn new(t_min: T, step: T, values: Vec<T>) -> Result<Self> {
        if !(step > T::zero()) || !t_min.is_finite() {
            return Err(Error::domain("grid needs a finite origin and positive spacing"));
        }
        if values.len() < 2 {
            return Err(Error::domain("grid needs at least two points"));
        }
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > T::zero())) {
            return Err(Error::domain(format!("profile values must be positive, found {v}")));
        }
        Ok(Self { t_min, step, values })
    }

    pub fn from_fn(t_min: T, step: T, len: usize, f: impl Fn(T) -> T) -> Result<Self> {
        let values = (0..len).map(|i| f(t_min + step * T::int(i as i64))).collect();
        Self::new(t_min, step, values)
    }

    pub fn constant(t_min: T, step: T, len: usize, value: T) -> Result<Self> {
        Self::new(t_min, step, vec![value; len])
    }

    pub fn t_min(&self) -> T {
        self.t_min
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn t(&self, i: usize) -> T {
        self.t_min + self.step * T::int(i as i64)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.t_min == other.t_min && self.step == other.step && self.len() == other.len()
    }

    /// `sup |V - W|` over the grid.
    pub fn sup_distance(&self, other: &Self) -> T {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }

    /// CSV with header `t,V`, 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,V\n");
        for (i, v) in self.values.iter().enumerate() {
            let _ = writeln!(out, "{:.16e},{:.16e}", self.t(i).as_f64(), v.as_f64());
        }
        out
    }
}

/// Precomputed weights of the discrete convolution.
///
/// `V^τ` is represented by hat functions on the grid and extended by its end
/// values beyond it, so every weight is an integral of `J` alone:
/// `H(k) = ∫₀ʰ J(kh - y)(1 - y/h) dy` and the tails `G(a) = ∫ₐ^∞ J`.
#[derive(Debug, Clone)]
pub struct CylOperator<T> {
    params: ConformalParams<T>,
    t_min: T,
    step: T,
    len: usize,
    half_hats: Vec<T>,
    tails: Vec<T>,
}

impl<T: Real> CylOperator<T> {
    pub fn new(params: ConformalParams<T>, t_min: T, step: T, len: usize, spec: &QuadratureSpec<T>) -> Result<Self> {
        if !(step > T::zero()) || len < 2 {
            return Err(Error::domain("grid needs positive spacing and at least two points"));
        }
        let h = step;
        let last = len as i64 - 1;
        let mut failure = None;
        let mut j = |s: T| match kernel_j(&params, s, spec) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                T::zero()
            }
        };

        let mut half_hats = Vec::with_capacity(2 * len - 1);
        for k in -last..=last {
            let kh = T::int(k) * h;
            let r = integrate_nodes(
                |node: Node<T>| {
                    // |kh - y| written without cancellation next to the singular end
                    let s = if k >= 1 {
                        T::int(k - 1) * h + node.to_upper
                    } else {
                        -kh + node.from_lower
                    };
                    j(s) * node.to_upper / h
                },
                T::zero(),
                Bound::Finite(h),
                spec,
            )?;
            half_hats.push(r.value);
        }

        let mut tails = vec![T::zero(); len];
        let far = integrate_nodes(|node: Node<T>| j(node.x), T::int(last) * h, Bound::Infinity, spec)?;
        tails[len - 1] = far.value;
        for k in (0..len - 1).rev() {
            let a = T::int(k as i64) * h;
            let piece = integrate_nodes(|node: Node<T>| j(a + node.from_lower), T::zero(), Bound::Finite(h), spec)?;
            tails[k] = tails[k + 1] + piece.value;
        }
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(Self {
            params,
            t_min,
            step,
            len,
            half_hats,
            tails,
        })
    }

    /// Grid `[-12, 12]` with spacing `0.05`.
    pub fn default_grid(params: ConformalParams<T>, spec: &QuadratureSpec<T>) -> Result<Self> {
        Self::new(params, T::lit(-12.0), T::lit(0.05), 481, spec)
    }

    pub fn params(&self) -> &ConformalParams<T> {
        &self.params
    }

    pub fn t_min(&self) -> T {
        self.t_min
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn half_hat(&self, k: i64) -> T {
        self.half_hats[(k + self.len as i64 - 1) as usize]
    }

    /// Sum of the weights seen by grid point `i`; equals `C(n, σ)` up to
    /// quadrature error.
    pub fn row_mass(&self, i: usize) -> T {
        let ones = vec![T::one(); self.len];
        self.convolve(i, &ones)
    }

    fn convolve(&self, i: usize, w: &[T]) -> T {
        let n = self.len;
        let ii = i as i64;
        let mut acc = w[0] * (self.half_hat(ii) + self.tails[i]);
        for (j, wj) in w.iter().enumerate().take(n - 1).skip(1) {
            let k = ii - j as i64;
            acc = acc + *wj * (self.half_hat(k) + self.half_hat(-k));
        }
        let k = ii - (n as i64 - 1);
        acc + w[n - 1] * (self.half_hat(-k) + self.tails[n - 1 - i])
    }

    /// `T[V]` on the operator's grid.
    pub fn apply(&self, v: &CylProfile<T>, k_infinity: T) -> Result<CylProfile<T>> {
        if v.len() != self.len || v.t_min != self.t_min || v.step != self.step {
            return Err(Error::domain("profile grid does not match the operator grid"));
        }
        if !(k_infinity > T::zero()) {
            return Err(Error::domain("K(inf) must be positive"));
        }
        let tau = self.params.tau();
        let w: Vec<T> = v.values.iter().map(|x| x.powf(tau)).collect();
        let values = (0..self.len).map(|i| k_infinity * self.convolve(i, &w)).collect();
        CylProfile::new(self.t_min, self.step, values)
    }
}

/// `T[V]` for a one-off profile; builds the operator on the profile's grid.
pub fn cyl_apply<T: Real>(
    params: &ConformalParams<T>,
    v: &CylProfile<T>,
    k_infinity: T,
    spec: &QuadratureSpec<T>,
) -> Result<CylProfile<T>> {
    CylOperator::new(*params, v.t_min, v.step, v.len(), spec)?.apply(v, k_infinity)
}

/// The constant fixed point `A = (K∞·C)^{-1/(τ-1)}`.
pub fn constant_fixed_point<T: Real>(params: &ConformalParams<T>, k_infinity: T, mass: T) -> Result<T> {
    if !(k_infinity > T::zero()) || !(mass > T::zero()) {
        return Err(Error::domain("K(inf) and the kernel mass must be positive"));
    }
    Ok((k_infinity * mass).powf(-(params.tau() - T::one()).recip()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UpdateRule {
    /// `V ← (1-θ)V + θ·T[V]`.
    Picard,
    /// `V ← (1-θ)V + θ·V·(V/T[V])^{1/(τ-1)}`, which inverts the scaling
    /// `T[λV] = λ^τ T[V]` pointwise.
    Rescaled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FixedPointOptions<T> {
    pub damping: T,
    pub max_iters: usize,
    pub tol: T,
    pub update: UpdateRule,
}

impl<T: Real> Default for FixedPointOptions<T> {
    fn default() -> Self {
        Self {
            damping: T::lit(0.5),
            max_iters: 500,
            tol: T::lit(1e-10),
            update: UpdateRule::Rescaled,
        }
    }
}

/// Sup-norm residual `|T[V] - V|` per iteration.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ConvergenceLog<T> {
    pub residuals: Vec<T>,
}

impl<T: Real> ConvergenceLog<T> {
    /// First iteration (1-based) whose residual is below `level`.
    pub fn first_below(&self, level: T) -> Option<usize> {
        self.residuals.iter().position(|r| *r < level).map(|i| i + 1)
    }

    /// CSV with header `iter,residual`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,residual\n");
        for (i, r) in self.residuals.iter().enumerate() {
            let _ = writeln!(out, "{},{:.16e}", i + 1, r.as_f64());
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct FixedPointSolution<T> {
    pub profile: CylProfile<T>,
    pub log: ConvergenceLog<T>,
}

#[derive(Debug, Clone, thiserror::Error)]
#[error("{error}")]
pub struct FixedPointFailure<T: Real> {
    pub error: Error,
    pub last: CylProfile<T>,
    pub log: ConvergenceLog<T>,
}

const GROWTH_LIMIT: usize = 50;

fn run_away<T: Real>(log: &ConvergenceLog<T>) -> Error {
    Error::NonConvergence {
        what: "cylindrical fixed-point iteration (iterate left the positive finite profiles)",
        best: log.residuals.iter().copied().fold(T::infinity(), T::min).as_f64(),
        err_estimate: log.residuals.last().copied().unwrap_or(T::infinity()).as_f64(),
    }
}

/// Damped iteration for `V = T[V]`.
///
/// Stops when the residual drops below `tol`; fails after `GROWTH_LIMIT`
/// consecutive residual increases or when `max_iters` is exhausted.
pub fn solve_fixed_point<T: Real>(
    op: &CylOperator<T>,
    k_infinity: T,
    initial: CylProfile<T>,
    options: &FixedPointOptions<T>,
) -> Result<FixedPointSolution<T>, Box<FixedPointFailure<T>>> {
    let theta = options.damping;
    let fail = |error, last, log| Box::new(FixedPointFailure { error, last, log });
    if !(theta > T::zero() && theta <= T::one()) || options.max_iters == 0 || !(options.tol > T::zero()) {
        return Err(fail(
            Error::domain("damping must lie in (0, 1], max_iters >= 1, tol > 0"),
            initial,
            ConvergenceLog::default(),
        ));
    }
    let exponent = (op.params.tau() - T::one()).recip();
    let mut v = initial;
    let mut log = ConvergenceLog::default();
    let mut growing = 0;
    for _ in 0..options.max_iters {
        let tv = match op.apply(&v, k_infinity) {
            Ok(tv) => tv,
            Err(e) if log.residuals.is_empty() => return Err(fail(e, v, log)),
            // T[V] overflowed after valid iterates
            Err(_) => return Err(fail(run_away(&log), v, log)),
        };
        debug_assert!(tv.same_grid(&v));
        let residual = tv.sup_distance(&v);
        if let Some(prev) = log.residuals.last() {
            growing = if residual > *prev { growing + 1 } else { 0 };
        }
        log.residuals.push(residual);
        if residual < options.tol {
            return Ok(FixedPointSolution { profile: v, log });
        }
        if !residual.is_finite() || growing >= GROWTH_LIMIT {
            let best = log.residuals.iter().copied().fold(T::infinity(), T::min);
            let error = Error::NonConvergence {
                what: "cylindrical fixed-point iteration (diverging)",
                best: best.as_f64(),
                err_estimate: residual.as_f64(),
            };
            return Err(fail(error, v, log));
        }
        let values = v
            .values
            .iter()
            .zip(&tv.values)
            .map(|(&x, &y)| {
                let target = match options.update {
                    UpdateRule::Picard => y,
                    UpdateRule::Rescaled => x * (x / y).powf(exponent),
                };
                (T::one() - theta) * x + theta * target
            })
            .collect();
        v = match CylProfile::new(v.t_min, v.step, values) {
            Ok(next) => next,
            // the update left the positive finite profiles: the iteration ran away
            Err(_) => return Err(fail(run_away(&log), v, log)),
        };
    }
    let error = Error::NonConvergence {
        what: "cylindrical fixed-point iteration",
        best: log.residuals.iter().copied().fold(T::infinity(), T::min).as_f64(),
        err_estimate: log.residuals.last().copied().unwrap_or(T::infinity()).as_f64(),
    };
    Err(fail(error, v, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inteq::kernel::kernel_mass;
    use std::f64::consts::PI;
    use std::sync::OnceLock;

    fn spec() -> QuadratureSpec<f64> {
        QuadratureSpec::default()
    }

    fn operator() -> &'static CylOperator<f64> {
        static OP: OnceLock<CylOperator<f64>> = OnceLock::new();
        OP.get_or_init(|| CylOperator::default_grid(ConformalParams::new(3, 0.5).unwrap(), &spec()).unwrap())
    }

    fn constant(value: f64) -> CylProfile<f64> {
        CylProfile::constant(-12.0, 0.05, 481, value).unwrap()
    }

    #[test]
    fn row_mass_matches_kernel_mass() {
        let op = operator();
        for i in [0, 7, 240, 480] {
            assert!((op.row_mass(i) / PI.powi(3) - 1.0).abs() < 1e-8, "row {i}");
        }
    }

    #[test]
    fn constant_is_fixed() {
        let op = operator();
        let a = constant_fixed_point(op.params(), 1.0, PI.powi(3)).unwrap();
        let out = op.apply(&constant(a), 1.0).unwrap();
        assert!(out.sup_distance(&constant(a)) <= 1e-6 * a);
    }

    #[test]
    fn small_constant_maps_below_itself() {
        let op = operator();
        let eps = 1e-3;
        let out = op.apply(&constant(eps), 1.0).unwrap();
        let want = PI.powi(3) * eps * eps;
        assert!(out.values().iter().all(|v| (v / want - 1.0).abs() < 1e-8 && *v < eps));
    }

    #[test]
    fn translation_equivariance() {
        let op = operator();
        let bump = |t: f64| 0.03 * (1.0 + 0.5 * (-t * t).exp());
        let v = CylProfile::from_fn(-12.0, 0.05, 481, bump).unwrap();
        let shifted = CylProfile::from_fn(-12.0, 0.05, 481, |t| bump(t - 0.05)).unwrap();
        let tv = op.apply(&v, 1.0).unwrap();
        let tw = op.apply(&shifted, 1.0).unwrap();
        for i in 100..380 {
            let d = (tw.values()[i + 1] - tv.values()[i]).abs();
            assert!(d <= 1e-10 * tv.values()[i], "i = {i}");
        }
    }

    #[test]
    fn converges_from_perturbed_constant() {
        let op = operator();
        let a = PI.powi(-3);
        let sol = solve_fixed_point(op, 1.0, constant(1.1 * a), &FixedPointOptions::default()).unwrap();
        assert!(sol.log.first_below(1e-4).unwrap() <= 500);
        for v in sol.profile.values() {
            assert!((v / a - 1.0).abs() < 1e-4);
        }
    }

    #[test]
    fn exact_start_is_immediately_converged() {
        let op = operator();
        let a = constant_fixed_point(op.params(), 1.0, kernel_mass(op.params(), &spec()).unwrap()).unwrap();
        let options = FixedPointOptions { tol: 1e-6, ..FixedPointOptions::default() };
        let sol = solve_fixed_point(op, 1.0, constant(a), &options).unwrap();
        assert_eq!(sol.log.residuals.len(), 1);
    }

    #[test]
    fn scaling_in_k_infinity() {
        let op = operator();
        let a = PI.powi(-3);
        let lam: f64 = 2.0;
        let one = solve_fixed_point(op, 1.0, constant(1.1 * a), &FixedPointOptions::default()).unwrap();
        let scaled_a = a * lam.powf(-1.0);
        let two = solve_fixed_point(op, lam, constant(1.1 * scaled_a), &FixedPointOptions::default()).unwrap();
        for (x, y) in one.profile.values().iter().zip(two.profile.values()) {
            assert!((y / (x * lam.powf(-1.0)) - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn plain_picard_runs_away_from_the_constant() {
        let op = operator();
        let a = PI.powi(-3);
        let options = FixedPointOptions {
            update: UpdateRule::Picard,
            ..FixedPointOptions::default()
        };
        let err = solve_fixed_point(op, 1.0, constant(1.1 * a), &options).unwrap_err();
        assert!(matches!(err.error, Error::NonConvergence { .. }));
        assert!(err.log.residuals.windows(2).take(20).all(|w| w[1] > w[0]));
    }

    #[test]
    fn csv_layout() {
        let v = CylProfile::constant(0.0, 0.5, 2, 1.0).unwrap();
        assert_eq!(v.to_csv(), "t,V\n0.0000000000000000e0,1.0000000000000000e0\n5.0000000000000000e-1,1.0000000000000000e0\n");
    }
}
