//! Parameters of the critical equation `(-Δ)^σ u = K u^τ` on `ℝⁿ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dimension `n`, order `σ ∈ (0, n/2)` and the quantities derived from them.
///
/// `tau = (n+2σ)/(n-2σ)` and `b = 1-2σ` are computed once at construction.
/// `m` is set exactly when `σ` is a positive integer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConformalParams<T> {
    n: u32,
    sigma: T,
    tau: T,
    b: T,
    m: Option<u32>,
}

impl<T: Real> ConformalParams<T> {
    pub fn new(n: u32, sigma: T) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("dimension n = {n} must be at least 2")));
        }
        let nf = T::from_u32(n).unwrap();
        if !sigma.is_finite() || sigma <= T::zero() || sigma >= nf / T::lit(2.0) {
            return Err(Error::domain(format!(
                "order sigma = {sigma} must lie in (0, n/2) = (0, {})",
                nf / T::lit(2.0)
            )));
        }
        let two_sigma = sigma + sigma;
        let tau = (nf + two_sigma) / (nf - two_sigma);
        let m = if sigma.fract() == T::zero() {
            sigma.to_u32()
        } else {
            None
        };
        Ok(Self {
            n,
            sigma,
            tau,
            b: T::one() - two_sigma,
            m,
        })
    }

    /// Integer order `σ = m` (polyharmonic case), requires `2m < n`.
    pub fn integer(n: u32, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("integer order m must be positive"));
        }
        if 2 * m >= n {
            return Err(Error::domain(format!("integer order needs 2m < n, got n = {n}, m = {m}")));
        }
        Self::new(n, T::from_u32(m).unwrap())
    }

    /// Order restricted to `σ ∈ (0, 1)`, the range of the weighted extension.
    pub fn fractional(n: u32, sigma: T) -> Result<Self> {
        let p = Self::new(n, sigma)?;
        p.require_fractional()?;
        Ok(p)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `n` as a scalar.
    pub fn dim(&self) -> T {
        T::from_u32(self.n).unwrap()
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn m(&self) -> Option<u32> {
        self.m
    }

    /// `n - 2σ`, the exponent of the Riesz kernel `|x|^{-(n-2σ)}`.
    pub fn riesz_exponent(&self) -> T {
        self.dim() - self.sigma - self.sigma
    }

    /// `(n - 2σ)/2`, the decay exponent of the singular profile `|x|^{-(n-2σ)/2}`.
    pub fn slow_decay(&self) -> T {
        self.riesz_exponent() / T::lit(2.0)
    }

    /// `2n/(n - 2σ)`, the power appearing in the Pohozaev and Kazdan–Warner integrals.
    pub fn energy_exponent(&self) -> T {
        (self.dim() + self.dim()) / self.riesz_exponent()
    }

    pub fn require_integer(&self) -> Result<u32> {
        self.m
            .ok_or_else(|| Error::domain(format!("operation needs an integer order, got sigma = {}", self.sigma)))
    }

    pub fn require_fractional(&self) -> Result<()> {
        if self.sigma < T::one() {
            Ok(())
        } else {
            Err(Error::domain(format!("operation needs sigma in (0, 1), got sigma = {}", self.sigma)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn derived_quantities() {
        let p = ConformalParams::<f64>::new(3, 0.5).unwrap();
        assert_eq!(p.tau(), 2.0);
        assert_eq!(p.b(), 0.0);
        assert_eq!(p.m(), None);
        assert_eq!(p.slow_decay(), 1.0);
        assert_eq!(p.energy_exponent(), 3.0);

        let q = ConformalParams::<f64>::integer(9, 2).unwrap();
        assert_eq!(q.m(), Some(2));
        assert_eq!(q.tau(), 13.0 / 5.0);
        // sigma passed as a float that happens to be integral also sets m
        assert_eq!(ConformalParams::<f64>::new(7, 3.0).unwrap().m(), Some(3));
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(ConformalParams::<f64>::new(1, 0.2).is_err());
        assert!(ConformalParams::<f64>::new(3, 0.0).is_err());
        assert!(ConformalParams::<f64>::new(3, 1.5).is_err());
        assert!(ConformalParams::<f64>::new(3, f64::NAN).is_err());
        assert!(ConformalParams::<f64>::integer(4, 2).is_err());
        assert!(ConformalParams::<f64>::fractional(5, 1.25).is_err());
        assert!(ConformalParams::<f64>::new(5, 0.5).unwrap().require_integer().is_err());
    }

    proptest! {
        #[test]
        fn tau_is_recomputable(n in 2u32..40, frac in 0.001f64..0.999) {
            let sigma = frac * n as f64 / 2.0;
            let p = ConformalParams::new(n, sigma).unwrap();
            let nf = n as f64;
            prop_assert!(p.tau() > 1.0);
            prop_assert_eq!(p.tau(), (nf + 2.0 * sigma) / (nf - 2.0 * sigma));
            if let Some(m) = p.m() {
                prop_assert_eq!(m as f64, sigma);
                prop_assert!(2 * m < n);
            }
        }
    }
}
