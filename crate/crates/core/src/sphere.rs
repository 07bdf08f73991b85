use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfun::gamma;

/// Surface area `|𝕊ⁿ⁻¹| = 2π^{n/2}/Γ(n/2)` of the unit sphere in `ℝⁿ`.
pub fn sphere_area<T: Real>(n: u32) -> Result<T> {
    if n < 1 {
        return Err(Error::domain("sphere_area needs n >= 1"));
    }
    let half = T::int(n as i64) / T::lit(2.0);
    Ok(T::lit(2.0) * T::PI().powf(half) / gamma(half)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::beta;
    use std::f64::consts::PI;

    #[test]
    fn low_dimensions() {
        assert!((sphere_area::<f64>(1).unwrap() - 2.0).abs() < 1e-14);
        assert!((sphere_area::<f64>(2).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area::<f64>(3).unwrap() - 4.0 * PI).abs() < 1e-14);
        assert!((sphere_area::<f64>(5).unwrap() / (8.0 * PI * PI / 3.0) - 1.0).abs() < 1e-14);
        assert!((sphere_area::<f64>(6).unwrap() / PI.powi(3) - 1.0).abs() < 1e-14);
        assert!(sphere_area::<f64>(0).is_err());
    }

    #[test]
    fn recurrence_through_beta() {
        for n in 1..40u32 {
            let lhs = sphere_area::<f64>(n + 1).unwrap();
            let rhs = sphere_area::<f64>(n).unwrap() * beta(0.5, n as f64 / 2.0).unwrap();
            assert!((lhs / rhs - 1.0).abs() < 1e-12, "n = {n}");
        }
    }
}
