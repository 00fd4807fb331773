use serde::Serialize;

use crate::error::{Error, Result};

/// The parameter pair `(x, y)` with every derived quantity the experiments
/// share.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SmoothContext {
    pub x: u64,
    pub y: u64,
    /// `log x / log y`
    pub u: f64,
    /// `u + log y / log(u + 2)`
    pub u_y: f64,
    /// `(log log y)^{sqrt(log log log y)}`, clamped to 1 where the iterated
    /// logarithms are not positive.
    pub phi_y: f64,
    /// Exponent `θ` with `Y = y^θ`; defaults to `1 / phi_y`.
    pub trunc_exponent: f64,
    /// Truncation point `max(2, floor(y^θ))`, never above `y`.
    pub big_y: u64,
}

impl SmoothContext {
    pub fn new(x: u64, y: u64) -> Result<Self> {
        Self::with_trunc_exponent(x, y, None)
    }

    pub fn with_trunc_exponent(x: u64, y: u64, trunc_exponent: Option<f64>) -> Result<Self> {
        if y < 2 {
            return Err(Error::InvalidParams(format!("y = {y} must be >= 2")));
        }
        if x < y {
            return Err(Error::InvalidParams(format!("x = {x} must be >= y = {y}")));
        }
        let phi_y = phi(y);
        let theta = trunc_exponent.unwrap_or(1.0 / phi_y);
        if !(theta > 0.0 && theta <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "truncation exponent {theta} must lie in (0, 1]"
            )));
        }
        let lx = (x as f64).ln();
        let ly = (y as f64).ln();
        let u = lx / ly;
        Ok(SmoothContext {
            x,
            y,
            u,
            u_y: u + ly / (u + 2.0).ln(),
            phi_y,
            trunc_exponent: theta,
            big_y: truncation_point(y, theta),
        })
    }

    pub fn log_x(&self) -> f64 {
        (self.x as f64).ln()
    }

    pub fn log_y(&self) -> f64 {
        (self.y as f64).ln()
    }

    /// `log log y`, the centering and scale used by the limit law.
    pub fn loglog_y(&self) -> f64 {
        self.log_y().ln()
    }
}

/// `(log log y)^{sqrt(log log log y)}`; equals 1 for `y <= e^e`.
pub fn phi(y: u64) -> f64 {
    let ll = (y as f64).ln().ln();
    if ll <= 1.0 {
        return 1.0;
    }
    ll.powf(ll.ln().sqrt())
}

fn truncation_point(y: u64, theta: f64) -> u64 {
    let target = (y as f64).powf(theta);
    let mut t = target.floor() as u64;
    // Guard against `y^θ` landing a hair under an integer.
    if ((t + 1) as f64) <= target * (1.0 + 1e-12) {
        t += 1;
    }
    t.clamp(2, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_fields() {
        let c = SmoothContext::new(100_000_000, 10_000).unwrap();
        assert!((c.u - 2.0).abs() < 1e-12);
        let ly = 10_000f64.ln();
        assert!((c.u_y - (2.0 + ly / 4f64.ln())).abs() < 1e-12);
        let ll = ly.ln();
        assert!((c.phi_y - ll.powf(ll.ln().sqrt())).abs() < 1e-12);
        assert_eq!(c.big_y, (10_000f64.powf(1.0 / c.phi_y)).floor() as u64);
        assert!(c.big_y <= c.y);
    }

    #[test]
    fn small_y_clamps() {
        let c = SmoothContext::new(10, 2).unwrap();
        assert_eq!(c.phi_y, 1.0);
        assert_eq!(c.big_y, 2);
        assert!((c.u - 10f64.ln() / 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn override_exponent() {
        let c = SmoothContext::with_trunc_exponent(1_000_000, 1000, Some(0.5)).unwrap();
        assert_eq!(c.big_y, 31);
        let c = SmoothContext::with_trunc_exponent(1_000_000, 1024, Some(0.5)).unwrap();
        assert_eq!(c.big_y, 32);
        assert!(SmoothContext::with_trunc_exponent(10, 5, Some(0.0)).is_err());
    }

    #[test]
    fn rejects_bad_pairs() {
        assert!(SmoothContext::new(10, 1).is_err());
        assert!(SmoothContext::new(5, 10).is_err());
        assert!(SmoothContext::new(10, 10).is_ok());
    }
}
