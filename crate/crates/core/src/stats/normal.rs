use libm::erfc;

/// Standard normal distribution function.
pub fn phi_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Standard normal density.
pub fn phi_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// `∫ t^k dΦ(t)`: zero for odd `k`, `(k − 1)!!` for even `k`.
pub fn gaussian_moment(k: u32) -> f64 {
    if k % 2 == 1 {
        return 0.0;
    }
    (1..k).step_by(2).map(f64::from).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Composite Simpson rule for `∫_{-40}^{z} φ`.
    fn quadrature(z: f64) -> f64 {
        let a = -40.0;
        let n = 200_000;
        let h = (z - a) / n as f64;
        let mut s = phi_pdf(a) + phi_pdf(z);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * phi_pdf(a + i as f64 * h);
        }
        s * h / 3.0
    }

    #[test]
    fn symmetry() {
        assert_eq!(phi_cdf(0.0), 0.5);
        for z in [0.1, 0.5, 1.0, 1.96, 3.0, 6.0] {
            assert!((phi_cdf(z) + phi_cdf(-z) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn against_quadrature() {
        for z in [-3.0, -1.0, 0.3, 1.0, 1.96, 2.5] {
            assert!((phi_cdf(z) - quadrature(z)).abs() < 1e-10, "z={z}");
        }
        // High-precision reference values.
        let reference = [
            (1.96, 0.975_002_104_851_779_6),
            (-1.0, 0.158_655_253_931_457_05),
            (2.5, 0.993_790_334_674_223_9),
            (-3.0, 0.001_349_898_031_630_094_5),
            (-6.0, 9.865_876_450_376_981e-10),
        ];
        for (z, want) in reference {
            assert!((phi_cdf(z) - want).abs() < 1e-15, "z={z}");
        }
    }

    #[test]
    fn moments() {
        assert_eq!(gaussian_moment(0), 1.0);
        assert_eq!(gaussian_moment(1), 0.0);
        assert_eq!(gaussian_moment(2), 1.0);
        assert_eq!(gaussian_moment(4), 3.0);
        assert_eq!(gaussian_moment(6), 15.0);
        assert_eq!(gaussian_moment(7), 0.0);
    }

    #[test]
    fn sixth_moment_by_quadrature() {
        let n = 100_000;
        let (a, b) = (-20.0f64, 20.0f64);
        let h = (b - a) / n as f64;
        let f = |t: f64| t.powi(6) * phi_pdf(t);
        let mut s = f(a) + f(b);
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            s += w * f(a + i as f64 * h);
        }
        assert!((s * h / 3.0 - 15.0).abs() < 1e-9);
    }
}
