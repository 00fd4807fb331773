use serde::Serialize;

use crate::error::{Error, Result};

/// Relative tolerance on `e^ξ − 1 − uξ`, scaled by `1 + uξ`.
pub const XI_TOLERANCE: f64 = 1e-12;

/// Positive root of `e^ξ = 1 + uξ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct XiValue {
    pub u: f64,
    pub xi: f64,
    /// `log(u log u)`, defined for `u > 1`.
    pub xi_asymptotic: Option<f64>,
    /// `|e^ξ − 1 − uξ|` at the returned root.
    pub residual: f64,
    /// `u = 1`: the only root is `ξ = 0`.
    pub degenerate: bool,
}

impl XiValue {
    /// The logarithmic asymptotic is only asserted for `u >= 3`.
    pub fn asymptotic_applies(&self) -> bool {
        self.u >= 3.0
    }
}

fn g(xi: f64, u: f64) -> f64 {
    xi.exp_m1() - u * xi
}

pub fn solve_xi(u: f64) -> Result<XiValue> {
    if !u.is_finite() || u < 1.0 {
        return Err(Error::Domain(format!("xi(u) needs u >= 1, got {u}")));
    }
    if u == 1.0 {
        return Ok(XiValue {
            u,
            xi: 0.0,
            xi_asymptotic: None,
            residual: 0.0,
            degenerate: true,
        });
    }
    // g < 0 on (0, ξ) and g > 0 beyond; g(ξ) ≈ ξ(ξ/2 − (u − 1)) near 0.
    let mut lo = 1e-9f64.min(u - 1.0);
    let mut hi = 3.0 * (u + 2.0).ln();
    let (g_lo, g_hi) = (g(lo, u), g(hi, u));
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::Bracket {
            what: "xi",
            lo,
            hi,
            f_lo: g_lo,
            f_hi: g_hi,
        });
    }
    while hi - lo > 1e-4 * hi {
        let mid = 0.5 * (lo + hi);
        if g(mid, u) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut xi = 0.5 * (lo + hi);
    for _ in 0..100 {
        let gv = g(xi, u);
        if gv == 0.0 {
            break;
        }
        if gv < 0.0 {
            lo = xi;
        } else {
            hi = xi;
        }
        let d = xi.exp() - u;
        let mut next = xi - gv / d;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - xi).abs() <= 4.0 * f64::EPSILON * xi {
            xi = next;
            break;
        }
        xi = next;
    }
    Ok(XiValue {
        u,
        xi,
        xi_asymptotic: Some((u * u.ln()).ln()),
        residual: g(xi, u).abs(),
        degenerate: false,
    })
}
