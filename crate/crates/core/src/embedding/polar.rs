//! Local analysis of the complete type III metric near the double-root end u = 2.
//!
//! With ε = 1, λ < 0 and γ₀ = −(2/3)/√|λ| the metric is
//! `(1/|λ|)[u²(σ₁²+σ₃²) + |λ|h dy² + du²/h]`, `u = √|λ| s`, `h = (u−2)(u+1)²/(3u)`.
//! Setting `u = 2 + 3ξ²/8` and `ỹ = (3/4)√|λ| y` gives
//! `(1/|λ|)[4(σ₁²+σ₃²) + ξ²dỹ² + dξ²]` to leading order.

use crate::catalog::{build_with, Family, FamilyMetric};
use crate::error::{Error, Result};
use crate::quad;
use serde::Serialize;
use std::f64::consts::PI;

/// `h(u)/(u−2)`, finite at the root.
fn h_over_gap(u: f64) -> f64 {
    (u + 1.0).powi(2) / (3.0 * u)
}

/// `h` at `u = 2 + gap`, without forming `u − 2` in floating point.
fn h_at_gap(gap: f64) -> f64 {
    gap * h_over_gap(2.0 + gap)
}

fn h(u: f64) -> f64 {
    h_at_gap(u - 2.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarSample {
    pub xi: f64,
    pub u: f64,
    /// Largest relative deviation of `g_ξξ`, `g_ỹỹ`, `g_xx` from the local model.
    pub deviation: f64,
    /// Circumference over radius of the `ỹ ∈ [0, 2π]` circle at this `ξ`.
    pub cone_angle: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolarReport {
    pub lambda: f64,
    pub gamma0: f64,
    /// Period of `y` that makes `ỹ` 2π-periodic: `8π/(3√|λ|)`.
    pub y_period: f64,
    pub samples: Vec<PolarSample>,
    /// Least-squares slope of `log deviation` against `log ξ`.
    pub deviation_slope: f64,
    /// Cone angle at the smallest `ξ`.
    pub cone_angle: f64,
    /// Deviation at `ξ = 1`, where the expansion should no longer hold.
    pub far_deviation: f64,
    /// Largest relative gap between the catalog metric and the factored form used here.
    pub catalog_agreement: f64,
}

/// Radial proper distance from u = 2 in units of `1/√|λ|`, integrated in
/// `w = √(u−2)` so the integrand stays smooth at the root.
fn radius(gap: f64) -> f64 {
    let f = |w: f64| 2.0 / h_over_gap(2.0 + w * w).sqrt();
    quad::integrate(f, 0.0, gap.sqrt(), 1e-15, 1e-14).0
}

fn sample(lambda: f64, y_period: f64, xi: f64) -> PolarSample {
    let a = lambda.abs();
    let gap = 3.0 * xi * xi / 8.0;
    let u = 2.0 + gap;
    // |λ|·g in the (ξ, ỹ) chart divided by the local model.
    let dudxi = 0.75 * xi;
    let hu = h_at_gap(gap);
    let g_xi = dudxi * dudxi / hu;
    let g_yt = hu * 16.0 / 9.0 / (xi * xi);
    let g_x = u * u / 4.0;
    let deviation = [g_xi, g_yt, g_x].iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let circumference = y_period * (a * hu).sqrt();
    PolarSample { xi, u, deviation, cone_angle: circumference / radius(gap) }
}

/// The complete type III metric the check refers to.
pub fn polar_source(lambda: f64) -> Result<FamilyMetric> {
    if lambda >= 0.0 {
        return Err(Error::Parameter(format!("the complete metric needs lambda < 0, got {lambda}")));
    }
    let s0 = 3.0 / lambda.abs().sqrt();
    build_with(
        Family::Bianchi3,
        &[("epsilon", 1.0), ("gamma0", -(2.0 / 3.0) / lambda.abs().sqrt()), ("lambda", lambda), ("t0", s0)],
    )
}

pub fn polar_regularity_check(lambda: f64) -> Result<PolarReport> {
    let fm = polar_source(lambda)?;
    let a = lambda.abs();
    let y_period = 8.0 * PI / (3.0 * a.sqrt());
    let samples: Vec<PolarSample> = [1e-2, 1e-3, 1e-4].iter().map(|&xi| sample(lambda, y_period, xi)).collect();
    let n = samples.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = samples.iter().map(|s| (s.xi.ln(), s.deviation.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    // Compare with the catalog away from the root, where its unfactored f is well conditioned.
    let mut agreement = 0.0f64;
    for u in [2.1, 2.5, 4.0] {
        let s = u / a.sqrt();
        let g = fm.metric.components(&[0.2, -0.1, 0.3, s])?;
        agreement = agreement
            .max((g[1][1] / h(u) - 1.0).abs())
            .max((g[3][3] * h(u) - 1.0).abs())
            .max((g[0][0] * a / (u * u) - 1.0).abs());
    }
    Ok(PolarReport {
        lambda,
        gamma0: -(2.0 / 3.0) / a.sqrt(),
        y_period,
        cone_angle: samples.last().map(|s| s.cone_angle).unwrap_or(f64::NAN),
        deviation_slope: cov / var,
        samples,
        far_deviation: sample(lambda, y_period, 1.0).deviation,
        catalog_agreement: agreement,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_matches_xi_to_leading_order() {
        assert!((radius(3.0 * 1e-6 / 8.0) / 1e-3 - 1.0).abs() < 1e-5);
    }
}
