//! Hamiltonian geodesic flow in the cotangent formulation.
//!
//! `H = ½ g^{μν} Π_μ Π_ν`, with `ẋ^μ = g^{μν}Π_ν` and `Π̇_μ = ½ v^ρ ∂_μ g_{ρσ} v^σ`.

mod charges;
mod hj;
mod integrator;

pub use charges::{
    conserved_quantities, involution_set, killing_charge, poisson_bracket, staeckel_bilinear_fit, staeckel_charge, Charge,
};
pub use hj::{hj_rhs, hj_separation_check, vertical_quadrature_check, HjCheck, VerticalCheck};
pub use integrator::{
    integrate, write_trajectory_csv, ConservationReport, GeodesicRun, IntegratorConfig, QuantityDrift, Truncation,
};

use crate::catalog::IntegrableModel;
use crate::error::Result;
use crate::geometry::{invert4, partials, ChartPoint, Metric};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub x: ChartPoint,
    pub p: [f64; 4],
}

impl PhaseState {
    pub fn new(x: ChartPoint, p: [f64; 4]) -> Self {
        PhaseState { x, p }
    }

    pub(crate) fn to_vec(self) -> [f64; 8] {
        let mut y = [0.0; 8];
        y[..4].copy_from_slice(&self.x);
        y[4..].copy_from_slice(&self.p);
        y
    }

    pub(crate) fn from_vec(y: &[f64; 8]) -> Self {
        let mut s = PhaseState { x: [0.0; 4], p: [0.0; 4] };
        s.x.copy_from_slice(&y[..4]);
        s.p.copy_from_slice(&y[4..]);
        s
    }
}

/// `½ g^{μν} Π_μ Π_ν` from the inverse metric.
pub fn hamiltonian(metric: &Metric, s: &PhaseState) -> Result<f64> {
    let ginv = invert4(&metric.components(&s.x)?)?;
    let mut h = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            h += ginv[i][j] * s.p[i] * s.p[j];
        }
    }
    Ok(0.5 * h)
}

/// Hamilton's equations `(ẋ, Π̇)`.
pub fn hamilton_rhs(metric: &Metric, s: &PhaseState) -> Result<[f64; 8]> {
    let pj = partials(metric, &s.x, 1)?;
    let ginv = invert4(&pj.jet.g)?;
    let mut v = [0.0; 4];
    for i in 0..4 {
        for j in 0..4 {
            v[i] += ginv[i][j] * s.p[j];
        }
    }
    let mut out = [0.0; 8];
    out[..4].copy_from_slice(&v);
    for m in 0..4 {
        let dg = &pj.jet.dg[m];
        let mut acc = 0.0;
        for r in 0..4 {
            for q in 0..4 {
                acc += v[r] * dg[r][q] * v[q];
            }
        }
        out[4 + m] = 0.5 * acc;
    }
    Ok(out)
}

/// The chart expressions for `H` written out for the integrable families.
///
/// Type II: `2H = (1/4l²)(c/u)Π_x² + ε(u/c)Π_t² + (1/c)(Π_y² + (Π_z − yΠ_x)²)`.
/// Type III: `2H = Π_y²/f + (Π_x² + e^{2x}Π_z²)/s² + ε f Π_s²`.
pub fn explicit_hamiltonian(model: &IntegrableModel, s: &PhaseState) -> f64 {
    let [px, py, pz, pt] = s.p;
    match *model {
        IntegrableModel::TypeII { eps, m, l, lambda } => {
            let t = s.x[3];
            let c = t * t - eps * l * l;
            let u = m * t + lambda * (eps * l.powi(4) + 2.0 * l * l * t * t - eps * t.powi(4) / 3.0);
            let y = s.x[1];
            0.5 * ((c / u) * px * px / (4.0 * l * l) + eps * (u / c) * pt * pt + (py * py + (pz - y * px).powi(2)) / c)
        }
        IntegrableModel::TypeIII { eps, gamma0, lambda } => {
            let sv = s.x[3];
            let f = -eps + gamma0 / sv - eps * lambda * sv * sv / 3.0;
            let x = s.x[0];
            0.5 * (py * py / f + (px * px + (2.0 * x).exp() * pz * pz) / (sv * sv) + eps * f * pt * pt)
        }
    }
}

/// The momentum-quadratic Stäckel observable in chart form.
///
/// Type II: `𝒮 = Π_y² + (Π_z − yΠ_x)²`; type III: `𝒮 = Π_x² + e^{2x}Π_z²`.
pub fn explicit_staeckel(model: &IntegrableModel, s: &PhaseState) -> f64 {
    let [px, py, pz, _] = s.p;
    match model {
        IntegrableModel::TypeII { .. } => py * py + (pz - s.x[1] * px).powi(2),
        IntegrableModel::TypeIII { .. } => px * px + (2.0 * s.x[0]).exp() * pz * pz,
    }
}
