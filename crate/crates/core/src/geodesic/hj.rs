//! Hamilton–Jacobi separation and quadrature cross-checks.

use super::integrator::{integrate, IntegratorConfig};
use super::{explicit_staeckel, hamiltonian, PhaseState};
use crate::catalog::{FamilyMetric, IntegrableModel};
use crate::error::{Error, Result};
use crate::geometry::invert4;
use crate::quad;
use serde::Serialize;

/// `(dA/dt)²` from the separated Hamilton–Jacobi equation with `S = Et + px + qz + A(t)`
/// (type II) or `S = Es + py + qz + A(s)` (type III).
///
/// Type II: `ε(u/c)(A')² = 2E − (c/u)p²/(4l²) − 𝒮/c`.
/// Type III: `(A')² = ε(2E/f − 𝒮/(s²f) − p²/f²)`.
pub fn hj_rhs(model: &IntegrableModel, energy: f64, p: f64, staeckel: f64, t: f64) -> f64 {
    match *model {
        IntegrableModel::TypeII { eps, m, l, lambda } => {
            let c = t * t - eps * l * l;
            let u = m * t + lambda * (eps * l.powi(4) + 2.0 * l * l * t * t - eps * t.powi(4) / 3.0);
            eps * (c / u) * (2.0 * energy - (c / u) * p * p / (4.0 * l * l) - staeckel / c)
        }
        IntegrableModel::TypeIII { eps, gamma0, lambda } => {
            let f = -eps + gamma0 / t - eps * lambda * t * t / 3.0;
            eps * (2.0 * energy / f - staeckel / (t * t * f) - p * p / (f * f))
        }
    }
}

/// The separated constants `(E, p, q, 𝒮)` of a phase point.
fn separation_constants(fm: &FamilyMetric, model: &IntegrableModel, s: &PhaseState) -> Result<(f64, f64, f64, f64)> {
    let e = hamiltonian(&fm.metric, s)?;
    let (p, q) = match model {
        IntegrableModel::TypeII { .. } => (s.p[0], s.p[2]),
        IntegrableModel::TypeIII { .. } => (s.p[1], s.p[2]),
    };
    Ok((e, p, q, explicit_staeckel(model, s)))
}

#[derive(Clone, Debug, Serialize)]
pub struct HjCheck {
    pub energy: f64,
    pub p: f64,
    pub q: f64,
    pub staeckel: f64,
    /// Largest `| |Π_t| − |dA/dt| |` along the trajectory.
    pub max_momentum_mismatch: f64,
    /// `(t, A(t))` by quadrature of `|dA/dt|` from the initial `t`.
    pub action: Vec<(f64, f64)>,
    /// Extremes of the evolution coordinate reached by the trajectory.
    pub t_range: (f64, f64),
    /// Roots of `(dA/dt)²` inside the chart interval, sorted.
    pub turning_points: Vec<f64>,
    /// Values of the evolution coordinate where `Π_t` changes sign along the
    /// trajectory, located by bisection on the affine parameter.
    pub trajectory_turns: Vec<f64>,
    pub truncated: bool,
}

/// Roots of `(dA/dt)²` on `(lo, hi)` by scanning and bisection.
pub fn turning_points(model: &IntegrableModel, e: f64, p: f64, st: f64, lo: f64, hi: f64) -> Vec<f64> {
    let n = 4000;
    let f = |t: f64| hj_rhs(model, e, p, st, t);
    let mut out = Vec::new();
    let mut prev = (lo, f(lo));
    for i in 1..=n {
        let t = lo + (hi - lo) * i as f64 / n as f64;
        let v = f(t);
        if prev.1.is_finite() && v.is_finite() && prev.1.signum() != v.signum() {
            let (mut a, mut b) = (prev.0, t);
            let fa = prev.1;
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if (f(m) > 0.0) == (fa > 0.0) {
                    a = m;
                } else {
                    b = m;
                }
            }
            out.push(0.5 * (a + b));
        }
        prev = (t, v);
    }
    out
}

/// Integrates the geodesic from `initial` and compares `Π_t` (or `Π_s`) with the
/// separated `dA/dt` along it.
pub fn hj_separation_check(fm: &FamilyMetric, initial: PhaseState, span: f64, cfg: &IntegratorConfig) -> Result<HjCheck> {
    let model = fm.integrable.ok_or_else(|| Error::Parameter(format!("{} is not separable here", fm.family)))?;
    let (e, p, q, st) = separation_constants(fm, &model, &initial)?;
    let run = integrate(&fm.metric, initial, span, cfg, &[])?;
    let mut mismatch = 0.0f64;
    let mut tmin = f64::INFINITY;
    let mut tmax = f64::NEG_INFINITY;
    for (_, s) in &run.trajectory {
        let t = s.x[3];
        tmin = tmin.min(t);
        tmax = tmax.max(t);
        let rhs = hj_rhs(&model, e, p, st, t);
        let pt = s.p[3];
        let scale = 1.0 + pt * pt;
        if rhs < -1e-8 * scale {
            return Err(Error::ForbiddenRegion { location: t, value: rhs });
        }
        let rhs = rhs.max(0.0);
        let d = (pt * pt - rhs).abs() / (pt.abs() + rhs.sqrt()).max(1e-300);
        mismatch = mismatch.max(d);
    }
    let mut turns = Vec::new();
    for w in run.trajectory.windows(2) {
        let ((l0, a), (l1, b)) = (w[0], w[1]);
        if a.p[3] != 0.0 && a.p[3].signum() != b.p[3].signum() {
            let (mut lo, mut hi) = (0.0, l1 - l0);
            let mut at = a;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let r = integrate(&fm.metric, a, mid, cfg, &[])?;
                at = r.end().1;
                if at.p[3].signum() == a.p[3].signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            turns.push(at.x[3]);
        }
    }
    let t0 = initial.x[3];
    let action = run
        .trajectory
        .iter()
        .map(|(_, s)| {
            let t = s.x[3];
            let (a, _) = quad::integrate(|u| hj_rhs(&model, e, p, st, u).max(0.0).sqrt(), t0, t, 1e-12, 1e-10);
            (t, a)
        })
        .collect();
    let iv = &fm.interval;
    let (lo, hi) = (
        if iv.lo.is_finite() { iv.lo + 1e-9 * (1.0 + iv.lo.abs()) } else { tmin - 10.0 },
        if iv.hi.is_finite() { iv.hi - 1e-9 * (1.0 + iv.hi.abs()) } else { tmax + 10.0 },
    );
    Ok(HjCheck {
        energy: e,
        p,
        q,
        staeckel: st,
        max_momentum_mismatch: mismatch,
        action,
        t_range: (tmin, tmax),
        turning_points: turning_points(&model, e, p, st, lo, hi),
        trajectory_turns: turns,
        truncated: run.truncated.is_some(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerticalCheck {
    pub affine: f64,
    pub affine_from_quadrature: f64,
    /// `|Δλ| · |ṫ|` at the endpoint: the position error implied by the mismatch.
    pub position_error: f64,
}

/// A geodesic with `Π_x = Π_y = Π_z = 0` moves in `t` alone, with
/// `λ(t) = ∫ dt / √(2E g^{tt})`. Compares the integrator with that quadrature.
pub fn vertical_quadrature_check(
    fm: &FamilyMetric,
    t0: f64,
    pt: f64,
    span: f64,
    cfg: &IntegratorConfig,
) -> Result<VerticalCheck> {
    let metric = &fm.metric;
    let gtt = |t: f64| -> Result<f64> { Ok(invert4(&metric.components(&[0.0, 0.0, 0.0, t])?)?[3][3]) };
    let s0 = PhaseState::new([0.0, 0.0, 0.0, t0], [0.0, 0.0, 0.0, pt]);
    let e = hamiltonian(metric, &s0)?;
    let run = integrate(metric, s0, span, cfg, &[])?;
    let (lam, s1) = *run.end();
    for (_, s) in &run.trajectory {
        if s.x[..3].iter().any(|v| v.abs() > 1e-12) {
            return Err(Error::Integration("vertical geodesic left the t-axis".into()));
        }
    }
    let t1 = s1.x[3];
    let bad = std::cell::RefCell::new(None);
    let (lq, _) = quad::integrate(
        |t| match gtt(t) {
            Ok(g) => 1.0 / (2.0 * e * g).sqrt(),
            Err(err) => {
                *bad.borrow_mut() = Some(err.to_string());
                f64::NAN
            }
        },
        t0,
        t1,
        1e-13,
        1e-12,
    );
    if let Some(m) = bad.into_inner() {
        return Err(Error::Integration(m));
    }
    let tdot = gtt(t1)? * s1.p[3];
    Ok(VerticalCheck {
        affine: lam.abs(),
        affine_from_quadrature: lq.abs(),
        position_error: (lq.abs() - lam.abs()).abs() * tdot.abs(),
    })
}
