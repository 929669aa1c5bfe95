//! Dormand–Prince 5(4) with adaptive steps and chart-exit truncation.

use super::charges::Charge;
use super::{hamilton_rhs, PhaseState};
use crate::error::{Error, Result};
use crate::geometry::Metric;
use serde::{Deserialize, Serialize};
use std::path::Path;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_steps: usize,
    /// Initial step as a fraction of the span.
    pub initial_fraction: f64,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { abs_tol: 1e-10, rel_tol: 1e-10, max_steps: 200_000, initial_fraction: 1e-3 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct QuantityDrift {
    pub name: String,
    pub initial: f64,
    pub max_abs_drift: f64,
    /// Drift over `max(|initial|, 1)`.
    pub relative_drift: f64,
    /// Relative drift per unit affine parameter.
    pub drift_rate: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConservationReport {
    pub quantities: Vec<QuantityDrift>,
    pub affine_start: f64,
    pub affine_end: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl ConservationReport {
    pub fn worst_relative_drift(&self) -> f64 {
        self.quantities.iter().fold(0.0, |a, q| a.max(q.relative_drift))
    }

    pub fn get(&self, name: &str) -> Option<&QuantityDrift> {
        self.quantities.iter().find(|q| q.name == name)
    }
}

/// The flow left the chart before the requested span was covered.
#[derive(Clone, Debug, Serialize)]
pub struct Truncation {
    pub affine: f64,
    pub reason: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct GeodesicRun {
    /// `(affine parameter, state)` at every accepted step, endpoints included.
    pub trajectory: Vec<(f64, PhaseState)>,
    pub report: ConservationReport,
    pub truncated: Option<Truncation>,
}

impl GeodesicRun {
    pub fn end(&self) -> &(f64, PhaseState) {
        self.trajectory.last().expect("trajectory holds the initial state")
    }
}

fn rhs(metric: &Metric, y: &[f64; 8]) -> Result<[f64; 8]> {
    let s = PhaseState::from_vec(y);
    if !metric.contains(&s.x) {
        return Err(Error::OutsideDomain(s.x));
    }
    let out = hamilton_rhs(metric, &s)?;
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::Integration(format!("non-finite derivative at {:?}", s.x)));
    }
    Ok(out)
}

/// One DP5 step from `y` with derivative `k0`. Returns the new state, its
/// derivative and the error estimate vector.
fn step(metric: &Metric, y: &[f64; 8], k0: &[f64; 8], h: f64) -> Result<([f64; 8], [f64; 8], [f64; 8])> {
    let mut k = [[0.0; 8]; 7];
    k[0] = *k0;
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for i in 0..8 {
                    ys[i] += h * a * kj[i];
                }
            }
        }
        debug_assert!(C[s] > 0.0);
        k[s] = rhs(metric, &ys)?;
    }
    let mut ynew = *y;
    let mut err = [0.0; 8];
    for (j, kj) in k.iter().enumerate() {
        for i in 0..8 {
            if j < 6 {
                ynew[i] += h * A[6][j] * kj[i];
            }
            err[i] += h * E[j] * kj[i];
        }
    }
    let knew = rhs(metric, &ynew)?;
    Ok((ynew, knew, err))
}

fn error_norm(err: &[f64; 8], y0: &[f64; 8], y1: &[f64; 8], cfg: &IntegratorConfig) -> f64 {
    let mut acc = 0.0;
    for i in 0..8 {
        let sc = cfg.abs_tol + cfg.rel_tol * y0[i].abs().max(y1[i].abs());
        acc += (err[i] / sc).powi(2);
    }
    (acc / 8.0).sqrt()
}

/// Integrates Hamilton's equations over `[λ₀, λ₀ + span]` (span may be negative)
/// and monitors the given charges.
///
/// When the flow leaves the chart the step is bisected down to the exit
/// parameter and the run is reported as truncated.
pub fn integrate(
    metric: &Metric,
    initial: PhaseState,
    span: f64,
    cfg: &IntegratorConfig,
    charges: &[Charge],
) -> Result<GeodesicRun> {
    if !(cfg.abs_tol > 0.0 && cfg.rel_tol > 0.0) {
        return Err(Error::Config("integrator tolerances must be positive".into()));
    }
    if span == 0.0 || !span.is_finite() {
        return Err(Error::Config(format!("affine span must be finite and nonzero, got {span}")));
    }
    let mut y = initial.to_vec();
    let mut k = rhs(metric, &y)?;
    let dir = span.signum();
    let end = span.abs();
    let mut lam = 0.0;
    let mut h = (cfg.initial_fraction * end).max(1e-8);
    let mut traj = vec![(0.0, initial)];
    let init: Vec<f64> = charges.iter().map(|c| c.eval(&initial)).collect();
    let mut drift = vec![0.0f64; charges.len()];
    let (mut accepted, mut rejected) = (0usize, 0usize);
    let mut truncated = None;
    while lam < end {
        if accepted + rejected >= cfg.max_steps {
            return Err(Error::Integration(format!("step budget {} exhausted at affine {}", cfg.max_steps, dir * lam)));
        }
        let hh = h.min(end - lam);
        match step(metric, &y, &k, dir * hh) {
            Ok((ynew, knew, err)) => {
                let en = error_norm(&err, &y, &ynew, cfg);
                if en <= 1.0 {
                    lam += hh;
                    y = ynew;
                    k = knew;
                    accepted += 1;
                    let s = PhaseState::from_vec(&y);
                    for (i, c) in charges.iter().enumerate() {
                        drift[i] = drift[i].max((c.eval(&s) - init[i]).abs());
                    }
                    traj.push((dir * lam, s));
                } else {
                    rejected += 1;
                }
                let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
                h = hh * if en <= 1.0 { fac } else { fac.min(1.0) };
            }
            Err(e) => {
                rejected += 1;
                if hh <= 1e-12 * end.max(1.0) {
                    truncated = Some(Truncation { affine: dir * lam, reason: e.to_string() });
                    break;
                }
                // Bisect toward the exit parameter.
                h = 0.5 * hh;
            }
        }
    }
    let covered = lam.max(f64::MIN_POSITIVE);
    let quantities = charges
        .iter()
        .zip(init.iter().zip(drift.iter()))
        .map(|(c, (&q0, &d))| {
            let rel = d / q0.abs().max(1.0);
            QuantityDrift { name: c.name.clone(), initial: q0, max_abs_drift: d, relative_drift: rel, drift_rate: rel / covered }
        })
        .collect();
    Ok(GeodesicRun {
        trajectory: traj,
        report: ConservationReport {
            quantities,
            affine_start: 0.0,
            affine_end: dir * lam,
            accepted_steps: accepted,
            rejected_steps: rejected,
        },
        truncated,
    })
}

/// One CSV row per accepted step: affine parameter, coordinates, momenta, charges.
pub fn write_trajectory_csv(path: &Path, run: &GeodesicRun, charges: &[Charge]) -> Result<()> {
    let io = |e: csv::Error| Error::Io { path: path.display().to_string(), message: e.to_string() };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    let mut header: Vec<String> =
        ["affine", "x0", "x1", "x2", "x3", "p0", "p1", "p2", "p3"].iter().map(|s| s.to_string()).collect();
    header.extend(charges.iter().map(|c| c.name.clone()));
    w.write_record(&header).map_err(io)?;
    for (lam, s) in &run.trajectory {
        let mut row = vec![format!("{lam:.17e}")];
        row.extend(s.x.iter().chain(s.p.iter()).map(|v| format!("{v:.17e}")));
        row.extend(charges.iter().map(|c| format!("{:.17e}", c.eval(s))));
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::Io { path: path.display().to_string(), message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Domain, Signature};

    fn flat() -> Metric {
        let inf = f64::INFINITY;
        Metric::diagonal(
            "flat",
            Signature::Euclidean,
            ["a", "b", "c", "d"],
            Domain::new([-inf; 4], [inf; 4], [-1.0; 4], [1.0; 4]),
            |_| Ok([crate::jet::Jet::cst(1.0); 4]),
        )
    }

    #[test]
    fn straight_lines_in_flat_space() {
        let m = flat();
        let s = PhaseState::new([0.0, 1.0, 2.0, 3.0], [0.5, -0.25, 1.0, 0.0]);
        let run = integrate(&m, s, 4.0, &IntegratorConfig::default(), &[]).unwrap();
        let (lam, e) = run.end();
        assert!((lam - 4.0).abs() < 1e-14);
        assert!((e.x[0] - 2.0).abs() < 1e-12 && (e.x[1] - 0.0).abs() < 1e-12 && (e.x[2] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn harmonic_momentum_on_a_round_metric() {
        // Polar plane dr² + r²dθ²: angular momentum conserved, r_min = L/|p|.
        let inf = f64::INFINITY;
        let m = Metric::diagonal(
            "polar",
            Signature::Euclidean,
            ["r", "th", "z", "w"],
            Domain::new([0.0, -inf, -inf, -inf], [inf; 4], [0.5, -1.0, -1.0, -1.0], [2.0, 1.0, 1.0, 1.0]),
            |x| Ok([crate::jet::Jet::cst(1.0), x[0] * x[0], crate::jet::Jet::cst(1.0), crate::jet::Jet::cst(1.0)]),
        );
        let s = PhaseState::new([2.0, 0.0, 0.0, 0.0], [-1.0, 1.0, 0.0, 0.0]);
        let run = integrate(&m, s, 4.0, &IntegratorConfig::default(), &[]).unwrap();
        let rmin = run.trajectory.iter().map(|(_, s)| s.x[0]).fold(f64::INFINITY, f64::min);
        // L = 1, |p|² = 1 + 1/4 → r_min = 1/√(5/4)
        assert!((rmin - (0.8f64).sqrt()).abs() < 1e-6);
        assert!(run.trajectory.iter().all(|(_, s)| (s.p[1] - 1.0).abs() < 1e-12));
    }

    #[test]
    fn exit_is_truncation() {
        let inf = f64::INFINITY;
        let m = Metric::diagonal(
            "half",
            Signature::Euclidean,
            ["a", "b", "c", "d"],
            Domain::new([-inf, -inf, -inf, 0.0], [inf; 4], [-1.0; 4], [1.0; 4]),
            |_| Ok([crate::jet::Jet::cst(1.0); 4]),
        );
        let s = PhaseState::new([0.0, 0.0, 0.0, 1.0], [0.0, 0.0, 0.0, -1.0]);
        let run = integrate(&m, s, 5.0, &IntegratorConfig::default(), &[]).unwrap();
        let t = run.truncated.expect("leaves through d = 0");
        assert!((t.affine - 1.0).abs() < 1e-9, "{}", t.affine);
    }

    #[test]
    fn bad_config() {
        let cfg = IntegratorConfig { abs_tol: 0.0, ..Default::default() };
        let s = PhaseState::new([0.0; 4], [1.0, 0.0, 0.0, 0.0]);
        assert!(matches!(integrate(&flat(), s, 1.0, &cfg, &[]), Err(Error::Config(_))));
    }
}
