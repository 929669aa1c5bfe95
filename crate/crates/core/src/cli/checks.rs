//! The verification checks, each reduced to a worst residual over the grid.

use super::config::{Check, RunConfig};
use super::report::{CheckReport, Status};
use crate::catalog::{Family, FamilyMetric};
use crate::ellipticfn::elliptic_selftest;
use crate::embedding::{
    check_map, desitter_map, flatten_type3, flatten_type5, has_printed_variant, polar_regularity_check, product_split_check,
    product_split_map, product_split_source, DesitterSource, EmbeddingCheck, MapVariant,
};
use crate::error::{Error, Result};
use crate::geodesic::{conserved_quantities, integrate, Charge, GeodesicRun, IntegratorConfig, PhaseState};
use crate::geometry::{
    einstein_residual, mat3_max_abs, np_weyl_scalars, petrov_classify, petrov_from_scalars, selfdual_decompose,
    symmetric_eigenvalues, ChartPoint, PetrovTolerance, PetrovType, Signature,
};
use crate::sampling;
use crate::symmetry::{
    complex_structure_residual, exterior_derivative_residual, killing_residual, killing_yano_residual, ks_residual,
    tensor_difference, yano_square, KillingStaeckelField,
};
use rayon::prelude::*;
use std::f64::consts::PI;

/// Largest value of `f` over the points and where it occurs. A NaN wins, and
/// ties keep the earliest point, so the result does not depend on scheduling.
pub fn worst_over<F>(points: &[ChartPoint], f: F) -> Result<(f64, Option<ChartPoint>)>
where
    F: Fn(&ChartPoint) -> Result<f64> + Sync,
{
    let vals: Vec<Result<f64>> = points.par_iter().map(&f).collect();
    let mut worst = (0.0f64, None);
    for (x, v) in points.iter().zip(vals) {
        let v = v?;
        if worst.1.is_none() || v > worst.0 || (v.is_nan() && !worst.0.is_nan()) {
            worst = (v, Some(*x));
        }
        if v.is_nan() {
            break;
        }
    }
    Ok(worst)
}

fn graded(points: &[ChartPoint], tol: f64, f: impl Fn(&ChartPoint) -> Result<f64> + Sync) -> Result<CheckReport> {
    let (w, at) = worst_over(points, f)?;
    Ok(CheckReport::graded(w, at.map(|p| p.to_vec()), tol, points.len()))
}

pub fn run_check(check: Check, fm: &FamilyMetric, points: &[ChartPoint], cfg: &RunConfig) -> Result<CheckReport> {
    let tol = cfg.tolerance(check, Some(fm.family));
    match check {
        Check::Einstein => graded(points, tol, |x| einstein_residual(&fm.metric, x, fm.lambda)),
        Check::Weyl => weyl(fm, points, tol),
        Check::Petrov => petrov(fm, points, tol),
        Check::Killing => graded(points, tol, |x| {
            let mut w = 0.0f64;
            for k in &fm.killing {
                w = w.max(killing_residual(k, &fm.metric, x)?);
            }
            Ok(w)
        })
        .map(|r| r.with_detail("fields", fm.killing.iter().map(|k| k.label.clone()).collect::<Vec<_>>())),
        Check::Yano => yano(fm, points, tol),
        Check::Ks => match &fm.staeckel {
            Some(s) => graded(points, tol, |x| ks_residual(s, &fm.metric, x)),
            None => Ok(CheckReport::flagged("no Killing-Stäckel tensor catalogued for this family", tol)),
        },
        Check::Ode => ode(fm, points, tol),
        Check::Embedding => embedding_for_family(fm, points, tol),
        Check::Geodesic => Ok(geodesic(fm, points, cfg, tol)?.0),
        Check::EllipticSelftest => elliptic(tol),
    }
}

fn weyl(fm: &FamilyMetric, points: &[ChartPoint], tol: f64) -> Result<CheckReport> {
    if fm.expected_weyl.is_some() {
        return graded(points, tol, |x| {
            let b = selfdual_decompose(&fm.metric, x)?;
            let (wp, wm) = fm.expected_weyl_at(x).expect("checked above");
            let mut d = 0.0f64;
            for (got, want) in [(b.weyl_plus(), wp), (b.weyl_minus(), wm)] {
                for i in 0..3 {
                    for j in 0..3 {
                        d = d.max((got[i][j] - want[i][j]).abs());
                    }
                }
            }
            let scale = mat3_max_abs(&wp).max(mat3_max_abs(&wm));
            Ok(if scale > 1e-12 { d / scale } else { d })
        })
        .map(|r| r.with_note("relative to the largest closed-form entry"));
    }
    if let (Some(axis), Some(psi2)) = (fm.null_axis, fm.expected_psi2.as_ref()) {
        return graded(points, tol, |x| {
            let s = np_weyl_scalars(&fm.metric, x, axis)?.get(2);
            let want = psi2(x);
            Ok(((s.re - want).abs() + s.im.abs()) / want.abs().max(1e-300))
        })
        .map(|r| r.with_note("Psi2 against its closed form, relative"));
    }
    Ok(CheckReport::flagged("no closed-form Weyl data for this family", tol))
}

/// Per-point label and the margin by which coincident eigenvalues (or vanishing
/// scalars) coincide.
fn petrov_at(fm: &FamilyMetric, x: &ChartPoint, ptol: PetrovTolerance) -> Result<(String, f64, bool)> {
    if fm.metric.signature == Signature::Lorentzian {
        let s = np_weyl_scalars(&fm.metric, x, fm.null_axis.unwrap_or(1))?;
        let p = petrov_from_scalars(&s, ptol);
        let all = s.all();
        let scale = all.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        let margin = match p.kind {
            PetrovType::O => scale,
            PetrovType::D => [0, 1, 3, 4].iter().fold(0.0f64, |a, &k| a.max(all[k].norm())) / scale,
            _ => 0.0,
        };
        return Ok((p.kind.to_string(), margin, p.ambiguous));
    }
    let b = selfdual_decompose(&fm.metric, x)?;
    let label = petrov_classify(&b, ptol);
    let mut margin = 0.0f64;
    for (side, w) in [(label.plus, b.weyl_plus()), (label.minus, b.weyl_minus())] {
        let e = symmetric_eigenvalues(&w);
        let scale = e.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        margin = margin.max(match side.kind {
            PetrovType::O => scale,
            PetrovType::D => (e[1] - e[0]).min(e[2] - e[1]) / scale,
            _ => 0.0,
        });
    }
    Ok((label.to_string(), margin, label.ambiguous()))
}

fn petrov(fm: &FamilyMetric, points: &[ChartPoint], tol: f64) -> Result<CheckReport> {
    let ptol = PetrovTolerance { zero: 1e-7, relative: tol };
    let per: Vec<Result<(String, f64, bool)>> = points.par_iter().map(|x| petrov_at(fm, x, ptol)).collect();
    let per: Vec<(String, f64, bool)> = per.into_iter().collect::<Result<_>>()?;
    let mut labels: Vec<String> = per.iter().map(|p| p.0.clone()).collect();
    labels.sort();
    labels.dedup();
    let (mut worst, mut at) = (0.0f64, None);
    for (x, p) in points.iter().zip(&per) {
        if at.is_none() || p.1 > worst {
            worst = p.1;
            at = Some(x.to_vec());
        }
    }
    let mut r = CheckReport::graded(worst, at, tol, points.len()).with_detail("label", labels.join(" / "));
    if labels.len() > 1 {
        r.status = Status::Fail;
        r.note = Some("the label changes across the grid".into());
    } else if let (Status::Pass, Some(k)) = (r.status, per.iter().position(|p| p.2)) {
        r = r.with_detail("ambiguous_at", points[k]);
        r.status = Status::Flagged;
        r.note = Some("an eigenvalue gap lies inside the ambiguity band".into());
    }
    Ok(r)
}

fn yano(fm: &FamilyMetric, points: &[ChartPoint], tol: f64) -> Result<CheckReport> {
    if let (Some(y), Some(s)) = (&fm.yano, &fm.staeckel) {
        let sq = yano_square(y, &fm.metric);
        let shifted = {
            let (s, g, k) = (s.clone(), KillingStaeckelField::metric(&fm.metric), fm.yano_metric_shift);
            KillingStaeckelField::new("S+shift*g", move |x| {
                let (a, b) = (s.jets(x)?, g.jets(x)?);
                Ok(std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + b[i][j] * k)))
            })
        };
        return graded(points, tol, |x| Ok(killing_yano_residual(y, &fm.metric, x)?.max(tensor_difference(&sq, &shifted, x)?)))
            .map(|r| r.with_detail("yano_metric_shift", fm.yano_metric_shift));
    }
    if let Some(j) = &fm.complex_structure {
        return graded(points, tol, |x| {
            Ok(exterior_derivative_residual(j, x)?.max(complex_structure_residual(j, &fm.metric, x)?))
        })
        .map(|r| r.with_note("closed complex structure: dJ = 0 and J^2 = -1"));
    }
    Ok(CheckReport::flagged("no Killing-Yano tensor catalogued for this family", tol))
}

const PROBE_FACTOR: f64 = 1.5;
const PROBE_FLOOR: f64 = 1e-2;

fn ode(fm: &FamilyMetric, points: &[ChartPoint], tol: f64) -> Result<CheckReport> {
    let Some(fi) = &fm.first_integral else {
        return Ok(CheckReport::flagged("no first integral catalogued for this family", tol));
    };
    let mut r = graded(points, tol, |x| fi.residual(x[3]))?;
    let (probe, _) = worst_over(points, |x| fi.distorted_residual(x[3], PROBE_FACTOR))?;
    r = r.with_detail("equation", fi.equation).with_detail("probe_residual", probe);
    if !(probe > PROBE_FLOOR) {
        r.status = Status::Fail;
        r.note = Some(format!("the wrong-parameter probe stayed below {PROBE_FLOOR:e}"));
    }
    Ok(r)
}

fn elliptic(tol: f64) -> Result<CheckReport> {
    let items = elliptic_selftest()?;
    let worst = items.iter().map(|i| i.worst / i.tolerance).fold(0.0f64, |a, v| if v.is_nan() { v } else { a.max(v) });
    let mut r = CheckReport::graded(worst, None, tol, items.len()).with_note("worst ratio of deviation to per-item tolerance");
    for i in &items {
        r = r.with_detail(i.name, i);
    }
    if items.iter().any(|i| !i.pass) {
        r.status = Status::Fail;
    }
    Ok(r)
}

fn embedding_report(c: &EmbeddingCheck, tol: f64) -> CheckReport {
    let constraint = c.max_constraint_residual.unwrap_or(0.0);
    let mut r = CheckReport::graded(c.max_pullback_residual, Some(c.worst_pullback_point.to_vec()), tol, c.points)
        .with_detail("map", &c.label)
        .with_detail("constraint_residual", c.max_constraint_residual)
        .with_detail("fd_jacobian_gap", c.max_fd_jacobian_gap)
        .with_detail("min_singular_value", c.min_singular_value);
    if !(constraint < 1e-12) {
        r.status = Status::Fail;
        r.note = Some("constraint not satisfied".into());
    }
    r
}

fn source_for(fm: &FamilyMetric) -> Option<DesitterSource> {
    let eps = fm.params.get("epsilon").copied()?;
    let pos = fm.lambda > 0.0;
    match (fm.family, eps < 0.0, pos) {
        (Family::Desitter3, true, true) => Some(DesitterSource::Type3LambdaPos),
        (Family::Desitter3, true, false) => Some(DesitterSource::Type3LambdaNeg),
        (Family::Desitter3, false, false) => Some(DesitterSource::Type3Euclid),
        (Family::Bianchi5Conformal, true, true) => Some(DesitterSource::Type5LambdaPos),
        (Family::Bianchi5Conformal, true, false) => Some(DesitterSource::Type5LambdaNeg),
        (Family::Bianchi5Conformal, false, false) => Some(DesitterSource::Type5Euclid),
        _ => None,
    }
}

fn printed_comparison(src: DesitterSource, fm: &FamilyMetric, points: &[ChartPoint]) -> Result<EmbeddingCheck> {
    check_map(&desitter_map(src, MapVariant::Printed, fm.lambda)?, &fm.metric, points)
}

fn is_complete_type3(fm: &FamilyMetric) -> bool {
    let (Some(&eps), Some(&g0)) = (fm.params.get("epsilon"), fm.params.get("gamma0")) else { return false };
    fm.family == Family::Bianchi3 && eps > 0.0 && fm.lambda < 0.0 && (g0 + (2.0 / 3.0) / fm.lambda.abs().sqrt()).abs() < 1e-12
}

pub fn embedding_for_family(fm: &FamilyMetric, points: &[ChartPoint], tol: f64) -> Result<CheckReport> {
    match fm.family {
        Family::Flat3 => Ok(embedding_report(&check_map(&flatten_type3(), &fm.metric, points)?, tol)),
        Family::Flat5 => Ok(embedding_report(&check_map(&flatten_type5(), &fm.metric, points)?, tol)),
        Family::Desitter3 | Family::Bianchi5Conformal => {
            let src = source_for(fm).ok_or_else(|| Error::Config("no quadric map for this parameter choice".into()))?;
            let c = check_map(&desitter_map(src, MapVariant::Corrected, fm.lambda)?, &fm.metric, points)?;
            let mut r = embedding_report(&c, tol);
            if has_printed_variant(src) {
                let p = printed_comparison(src, fm, points)?;
                r = r
                    .with_detail("printed_pullback_residual", p.max_pullback_residual)
                    .with_detail("printed_constraint_residual", p.max_constraint_residual)
                    .with_note("printed formulas do not verify; corrected variant reported");
            }
            Ok(r)
        }
        Family::Bianchi3Product if fm.params.get("epsilon") == Some(&-1.0) && fm.params.get("gamma0") == Some(&1.0) => {
            split_report(fm, points, tol)
        }
        Family::Bianchi3 if is_complete_type3(fm) => polar_report(fm.lambda),
        _ => Ok(CheckReport::flagged("no embedding or coordinate change catalogued for this family", tol)),
    }
}

fn split_report(fm: &FamilyMetric, points: &[ChartPoint], tol: f64) -> Result<CheckReport> {
    let map = product_split_map(fm.lambda)?;
    let per: Vec<_> = points.par_iter().map(|x| product_split_check(&map, fm, x)).collect::<Result<Vec<_>>>()?;
    let (w, at) = worst_over(points, |x| product_split_check(&map, fm, x).map(|c| c.pullback_residual))?;
    let off = per.iter().fold(0.0f64, |a, c| a.max(c.off_block));
    let mu = per.iter().fold(f64::INFINITY, |a, c| a.min(c.mu_sq_minus_one));
    let mut r = CheckReport::graded(w, at.map(|p| p.to_vec()), tol, points.len())
        .with_detail("map", &map.label)
        .with_detail("off_block", off)
        .with_detail("min_mu_sq_minus_one", mu);
    if !(off < 1e-10) || !(mu > 0.0) {
        r.status = Status::Fail;
        r.note = Some("split is not block diagonal or mu^2 - 1 <= 0".into());
    }
    Ok(r)
}

pub const CONE_TOLERANCE: f64 = 1e-6;

fn polar_report(lambda: f64) -> Result<CheckReport> {
    let p = polar_regularity_check(lambda)?;
    let dev = (p.cone_angle - 2.0 * PI).abs();
    let mut r = CheckReport::graded(dev, None, CONE_TOLERANCE, p.samples.len())
        .with_note("|cone angle - 2 pi| at the smallest xi")
        .with_detail("deviation_slope", p.deviation_slope)
        .with_detail("y_period", p.y_period)
        .with_detail("far_deviation", p.far_deviation)
        .with_detail("samples", &p.samples);
    let decreasing = p.samples.windows(2).all(|w| w[1].deviation < w[0].deviation);
    if !decreasing || (p.deviation_slope - 2.0).abs() > 0.1 || !(p.far_deviation > 0.1) {
        r.status = Status::Fail;
        r.note = Some("local model does not converge like xi^2".into());
    }
    Ok(r)
}

/// Every map in the module with its own source metric.
pub fn embedding_suite(seed: u64, tol: f64) -> Result<Vec<(String, CheckReport)>> {
    let mut out = Vec::new();
    for (name, map, family) in
        [("flatten_type3", flatten_type3(), Family::Flat3), ("flatten_type5", flatten_type5(), Family::Flat5)]
    {
        let fm = crate::catalog::build(family, &Default::default())?;
        out.push((name.to_string(), embedding_report(&check_map(&map, &fm.metric, &fm.sample_points(20, seed))?, tol)));
    }
    for src in DesitterSource::ALL {
        let lambda = if matches!(src, DesitterSource::Type3LambdaPos | DesitterSource::Type5LambdaPos) { 0.7 } else { -0.6 };
        let fm = src.source_metric(lambda)?;
        let pts = fm.sample_points(20, seed);
        let c = check_map(&desitter_map(src, MapVariant::Corrected, lambda)?, &fm.metric, &pts)?;
        out.push((format!("desitter_map:{src}"), embedding_report(&c, tol)));
        if has_printed_variant(src) {
            let p = printed_comparison(src, &fm, &pts)?;
            let verifies = p.max_pullback_residual < tol && p.max_constraint_residual.unwrap_or(0.0) < 1e-12;
            let mut r = embedding_report(&p, tol);
            if !verifies {
                r.status = Status::Flagged;
                r.note = Some("printed formulas do not verify; see the corrected entry".into());
            }
            out.push((format!("desitter_map:{src}:printed"), r));
        }
    }
    let fm = product_split_source(-0.8)?;
    out.push(("product_split".into(), split_report(&fm, &fm.sample_points(20, seed), tol)?));
    out.push(("polar_regularity".into(), polar_report(-0.75)?));
    Ok(out)
}

/// Initial phase point: configured, or the first grid point with seeded momenta in [−½, ½].
pub fn initial_state(points: &[ChartPoint], cfg: &RunConfig) -> Result<PhaseState> {
    let x = match cfg.start {
        Some(x) => x,
        None => *points.first().ok_or_else(|| Error::Config("empty grid".into()))?,
    };
    let p = match cfg.momentum {
        Some(p) => p,
        None => {
            let u = sampling::halton(1, cfg.seed.wrapping_add(0x5eed))[0];
            std::array::from_fn(|k| u[k] - 0.5)
        }
    };
    Ok(PhaseState::new(x, p))
}

pub fn geodesic(
    fm: &FamilyMetric,
    points: &[ChartPoint],
    cfg: &RunConfig,
    tol: f64,
) -> Result<(CheckReport, GeodesicRun, Vec<Charge>)> {
    let s0 = initial_state(points, cfg)?;
    if !fm.metric.contains(&s0.x) {
        return Err(Error::OutsideDomain(s0.x));
    }
    let charges = conserved_quantities(fm);
    let run = integrate(&fm.metric, s0, cfg.span, &IntegratorConfig::default(), &charges)?;
    let worst = run.report.worst_relative_drift();
    let mut r = CheckReport::graded(worst, Some(s0.x.to_vec()), tol, run.trajectory.len())
        .with_note("worst relative drift of the conserved quantities; location is the start point")
        .with_detail("initial_momentum", s0.p)
        .with_detail("accepted_steps", run.report.accepted_steps)
        .with_detail("affine_end", run.report.affine_end);
    for q in &run.report.quantities {
        r = r.with_detail(&format!("drift_{}", q.name), q.relative_drift);
    }
    if let Some(t) = &run.truncated {
        r = r.with_detail("truncated_at", t.affine).with_detail("truncation_reason", &t.reason);
        if r.status == Status::Pass {
            r.status = Status::Flagged;
            r.note = Some("integration stopped before the requested span".into());
        }
    }
    Ok((r, run, charges))
}
