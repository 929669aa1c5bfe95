//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N: PASS|FAIL ...` line before asserting.

use bianchi::catalog::*;
use bianchi::ellipticfn::elliptic_selftest;
use bianchi::embedding::*;
use bianchi::geodesic::*;
use bianchi::geometry::*;
use bianchi::symmetry::*;
use std::process::Command;
use std::time::Instant;

fn verdict(n: u32, title: &str, failures: &[String], summary: String) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    println!("criterion {n}: {status} {title}: {summary}");
    for f in failures {
        println!("    {f}");
    }
    assert!(failures.is_empty(), "criterion {n} failed: {failures:?}");
}

fn require(failures: &mut Vec<String>, ok: bool, what: impl FnOnce() -> String) {
    if !ok {
        failures.push(what());
    }
}

#[test]
fn criterion_1_einstein_suite() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let configs = reference_configurations();
    for (f, p) in &configs {
        let fm = build(*f, p).unwrap();
        let tol = if *f == Family::Bianchi5Minkowski { 1e-5 } else { 1e-6 };
        require(&mut failures, fm.metric.exact, || format!("{f} {p:?}: no exact partials"));
        for x in fm.sample_points(20, 1) {
            let r = einstein_residual(&fm.metric, &x, fm.lambda).unwrap();
            worst = worst.max(r);
            require(&mut failures, r < tol, || format!("{f} {p:?} at {x:?}: {r:e}"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    require(&mut failures, secs < 30.0, || format!("took {secs:.1} s"));
    verdict(1, "Einstein residuals", &failures, format!("{} configurations, worst {worst:.2e}, {secs:.2} s", configs.len()));
}

fn relative_weyl_error(fm: &FamilyMetric, x: &ChartPoint) -> f64 {
    let (wp, wm) = fm.expected_weyl_at(x).unwrap();
    let b = selfdual_decompose(&fm.metric, x).unwrap();
    let scale = mat3_max_abs(&wp).max(mat3_max_abs(&wm));
    let mut d = 0.0f64;
    for (got, want) in [(b.weyl_plus(), wp), (b.weyl_minus(), wm)] {
        for i in 0..3 {
            for j in 0..3 {
                d = d.max((got[i][j] - want[i][j]).abs());
            }
        }
    }
    d / scale
}

#[test]
fn criterion_2_weyl_closed_forms() {
    let mut failures = Vec::new();
    let mut worst = 0.0f64;
    let cases: [(Family, &[(&str, f64)]); 6] = [
        (Family::Bianchi2, &[("epsilon", 1.0), ("m", 0.8), ("l", 0.6), ("lambda", -0.5)]),
        (Family::Bianchi2, &[("epsilon", 1.0), ("m", 0.8), ("l", 0.6), ("lambda", 0.2)]),
        (Family::Bianchi3, &[("epsilon", 1.0), ("gamma0", 0.8), ("lambda", -0.6)]),
        (Family::Bianchi5Euclid, &[("lambda", 1.0)]),
        (Family::Bianchi5Euclid, &[("lambda", -1.0), ("branch", 0.0)]),
        (Family::Bianchi5Euclid, &[("lambda", -1.0), ("branch", 1.0)]),
    ];
    for (f, p) in cases {
        let fm = build_with(f, p).unwrap();
        require(&mut failures, fm.expected_weyl.is_some(), || format!("{f} {p:?}: no closed form"));
        if fm.expected_weyl.is_none() {
            continue;
        }
        for x in fm.sample_points(20, 2) {
            let e = relative_weyl_error(&fm, &x);
            worst = worst.max(e);
            require(&mut failures, e < 1e-6, || format!("{f} {p:?} at {x:?}: {e:e}"));
        }
    }
    verdict(2, "Weyl closed forms", &failures, format!("worst relative error {worst:.2e}"));
}

fn euclidean_label(fm: &FamilyMetric, x: &ChartPoint) -> (PetrovType, PetrovType, f64) {
    let b = selfdual_decompose(&fm.metric, x).unwrap();
    let l = petrov_classify(&b, PetrovTolerance::default());
    (l.plus.kind, l.minus.kind, mat3_max_abs(&b.weyl_plus()).min(mat3_max_abs(&b.weyl_minus())))
}

#[test]
fn criterion_3_petrov_suite() {
    use PetrovType::*;
    let mut failures = Vec::new();
    let tol = PetrovTolerance::default();

    for lambda in [-0.4, 0.3] {
        let fm = build_with(Family::Bianchi2, &[("epsilon", -1.0), ("m", 0.7), ("l", 0.9), ("lambda", lambda)]).unwrap();
        for x in fm.sample_points(20, 3) {
            let k = petrov_from_scalars(&np_weyl_scalars(&fm.metric, &x, 1).unwrap(), tol).kind;
            require(&mut failures, k == D, || format!("bianchi2 lorentzian lambda={lambda}: {k} at {x:?}"));
        }
    }
    let lor = build_with(Family::Bianchi3, &[("epsilon", -1.0), ("gamma0", 0.8), ("lambda", 0.5)]).unwrap();
    for x in lor.sample_points(20, 3) {
        let k = petrov_from_scalars(&np_weyl_scalars(&lor.metric, &x, lor.null_axis.unwrap()).unwrap(), tol).kind;
        require(&mut failures, k == D, || format!("bianchi3 lorentzian: {k} at {x:?}"));
    }
    let euc = build_with(Family::Bianchi3, &[("epsilon", 1.0), ("gamma0", 0.8), ("lambda", -0.6)]).unwrap();
    for x in euc.sample_points(20, 3) {
        let (p, m, _) = euclidean_label(&euc, &x);
        require(&mut failures, (p, m) == (D, D), || format!("bianchi3 euclidean: ({p}+, {m}-) at {x:?}"));
    }
    let flat = build_with(Family::Bianchi3, &[("epsilon", 1.0), ("gamma0", 0.0), ("lambda", -0.6)]).unwrap();
    for x in flat.sample_points(20, 3) {
        let (p, m, _) = euclidean_label(&flat, &x);
        require(&mut failures, (p, m) == (O, O), || format!("bianchi3 gamma0=0: ({p}+, {m}-) at {x:?}"));
    }

    let mut min_norm = f64::INFINITY;
    for p in [&[("lambda", 1.0)][..], &[("lambda", -1.0), ("branch", 0.0)], &[("lambda", -1.0), ("branch", 1.0)]] {
        let fm = build_with(Family::Bianchi5Euclid, p).unwrap();
        for x in fm.sample_points(20, 3) {
            let (a, b, n) = euclidean_label(&fm, &x);
            min_norm = min_norm.min(n);
            require(&mut failures, (a, b) == (I, I) && n > 0.0, || {
                format!("bianchi5_euclid {p:?}: ({a}+, {b}-), |W| {n:e} at {x:?}")
            });
        }
    }

    let mut psi_err = 0.0f64;
    for theta in [-0.8, 0.8] {
        let fm = build_with(Family::Bianchi5Minkowski, &[("theta", theta)]).unwrap();
        let psi2 = fm.expected_psi2.clone().unwrap();
        for x in fm.sample_points(20, 3) {
            let s = np_weyl_scalars(&fm.metric, &x, fm.null_axis.unwrap()).unwrap();
            let want = psi2(&x);
            let scale = s.all().iter().fold(0.0f64, |a, z| a.max(z.norm()));
            let e = (s.get(2).re - want).abs().max(s.get(2).im.abs()) / want.abs();
            psi_err = psi_err.max(e);
            require(&mut failures, e < 1e-6, || format!("bianchi5_minkowski theta={theta}: Psi2 error {e:e} at {x:?}"));
            require(&mut failures, s.get(1).norm().max(s.get(3).norm()) < 1e-6 * scale, || format!("Psi1/Psi3 nonzero at {x:?}"));
            let k = petrov_from_scalars(&s, tol).kind;
            require(&mut failures, k == I, || format!("bianchi5_minkowski theta={theta}: {k} at {x:?}"));
        }
    }
    verdict(3, "Petrov types", &failures, format!("min |W| for type V Euclidean {min_norm:.2e}, worst Psi2 error {psi_err:.2e}"));
}

#[test]
fn criterion_4_symmetry_suite() {
    let mut failures = Vec::new();
    let (mut wk, mut wy, mut ws, mut wsq) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (f, p) in reference_configurations() {
        let fm = build(f, &p).unwrap();
        if matches!(f, Family::Desitter3Poincare | Family::Desitter5Poincare) {
            require(&mut failures, fm.killing.len() == 10, || format!("{f}: {} generators", fm.killing.len()));
        }
        for x in fm.sample_points(20, 4) {
            for k in &fm.killing {
                let r = killing_residual(k, &fm.metric, &x).unwrap();
                wk = wk.max(r);
                require(&mut failures, r < 1e-7, || format!("{f} {}: {r:e}", k.label));
            }
        }
        let (Some(y), Some(s)) = (&fm.yano, &fm.staeckel) else { continue };
        let sq = yano_square(y, &fm.metric);
        let g = KillingStaeckelField::metric(&fm.metric);
        for x in fm.sample_points(20, 4) {
            let ry = killing_yano_residual(y, &fm.metric, &x).unwrap();
            let rs = ks_residual(s, &fm.metric, &x).unwrap();
            let (a, b, gg) = (sq.at(&x).unwrap(), s.at(&x).unwrap(), g.at(&x).unwrap());
            let mut d = 0.0f64;
            for i in 0..4 {
                for j in 0..4 {
                    d = d.max((a[i][j] - b[i][j] - fm.yano_metric_shift * gg[i][j]).abs());
                }
            }
            wy = wy.max(ry);
            ws = ws.max(rs);
            wsq = wsq.max(d);
            require(&mut failures, ry < 1e-7 && rs < 1e-7 && d < 1e-7, || {
                format!("{f} {p:?} at {x:?}: KY {ry:e}, KS {rs:e}, square {d:e}")
            });
        }
    }
    let mut structure = 0.0f64;
    for class in [BianchiClass::II, BianchiClass::III, BianchiClass::V] {
        let fields = match class {
            BianchiClass::II => bianchi2_killing(),
            BianchiClass::III => bianchi3_killing(),
            BianchiClass::V => bianchi5_killing(),
        };
        for x in [[0.3, -0.7, 1.1, 1.4], [-1.2, 0.4, 0.1, 0.6]] {
            for (a, b, rhs) in structure_relations(class) {
                let got = lie_bracket(&fields[a], &fields[b], &x);
                let mut want = [0.0; 4];
                for (c, k) in rhs {
                    let v = fields[k].at(&x);
                    for i in 0..4 {
                        want[i] += c * v[i];
                    }
                }
                for i in 0..4 {
                    structure = structure.max((got[i] - want[i]).abs());
                }
            }
            structure = structure.max(maurer_cartan_residual(class, &x).unwrap());
        }
    }
    require(&mut failures, structure < 1e-12, || format!("structure constants / Maurer-Cartan: {structure:e}"));
    verdict(
        4,
        "Killing, Killing-Yano and Killing-Staeckel tensors",
        &failures,
        format!("Killing {wk:.2e}, KY {wy:.2e}, KS {ws:.2e}, Y^2 vs S {wsq:.2e}, structure {structure:.2e}"),
    )
}

#[test]
fn criterion_5_geodesic_integrability() {
    let mut failures = Vec::new();
    let cases = [
        (Family::Bianchi2, vec![("epsilon", 1.0), ("m", 0.8), ("l", 0.6), ("lambda", -0.5)], [0.05, 0.3, -0.2, 0.1], 1.5),
        (Family::Bianchi2, vec![("epsilon", -1.0), ("m", 0.7), ("l", 0.9), ("lambda", 0.3)], [0.05, 0.1, -0.1, -1.0], 1.5),
        (Family::Bianchi3, vec![("epsilon", 1.0), ("gamma0", 0.8), ("lambda", -0.6)], [0.05, 0.3, -0.2, 0.1], 2.5),
        (Family::Bianchi3, vec![("epsilon", -1.0), ("gamma0", 0.8), ("lambda", 0.5)], [0.05, 0.1, -0.1, -1.0], 1.5),
    ];
    let (mut drift, mut bracket, mut hjm) = (0.0f64, 0.0f64, 0.0f64);
    let mut fits = Vec::new();
    for (f, p, mom, t0) in &cases {
        let fm = build_with(*f, p).unwrap();
        let s0 = PhaseState::new([0.1, 0.2, -0.3, *t0], *mom);
        let q = involution_set(&fm).unwrap();
        let run = integrate(&fm.metric, s0, 10.0, &IntegratorConfig::default(), &q).unwrap();
        require(&mut failures, run.truncated.is_none(), || format!("{f} {p:?}: truncated"));
        for d in &run.report.quantities {
            drift = drift.max(d.relative_drift);
            require(&mut failures, d.relative_drift < 1e-8, || format!("{f} {p:?} {}: drift {:e}", d.name, d.relative_drift));
        }
        for i in 0..q.len() {
            for j in i + 1..q.len() {
                let b = poisson_bracket(&q[i], &q[j], &s0, 1e-4).abs();
                bracket = bracket.max(b);
                require(&mut failures, b < 1e-6, || format!("{f} {{{}, {}}} = {b:e}", q[i].name, q[j].name));
            }
        }
        let hj = hj_separation_check(&fm, s0, 10.0, &IntegratorConfig::default()).unwrap();
        hjm = hjm.max(hj.max_momentum_mismatch);
        require(&mut failures, hj.max_momentum_mismatch < 1e-6, || format!("{f} HJ mismatch {:e}", hj.max_momentum_mismatch));
        let fit = staeckel_bilinear_fit(&fm, 200, 5).unwrap();
        fits.push(format!("{f} eps={}: {:.2e}", fm.params["epsilon"], fit.relative_residual));
        require(&mut failures, fit.relative_residual > 1e-3, || {
            format!("{f} {p:?}: S is a bilinear in the Killing charges (fit residual {:.2e})", fit.relative_residual)
        });
    }
    verdict(
        5,
        "geodesic integrability",
        &failures,
        format!("drift {drift:.2e}, brackets {bracket:.2e}, HJ {hjm:.2e}, bilinear fit residuals [{}]", fits.join(", ")),
    )
}

#[test]
fn criterion_6_elliptic_suite() {
    let items = elliptic_selftest().unwrap();
    let failures: Vec<String> =
        items.iter().filter(|i| !i.pass).map(|i| format!("{}: {:e} (tol {:e})", i.name, i.worst, i.tolerance)).collect();
    let summary = items.iter().map(|i| format!("{} {:.1e}", i.name, i.worst)).collect::<Vec<_>>().join(", ");
    assert_eq!(items.len(), 7);
    verdict(6, "elliptic functions", &failures, summary);
}

#[test]
fn criterion_7_embedding_suite() {
    let mut failures = Vec::new();
    let (mut pull, mut cons) = (0.0f64, 0.0f64);
    let mut checks = Vec::new();
    for (map, family) in [(flatten_type3(), Family::Flat3), (flatten_type5(), Family::Flat5)] {
        let fm = build_with(family, &[]).unwrap();
        checks.push(check_map(&map, &fm.metric, &fm.sample_points(20, 6)).unwrap());
    }
    for src in DesitterSource::ALL {
        for lambda in [0.7, 1.3, -0.6, -1.4] {
            let Ok(fm) = src.source_metric(lambda) else { continue };
            let map = desitter_map(src, MapVariant::Corrected, lambda).unwrap();
            checks.push(check_map(&map, &fm.metric, &fm.sample_points(20, 6)).unwrap());
        }
    }
    for c in &checks {
        let cr = c.max_constraint_residual.unwrap_or(0.0);
        pull = pull.max(c.max_pullback_residual);
        cons = cons.max(cr);
        require(&mut failures, c.max_pullback_residual < 1e-8 && cr < 1e-12, || {
            format!("{}: pullback {:e}, constraint {cr:e}", c.label, c.max_pullback_residual)
        });
    }
    let fm = product_split_source(-0.8).unwrap();
    let map = product_split_map(-0.8).unwrap();
    let mut off = 0.0f64;
    for x in fm.sample_points(20, 6) {
        let s = product_split_check(&map, &fm, &x).unwrap();
        off = off.max(s.off_block);
        require(&mut failures, s.off_block < 1e-10 && s.pullback_residual < 1e-8, || format!("split at {x:?}: {s:?}"));
    }
    let polar = polar_regularity_check(-0.75).unwrap();
    let cone = (polar.cone_angle - 2.0 * std::f64::consts::PI).abs();
    require(&mut failures, cone < 1e-6, || format!("cone angle {} ", polar.cone_angle));
    verdict(
        7,
        "embeddings and coordinate changes",
        &failures,
        format!(
            "{} maps, pullback {pull:.2e}, constraint {cons:.2e}, split off-block {off:.2e}, |cone - 2pi| {cone:.2e}",
            checks.len()
        ),
    );
}

#[test]
fn criterion_8_first_integrals() {
    let mut failures = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let (mut worst, mut weakest) = (0.0f64, f64::INFINITY);
    for (f, p) in reference_configurations() {
        let fm = build(f, &p).unwrap();
        let Some(fi) = &fm.first_integral else { continue };
        seen.insert(fi.equation);
        // The probe is graded like a residual: its worst value over the grid.
        let mut probe = 0.0f64;
        for x in fm.sample_points(20, 7) {
            let r = fi.residual(x[3]).unwrap();
            worst = worst.max(r);
            require(&mut failures, r < 1e-9, || format!("{} {f} {p:?}: residual {r:e} at {x:?}", fi.equation));
            probe = probe.max(fi.distorted_residual(x[3], 1.5).unwrap());
        }
        weakest = weakest.min(probe);
        require(&mut failures, probe > 1e-2, || format!("{} {f} {p:?}: probe {probe:e}", fi.equation));
    }
    for eq in ["2eq1", "int4", "5intfin"] {
        require(&mut failures, seen.contains(eq), || format!("({eq}) not covered"));
    }
    verdict(8, "first integrals", &failures, format!("worst residual {worst:.2e}, weakest probe {weakest:.2e}"));
}

#[test]
fn criterion_9_cli_determinism_and_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_bianchi");
    let run = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let mut failures = Vec::new();
    let verify = [
        "verify",
        "--family",
        "bianchi3",
        "--param",
        "epsilon=1",
        "--param",
        "gamma0=0.8",
        "--param",
        "lambda=-0.6",
        "--seed",
        "42",
    ];
    let a = run(&verify);
    let b = run(&verify);
    require(&mut failures, a.stdout == b.stdout && !a.stdout.is_empty(), || "repeated runs differ".into());
    require(&mut failures, a.status.code() == Some(0), || format!("passing run exited {:?}", a.status.code()));
    let unknown = run(&["verify", "--family", "unknown"]);
    require(&mut failures, unknown.status.code() == Some(1), || format!("unknown family exited {:?}", unknown.status.code()));
    let mut strict = verify.to_vec();
    strict.extend(["--checks", "einstein", "--tol", "einstein=1e-30"]);
    let fail = run(&strict);
    require(&mut failures, fail.status.code() == Some(2), || format!("failing check exited {:?}", fail.status.code()));
    verdict(
        9,
        "CLI determinism and exit codes",
        &failures,
        format!("{} byte report reproduced; exit codes 0, 1, 2", a.stdout.len()),
    );
}
