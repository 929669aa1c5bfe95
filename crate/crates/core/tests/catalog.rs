use bianchi::catalog::*;
use bianchi::geometry::*;
use bianchi::symmetry::*;
use proptest::prelude::*;

fn einstein_tolerance(f: Family) -> f64 {
    match f {
        Family::Bianchi5Minkowski => 1e-5,
        _ => 1e-8,
    }
}

#[test]
fn every_reference_configuration_is_einstein() {
    for (f, p) in reference_configurations() {
        let fm = build(f, &p).unwrap();
        for x in fm.sample_points(24, 11) {
            let r = einstein_residual(&fm.metric, &x, fm.lambda).unwrap();
            assert!(r < einstein_tolerance(f), "{} {:?} at {:?}: {r:e}", f, p, x);
        }
    }
}

#[test]
fn weyl_blocks_match_closed_forms() {
    let mut checked = 0;
    for (f, p) in reference_configurations() {
        let fm = build(f, &p).unwrap();
        if fm.expected_weyl.is_none() {
            continue;
        }
        for x in fm.sample_points(12, 5) {
            let (wp, wm) = fm.expected_weyl_at(&x).unwrap();
            let b = selfdual_decompose(&fm.metric, &x).unwrap();
            let scale = 1.0 + mat3_max_abs(&wp).max(mat3_max_abs(&wm));
            for (got, want) in [(b.weyl_plus(), wp), (b.weyl_minus(), wm)] {
                for i in 0..3 {
                    for j in 0..3 {
                        let d = (got[i][j] - want[i][j]).abs();
                        assert!(d < 1e-8 * scale, "{} {:?} entry {i}{j}: {} vs {}", f, p, got[i][j], want[i][j]);
                    }
                }
            }
        }
        checked += 1;
    }
    assert!(checked >= 8);
}

#[test]
fn lorentzian_psi2_matches_closed_forms() {
    let mut checked = 0;
    for (f, p) in reference_configurations() {
        let fm = build(f, &p).unwrap();
        let (Some(axis), Some(psi2)) = (fm.null_axis, fm.expected_psi2.as_ref()) else { continue };
        for x in fm.sample_points(8, 2) {
            let s = np_weyl_scalars(&fm.metric, &x, axis).unwrap();
            let want = psi2(&x);
            assert!((s.get(2).re - want).abs() < 1e-6 * want.abs(), "{f}: {} vs {want}", s.get(2));
            assert!(s.get(2).im.abs() < 1e-8 * want.abs());
            assert!(s.get(1).norm() < 1e-8 && s.get(3).norm() < 1e-8);
        }
        checked += 1;
    }
    assert!(checked >= 4);
}

#[test]
fn type2_lorentzian_has_only_psi2() {
    let fm = build_with(Family::Bianchi2, &[("epsilon", -1.0), ("m", 0.7), ("l", 0.9), ("lambda", -0.4)]).unwrap();
    for x in fm.sample_points(8, 1) {
        let s = np_weyl_scalars(&fm.metric, &x, 1).unwrap();
        let p = petrov_from_scalars(&s, PetrovTolerance::default());
        assert_eq!(p.kind, PetrovType::D);
    }
}

#[test]
fn type5_lorentzian_is_type_one() {
    for theta in [-0.8, 0.8] {
        let fm = build_with(Family::Bianchi5Minkowski, &[("theta", theta)]).unwrap();
        let x = fm.sample_points(1, 4)[0];
        let s = np_weyl_scalars(&fm.metric, &x, 1).unwrap();
        assert_eq!(petrov_from_scalars(&s, PetrovTolerance::default()).kind, PetrovType::I);
        // Ψ₀ and Ψ₄ differ by 2cμ² in magnitude with μ = ρ.
        let rho = (3.0 * s.get(2).re).cbrt();
        assert!(((s.get(0) - s.get(4)).norm() - 2.0 * rho * rho).abs() < 1e-6 * rho * rho);
    }
}

#[test]
fn euclidean_petrov_labels() {
    let t = PetrovTolerance::default();
    let d = build_with(Family::Bianchi3, &[("epsilon", 1.0), ("gamma0", 0.8), ("lambda", -0.6)]).unwrap();
    let x = d.sample_points(1, 0)[0];
    let l = petrov_classify(&selfdual_decompose(&d.metric, &x).unwrap(), t);
    assert_eq!((l.plus.kind, l.minus.kind), (PetrovType::D, PetrovType::D));

    let o = build_with(Family::Desitter3, &[("epsilon", 1.0), ("lambda", -0.9)]).unwrap();
    let x = o.sample_points(1, 0)[0];
    let l = petrov_classify(&selfdual_decompose(&o.metric, &x).unwrap(), t);
    assert_eq!((l.plus.kind, l.minus.kind), (PetrovType::O, PetrovType::O));

    for (lambda, branch) in [(1.0, 0.0), (-1.0, 0.0), (-1.0, 1.0)] {
        let e = build_with(Family::Bianchi5Euclid, &[("lambda", lambda), ("branch", branch)]).unwrap();
        for x in e.sample_points(6, 9) {
            let b = selfdual_decompose(&e.metric, &x).unwrap();
            let l = petrov_classify(&b, t);
            assert_eq!((l.plus.kind, l.minus.kind), (PetrovType::I, PetrovType::I));
            assert!(mat3_max_abs(&b.weyl_plus()).min(mat3_max_abs(&b.weyl_minus())) > 1e-6);
        }
    }
}

#[test]
fn selfdual_member_has_vanishing_w_plus() {
    let fm = build_with(Family::Bianchi2Selfdual, &[("b", -1.0), ("lambda", -0.9)]).unwrap();
    for x in fm.sample_points(8, 3) {
        let b = selfdual_decompose(&fm.metric, &x).unwrap();
        assert!(mat3_max_abs(&b.weyl_plus()) < 1e-10);
        assert!(mat3_max_abs(&b.weyl_minus()) > 1e-4);
    }
}

#[test]
fn first_integrals_hold_and_probes_detect() {
    let mut checked = 0;
    for (f, p) in reference_configurations() {
        let fm = build(f, &p).unwrap();
        let Some(fi) = &fm.first_integral else { continue };
        let mut probe = 0.0f64;
        for x in fm.sample_points(16, 6) {
            let r = fi.residual(x[3]).unwrap();
            assert!(r < 1e-9, "{} {f} {:?}: {r:e}", fi.equation, p);
            probe = probe.max(fi.distorted_residual(x[3], 1.5).unwrap());
        }
        assert!(probe > 1e-2, "{} {f} {:?}: probe {probe:e}", fi.equation, p);
        checked += 1;
    }
    assert!(checked >= 10);
}

#[test]
fn killing_vectors_and_structure_constants() {
    for (f, p) in reference_configurations() {
        let fm = build(f, &p).unwrap();
        assert!(!fm.killing.is_empty(), "{f}");
        for x in fm.sample_points(6, 8) {
            for k in &fm.killing {
                let r = killing_residual(k, &fm.metric, &x).unwrap();
                assert!(r < 1e-8, "{f} {}: {r:e}", k.label);
            }
        }
    }
    for class in [BianchiClass::II, BianchiClass::III, BianchiClass::V] {
        let fields = match class {
            BianchiClass::II => bianchi2_killing(),
            BianchiClass::III => bianchi3_killing(),
            BianchiClass::V => bianchi5_killing(),
        };
        let x = [0.3, -0.7, 1.1, 1.4];
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
                assert!((got[i] - want[i]).abs() < 1e-10, "{class} [{a},{b}]");
            }
        }
    }
}

#[test]
fn yano_and_staeckel_tensors() {
    let mut checked = 0;
    for (f, p) in reference_configurations() {
        let fm = build(f, &p).unwrap();
        let (Some(y), Some(s)) = (&fm.yano, &fm.staeckel) else { continue };
        let sq = yano_square(y, &fm.metric);
        let g = KillingStaeckelField::metric(&fm.metric);
        for x in fm.sample_points(8, 4) {
            assert!(killing_yano_residual(y, &fm.metric, &x).unwrap() < 1e-9, "{f} {:?}", p);
            assert!(ks_residual(s, &fm.metric, &x).unwrap() < 1e-9, "{f} {:?}", p);
            let (a, b, gg) = (sq.at(&x).unwrap(), s.at(&x).unwrap(), g.at(&x).unwrap());
            for i in 0..4 {
                for j in 0..4 {
                    assert!((a[i][j] - b[i][j] - fm.yano_metric_shift * gg[i][j]).abs() < 1e-9);
                }
            }
        }
        checked += 1;
    }
    assert!(checked >= 8);
}

#[test]
fn kahler_structure() {
    let fm = build_with(Family::Bianchi2Kahler, &[("l", 0.7), ("lambda", -0.6)]).unwrap();
    let j = fm.complex_structure.as_ref().unwrap();
    for x in fm.sample_points(8, 2) {
        assert!(exterior_derivative_residual(j, &x).unwrap() < 1e-10);
        assert!(complex_structure_residual(j, &fm.metric, &x).unwrap() < 1e-10);
    }
}

#[test]
fn swapped_type5_metrics_stay_einstein() {
    for (f, pairs) in
        [(Family::Bianchi5Minkowski, vec![("theta", 0.8)]), (Family::Bianchi5Euclid, vec![("lambda", -1.0), ("branch", 1.0)])]
    {
        let a = build_with(f, &pairs).unwrap();
        let mut swapped = pairs.clone();
        swapped.push(("swap", 1.0));
        let b = build_with(f, &swapped).unwrap();
        for x in a.sample_points(6, 3) {
            assert!(einstein_residual(&b.metric, &x, b.lambda).unwrap() < einstein_tolerance(f));
            assert!(einstein_residual(&a.metric, &x, a.lambda).unwrap() < einstein_tolerance(f));
        }
    }
}

#[test]
fn flat_members_have_vanishing_riemann() {
    for f in [Family::Flat3, Family::Flat5] {
        let fm = build_with(f, &[]).unwrap();
        for x in fm.sample_points(6, 1).into_iter().chain([[0.3, -1.0, 2.0, 1.7]]) {
            let b = curvature(&fm.metric, &x).unwrap();
            assert!(max_abs4(&b.riemann) < 1e-8, "{f}");
        }
    }
}

#[test]
fn type5_special_tends_to_flat() {
    let flat = build_with(Family::Flat5, &[]).unwrap();
    let near = build_with(Family::Bianchi5Special, &[("epsilon", -1.0), ("lambda", 1e-9)]).unwrap();
    let x = [0.2, 0.1, -0.3, 0.9];
    let (a, b) = (flat.metric.components(&x).unwrap(), near.metric.components(&x).unwrap());
    for i in 0..4 {
        for j in 0..4 {
            assert!((a[i][j] - b[i][j]).abs() < 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn type2_unified_family_is_einstein(m in 0.1f64..2.0, l in 0.2f64..1.5, lambda in -1.0f64..1.0, lorentzian in any::<bool>()) {
        let eps = if lorentzian { -1.0 } else { 1.0 };
        if let Ok(fm) = build_with(Family::Bianchi2, &[("epsilon", eps), ("m", m), ("l", l), ("lambda", lambda)]) {
            for x in fm.sample_points(3, 0) {
                let r = einstein_residual(&fm.metric, &x, lambda).unwrap();
                let g = fm.metric.components(&x).unwrap();
                let scale = 1.0 + g.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
                prop_assert!(r < 1e-8 * scale, "residual {r:e}");
            }
        }
    }

    #[test]
    fn type3_family_is_einstein(gamma0 in -1.0f64..1.0, lambda in -1.0f64..1.0, lorentzian in any::<bool>()) {
        let eps = if lorentzian { -1.0 } else { 1.0 };
        if let Ok(fm) = build_with(Family::Bianchi3, &[("epsilon", eps), ("gamma0", gamma0), ("lambda", lambda)]) {
            for x in fm.sample_points(3, 0) {
                let r = einstein_residual(&fm.metric, &x, lambda).unwrap();
                prop_assert!(r < 1e-8, "residual {r:e}");
            }
        }
    }

    #[test]
    fn type2_rescaling_removes_l(m in 0.1f64..2.0, l in 0.3f64..1.5, lambda in -0.5f64..0.5) {
        let (m1, l1, lambda1) = bianchi2_rescaled_params(m, l, lambda);
        prop_assume!(l1 == 1.0);
        let a = build_with(Family::Bianchi2, &[("epsilon", 1.0), ("m", m), ("l", l), ("lambda", lambda)]);
        let b = build_with(Family::Bianchi2, &[("epsilon", 1.0), ("m", m1), ("l", 1.0), ("lambda", lambda1)]);
        if let (Ok(a), Ok(b)) = (a, b) {
            let tau = b.interval.sample_lo.max(1.2);
            let t = tau * l;
            if a.interval.contains(t) && b.interval.contains(tau) {
                // g(x,y,z,t) = l⁴ g'(x/l², y/l, z/l, t/l)
                let xa = [0.4 * l * l, 0.2 * l, -0.3 * l, t];
                let xb = [0.4, 0.2, -0.3, tau];
                let ga = a.metric.components(&xa).unwrap();
                let gb = b.metric.components(&xb).unwrap();
                let jac = [1.0 / (l * l), 1.0 / l, 1.0 / l, 1.0 / l];
                for i in 0..4 {
                    for j in 0..4 {
                        let want = l.powi(4) * gb[i][j] * jac[i] * jac[j];
                        prop_assert!((ga[i][j] - want).abs() < 1e-9 * (1.0 + want.abs()));
                    }
                }
            }
        }
    }
}
