use bianchi::catalog::*;
use bianchi::geodesic::*;
use proptest::prelude::*;

fn type2() -> FamilyMetric {
    build_with(Family::Bianchi2, &[("epsilon", 1.0), ("m", 0.8), ("l", 0.6), ("lambda", -0.5)]).unwrap()
}

fn type2_lorentzian() -> FamilyMetric {
    build_with(Family::Bianchi2, &[("epsilon", -1.0), ("m", 0.7), ("l", 0.9), ("lambda", 0.3)]).unwrap()
}

fn type3() -> FamilyMetric {
    build_with(Family::Bianchi3, &[("epsilon", 1.0), ("gamma0", 0.8), ("lambda", -0.6)]).unwrap()
}

fn type3_lorentzian() -> FamilyMetric {
    build_with(Family::Bianchi3, &[("epsilon", -1.0), ("gamma0", 0.8), ("lambda", 0.5)]).unwrap()
}

fn cases() -> Vec<(FamilyMetric, PhaseState)> {
    vec![
        (type2(), PhaseState::new([0.1, 0.2, -0.3, 1.5], [0.05, 0.3, -0.2, 0.1])),
        // Lorentzian: g^{tt} < 0, so Π_t < 0 moves away from the singular end.
        (type2_lorentzian(), PhaseState::new([0.1, 0.2, -0.3, 1.5], [0.05, 0.1, -0.1, -1.0])),
        (type3(), PhaseState::new([0.1, 0.2, -0.3, 2.5], [0.05, 0.3, -0.2, 0.1])),
        (type3_lorentzian(), PhaseState::new([0.1, 0.2, -0.3, 1.5], [0.05, 0.1, -0.1, -1.0])),
    ]
}

#[test]
fn drifts_stay_small_over_span_ten() {
    for (fm, s0) in cases() {
        let charges = involution_set(&fm).unwrap();
        let run = integrate(&fm.metric, s0, 10.0, &IntegratorConfig::default(), &charges).unwrap();
        assert!(run.truncated.is_none(), "{}: {:?}", fm.family, run.truncated);
        for q in &run.report.quantities {
            assert!(q.relative_drift < 1e-8, "{} {}: {:e}", fm.family, q.name, q.relative_drift);
        }
    }
}

#[test]
fn all_killing_charges_conserved() {
    for (fm, s0) in cases() {
        let charges = conserved_quantities(&fm);
        assert!(charges.len() >= 6);
        let run = integrate(&fm.metric, s0, 10.0, &IntegratorConfig::default(), &charges).unwrap();
        assert!(run.report.worst_relative_drift() < 1e-8, "{:?}", run.report);
    }
}

#[test]
fn quantities_are_in_involution() {
    for (fm, s0) in cases() {
        let q = involution_set(&fm).unwrap();
        for i in 0..q.len() {
            for j in i + 1..q.len() {
                let b = poisson_bracket(&q[i], &q[j], &s0, 1e-4);
                assert!(b.abs() < 1e-6, "{} {{{}, {}}} = {b:e}", fm.family, q[i].name, q[j].name);
            }
        }
        // {Π_x, 𝒮} = 0 for type II is part of the set above; a non-conserved probe is not.
        let probe = Charge::new("t", |s| s.x[3]);
        assert!(poisson_bracket(&q[0], &probe, &s0, 1e-4).abs() > 1e-3);
    }
}

#[test]
fn staeckel_charge_from_the_tensor_matches_the_chart_form() {
    for (fm, s0) in cases() {
        let from_tensor = staeckel_charge("S", fm.staeckel.clone().unwrap(), fm.metric.clone());
        let explicit = conserved_quantities(&fm).into_iter().find(|c| c.name == "S").unwrap();
        let (a, b) = (from_tensor.eval(&s0), explicit.eval(&s0));
        assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()), "{}: {a} vs {b}", fm.family);
    }
}

#[test]
fn time_reversal() {
    for (fm, s0) in cases() {
        let cfg = IntegratorConfig::default();
        let fwd = integrate(&fm.metric, s0, 5.0, &cfg, &[]).unwrap();
        let (_, s1) = *fwd.end();
        let back = integrate(&fm.metric, s1, -5.0, &cfg, &[]).unwrap();
        let (_, s2) = *back.end();
        for i in 0..4 {
            assert!((s2.x[i] - s0.x[i]).abs() < 1e-7 && (s2.p[i] - s0.p[i]).abs() < 1e-7, "{}", fm.family);
        }
    }
}

#[test]
fn hamilton_jacobi_reconstruction() {
    for (fm, s0) in cases() {
        let hj = hj_separation_check(&fm, s0, 10.0, &IntegratorConfig::default()).unwrap();
        assert!(hj.max_momentum_mismatch < 1e-6, "{}: {:e}", fm.family, hj.max_momentum_mismatch);
        assert!(hj.action.len() > 2);
    }
}

#[test]
fn turning_points_match_the_trajectory() {
    // Inward motion with 𝒮 > 0 bounces where (dA/ds)² vanishes.
    let fm = type3();
    let s0 = PhaseState::new([0.0, 0.0, 0.0, 4.0], [1.0, 0.0, 0.0, -0.05]);
    let hj = hj_separation_check(&fm, s0, 10.0, &IntegratorConfig::default()).unwrap();
    assert_eq!(hj.trajectory_turns.len(), 1);
    let turn = hj.trajectory_turns[0];
    assert!(hj.turning_points.iter().any(|r| (r - turn).abs() < 1e-6), "{turn} vs {:?}", hj.turning_points);
}

#[test]
fn forbidden_region_is_reported() {
    let fm = type3();
    let m = fm.integrable.unwrap();
    assert!(hj_rhs(&m, -1.0, 0.0, 0.0, 2.0) < 0.0);
}

#[test]
fn vertical_geodesics_match_quadrature() {
    for fm in [type2(), type2_lorentzian(), type3(), type3_lorentzian()] {
        let t0 = 0.5 * (fm.interval.sample_lo + fm.interval.sample_hi);
        let c = vertical_quadrature_check(&fm, t0, 0.3, 2.0, &IntegratorConfig::default()).unwrap();
        assert!(c.position_error < 1e-7, "{}: {c:?}", fm.family);
    }
}

#[test]
fn explicit_hamiltonians() {
    for (fm, s0) in cases() {
        let m = fm.integrable.unwrap();
        let a = hamiltonian(&fm.metric, &s0).unwrap();
        assert!((a - explicit_hamiltonian(&m, &s0)).abs() < 1e-10 * (1.0 + a.abs()));
    }
}

#[test]
fn null_geodesic_keeps_h_zero() {
    let fm = type2_lorentzian();
    let x = [0.0, 0.1, 0.2, 1.5];
    // Solve H = 0 for Π_t.
    let mut s = PhaseState::new(x, [0.1, 0.2, 0.3, 0.0]);
    let h_space = hamiltonian(&fm.metric, &s).unwrap();
    s.p[3] = 1.0;
    let h_one = hamiltonian(&fm.metric, &s).unwrap() - h_space;
    s.p[3] = (-h_space / h_one).sqrt();
    assert!(hamiltonian(&fm.metric, &s).unwrap().abs() < 1e-14);
    let charges = conserved_quantities(&fm);
    let run = integrate(&fm.metric, s, 5.0, &IntegratorConfig::default(), &charges).unwrap();
    assert!(run.report.get("H").unwrap().max_abs_drift < 1e-9);
}

#[test]
fn csv_export() {
    let fm = type3();
    let charges = conserved_quantities(&fm);
    let run = integrate(
        &fm.metric,
        PhaseState::new([0.1, 0.2, -0.3, 2.5], [0.2, 0.1, -0.3, 0.05]),
        1.0,
        &IntegratorConfig::default(),
        &charges,
    )
    .unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    write_trajectory_csv(&path, &run, &charges).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("affine,x0,x1,x2,x3,p0,p1,p2,p3,H,"));
    assert_eq!(lines.count(), run.trajectory.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn brackets_vanish_at_random_phase_points(
        x in prop::array::uniform3(-1.0f64..1.0),
        p in prop::array::uniform4(-1.0f64..1.0),
        which in 0usize..4,
    ) {
        let fm = vec![type2(), type2_lorentzian(), type3(), type3_lorentzian()].swap_remove(which);
        let t = 0.5 * (fm.interval.sample_lo + fm.interval.sample_hi);
        let s = PhaseState::new([x[0], x[1], x[2], t], p);
        let q = involution_set(&fm).unwrap();
        for i in 0..q.len() {
            for j in i + 1..q.len() {
                prop_assert!(poisson_bracket(&q[i], &q[j], &s, 1e-4).abs() < 1e-6);
            }
        }
    }
}
