//! Bianchi III families.

use super::frames::{diagonal_coframe, BianchiClass};
use super::interval::{breakpoints, select_interval, valid_intervals, Interval};
use super::{bianchi_domain, diag3, epsilon, get, Family, FamilyMetric, FirstIntegral, IntegrableModel, Params};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Metric, Signature};
use crate::jet::Jet;
use crate::symmetry::{bianchi3_killing, desitter_killing_catalog, DeSitterChart, KillingStaeckelField, KillingYanoField};
use std::f64::consts::FRAC_PI_2;
use std::sync::Arc;

const COORDS: [&str; 4] = ["x", "y", "z", "s"];

fn negative_lambda(p: &Params) -> Result<f64> {
    let lambda = get(p, "lambda")?;
    if lambda >= 0.0 {
        return Err(Error::Parameter(format!("this family needs lambda < 0, got {lambda}")));
    }
    Ok(lambda)
}

/// `g = s²(σ₁²+σ₃²) + f σ₂² + ε ds²/f`, `f = −ε + γ₀/s − ελs²/3`.
pub fn bianchi3(p: Params) -> Result<FamilyMetric> {
    let eps = epsilon(&p)?;
    let (gamma0, lambda) = (get(&p, "gamma0")?, get(&p, "lambda")?);
    let f = move |s: Jet| -> Jet { s.recip() * gamma0 - s * s * (eps * lambda / 3.0) - eps };
    let sf_poly = [gamma0, -eps, 0.0, -eps * lambda / 3.0];
    let valid = move |s: f64| s > 0.0 && f(Jet::cst(s)).v > 0.0;
    let cuts = breakpoints(&[&sf_poly]);
    let iv = select_interval(&valid_intervals(&valid, &cuts, 0.0, f64::INFINITY), p.get("t0").copied())?;
    let coframe = move |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        let s = x[3];
        let fv = f(s);
        if s.v <= 0.0 || fv.v <= 0.0 {
            return Err(Error::Domain(format!("f = {} at s = {}", fv.v, s.v)));
        }
        let sf = fv.sqrt();
        Ok(diagonal_coframe(BianchiClass::III, x, [sf.recip(), s, sf, s]))
    };
    let label = format!("bianchi3(eps={eps}, gamma0={gamma0}, lambda={lambda})");
    let metric = Metric::from_tetrad(label, Signature::from_epsilon(eps)?, COORDS, bianchi_domain(&iv), coframe);
    let mut fm = FamilyMetric::base(Family::Bianchi3, p, metric, lambda, iv);
    fm.killing = bianchi3_killing();
    fm.yano = Some(KillingYanoField::from_frame_terms("Y=s e3^e1", coframe, |x| vec![(x[3], 3, 1)]));
    fm.staeckel = Some(KillingStaeckelField::from_frame_squares("S=s^2((e1)^2+(e3)^2)", coframe, |x| {
        let s2 = x[3] * x[3];
        vec![(s2, 1), (s2, 3)]
    }));
    if eps > 0.0 {
        fm.expected_weyl = Some(Arc::new(move |x| {
            let w = gamma0 / (2.0 * x[3].powi(3));
            let m = diag3(w, -2.0 * w, w);
            (m, m)
        }));
    } else {
        fm.null_axis = Some(2);
        fm.expected_psi2 = Some(Arc::new(move |x| -gamma0 / (2.0 * x[3].powi(3))));
    }
    fm.first_integral = Some(FirstIntegral::new("int4", move |s, k| {
        // s = eᵗ, β² = s², γ² = f(s), c = 1; probes scale c
        let fj = f(Jet::var(0, s));
        let dfdt = s * fj.d[0];
        Ok((k * dfdt + k * k * fj.v + eps * (1.0 + lambda * s * s)).abs())
    }));
    fm.integrable = Some(IntegrableModel::TypeIII { eps, gamma0, lambda });
    Ok(fm)
}

/// Product family `(1/|λ|)[σ₁² + σ₃² + γ²σ₂² + ε dt²/γ²]`, `γ² = γ₀ + εt²`.
pub fn bianchi3_product(p: Params) -> Result<FamilyMetric> {
    let eps = epsilon(&p)?;
    let gamma0 = get(&p, "gamma0")?;
    let lambda = negative_lambda(&p)?;
    let g2 = move |t: Jet| t * t * eps + gamma0;
    let valid = move |t: f64| g2(Jet::cst(t)).v > 0.0;
    let cuts = breakpoints(&[&[gamma0, 0.0, eps]]);
    let iv = select_interval(&valid_intervals(&valid, &cuts, f64::NEG_INFINITY, f64::INFINITY), p.get("t0").copied())?;
    let k = (1.0 / lambda.abs()).sqrt();
    let coframe = move |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        let g = g2(x[3]);
        if g.v <= 0.0 {
            return Err(Error::Domain(format!("gamma^2 = {} at t = {}", g.v, x[3].v)));
        }
        let gm = g.sqrt();
        let kk = Jet::cst(k);
        Ok(diagonal_coframe(BianchiClass::III, x, [gm.recip() * k, kk, gm * k, kk]))
    };
    let label = format!("bianchi3_product(eps={eps}, gamma0={gamma0}, lambda={lambda})");
    let metric = Metric::from_tetrad(label, Signature::from_epsilon(eps)?, ["x", "y", "z", "t"], bianchi_domain(&iv), coframe);
    let mut fm = FamilyMetric::base(Family::Bianchi3Product, p, metric, lambda, iv);
    fm.killing = bianchi3_killing();
    if eps < 0.0 {
        fm.null_axis = Some(2);
    }
    Ok(fm)
}

/// Euclidean product forms `(1/|λ|){σ₁² + σ₃² + F(τ)[σ₂² + dτ²]}` with
/// `F = 1/cos²τ, 1/τ², 1/sinh²τ` for γ₀ > 0, = 0, < 0.
pub fn bianchi3_product_tau(p: Params) -> Result<FamilyMetric> {
    let sign = get(&p, "gamma0_sign")?;
    let lambda = negative_lambda(&p)?;
    let iv = if sign > 0.0 {
        Interval::new(-FRAC_PI_2, FRAC_PI_2)
    } else if sign == 0.0 {
        Interval::new(0.0, f64::INFINITY)
    } else {
        Interval::new(0.0, f64::INFINITY).with_window(0.3, 3.0)
    };
    let k = (1.0 / lambda.abs()).sqrt();
    let root_f = move |t: Jet| -> Jet {
        if sign > 0.0 {
            t.cos().recip()
        } else if sign == 0.0 {
            t.recip()
        } else {
            t.sinh().recip()
        }
    };
    let coframe = move |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        let r = root_f(x[3]).abs() * k;
        let kk = Jet::cst(k);
        Ok(diagonal_coframe(BianchiClass::III, x, [r, kk, r, kk]))
    };
    let label = format!("bianchi3_product_tau(gamma0_sign={sign}, lambda={lambda})");
    let metric = Metric::from_tetrad(label, Signature::Euclidean, ["x", "y", "z", "tau"], bianchi_domain(&iv), coframe);
    let mut fm = FamilyMetric::base(Family::Bianchi3ProductTau, p, metric, lambda, iv);
    fm.killing = bianchi3_killing();
    Ok(fm)
}

/// Conformally flat γ₀ = 0 members written in `(x, u, z, t)`:
/// `(3/|λ|)[t²(σ₁²+σ₃²) + ε dt²/h + h du²]` with `h = 1 + t²` (λ>0),
/// `1 − t²` (λ<0, Lorentzian) or `t² − 1` (λ<0, Euclidean).
pub fn desitter3(p: Params) -> Result<FamilyMetric> {
    let eps = epsilon(&p)?;
    let lambda = get(&p, "lambda")?;
    let (iv, hsign, hconst) = match (eps < 0.0, lambda > 0.0) {
        (true, true) => (Interval::new(0.0, f64::INFINITY), 1.0, 1.0),
        (true, false) => (Interval::new(0.0, 1.0), -1.0, 1.0),
        (false, false) => (Interval::new(1.0, f64::INFINITY), 1.0, -1.0),
        (false, true) => return Err(Error::Parameter("Euclidean signature needs lambda < 0".into())),
    };
    if lambda == 0.0 {
        return Err(Error::Parameter("lambda must be nonzero".into()));
    }
    let k = (3.0 / lambda.abs()).sqrt();
    let coframe = move |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        let t = x[3];
        let h = t * t * hsign + hconst;
        if h.v <= 0.0 {
            return Err(Error::Domain(format!("h = {} at t = {}", h.v, t.v)));
        }
        let sh = h.sqrt();
        Ok(diagonal_coframe(BianchiClass::III, x, [sh.recip() * k, t * k, sh * k, t * k]))
    };
    let label = format!("desitter3(eps={eps}, lambda={lambda})");
    let metric = Metric::from_tetrad(label, Signature::from_epsilon(eps)?, ["x", "u", "z", "t"], bianchi_domain(&iv), coframe);
    let mut fm = FamilyMetric::base(Family::Desitter3, p, metric, lambda, iv);
    fm.killing = bianchi3_killing();
    if eps > 0.0 {
        fm.expected_weyl = Some(Arc::new(|_| (diag3(0.0, 0.0, 0.0), diag3(0.0, 0.0, 0.0))));
    } else {
        fm.null_axis = Some(2);
    }
    Ok(fm)
}

/// `(3/λ)[t²(dz²+dv²)/v² + (1+t²)du² − dt²/(1+t²)]` in `(v, u, z, t)`, `v = eˣ`.
pub fn desitter3_poincare(p: Params) -> Result<FamilyMetric> {
    let lambda = get(&p, "lambda")?;
    if lambda <= 0.0 {
        return Err(Error::Parameter(format!("need lambda > 0, got {lambda}")));
    }
    let k = 3.0 / lambda;
    let iv = Interval::new(0.0, f64::INFINITY).with_window(0.3, 2.0);
    let dom = Domain::new([0.0, -1e3, -1e3, 0.0], [1e3, 1e3, 1e3, f64::INFINITY], [0.5, -1.0, -1.0, 0.3], [2.0, 1.0, 1.0, 2.0]);
    let metric = Metric::diagonal(
        format!("desitter3_poincare(lambda={lambda})"),
        Signature::Lorentzian,
        ["v", "u", "z", "t"],
        dom,
        move |x| {
            let (v, t) = (x[0], x[3]);
            let a = t * t / (v * v) * k;
            let h = t * t + 1.0;
            Ok([a, h * k, a, -(h.recip() * k)])
        },
    );
    let mut fm = FamilyMetric::base(Family::Desitter3Poincare, p, metric, lambda, iv);
    fm.killing = desitter_killing_catalog(DeSitterChart::Type3);
    fm.null_axis = Some(2);
    Ok(fm)
}

/// Flat `σ₂² + t²(σ₁²+σ₃²) − dt²`.
pub fn flat3(p: Params) -> Result<FamilyMetric> {
    let iv = Interval::new(0.0, f64::INFINITY);
    let coframe = |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        Ok(diagonal_coframe(BianchiClass::III, x, [Jet::cst(1.0), x[3], Jet::cst(1.0), x[3]]))
    };
    let metric = Metric::from_tetrad("flat3", Signature::Lorentzian, ["x", "y", "z", "t"], bianchi_domain(&iv), coframe);
    let mut fm = FamilyMetric::base(Family::Flat3, p, metric, 0.0, iv);
    fm.killing = bianchi3_killing();
    fm.null_axis = Some(2);
    Ok(fm)
}
