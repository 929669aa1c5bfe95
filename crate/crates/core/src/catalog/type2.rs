//! Bianchi II families.

use super::frames::{diagonal_coframe, BianchiClass};
use super::interval::{breakpoints, select_interval, valid_intervals};
use super::{bianchi_domain, diag3, epsilon, get, Family, FamilyMetric, FirstIntegral, IntegrableModel, Params};
use crate::error::{Error, Result};
use crate::geometry::{Metric, Signature};
use crate::jet::Jet;
use crate::symmetry::{bianchi2_killing, KillingStaeckelField, KillingYanoField};
use std::sync::Arc;

const COORDS: [&str; 4] = ["x", "y", "z", "t"];

/// The coordinate change removing `l`: `g → g/l⁴`, `τ = t/l`, `x → x/l²`, `y → y/l`, `z → z/l`.
pub const TYPE2_RESCALING: &str = "g/l^4, tau=t/l, x/l^2, y/l, z/l";

/// `(m, l, λ) → (m l, 1, λ l⁴)`, the parameters of the rescaled metric.
pub fn bianchi2_rescaled_params(m: f64, l: f64, lambda: f64) -> (f64, f64, f64) {
    (m * l, 1.0, lambda * l.powi(4))
}

fn t0(p: &Params) -> Option<f64> {
    p.get("t0").copied()
}

fn positive_l(p: &Params) -> Result<f64> {
    let l = get(p, "l")?;
    if l <= 0.0 {
        return Err(Error::Parameter(format!("l must be positive, got {l}")));
    }
    Ok(l)
}

/// Unified E>0 family: `g = 4l²(u/c)σ₁² + ε(c/u)dt² + c(σ₂²+σ₃²)` with
/// `c = t² − εl²`, `u = mt + λ(εl⁴ + 2l²t² − εt⁴/3)`.
pub fn bianchi2(p: Params) -> Result<FamilyMetric> {
    let eps = epsilon(&p)?;
    let (m, l, lambda) = (get(&p, "m")?, positive_l(&p)?, get(&p, "lambda")?);
    let c_poly = [-eps * l * l, 0.0, 1.0];
    let u_poly = [lambda * eps * l.powi(4), m, 2.0 * lambda * l * l, 0.0, -lambda * eps / 3.0];
    let cf = move |t: f64| t * t - eps * l * l;
    let uf = move |t: f64| m * t + lambda * (eps * l.powi(4) + 2.0 * l * l * t * t - eps * t.powi(4) / 3.0);
    let cuts = breakpoints(&[&c_poly, &u_poly]);
    let iv = select_interval(&valid_intervals(&|t| cf(t) > 0.0 && uf(t) > 0.0, &cuts, f64::NEG_INFINITY, f64::INFINITY), t0(&p))?;
    let sig = Signature::from_epsilon(eps)?;
    let cu = move |t: Jet| -> (Jet, Jet) {
        let c = t * t - eps * l * l;
        let u = t * m + (t.powi(4) * (-eps / 3.0) + t * t * (2.0 * l * l) + eps * l.powi(4)) * lambda;
        (c, u)
    };
    let coframe = move |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        let (c, u) = cu(x[3]);
        if c.v <= 0.0 || u.v <= 0.0 {
            return Err(Error::Domain(format!("c = {}, u = {} at t = {}", c.v, u.v, x[3].v)));
        }
        let r = (u / c).sqrt();
        let sc = c.sqrt();
        Ok(diagonal_coframe(BianchiClass::II, x, [r.recip(), r * (2.0 * l), sc, sc]))
    };
    let label = format!("bianchi2(eps={eps}, m={m}, l={l}, lambda={lambda})");
    let mut metric = Metric::from_tetrad(label, sig, COORDS, bianchi_domain(&iv), coframe);
    if eps > 0.0 {
        // dt runs against the orientation in which the printed W± labels hold.
        metric = metric.with_orientation(-1.0);
    }
    let mut fm = FamilyMetric::base(Family::Bianchi2, p, metric, lambda, iv);
    fm.killing = bianchi2_killing();
    fm.yano = Some(KillingYanoField::from_frame_terms("Y=eps l e0^e1 + t e2^e3", coframe, move |x| {
        vec![(Jet::cst(eps * l), 0, 1), (x[3], 2, 3)]
    }));
    fm.staeckel = Some(KillingStaeckelField::from_frame_squares("S=c((e2)^2+(e3)^2)", coframe, move |x| {
        let (c, _) = cu(x[3]);
        vec![(c, 2), (c, 3)]
    }));
    fm.yano_metric_shift = eps * l * l;
    if eps > 0.0 {
        fm.expected_weyl = Some(Arc::new(move |x| {
            let t = x[3];
            let wp = (3.0 * m + 8.0 * lambda * l.powi(3)) / (6.0 * (t - l).powi(3));
            let wm = (3.0 * m - 8.0 * lambda * l.powi(3)) / (6.0 * (t + l).powi(3));
            (diag3(-2.0 * wp, wp, wp), diag3(-2.0 * wm, wm, wm))
        }));
    } else {
        fm.null_axis = Some(1);
    }
    fm.first_integral = Some(first_integral_2eq1(eps, l));
    fm.integrable = Some(IntegrableModel::TypeII { eps, m, l, lambda });
    Ok(fm)
}

/// (2eq1): `γ̇² − ε/(4γ²) = E` with `γ² = E t² − ε/(4E)`, `E = 1/(2l)`.
fn first_integral_2eq1(eps: f64, l: f64) -> FirstIntegral {
    FirstIntegral::new("2eq1", move |t, k| {
        let e = 1.0 / (2.0 * l);
        let g2 = Jet::var(0, t) * Jet::var(0, t) * e - eps / (4.0 * e);
        if g2.v <= 0.0 {
            return Err(Error::Domain(format!("gamma^2 = {} at t = {t}", g2.v)));
        }
        let gamma = g2.sqrt();
        let gdot = gamma.d[0];
        Ok((gdot * gdot - eps / (4.0 * g2.v) - k * e).abs())
    })
}

/// E<0 Euclidean family: `c = l² − t²`, `u = mt − λ(l⁴ + 2l²t² − t⁴/3)`.
pub fn bianchi2_mirror(p: Params) -> Result<FamilyMetric> {
    let (m, l, lambda) = (get(&p, "m")?, positive_l(&p)?, get(&p, "lambda")?);
    let c_poly = [l * l, 0.0, -1.0];
    let u_poly = [-lambda * l.powi(4), m, -2.0 * lambda * l * l, 0.0, lambda / 3.0];
    let cu = move |t: Jet| -> (Jet, Jet) {
        let c = -(t * t) + l * l;
        let u = t * m - (t.powi(4) * (-1.0 / 3.0) + t * t * (2.0 * l * l) + l.powi(4)) * lambda;
        (c, u)
    };
    let valid = move |t: f64| {
        let (c, u) = cu(Jet::cst(t));
        c.v > 0.0 && u.v > 0.0
    };
    let cuts = breakpoints(&[&c_poly, &u_poly]);
    let iv = select_interval(&valid_intervals(&valid, &cuts, f64::NEG_INFINITY, f64::INFINITY), t0(&p))?;
    let coframe = move |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        let (c, u) = cu(x[3]);
        if c.v <= 0.0 || u.v <= 0.0 {
            return Err(Error::Domain(format!("c = {}, u = {} at t = {}", c.v, u.v, x[3].v)));
        }
        let r = (u / c).sqrt();
        let sc = c.sqrt();
        Ok(diagonal_coframe(BianchiClass::II, x, [r.recip(), r * (2.0 * l), sc, sc]))
    };
    let label = format!("bianchi2_mirror(m={m}, l={l}, lambda={lambda})");
    let metric = Metric::from_tetrad(label, Signature::Euclidean, COORDS, bianchi_domain(&iv), coframe).with_orientation(-1.0);
    let mut fm = FamilyMetric::base(Family::Bianchi2Mirror, p, metric, lambda, iv);
    fm.killing = bianchi2_killing();
    Ok(fm)
}

/// Dancer–Strachan Kähler metric `Δσ₁² + dt²/Δ + t(σ₂²+σ₃²)`, `Δ = l/t − 2λt²/3`.
pub fn bianchi2_kahler(p: Params) -> Result<FamilyMetric> {
    let (l, lambda) = (get(&p, "l")?, get(&p, "lambda")?);
    // tΔ = l − 2λt³/3
    let poly = [l, 0.0, 0.0, -2.0 * lambda / 3.0];
    let delta = move |t: Jet| t.recip() * l - t * t * (2.0 * lambda / 3.0);
    let valid = move |t: f64| t > 0.0 && delta(Jet::cst(t)).v > 0.0;
    let cuts = breakpoints(&[&poly]);
    let iv = select_interval(&valid_intervals(&valid, &cuts, 0.0, f64::INFINITY), t0(&p))?;
    let coframe = move |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        let d = delta(x[3]);
        if d.v <= 0.0 || x[3].v <= 0.0 {
            return Err(Error::Domain(format!("Delta = {} at t = {}", d.v, x[3].v)));
        }
        let sd = d.sqrt();
        let st = x[3].sqrt();
        Ok(diagonal_coframe(BianchiClass::II, x, [sd.recip(), sd, st, st]))
    };
    let label = format!("bianchi2_kahler(l={l}, lambda={lambda})");
    let metric = Metric::from_tetrad(label, Signature::Euclidean, COORDS, bianchi_domain(&iv), coframe).with_orientation(-1.0);
    let mut fm = FamilyMetric::base(Family::Bianchi2Kahler, p, metric, lambda, iv);
    fm.killing = bianchi2_killing();
    // J = dt∧σ₁ + t σ₂∧σ₃ = e⁰∧e¹ + e²∧e³
    fm.complex_structure = Some(KillingYanoField::from_frame_terms("J=dt^s1+t s2^s3", coframe, |_| {
        vec![(Jet::cst(1.0), 0, 1), (Jet::cst(1.0), 2, 3)]
    }));
    Ok(fm)
}

/// Self-dual member `3/(2|λ|(t+2b)²)((t+b)/t σ₁² + t/(t+b) dt² + t(σ₂²+σ₃²))`, `b < 0`, `λ < 0`.
pub fn bianchi2_selfdual(p: Params) -> Result<FamilyMetric> {
    let (b, lambda) = (get(&p, "b")?, get(&p, "lambda")?);
    if b >= 0.0 || lambda >= 0.0 {
        return Err(Error::Parameter(format!("need b < 0 and lambda < 0, got b={b}, lambda={lambda}")));
    }
    let cuts = [-2.0 * b];
    let valid = move |t: f64| t > -b && (t + 2.0 * b).abs() > 0.0;
    let iv = select_interval(&valid_intervals(&valid, &cuts, -b, f64::INFINITY), t0(&p))?;
    let pre = 3.0 / (2.0 * lambda.abs());
    let coframe = move |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        let t = x[3];
        if t.v <= -b || t.v + 2.0 * b == 0.0 {
            return Err(Error::Domain(format!("t = {} outside t > -b, t != -2b", t.v)));
        }
        let k = (t + 2.0 * b).abs().recip() * pre.sqrt();
        let r = ((t + b) / t).sqrt();
        let st = t.sqrt();
        Ok(diagonal_coframe(BianchiClass::II, x, [k / r, k * r, k * st, k * st]))
    };
    let label = format!("bianchi2_selfdual(b={b}, lambda={lambda})");
    // Along the catalog chart dt points opposite to the parent E>0 chart, so
    // the natural orientation carries the printed label W⁺ = 0.
    let metric = Metric::from_tetrad(label, Signature::Euclidean, COORDS, bianchi_domain(&iv), coframe);
    let mut fm = FamilyMetric::base(Family::Bianchi2Selfdual, p, metric, lambda, iv);
    fm.killing = bianchi2_killing();
    Ok(fm)
}
