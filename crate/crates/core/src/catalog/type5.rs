//! Bianchi V families.

use super::frames::{diagonal_coframe, BianchiClass};
use super::interval::Interval;
use super::{bianchi_domain, epsilon, get, Family, FamilyMetric, FirstIntegral, Params};
use crate::ellipticfn::{build_change_of_variable, log_gamma_sq_jet, rho_jet, ChangeOfVariable, Quartic};
use crate::error::{Error, Result};
use crate::geometry::{Domain, Mat3, Metric, Signature};
use crate::jet::Jet;
use crate::symmetry::{bianchi5_killing, desitter_killing_catalog, DeSitterChart};
use std::sync::Arc;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn zero_weyl() -> (Mat3, Mat3) {
    ([[0.0; 3]; 3], [[0.0; 3]; 3])
}

/// `g = s²(σ₁²+σ₂²+σ₃²) − ds²/(1+λs²/3)`; Euclidean where `1 + λs²/3 < 0`.
pub fn bianchi5_special(p: Params) -> Result<FamilyMetric> {
    let eps = epsilon(&p)?;
    let lambda = get(&p, "lambda")?;
    let iv = if eps < 0.0 {
        if lambda >= 0.0 {
            Interval::new(0.0, f64::INFINITY)
        } else {
            Interval::new(0.0, (3.0 / -lambda).sqrt())
        }
    } else {
        if lambda >= 0.0 {
            return Err(Error::Parameter("the Euclidean branch needs lambda < 0".into()));
        }
        Interval::new((3.0 / -lambda).sqrt(), f64::INFINITY)
    };
    let coframe = move |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        let s = x[3];
        let h = s * s * (lambda / 3.0) + 1.0;
        if h.v * eps >= 0.0 {
            return Err(Error::Domain(format!("1 + lambda s^2/3 = {} has the wrong sign", h.v)));
        }
        let a0 = h.abs().sqrt().recip();
        Ok(diagonal_coframe(BianchiClass::V, x, [a0, s, s, s]))
    };
    let label = format!("bianchi5_special(eps={eps}, lambda={lambda})");
    let metric = Metric::from_tetrad(label, Signature::from_epsilon(eps)?, ["x", "y", "z", "s"], bianchi_domain(&iv), coframe);
    let mut fm = FamilyMetric::base(Family::Bianchi5Special, p, metric, lambda, iv);
    fm.killing = bianchi5_killing();
    if eps > 0.0 {
        fm.expected_weyl = Some(Arc::new(|_| zero_weyl()));
    } else {
        fm.null_axis = Some(1);
    }
    Ok(fm)
}

/// Constant-curvature forms of the special metric:
/// dS `(12/λ)(t²Σσ² − dt²)/(1−t²)²`, AdS `12/(|λ|(1+t²)²)(t²Σσ² − dt²)`,
/// H⁴ `(3/|λ|)[cosh²θ Σσ² + dθ²]`.
pub fn bianchi5_conformal(p: Params) -> Result<FamilyMetric> {
    let eps = epsilon(&p)?;
    let lambda = get(&p, "lambda")?;
    if lambda == 0.0 {
        return Err(Error::Parameter("lambda must be nonzero".into()));
    }
    let (iv, coords) = match (eps < 0.0, lambda > 0.0) {
        (true, true) => (Interval::new(0.0, 1.0), ["x", "y", "z", "t"]),
        (true, false) => (Interval::new(0.0, f64::INFINITY), ["x", "y", "z", "t"]),
        (false, false) => (Interval::new(f64::NEG_INFINITY, f64::INFINITY), ["x", "y", "z", "theta"]),
        (false, true) => return Err(Error::Parameter("the Euclidean form needs lambda < 0".into())),
    };
    let coframe = move |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        let t = x[3];
        let (a0, a) = if eps > 0.0 {
            let k = (3.0 / lambda.abs()).sqrt();
            (Jet::cst(k), t.cosh() * k)
        } else {
            let denom = if lambda > 0.0 { -(t * t) + 1.0 } else { t * t + 1.0 };
            let k = denom.recip() * (12.0 / lambda.abs()).sqrt();
            (k, k * t)
        };
        Ok(diagonal_coframe(BianchiClass::V, x, [a0, a, a, a]))
    };
    let label = format!("bianchi5_conformal(eps={eps}, lambda={lambda})");
    let metric = Metric::from_tetrad(label, Signature::from_epsilon(eps)?, coords, bianchi_domain(&iv), coframe);
    let mut fm = FamilyMetric::base(Family::Bianchi5Conformal, p, metric, lambda, iv);
    fm.killing = bianchi5_killing();
    if eps > 0.0 {
        fm.expected_weyl = Some(Arc::new(|_| zero_weyl()));
    } else {
        fm.null_axis = Some(1);
    }
    Ok(fm)
}

/// `(3/λ)(sinh²θ (dy²+dz²+dv²)/v² − dθ²)` in `(y, z, v, θ)`.
pub fn desitter5_poincare(p: Params) -> Result<FamilyMetric> {
    let lambda = get(&p, "lambda")?;
    if lambda <= 0.0 {
        return Err(Error::Parameter(format!("need lambda > 0, got {lambda}")));
    }
    let k = 3.0 / lambda;
    let iv = Interval::new(0.0, f64::INFINITY).with_window(0.3, 2.0);
    let dom = Domain::new([-1e3, -1e3, 0.0, 0.0], [1e3, 1e3, 1e3, f64::INFINITY], [-1.0, -1.0, 0.5, 0.3], [1.0, 1.0, 2.0, 2.0]);
    let metric = Metric::diagonal(
        format!("desitter5_poincare(lambda={lambda})"),
        Signature::Lorentzian,
        ["y", "z", "v", "theta"],
        dom,
        move |x| {
            let a = x[3].sinh().square() / x[2].square() * k;
            Ok([a, a, a, Jet::cst(-k)])
        },
    );
    let mut fm = FamilyMetric::base(Family::Desitter5Poincare, p, metric, lambda, iv);
    fm.killing = desitter_killing_catalog(DeSitterChart::Type5);
    fm.null_axis = Some(1);
    Ok(fm)
}

/// Entries `(w₁₁, w₂₂, w₂₃, w₃₃)` of the type V Euclidean Weyl matrices.
///
/// For λ < 0 the w₁₁ entry carries the factor 3 that makes W± trace-free.
pub fn bianchi5_euclid_w(lambda: f64, s: f64) -> (f64, f64, f64, f64) {
    if lambda > 0.0 {
        let q = 1.0 - s * s;
        let w11 = 8.0 * lambda / (3.0 * q.powi(3));
        let w23 = -2.0 * lambda / q.powi(2);
        let w22 = 2.0 * lambda / 3.0 * (SQRT3 * s.powi(3) - 3.0 * SQRT3 * s - 2.0) / q.powi(3);
        let w33 = -2.0 * lambda / 3.0 * (SQRT3 * s.powi(3) - 3.0 * SQRT3 * s + 2.0) / q.powi(3);
        (w11, w22, w23, w33)
    } else {
        let q = 3.0 - s * s;
        let w11 = -8.0 * lambda * s.powi(6) / (3.0 * q.powi(3));
        let w23 = 2.0 * lambda * s.powi(4) / q.powi(2);
        let w22 = 2.0 * lambda / 3.0 * s.powi(3) * (2.0 * s.powi(3) - 9.0 * s * s + 9.0) / q.powi(3);
        let w33 = 2.0 * lambda / 3.0 * s.powi(3) * (2.0 * s.powi(3) + 9.0 * s * s - 9.0) / q.powi(3);
        (w11, w22, w23, w33)
    }
}

/// The two elementary Euclidean type V metrics (c = 2/|λ|).
///
/// λ > 0: `((1−s²)/λ)[σ₁² + γ²σ₂² + γ⁻²σ₃² + 3ds²/(3−s²)²]`, s ∈ (−1, 1).
/// λ < 0: `((3−s²)/(|λ|s²))(σ₁² + γ²σ₂² + γ⁻²σ₃² + ds²/(1−s²)²)`, with
/// `branch` 0, −1, 1 selecting s ∈ (0, 1), (−1, 0), (1, √3).
pub fn bianchi5_euclid(p: Params) -> Result<FamilyMetric> {
    let lambda = get(&p, "lambda")?;
    let branch = get(&p, "branch")?;
    let swap = get(&p, "swap")? != 0.0;
    if lambda == 0.0 {
        return Err(Error::Parameter("lambda must be nonzero".into()));
    }
    let iv = if lambda > 0.0 {
        if branch != 0.0 {
            return Err(Error::Parameter("lambda > 0 has the single interval s in (-1, 1)".into()));
        }
        Interval::new(-1.0, 1.0)
    } else {
        match branch as i64 {
            // s → 0 is an asymptotic end; (β̇/β)² grows like s⁻⁴ there and swamps round-off.
            0 => Interval::new(0.0, 1.0).with_window(0.3, 0.85),
            -1 => Interval::new(-1.0, 0.0).with_window(-0.85, -0.3),
            1 => Interval::new(1.0, SQRT3),
            _ => return Err(Error::Parameter(format!("branch must be -1, 0 or 1, got {branch}"))),
        }
    };
    let sw = if swap { -1.0 } else { 1.0 };
    let parts = move |s: Jet| -> (Jet, Jet, Jet) {
        if lambda > 0.0 {
            let pre = (-(s * s) + 1.0) / lambda;
            let h = (-(s * s) + 3.0).powi(-2) * 3.0;
            let lg = (-s + SQRT3).ln() - (s + SQRT3).ln() + ((s + 1.0).ln() - (-s + 1.0).ln()) * SQRT3;
            (pre, h, lg)
        } else {
            let pre = (-(s * s) + 3.0) / (s * s * lambda.abs());
            let h = (-(s * s) + 1.0).powi(-2);
            let lg = (s + 1.0).ln() - (-s + 1.0).abs().ln() + ((-s + SQRT3).ln() - (s + SQRT3).ln()) * SQRT3;
            (pre, h, lg)
        }
    };
    let coframe = move |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        let s = x[3];
        if !iv.contains(s.v) {
            return Err(Error::Domain(format!("s = {} outside ({}, {})", s.v, iv.lo, iv.hi)));
        }
        let (pre, h, lg) = parts(s);
        let a = pre.sqrt();
        let g = (lg * (0.5 * sw)).exp();
        Ok(diagonal_coframe(BianchiClass::V, x, [a * h.sqrt(), a, a * g, a / g]))
    };
    let outer = lambda < 0.0 && branch == 1.0;
    let label = format!("bianchi5_euclid(lambda={lambda}, branch={branch}, swap={})", swap as u8);
    let mut metric = Metric::from_tetrad(label, Signature::Euclidean, ["x", "y", "z", "s"], bianchi_domain(&iv), coframe);
    if outer {
        metric = metric.with_orientation(-1.0);
    }
    let mut fm = FamilyMetric::base(Family::Bianchi5Euclid, p, metric, lambda, iv);
    fm.killing = bianchi5_killing();
    if !swap {
        fm.expected_weyl = Some(Arc::new(move |x| {
            let (w11, w22, w23, w33) = bianchi5_euclid_w(lambda, x[3]);
            let plus = [[w11, 0.0, 0.0], [0.0, w22, w23], [0.0, w23, w33]];
            let minus = [[w11, 0.0, 0.0], [0.0, w22, -w23], [0.0, -w23, w33]];
            (plus, minus)
        }));
    }
    let c = 2.0 / lambda.abs();
    fm.first_integral = Some(FirstIntegral::new("5intfin", move |s, k| {
        let (pre, _, lg) = parts(Jet::var(0, s));
        // β² = pre, γ² = e^{2ct}
        let dt_ds = lg.d[0] / (2.0 * c);
        let dlnb_ds = 0.5 * pre.d[0] / pre.v;
        let b2 = pre.v;
        let lhs = (dlnb_ds / dt_ds).powi(2);
        Ok((lhs - (k * c).powi(2) / 3.0 + b2 * b2 * (1.0 + lambda * b2 / 3.0)).abs())
    }));
    Ok(fm)
}

/// Change of variable for `P(ρ) = ρ(ρ³ + 3ρ + λc)` with `λ = 2 sinh θ`.
pub fn minkowski_change_of_variable(theta: f64, c: f64) -> Result<ChangeOfVariable> {
    if theta == 0.0 {
        return Err(Error::Parameter("theta = 0 (lambda = 0) is excluded".into()));
    }
    if c <= 0.0 {
        return Err(Error::Parameter(format!("c must be positive, got {c}")));
    }
    build_change_of_variable(&Quartic::bianchi5(-1.0, 2.0 * theta.sinh(), c))
}

/// `(c/ρ)(σ₁² + γ²σ₂² + γ⁻²σ₃² − (3/AB)dv²)` on `v ∈ (0, v₀)` with `λ = 2 sinh θ`.
pub fn bianchi5_minkowski(p: Params) -> Result<FamilyMetric> {
    let theta = get(&p, "theta")?;
    let c = get(&p, "c")?;
    let swap = get(&p, "swap")? != 0.0;
    let cov = minkowski_change_of_variable(theta, c)?;
    let lambda = 2.0 * theta.sinh();
    let iv = Interval::new(0.0, cov.v0);
    let ab = cov.a_len * cov.b_len;
    let sw = if swap { -1.0 } else { 1.0 };
    let coframe = move |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> {
        let rho = rho_jet(x[3], &cov)?;
        if rho.v <= 0.0 {
            return Err(Error::Domain(format!("rho = {} at v = {}", rho.v, x[3].v)));
        }
        let lg = log_gamma_sq_jet(x[3], &cov)?;
        let a = (rho.recip() * c).sqrt();
        let g = (lg * (0.5 * sw)).exp();
        Ok(diagonal_coframe(BianchiClass::V, x, [a * (3.0 / ab).sqrt(), a, a * g, a / g]))
    };
    let label = format!("bianchi5_minkowski(theta={theta}, c={c}, swap={})", swap as u8);
    let metric = Metric::from_tetrad(label, Signature::Lorentzian, ["x", "y", "z", "v"], bianchi_domain(&iv), coframe);
    let mut fm = FamilyMetric::base(Family::Bianchi5Minkowski, p, metric, lambda, iv);
    fm.killing = bianchi5_killing();
    fm.null_axis = Some(1);
    fm.expected_psi2 = Some(Arc::new(move |x| {
        // Ψ₂ = c²μ³/3 with μ = 1/β² = ρ/c
        let rho = rho_jet(Jet::cst(x[3]), &cov).map(|r| r.v).unwrap_or(f64::NAN);
        c * c * (rho / c).powi(3) / 3.0
    }));
    fm.first_integral = Some(FirstIntegral::new("5intfin", move |v, k| {
        let rho = rho_jet(Jet::var(0, v), &cov)?;
        let b2 = c / rho.v;
        let dt_dv = SQRT3 * rho.v / (c * ab.sqrt());
        let dlnb_dv = -0.5 * rho.d[0] / rho.v;
        let lhs = (dlnb_dv / dt_dv).powi(2);
        Ok((lhs - (k * c).powi(2) / 3.0 - b2 * b2 * (1.0 + lambda * b2 / 3.0)).abs())
    }));
    Ok(fm)
}

/// Flat `t²(σ₁²+σ₂²+σ₃²) − dt²`.
pub fn flat5(p: Params) -> Result<FamilyMetric> {
    let iv = Interval::new(0.0, f64::INFINITY);
    let coframe =
        |x: &[Jet; 4]| -> Result<[[Jet; 4]; 4]> { Ok(diagonal_coframe(BianchiClass::V, x, [Jet::cst(1.0), x[3], x[3], x[3]])) };
    let metric = Metric::from_tetrad("flat5", Signature::Lorentzian, ["x", "y", "z", "t"], bianchi_domain(&iv), coframe);
    let mut fm = FamilyMetric::base(Family::Flat5, p, metric, 0.0, iv);
    fm.killing = bianchi5_killing();
    fm.null_axis = Some(1);
    Ok(fm)
}
