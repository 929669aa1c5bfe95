//! Numerical identities the elliptic machinery must satisfy, each reported with
//! the worst deviation found and the tolerance it is held to.

use super::jacobi::jacobi_sncn_dn;
use super::quartic::{build_change_of_variable, log_gamma_sq_jet, rho_jet, ChangeOfVariable, Quartic};
use super::theta::{theta, theta_logderivative, EllipticContext, ThetaKind};
use crate::error::Result;
use crate::jet::Jet;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct SelfTestItem {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl SelfTestItem {
    fn new(name: &'static str, worst: f64, tolerance: f64) -> Self {
        SelfTestItem { name, worst, tolerance, pass: worst < tolerance }
    }
}

const MODULI: [f64; 5] = [0.01, 0.3, 0.5, 0.9, 0.99];
const THETAS: [f64; 4] = [-1.3, -0.8, 0.8, 1.3];

fn grid(lo: f64, hi: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
}

/// The Lorentzian type V quartic with `c = 1`, `λ = 2 sinh θ`.
pub fn type5_change_of_variable(theta: f64) -> Result<ChangeOfVariable> {
    build_change_of_variable(&Quartic::bianchi5(-1.0, 2.0 * theta.sinh(), 1.0))
}

fn jacobi_identities() -> Result<f64> {
    let mut worst = 0.0f64;
    for k2 in MODULI {
        for v in grid(-4.0, 4.0, 81) {
            let (s, c, d) = jacobi_sncn_dn(v, k2)?;
            worst = worst.max((s * s + c * c - 1.0).abs()).max((d * d + k2 * s * s - 1.0).abs());
        }
    }
    Ok(worst)
}

/// H, H₁ flip sign and Θ, Θ₁ repeat under `v → v + 2K`.
fn quasi_periodicity() -> Result<f64> {
    let mut worst = 0.0f64;
    for k2 in MODULI {
        let ctx = EllipticContext::new(k2)?;
        for v in grid(-1.5, 1.5, 31) {
            for (kind, sign) in [(ThetaKind::H, -1.0), (ThetaKind::H1, -1.0), (ThetaKind::Theta, 1.0), (ThetaKind::Theta1, 1.0)] {
                let a = theta(kind, v, &ctx);
                let b = theta(kind, v + 2.0 * ctx.kk, &ctx);
                worst = worst.max((b - sign * a).abs() / (1.0 + a.abs()));
            }
        }
    }
    Ok(worst)
}

fn logderivative_vs_fd() -> Result<f64> {
    let mut worst = 0.0f64;
    let h = 1e-5;
    for k2 in MODULI {
        let ctx = EllipticContext::new(k2)?;
        for v in grid(0.05, 0.95 * ctx.kk, 19) {
            for kind in [ThetaKind::H, ThetaKind::H1, ThetaKind::Theta, ThetaKind::Theta1] {
                let l = |x: f64| theta(kind, x, &ctx).abs().ln();
                let fd = (8.0 * (l(v + h) - l(v - h)) - (l(v + 2.0 * h) - l(v - 2.0 * h))) / (12.0 * h);
                let exact = theta_logderivative(kind, v, &ctx)?;
                worst = worst.max((exact - fd).abs() / (1.0 + exact.abs()));
            }
        }
    }
    Ok(worst)
}

/// `dρ/√P(ρ) = (2/√(AB)) dv` along the v-grid, with dρ/dv from the jet.
fn jacobian_identity() -> Result<f64> {
    let mut worst = 0.0f64;
    for th in THETAS {
        let cov = type5_change_of_variable(th)?;
        let p = Quartic::bianchi5(-1.0, 2.0 * th.sinh(), 1.0);
        for v in grid(0.02 * cov.v0, 0.9 * cov.v0, 45) {
            let r = rho_jet(Jet::var(0, v), &cov)?;
            let lhs = r.d[0] / p.eval(r.v).sqrt();
            worst = worst.max((lhs * (cov.a_len * cov.b_len).sqrt() / 2.0 - 1.0).abs());
        }
    }
    Ok(worst)
}

/// `sn v₀ = √(2B/(A+B ∓ 2 sinh(θ/3)))` for λ ≶ 0, against sn of the computed v₀.
fn sn_v0_closed_form() -> Result<f64> {
    let mut worst = 0.0f64;
    for th in THETAS {
        let cov = type5_change_of_variable(th)?;
        let sh = (th / 3.0).sinh();
        let (big, small) = ((3.0 + 12.0 * sh * sh).sqrt(), (3.0 + 4.0 * sh * sh).sqrt());
        let (a, b) = if th < 0.0 { (big, small) } else { (small, big) };
        let denom = if th < 0.0 { a + b - 2.0 * sh } else { a + b + 2.0 * sh };
        let printed = (2.0 * b / denom).sqrt();
        let (sn, _, _) = jacobi_sncn_dn(cov.v0, cov.ctx.k2)?;
        worst = worst.max((printed - sn).abs()).max((a - cov.a_len).abs()).max((b - cov.b_len).abs());
    }
    Ok(worst)
}

fn gamma_at_origin() -> Result<f64> {
    let mut worst = 0.0f64;
    for th in THETAS {
        let cov = type5_change_of_variable(th)?;
        worst = worst.max((log_gamma_sq_jet(Jet::cst(0.0), &cov)?.v.exp() - 1.0).abs());
    }
    Ok(worst)
}

/// `3/(AB) → 1` as λ → 0.
fn small_lambda_limit() -> Result<f64> {
    let mut worst = 0.0f64;
    for lambda in [-1e-4, 1e-4] {
        let cov = type5_change_of_variable((lambda / 2.0f64).asinh())?;
        worst = worst.max((3.0 / (cov.a_len * cov.b_len) - 1.0).abs());
    }
    Ok(worst)
}

pub fn elliptic_selftest() -> Result<Vec<SelfTestItem>> {
    Ok(vec![
        SelfTestItem::new("jacobi_identities", jacobi_identities()?, 1e-13),
        SelfTestItem::new("theta_quasi_periodicity", quasi_periodicity()?, 1e-12),
        SelfTestItem::new("theta_logderivative_vs_fd", logderivative_vs_fd()?, 1e-8),
        SelfTestItem::new("jacobian_identity", jacobian_identity()?, 1e-8),
        SelfTestItem::new("sn_v0_closed_form", sn_v0_closed_form()?, 1e-12),
        SelfTestItem::new("gamma_squared_at_origin", gamma_at_origin()?, 1e-12),
        SelfTestItem::new("small_lambda_limit", small_lambda_limit()?, 1e-6),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_item_passes() {
        for item in elliptic_selftest().unwrap() {
            assert!(item.pass, "{item:?}");
        }
    }
}
