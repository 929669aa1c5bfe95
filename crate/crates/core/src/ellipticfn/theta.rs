use super::jacobi::complete_k;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

const MAX_TERMS: usize = 500;

/// Modulus and the quantities derived from it.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EllipticContext {
    pub k2: f64,
    /// Quarter period K.
    pub kk: f64,
    /// Complementary quarter period K′.
    pub kk_prime: f64,
    /// Nome q = exp(−πK′/K).
    pub nome: f64,
}

impl EllipticContext {
    pub fn new(k2: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&k2) {
            return Err(Error::Domain(format!("modulus k^2 = {k2} outside [0, 1)")));
        }
        let kk = complete_k(k2)?;
        let kk_prime = if k2 == 0.0 { f64::INFINITY } else { complete_k(1.0 - k2)? };
        let nome = if k2 == 0.0 { 0.0 } else { (-PI * kk_prime / kk).exp() };
        Ok(EllipticContext { k2, kk, kk_prime, nome })
    }

    fn scale(&self) -> f64 {
        PI / (2.0 * self.kk)
    }
}

/// Theta functions in Jacobi's older notation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThetaKind {
    /// H(v) = θ₁(w)
    H,
    /// H₁(v) = θ₂(w)
    H1,
    /// Θ(v) = θ₄(w)
    Theta,
    /// Θ₁(v) = θ₃(w)
    Theta1,
}

/// Value and first two v-derivatives of a theta function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaValue {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

/// Evaluates a theta function and its first two derivatives in `v`, with
/// `w = πv/(2K)`.
pub fn theta_full(kind: ThetaKind, v: f64, ctx: &EllipticContext) -> ThetaValue {
    let q = ctx.nome;
    let sc = ctx.scale();
    let w = sc * v;
    let (mut f, mut f1, mut f2) = match kind {
        ThetaKind::Theta | ThetaKind::Theta1 => (1.0, 0.0, 0.0),
        _ => (0.0, 0.0, 0.0),
    };
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        let (term, t1, t2) = match kind {
            ThetaKind::H | ThetaKind::H1 => {
                let m = 2.0 * nf + 1.0;
                let amp = 2.0 * q.powf((nf + 0.5) * (nf + 0.5));
                let (s, c) = (m * w).sin_cos();
                if kind == ThetaKind::H {
                    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                    (sign * amp * s, sign * amp * m * c, -sign * amp * m * m * s)
                } else {
                    (amp * c, -amp * m * s, -amp * m * m * c)
                }
            }
            ThetaKind::Theta | ThetaKind::Theta1 => {
                if n == 0 {
                    continue;
                }
                let m = 2.0 * nf;
                let sign = if kind == ThetaKind::Theta && n % 2 == 1 { -1.0 } else { 1.0 };
                let amp = 2.0 * sign * q.powi((n * n) as i32);
                let (s, c) = (m * w).sin_cos();
                (amp * c, -amp * m * s, -amp * m * m * c)
            }
        };
        f += term;
        f1 += t1;
        f2 += t2;
        let bound = 2.0 * q.powf((nf + 0.5) * (nf + 0.5)) * (2.0 * nf + 2.0).powi(2);
        if n > 0 && bound <= 1e-16 * f.abs().max(f1.abs()).max(f2.abs()).max(1e-300) {
            break;
        }
        if q == 0.0 {
            break;
        }
    }
    ThetaValue { value: f, d1: f1 * sc, d2: f2 * sc * sc }
}

pub fn theta(kind: ThetaKind, v: f64, ctx: &EllipticContext) -> f64 {
    theta_full(kind, v, ctx).value
}

/// d/dv log θ_kind(v).
pub fn theta_logderivative(kind: ThetaKind, v: f64, ctx: &EllipticContext) -> Result<f64> {
    let t = theta_full(kind, v, ctx);
    if t.value.abs() <= 1e-14 * t.d1.abs().max(1.0) {
        return Err(Error::Pole { what: format!("{kind:?} vanishes"), location: v });
    }
    Ok(t.d1 / t.value)
}
