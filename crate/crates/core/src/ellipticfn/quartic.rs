use super::jacobi::{inverse_sn, jacobi_jets, jacobi_sncn_dn};
use super::theta::{theta_full, EllipticContext, ThetaKind};
use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::poly;
use serde::{Deserialize, Serialize};

/// Monic quartic with ascending coefficients `[c0, c1, c2, c3]` (leading 1 implied).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Quartic {
    pub coeffs: [f64; 4],
}

impl Quartic {
    pub fn eval(&self, x: f64) -> f64 {
        let c = &self.coeffs;
        (((x + c[3]) * x + c[2]) * x + c[1]) * x + c[0]
    }

    /// P(ρ) = ρ(ρ³ − 3ερ − ελc).
    pub fn bianchi5(eps: f64, lambda: f64, c: f64) -> Self {
        Quartic { coeffs: [0.0, -eps * lambda * c, -3.0 * eps, 0.0] }
    }
}

/// Real pair `a > b` and complex pair `b1 ± i a1` of a quartic.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuarticRoots {
    pub a: f64,
    pub b: f64,
    pub b1: f64,
    pub a1: f64,
}

impl QuarticRoots {
    /// Ascending coefficients of (ρ−a)(ρ−b)[(ρ−b1)²+a1²], the leading 1 omitted.
    pub fn expand(&self) -> [f64; 4] {
        let (s, p) = (self.a + self.b, self.a * self.b);
        let (u, w) = (2.0 * self.b1, self.b1 * self.b1 + self.a1 * self.a1);
        // (x² − s x + p)(x² − u x + w)
        [p * w, -(s * w + p * u), w + s * u + p, -(s + u)]
    }
}

/// Appendix-B style reduction of ∫dρ/√P to Jacobi elliptic functions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChangeOfVariable {
    pub roots: QuarticRoots,
    #[serde(rename = "A")]
    pub a_len: f64,
    #[serde(rename = "B")]
    pub b_len: f64,
    pub ctx: EllipticContext,
    pub v0: f64,
    pub sn_v0: f64,
    pub xi: f64,
}

/// Branch of the Lorentzian type V family, keyed by the sign of λ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaBranch {
    LambdaNeg,
    LambdaPos,
}

fn polish_real_root(coeffs: &[f64; 5], mut x: f64) -> f64 {
    for _ in 0..4 {
        let (p, dp) = poly::eval_real(coeffs, x);
        if dp == 0.0 {
            break;
        }
        let step = p / dp;
        x -= step;
        if step.abs() < 1e-17 * (1.0 + x.abs()) {
            break;
        }
    }
    x
}

/// Splits a monic quartic into two simple real roots and a complex pair.
pub fn quartic_roots(p: &Quartic) -> Result<QuarticRoots> {
    let full = [p.coeffs[0], p.coeffs[1], p.coeffs[2], p.coeffs[3], 1.0];
    let all = poly::roots(&full);
    let scale = all.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let (mut real, cplx): (Vec<_>, Vec<_>) = all.into_iter().partition(|z| z.im.abs() <= 1e-7 * scale);
    if real.len() != 2 || cplx.len() != 2 {
        return Err(Error::RootStructure(format!("expected two real roots and a complex pair, found {} real", real.len())));
    }
    real.sort_by(|x, y| y.re.total_cmp(&x.re));
    let a = polish_real_root(&full, real[0].re);
    let b = polish_real_root(&full, real[1].re);
    if (a - b).abs() <= 1e-7 * scale {
        return Err(Error::RootStructure(format!("double real root near {a}")));
    }
    let z = if cplx[0].im > 0.0 { cplx[0] } else { cplx[1] };
    // The complex pair follows from the real ones by deflation: x² − u x + w.
    let s = a + b;
    let pp = a * b;
    let u = -(p.coeffs[3] + s);
    let w = p.coeffs[2] - pp - s * u;
    let b1 = 0.5 * u;
    let disc = w - b1 * b1;
    let a1 = if disc > 0.0 { disc.sqrt() } else { z.im.abs() };
    Ok(QuarticRoots { a, b, b1, a1 })
}

fn sqrt_p_factor(roots: &QuarticRoots, rho: f64) -> f64 {
    ((rho - roots.b1).powi(2) + roots.a1 * roots.a1).sqrt()
}

/// Builds the change of variable for a quartic with two real roots.
pub fn build_change_of_variable(p: &Quartic) -> Result<ChangeOfVariable> {
    let roots = quartic_roots(p)?;
    let QuarticRoots { a, b, b1, a1 } = roots;
    let a_len = ((a - b1).powi(2) + a1 * a1).sqrt();
    let b_len = ((b - b1).powi(2) + a1 * a1).sqrt();
    let k2 = ((a_len + b_len).powi(2) - (a - b).powi(2)) / (4.0 * a_len * b_len);
    if !(k2 > 0.0 && k2 < 1.0) {
        return Err(Error::RootStructure(format!("modulus k^2 = {k2} outside (0, 1)")));
    }
    let ctx = EllipticContext::new(k2)?;
    let sn_v0 = (2.0 * b_len / (a_len + b_len + a - b)).sqrt();
    if !(sn_v0 > 0.0 && sn_v0 < 1.0) {
        return Err(Error::RootStructure(format!("sn v0 = {sn_v0} outside (0, 1)")));
    }
    let v0 = inverse_sn(sn_v0, k2)?;
    let mut cov = ChangeOfVariable { roots, a_len, b_len, ctx, v0, sn_v0, xi: 0.0 };
    cov.xi = xi_unified(&cov)?;
    Ok(cov)
}

/// ξ = 2(−b/√(AB) + Θ′/Θ(v0) + H₁′/H₁(v0)).
pub fn xi_unified(cov: &ChangeOfVariable) -> Result<f64> {
    let th = theta_full(ThetaKind::Theta, cov.v0, &cov.ctx);
    let h1 = theta_full(ThetaKind::H1, cov.v0, &cov.ctx);
    if th.value == 0.0 || h1.value == 0.0 {
        return Err(Error::Pole { what: "theta vanishes at v0".into(), location: cov.v0 });
    }
    Ok(2.0 * (-cov.roots.b / (cov.a_len * cov.b_len).sqrt() + th.d1 / th.value + h1.d1 / h1.value))
}

/// The drift coefficient with the `|b|/(AB)` term exactly as displayed for the λ>0 branch.
pub fn xi_as_displayed(cov: &ChangeOfVariable, branch: LambdaBranch) -> f64 {
    let th = theta_full(ThetaKind::Theta, cov.v0, &cov.ctx);
    let h1 = theta_full(ThetaKind::H1, cov.v0, &cov.ctx);
    let extra = match branch {
        LambdaBranch::LambdaNeg => 0.0,
        LambdaBranch::LambdaPos => cov.roots.b.abs() / (cov.a_len * cov.b_len),
    };
    2.0 * (extra + th.d1 / th.value + h1.d1 / h1.value)
}

/// ρ(v) with a flag raised when the denominator has nearly cancelled.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhoValue {
    pub rho: f64,
    pub near_pole: bool,
}

fn check_v(v: f64, cov: &ChangeOfVariable) -> Result<()> {
    if !(0.0..cov.v0).contains(&v) {
        if v >= cov.v0 {
            return Err(Error::Pole { what: "rho diverges at v0".into(), location: v });
        }
        return Err(Error::Domain(format!("v = {v} outside [0, v0 = {})", cov.v0)));
    }
    Ok(())
}

pub fn rho_of_v(v: f64, cov: &ChangeOfVariable) -> Result<RhoValue> {
    check_v(v, cov)?;
    let (s, c, d) = jacobi_sncn_dn(v, cov.ctx.k2)?;
    let (a, b) = (cov.roots.a, cov.roots.b);
    let num = a * cov.b_len * c * c - b * cov.a_len * s * s * d * d;
    let bc2 = cov.b_len * c * c;
    let as2d2 = cov.a_len * s * s * d * d;
    let den = bc2 - as2d2;
    Ok(RhoValue { rho: num / den, near_pole: den.abs() < 1e-6 * (bc2 + as2d2) })
}

/// ρ as a jet in the chart coordinates, given the jet of `v`.
pub fn rho_jet(v: Jet, cov: &ChangeOfVariable) -> Result<Jet> {
    check_v(v.v, cov)?;
    let (s, c, d) = jacobi_jets(v, cov.ctx.k2)?;
    let (a, b) = (cov.roots.a, cov.roots.b);
    let c2 = c * c;
    let s2d2 = s * s * d * d;
    Ok((c2 * (a * cov.b_len) - s2d2 * (b * cov.a_len)) / (c2 * cov.b_len - s2d2 * cov.a_len))
}

/// Forward map sn²v = 2B(ρ−a)/D₊.
pub fn forward_sn2(rho: f64, cov: &ChangeOfVariable) -> f64 {
    let QuarticRoots { a, b, .. } = cov.roots;
    let d_plus = cov.a_len * (rho - b) + cov.b_len * (rho - a) + (a - b) * sqrt_p_factor(&cov.roots, rho);
    2.0 * cov.b_len * (rho - a) / d_plus
}

fn branch_matches(cov: &ChangeOfVariable, branch: LambdaBranch) -> bool {
    let scale = cov.roots.a.abs().max(1.0);
    match branch {
        LambdaBranch::LambdaNeg => cov.roots.b.abs() <= 1e-12 * scale,
        LambdaBranch::LambdaPos => cov.roots.a.abs() <= 1e-12 * scale && cov.roots.b < 0.0,
    }
}

/// log γ² as a jet: √3(−ξv + log H(v0+v) + log Θ₁(v0+v) − log H(v0−v) − log Θ₁(v0−v)).
pub fn log_gamma_sq_jet(v: Jet, cov: &ChangeOfVariable) -> Result<Jet> {
    check_v(v.v, cov)?;
    let log_theta = |kind: ThetaKind, arg: Jet| -> Result<Jet> {
        let t = theta_full(kind, arg.v, &cov.ctx);
        if t.value <= 0.0 {
            return Err(Error::Pole { what: format!("{kind:?} not positive"), location: arg.v });
        }
        let l1 = t.d1 / t.value;
        Ok(arg.chain(t.value.ln(), l1, t.d2 / t.value - l1 * l1))
    };
    let plus = v + cov.v0;
    let minus = cov.v0 - v;
    let sum = log_theta(ThetaKind::H, plus)? + log_theta(ThetaKind::Theta1, plus)?
        - log_theta(ThetaKind::H, minus)?
        - log_theta(ThetaKind::Theta1, minus)?;
    Ok((sum - v * cov.xi) * 3f64.sqrt())
}

/// γ²(v) on the requested branch; the branch must agree with the root layout.
pub fn gamma_squared_of_v(v: f64, cov: &ChangeOfVariable, branch: LambdaBranch) -> Result<f64> {
    if !branch_matches(cov, branch) {
        return Err(Error::Parameter(format!("branch {branch:?} does not match roots a={}, b={}", cov.roots.a, cov.roots.b)));
    }
    if v == 0.0 {
        return Ok(1.0);
    }
    Ok(log_gamma_sq_jet(Jet::cst(v), cov)?.v.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cov(theta: f64) -> ChangeOfVariable {
        build_change_of_variable(&Quartic::bianchi5(-1.0, 2.0 * theta.sinh(), 1.0)).unwrap()
    }

    #[test]
    fn roots_for_negative_lambda() {
        let th: f64 = -0.8;
        let c = cov(th);
        let sh = (th / 3.0).sinh();
        assert!((c.roots.a + 2.0 * sh).abs() < 1e-13);
        assert!(c.roots.b.abs() < 1e-14);
        assert!((c.roots.b1 - sh).abs() < 1e-13);
        assert!((c.roots.a1 - 3f64.sqrt() * (th / 3.0).cosh()).abs() < 1e-13);
        assert!((c.v0 - 1.546_434_742_65).abs() < 1e-9);
        assert!((c.sn_v0 - 0.916_243_121_238).abs() < 1e-11);
    }

    #[test]
    fn positive_lambda_swaps_a_and_b() {
        let n = cov(-0.8);
        let p = cov(0.8);
        assert!((n.ctx.k2 - p.ctx.k2).abs() < 1e-13);
        assert!((n.a_len - p.b_len).abs() < 1e-13 && (n.b_len - p.a_len).abs() < 1e-13);
        assert!((p.v0 - 1.839_867_197_89).abs() < 1e-9);
        assert!(gamma_squared_of_v(0.1, &p, LambdaBranch::LambdaNeg).is_err());
    }

    #[test]
    fn four_real_roots_rejected() {
        // (x-1)(x-2)(x-3)(x-4)
        let q = Quartic { coeffs: [24.0, -50.0, 35.0, -10.0] };
        assert!(matches!(build_change_of_variable(&q), Err(Error::RootStructure(_))));
    }

    #[test]
    fn rho_start_and_pole() {
        let c = cov(-0.8);
        assert!((rho_of_v(0.0, &c).unwrap().rho - c.roots.a).abs() < 1e-15);
        let near = rho_of_v(c.v0 * (1.0 - 1e-8), &c).unwrap();
        assert!(near.rho > 1e6 && near.near_pole);
        assert!(rho_of_v(c.v0, &c).is_err());
    }
}
