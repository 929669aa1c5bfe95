use crate::error::{Error, Result};
use crate::jet::Jet;
use std::f64::consts::FRAC_PI_2;

fn check_modulus(k2: f64) -> Result<()> {
    if !(0.0..1.0).contains(&k2) || !k2.is_finite() {
        return Err(Error::Domain(format!("modulus k^2 = {k2} outside [0, 1)")));
    }
    Ok(())
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        if (an - bn).abs() <= 1e-16 * an {
            return an;
        }
        a = an;
        b = bn;
    }
    a
}

/// Complete elliptic integral of the first kind K(k²).
pub fn complete_k(k2: f64) -> Result<f64> {
    check_modulus(k2)?;
    Ok(FRAC_PI_2 / agm(1.0, (1.0 - k2).sqrt()))
}

/// Carlson's symmetric integral R_F(x, y, z).
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    if x.min(y).min(z) < 0.0 || (x + y).min(x + z).min(y + z) == 0.0 {
        return Err(Error::Domain(format!("carlson_rf({x}, {y}, {z}) undefined")));
    }
    let (mut x, mut y, mut z) = (x, y, z);
    for _ in 0..100 {
        let (sx, sy, sz) = (x.sqrt(), y.sqrt(), z.sqrt());
        let lam = sx * (sy + sz) + sy * sz;
        x = 0.25 * (x + lam);
        y = 0.25 * (y + lam);
        z = 0.25 * (z + lam);
        let a = (x + y + z) / 3.0;
        let dx = 1.0 - x / a;
        let dy = 1.0 - y / a;
        let dz = 1.0 - z / a;
        if dx.abs().max(dy.abs()).max(dz.abs()) < 1e-4 {
            let e2 = dx * dy - dz * dz;
            let e3 = dx * dy * dz;
            return Ok((1.0 + (e2 / 24.0 - 0.1 - 3.0 * e3 / 44.0) * e2 + e3 / 14.0) / a.sqrt());
        }
    }
    Err(Error::Domain("carlson_rf did not converge".into()))
}

/// Incomplete elliptic integral of the first kind F(φ | k²) for |φ| ≤ π/2.
pub fn incomplete_f(phi: f64, k2: f64) -> Result<f64> {
    check_modulus(k2)?;
    let (s, c) = phi.sin_cos();
    Ok(s * carlson_rf(c * c, 1.0 - k2 * s * s, 1.0)?)
}

/// Jacobi elliptic functions (sn, cn, dn) by the arithmetic–geometric mean
/// (descending Landen) scheme.
pub fn jacobi_sncn_dn(v: f64, k2: f64) -> Result<(f64, f64, f64)> {
    check_modulus(k2)?;
    if !v.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {v}")));
    }
    if k2 == 0.0 {
        let (s, c) = v.sin_cos();
        return Ok((s, c, 1.0));
    }
    let mut a = vec![1.0];
    let mut c = vec![k2.sqrt()];
    let mut b = (1.0 - k2).sqrt();
    while c.last().unwrap().abs() > 1e-16 && a.len() < 40 {
        let an = *a.last().unwrap();
        let next_a = 0.5 * (an + b);
        let next_c = 0.5 * (an - b);
        b = (an * b).sqrt();
        a.push(next_a);
        c.push(next_c);
    }
    let n = a.len() - 1;
    let mut phi = 2f64.powi(n as i32) * a[n] * v;
    for i in (1..=n).rev() {
        phi = 0.5 * (phi + (c[i] / a[i] * phi.sin()).asin());
    }
    let (sn, cn) = phi.sin_cos();
    let dn = (1.0 - k2 * sn * sn).sqrt();
    Ok((sn, cn, dn))
}

/// Jets of (sn, cn, dn) composed with a jet argument.
pub fn jacobi_jets(v: Jet, k2: f64) -> Result<(Jet, Jet, Jet)> {
    let (s, c, d) = jacobi_sncn_dn(v.v, k2)?;
    let sn = v.chain(s, c * d, -s * d * d - k2 * s * c * c);
    let cn = v.chain(c, -s * d, -c * d * d + k2 * s * s * c);
    let dn = v.chain(d, -k2 * s * c, -k2 * d * (c * c - s * s));
    Ok((sn, cn, dn))
}

/// Inverts `sn(v) = s` on `[0, K]` for `0 ≤ s ≤ 1`.
///
/// Starts from the incomplete integral and polishes with Newton steps on
/// `sn(v) − s`, falling back to bisection when a step leaves the bracket.
pub fn inverse_sn(s: f64, k2: f64) -> Result<f64> {
    check_modulus(k2)?;
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Domain(format!("sn value {s} outside [0, 1]")));
    }
    let kk = complete_k(k2)?;
    if s == 1.0 {
        return Ok(kk);
    }
    let (mut lo, mut hi) = (0.0, kk);
    let mut v = incomplete_f(s.asin(), k2)?;
    for _ in 0..100 {
        let (sn, cn, dn) = jacobi_sncn_dn(v, k2)?;
        let r = sn - s;
        if r > 0.0 {
            hi = v;
        } else {
            lo = v;
        }
        let deriv = cn * dn;
        let mut next = if deriv > 0.0 { v - r / deriv } else { 0.5 * (lo + hi) };
        if !(lo..=hi).contains(&next) {
            next = 0.5 * (lo + hi);
        }
        if (next - v).abs() <= 1e-16 * (1.0 + v) {
            return Ok(next);
        }
        v = next;
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_and_circular_limit() {
        assert_eq!(jacobi_sncn_dn(0.0, 0.5).unwrap(), (0.0, 1.0, 1.0));
        let (s, c, d) = jacobi_sncn_dn(1.2, 0.0).unwrap();
        assert!((s - 1.2f64.sin()).abs() < 1e-15 && (c - 1.2f64.cos()).abs() < 1e-15 && d == 1.0);
        assert!((complete_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_modulus() {
        assert!(jacobi_sncn_dn(0.3, 1.0).is_err());
        assert!(complete_k(-0.1).is_err());
        assert!(complete_k(1.2).is_err());
    }

    #[test]
    fn quarter_period_values() {
        let kk = complete_k(0.3).unwrap();
        let (s, c, d) = jacobi_sncn_dn(kk, 0.3).unwrap();
        assert!((s - 1.0).abs() < 1e-14);
        assert!(c.abs() < 1e-7);
        assert!((d - 0.7f64.sqrt()).abs() < 1e-13);
        let f = incomplete_f(FRAC_PI_2, 0.3).unwrap();
        assert!((f - kk).abs() < 1e-14);
    }

    #[test]
    fn inverse_sn_round_trip() {
        for &k2 in &[0.0, 0.3, 0.98] {
            for &s in &[0.1, 0.5, 0.9, 0.999] {
                let v = inverse_sn(s, k2).unwrap();
                assert!((jacobi_sncn_dn(v, k2).unwrap().0 - s).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn jets_match_derivative_identities() {
        let k2 = 0.7;
        let v = 0.83;
        let h = 1e-5;
        let (sn, cn, dn) = jacobi_jets(Jet::var(3, v), k2).unwrap();
        let f = |x: f64| jacobi_sncn_dn(x, k2).unwrap();
        let (p, m) = (f(v + h), f(v - h));
        let (c0, _, _) = f(v);
        assert!(((p.0 - m.0) / (2.0 * h) - sn.d[3]).abs() < 1e-9);
        assert!(((p.1 - m.1) / (2.0 * h) - cn.d[3]).abs() < 1e-9);
        assert!(((p.2 - m.2) / (2.0 * h) - dn.d[3]).abs() < 1e-9);
        assert!(((p.0 - 2.0 * c0 + m.0) / (h * h) - sn.h[3][3]).abs() < 1e-5);
    }
}
