use super::curvature::{curvature, CurvatureBundle};
use super::metric::{ChartPoint, Mat4, Metric, Signature};
use super::selfdual::tetrad_residual;
use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_1_SQRT_2;

/// Complex null tetrad (k, l, m, m̄) as contravariant vectors.
#[derive(Clone, Copy, Debug)]
pub struct NullTetrad {
    pub k: [Complex64; 4],
    pub l: [Complex64; 4],
    pub m: [Complex64; 4],
    pub mbar: [Complex64; 4],
}

fn dot(g: &Mat4, a: &[Complex64; 4], b: &[Complex64; 4]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..4 {
        for j in 0..4 {
            acc += a[i] * b[j] * g[i][j];
        }
    }
    acc
}

impl NullTetrad {
    /// Builds k = (e⁰ − e^axis)/√2, l = (e⁰ + e^axis)/√2 and
    /// m = (e^i + i e^j)/√2 from an orthonormal Lorentzian coframe (rows
    /// `e^A_μ`, leg 0 time-like), then raises indices with `ginv`.
    pub fn from_orthonormal(tetrad: &Mat4, ginv: &Mat4, axis: usize) -> Result<Self> {
        if !(1..=3).contains(&axis) {
            return Err(Error::Parameter(format!("null axis must be a spatial leg, got {axis}")));
        }
        let others: Vec<usize> = (1..=3).filter(|&a| a != axis).collect();
        let raise = |cov: [Complex64; 4]| -> [Complex64; 4] {
            let mut out = [Complex64::new(0.0, 0.0); 4];
            for (i, o) in out.iter_mut().enumerate() {
                for (j, c) in cov.iter().enumerate() {
                    *o += c * ginv[i][j];
                }
            }
            out
        };
        let leg = |a: usize| -> [Complex64; 4] {
            let mut v = [Complex64::new(0.0, 0.0); 4];
            for (m, x) in v.iter_mut().enumerate() {
                *x = Complex64::new(tetrad[a][m], 0.0);
            }
            v
        };
        let comb = |p: [Complex64; 4], cp: Complex64, q: [Complex64; 4], cq: Complex64| {
            let mut v = [Complex64::new(0.0, 0.0); 4];
            for i in 0..4 {
                v[i] = (p[i] * cp + q[i] * cq) * FRAC_1_SQRT_2;
            }
            v
        };
        let one = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let k = raise(comb(leg(0), one, leg(axis), -one));
        let l = raise(comb(leg(0), one, leg(axis), one));
        let m = raise(comb(leg(others[0]), one, leg(others[1]), i));
        let mbar = raise(comb(leg(others[0]), one, leg(others[1]), -i));
        Ok(NullTetrad { k, l, m, mbar })
    }

    /// Largest violation of k·k = l·l = m·m = k·m = l·m = 0, k·l = −1, m·m̄ = 1.
    pub fn null_residual(&self, g: &Mat4) -> f64 {
        let zero = [
            dot(g, &self.k, &self.k),
            dot(g, &self.l, &self.l),
            dot(g, &self.m, &self.m),
            dot(g, &self.k, &self.m),
            dot(g, &self.l, &self.m),
        ];
        let mut worst = zero.iter().fold(0.0f64, |a, z| a.max(z.norm()));
        worst = worst.max((dot(g, &self.k, &self.l) + 1.0).norm());
        worst = worst.max((dot(g, &self.m, &self.mbar) - 1.0).norm());
        worst
    }
}

/// Weyl scalars Ψ₀…Ψ₄.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylScalars {
    pub psi: [[f64; 2]; 5],
}

impl WeylScalars {
    pub fn get(&self, n: usize) -> Complex64 {
        Complex64::new(self.psi[n][0], self.psi[n][1])
    }

    pub fn all(&self) -> [Complex64; 5] {
        [self.get(0), self.get(1), self.get(2), self.get(3), self.get(4)]
    }
}

fn contract(
    bundle: &CurvatureBundle,
    a: &[Complex64; 4],
    b: &[Complex64; 4],
    c: &[Complex64; 4],
    d: &[Complex64; 4],
) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..4 {
        for q in 0..4 {
            let ab = a[p] * b[q];
            if ab.norm() == 0.0 {
                continue;
            }
            for r in 0..4 {
                for s in 0..4 {
                    let w = bundle.weyl[p][q][r][s];
                    if w != 0.0 {
                        acc += ab * c[r] * d[s] * w;
                    }
                }
            }
        }
    }
    acc
}

pub fn weyl_scalars_of(bundle: &CurvatureBundle, nt: &NullTetrad) -> WeylScalars {
    let psi = [
        contract(bundle, &nt.k, &nt.m, &nt.k, &nt.m),
        contract(bundle, &nt.k, &nt.l, &nt.k, &nt.m),
        contract(bundle, &nt.k, &nt.m, &nt.mbar, &nt.l),
        contract(bundle, &nt.k, &nt.l, &nt.mbar, &nt.l),
        contract(bundle, &nt.mbar, &nt.l, &nt.mbar, &nt.l),
    ];
    WeylScalars { psi: psi.map(|z| [z.re, z.im]) }
}

/// NP Weyl scalars of a Lorentzian metric, using its catalog tetrad with the
/// null pair built on spatial leg `axis`.
pub fn np_weyl_scalars(metric: &Metric, x: &ChartPoint, axis: usize) -> Result<WeylScalars> {
    if metric.signature != Signature::Lorentzian {
        return Err(Error::Signature("Weyl scalars need a Lorentzian metric".into()));
    }
    let bundle = curvature(metric, x)?;
    let tetrad = metric.tetrad(x)?;
    let res = tetrad_residual(&bundle.g, &tetrad, metric.signature);
    if res > 1e-10 {
        return Err(Error::NonOrthonormalTetrad(res));
    }
    let nt = NullTetrad::from_orthonormal(&tetrad, &bundle.ginv, axis)?;
    np_weyl_scalars_with(&bundle, &nt)
}

pub fn np_weyl_scalars_with(bundle: &CurvatureBundle, nt: &NullTetrad) -> Result<WeylScalars> {
    let res = nt.null_residual(&bundle.g);
    if res > 1e-10 {
        return Err(Error::NonNullTetrad(res));
    }
    Ok(weyl_scalars_of(bundle, nt))
}
