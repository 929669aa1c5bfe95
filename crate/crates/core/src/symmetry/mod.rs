//! Killing vectors, Killing–Yano forms and Killing–Stäckel tensors.
//!
//! Killing–Yano residuals symmetrize the first index pair of `∇Y`. The square
//! of a form is `K_{μν} = Y_{μλ} Y_ν^λ`; for Bianchi II this equals the
//! printed Stäckel tensor plus `ε l² g`, a trivial Killing–Stäckel piece.

mod fields;
mod killing;

pub use fields::{
    complex_structure_residual, exterior_derivative_residual, killing_residual, killing_yano_residual, ks_residual, lie_bracket,
    tensor_difference, yano_square, KillingStaeckelField, KillingYanoField, TensorFn, VectorField, VectorFn,
};
pub use killing::{
    bianchi2_killing, bianchi3_killing, bianchi5_killing, desitter_killing_catalog, structure_relations, DeSitterChart,
};

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

/// Least-squares fit of a target against a basis of sampled functions.
#[derive(Clone, Debug, Serialize)]
pub struct BilinearFit {
    pub coefficients: Vec<f64>,
    /// Root-mean-square residual divided by the RMS of the target.
    pub relative_residual: f64,
    pub max_residual: f64,
}

/// Fits `target ≈ Σ c_ij q_i q_j` over all symmetric products of the charges.
///
/// Each sample is `(charges, target)`; the products are ordered
/// `(0,0), (0,1), …, (n−1,n−1)`.
pub fn bilinear_fit(samples: &[(Vec<f64>, f64)]) -> Result<BilinearFit> {
    let n = samples.first().map(|s| s.0.len()).ok_or_else(|| Error::Parameter("no samples".into()))?;
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    if samples.len() < pairs.len() {
        return Err(Error::Parameter(format!("need at least {} samples, got {}", pairs.len(), samples.len())));
    }
    let a = DMatrix::from_fn(samples.len(), pairs.len(), |r, c| {
        let (i, j) = pairs[c];
        samples[r].0[i] * samples[r].0[j]
    });
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|s| s.1));
    let svd = a.clone().svd(true, true);
    let coef = svd.solve(&b, 1e-12).map_err(|e| Error::Parameter(e.to_string()))?;
    let resid = &a * &coef - &b;
    let rms_b = (b.norm_squared() / b.len() as f64).sqrt().max(1e-300);
    let rms_r = (resid.norm_squared() / b.len() as f64).sqrt();
    Ok(BilinearFit { coefficients: coef.iter().copied().collect(), relative_residual: rms_r / rms_b, max_residual: resid.amax() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_bilinear_is_recovered() {
        let mut s = Vec::new();
        for k in 0..30 {
            let q: Vec<f64> = (0..3).map(|i| ((k * 7 + i * 3) as f64 * 0.37).sin()).collect();
            let t = q[0] * q[1] - 2.0 * q[2] * q[2];
            s.push((q, t));
        }
        let f = bilinear_fit(&s).unwrap();
        assert!(f.relative_residual < 1e-12);
    }

    #[test]
    fn cubic_is_not_bilinear() {
        let mut s = Vec::new();
        for k in 0..30 {
            let q: Vec<f64> = (0..3).map(|i| ((k * 7 + i * 3) as f64 * 0.37).sin()).collect();
            let t = q[0] * q[1] * q[2];
            s.push((q, t));
        }
        assert!(bilinear_fit(&s).unwrap().relative_residual > 1e-2);
    }
}
