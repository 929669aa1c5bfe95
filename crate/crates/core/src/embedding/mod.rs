//! Coordinate changes and isometric embeddings, checked by pulling back the
//! ambient metric through exact jet Jacobians.

mod maps;
mod polar;

pub use maps::*;
pub use polar::*;

use crate::error::{Error, Result};
use crate::geometry::{ChartPoint, Mat4, Metric};
use crate::jet::{Jet, DIM};
use nalgebra::DMatrix;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

type MapFn = dyn Fn(&[Jet; DIM]) -> Result<Vec<Jet>> + Send + Sync;
type FieldFn = dyn Fn(&[f64]) -> Result<Vec<Vec<f64>>> + Send + Sync;

/// Metric on the target space.
#[derive(Clone)]
pub enum Ambient {
    /// `scale · diag(signs)`.
    Flat { scale: f64, signs: Vec<f64> },
    /// Position-dependent components at the target point.
    Field(Arc<FieldFn>),
}

impl Ambient {
    pub fn at(&self, z: &[f64]) -> Result<Vec<Vec<f64>>> {
        match self {
            Ambient::Flat { scale, signs } => {
                let n = signs.len();
                let mut m = vec![vec![0.0; n]; n];
                for i in 0..n {
                    m[i][i] = scale * signs[i];
                }
                Ok(m)
            }
            Ambient::Field(f) => f(z),
        }
    }
}

/// `Σ signs_a z_a² = value`.
#[derive(Clone, Debug, Serialize)]
pub struct Quadric {
    pub signs: Vec<f64>,
    pub value: f64,
}

impl Quadric {
    pub fn residual(&self, z: &[f64]) -> f64 {
        let q: f64 = self.signs.iter().zip(z).map(|(s, v)| s * v * v).sum();
        (q - self.value).abs()
    }
}

#[derive(Clone)]
pub struct EmbeddingMap {
    pub label: String,
    pub target_names: Vec<&'static str>,
    pub ambient: Ambient,
    pub constraint: Option<Quadric>,
    map: Arc<MapFn>,
}

impl fmt::Debug for EmbeddingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EmbeddingMap")
            .field("label", &self.label)
            .field("target", &self.target_names)
            .field("constraint", &self.constraint)
            .finish()
    }
}

impl EmbeddingMap {
    pub fn new(
        label: impl Into<String>,
        target_names: Vec<&'static str>,
        ambient: Ambient,
        constraint: Option<Quadric>,
        map: impl Fn(&[Jet; DIM]) -> Result<Vec<Jet>> + Send + Sync + 'static,
    ) -> Self {
        EmbeddingMap { label: label.into(), target_names, ambient, constraint, map: Arc::new(map) }
    }

    /// The identity chart map, with the source metric itself as the target metric.
    pub fn identity(metric: Metric) -> Self {
        let m = metric.clone();
        let field = move |z: &[f64]| -> Result<Vec<Vec<f64>>> {
            let g = m.components(&[z[0], z[1], z[2], z[3]])?;
            Ok(g.iter().map(|r| r.to_vec()).collect())
        };
        EmbeddingMap::new(
            format!("identity on {}", metric.label),
            vec!["x0", "x1", "x2", "x3"],
            Ambient::Field(Arc::new(field)),
            None,
            |x| Ok(x.to_vec()),
        )
    }

    pub fn target_dim(&self) -> usize {
        self.target_names.len()
    }

    pub fn eval(&self, x: &ChartPoint) -> Result<Vec<f64>> {
        Ok((self.map)(&Jet::constants(x))?.iter().map(Jet::value).collect())
    }

    /// Target point and exact Jacobian rows `∂z_a/∂x^μ`.
    pub fn jacobian(&self, x: &ChartPoint) -> Result<(Vec<f64>, Vec<[f64; DIM]>)> {
        let z = (self.map)(&Jet::point(x))?;
        Ok((z.iter().map(Jet::value).collect(), z.iter().map(|j| j.d).collect()))
    }

    /// Central-difference Jacobian, used only as a cross-check.
    pub fn fd_jacobian(&self, x: &ChartPoint, step: f64) -> Result<Vec<[f64; DIM]>> {
        let mut out = vec![[0.0; DIM]; self.target_dim()];
        for m in 0..DIM {
            let h = step * x[m].abs().max(1.0);
            let (mut a, mut b) = (*x, *x);
            a[m] += h;
            b[m] -= h;
            let (za, zb) = (self.eval(&a)?, self.eval(&b)?);
            for (row, (p, q)) in out.iter_mut().zip(za.iter().zip(zb.iter())) {
                row[m] = (p - q) / (2.0 * h);
            }
        }
        Ok(out)
    }

    pub fn constraint_residual(&self, x: &ChartPoint) -> Result<Option<f64>> {
        let z = self.eval(x)?;
        Ok(self.constraint.as_ref().map(|q| q.residual(&z)))
    }

    /// `Jᵀ η(z) J` at `x`.
    pub fn pullback(&self, x: &ChartPoint) -> Result<Mat4> {
        let (z, jac) = self.jacobian(x)?;
        let eta = self.ambient.at(&z)?;
        let n = self.target_dim();
        let mut g = [[0.0; DIM]; DIM];
        for mu in 0..DIM {
            for nu in 0..DIM {
                let mut acc = 0.0;
                for a in 0..n {
                    for b in 0..n {
                        acc += eta[a][b] * jac[a][mu] * jac[b][nu];
                    }
                }
                g[mu][nu] = acc;
            }
        }
        Ok(g)
    }
}

/// Singular values of the Jacobian, largest first.
pub fn jacobian_singular_values(jac: &[[f64; DIM]]) -> Vec<f64> {
    let m = DMatrix::from_fn(jac.len(), DIM, |i, j| jac[i][j]);
    let mut sv: Vec<f64> = m.svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

const RANK_TOL: f64 = 1e-10;

/// `max |(Jᵀ η J)_{μν} − g_{μν}(x)|`. Fails with [`Error::RankDeficient`] when the
/// Jacobian drops rank at `x`.
pub fn pullback_residual(map: &EmbeddingMap, metric: &Metric, x: &ChartPoint) -> Result<f64> {
    let (_, jac) = map.jacobian(x)?;
    let sv = jacobian_singular_values(&jac);
    let smin = sv[DIM - 1];
    if !(smin > RANK_TOL * sv[0].max(1.0)) {
        return Err(Error::RankDeficient(smin));
    }
    let p = map.pullback(x)?;
    let g = metric.components(x)?;
    let mut worst = 0.0f64;
    for mu in 0..DIM {
        for nu in 0..DIM {
            worst = worst.max((p[mu][nu] - g[mu][nu]).abs());
        }
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct EmbeddingCheck {
    pub label: String,
    pub points: usize,
    pub max_pullback_residual: f64,
    pub worst_pullback_point: ChartPoint,
    /// `None` when the map carries no constraint.
    pub max_constraint_residual: Option<f64>,
    /// Largest gap between the exact and finite-difference Jacobians.
    pub max_fd_jacobian_gap: f64,
    pub min_singular_value: f64,
}

/// Evaluates a map on the given chart points.
pub fn check_map(map: &EmbeddingMap, metric: &Metric, points: &[ChartPoint]) -> Result<EmbeddingCheck> {
    let mut out = EmbeddingCheck {
        label: map.label.clone(),
        points: points.len(),
        max_pullback_residual: 0.0,
        worst_pullback_point: points.first().copied().unwrap_or([0.0; DIM]),
        max_constraint_residual: map.constraint.as_ref().map(|_| 0.0),
        max_fd_jacobian_gap: 0.0,
        min_singular_value: f64::INFINITY,
    };
    for x in points {
        let r = pullback_residual(map, metric, x)?;
        if r > out.max_pullback_residual || r.is_nan() {
            out.max_pullback_residual = r;
            out.worst_pullback_point = *x;
        }
        if let (Some(c), Some(acc)) = (map.constraint_residual(x)?, out.max_constraint_residual.as_mut()) {
            *acc = acc.max(c);
        }
        let (_, jac) = map.jacobian(x)?;
        let fd = map.fd_jacobian(x, 1e-6)?;
        for (a, b) in jac.iter().zip(fd.iter()) {
            for m in 0..DIM {
                out.max_fd_jacobian_gap = out.max_fd_jacobian_gap.max((a[m] - b[m]).abs() / (1.0 + a[m].abs()));
            }
        }
        out.min_singular_value = out.min_singular_value.min(jacobian_singular_values(&jac)[DIM - 1]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_with, Family};

    #[test]
    fn identity_pulls_back_exactly() {
        let fm = build_with(Family::Bianchi2, &[("epsilon", 1.0), ("m", 0.8), ("l", 0.6), ("lambda", -0.5)]).unwrap();
        let map = EmbeddingMap::identity(fm.metric.clone());
        for x in fm.sample_points(5, 3) {
            assert_eq!(pullback_residual(&map, &fm.metric, &x).unwrap(), 0.0);
        }
    }

    #[test]
    fn rank_deficiency_is_reported() {
        let fm = build_with(Family::Flat3, &[]).unwrap();
        let map = EmbeddingMap::new(
            "collapse",
            vec!["a", "b", "c", "d"],
            Ambient::Flat { scale: 1.0, signs: vec![1.0; 4] },
            None,
            |x| Ok(vec![x[0], x[1], x[2], x[2]]),
        );
        assert!(matches!(pullback_residual(&map, &fm.metric, &[0.1, 0.2, 0.3, 1.0]), Err(Error::RankDeficient(_))));
    }

    #[test]
    fn quadric_residual() {
        let q = Quadric { signs: vec![1.0, -1.0], value: -1.0 };
        assert_eq!(q.residual(&[0.0, 1.0]), 0.0);
        assert_eq!(q.residual(&[1.0, 0.0]), 2.0);
    }
}
