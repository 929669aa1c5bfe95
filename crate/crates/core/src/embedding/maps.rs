//! The concrete maps: flattening coordinates, de Sitter / AdS / H⁴ quadrics and
//! the (μ, φ) product split of the type III Minkowskian metric.

use super::{Ambient, EmbeddingMap, Quadric};
use crate::catalog::{build_with, Family, FamilyMetric};
use crate::error::{Error, Result};
use crate::geometry::{ChartPoint, Mat4};
use crate::jet::Jet;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

const LORENTZ4: [f64; 4] = [1.0, 1.0, 1.0, -1.0];

/// `(x₁, x₂, x₃, τ)` for the type III flat chart, `r = eˣ`:
/// `x₁ = y`, `x₂ = tz/r`, `x₃ = (t/2r)(−1+z²+r²)`, `τ = (t/2r)(1+z²+r²)`.
pub fn flatten_type3() -> EmbeddingMap {
    EmbeddingMap::new(
        "flatten_type3",
        vec!["x1", "x2", "x3", "tau"],
        Ambient::Flat { scale: 1.0, signs: LORENTZ4.to_vec() },
        None,
        |x| {
            let (y, z, t) = (x[1], x[2], x[3]);
            let r = x[0].exp();
            let k = t / (r * 2.0);
            let q = z * z + r * r;
            Ok(vec![y, t * z / r, k * (q - 1.0), k * (q + 1.0)])
        },
    )
}

/// Type V flat chart, `ρ = e^{−x}`: `x₁ = ty/ρ`, `x₂ = tz/ρ`,
/// `x₃ = (t/2ρ)(−1+y²+z²+ρ²)`, `τ = (t/2ρ)(1+y²+z²+ρ²)`.
pub fn flatten_type5() -> EmbeddingMap {
    EmbeddingMap::new(
        "flatten_type5",
        vec!["x1", "x2", "x3", "tau"],
        Ambient::Flat { scale: 1.0, signs: LORENTZ4.to_vec() },
        None,
        |x| Ok(flat5_point(x).to_vec()),
    )
}

fn flat5_point(x: &[Jet; 4]) -> [Jet; 4] {
    let (y, z, t) = (x[1], x[2], x[3]);
    let rho = (-x[0]).exp();
    let k = t / (rho * 2.0);
    let q = y * y + z * z + rho * rho;
    [t * y / rho, t * z / rho, k * (q - 1.0), k * (q + 1.0)]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DesitterSource {
    /// Lorentzian γ₀ = 0 type III, λ > 0: dS.
    Type3LambdaPos,
    /// Lorentzian γ₀ = 0 type III, λ < 0: AdS.
    Type3LambdaNeg,
    /// Euclidean γ₀ = 0 type III, λ < 0: H⁴.
    Type3Euclid,
    /// Lorentzian special type V, λ > 0: dS.
    Type5LambdaPos,
    /// Lorentzian special type V, λ < 0: AdS.
    Type5LambdaNeg,
    /// Euclidean special type V, λ < 0: H⁴.
    Type5Euclid,
}

impl DesitterSource {
    pub const ALL: [DesitterSource; 6] = [
        DesitterSource::Type3LambdaPos,
        DesitterSource::Type3LambdaNeg,
        DesitterSource::Type3Euclid,
        DesitterSource::Type5LambdaPos,
        DesitterSource::Type5LambdaNeg,
        DesitterSource::Type5Euclid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DesitterSource::Type3LambdaPos => "type3_lambda_pos",
            DesitterSource::Type3LambdaNeg => "type3_lambda_neg",
            DesitterSource::Type3Euclid => "type3_euclid",
            DesitterSource::Type5LambdaPos => "type5_lambda_pos",
            DesitterSource::Type5LambdaNeg => "type5_lambda_neg",
            DesitterSource::Type5Euclid => "type5_euclid",
        }
    }

    fn epsilon(self) -> f64 {
        match self {
            DesitterSource::Type3Euclid | DesitterSource::Type5Euclid => 1.0,
            _ => -1.0,
        }
    }

    fn lambda_positive(self) -> bool {
        matches!(self, DesitterSource::Type3LambdaPos | DesitterSource::Type5LambdaPos)
    }

    /// The catalog metric the map is meant for.
    pub fn source_metric(self, lambda: f64) -> Result<FamilyMetric> {
        if (lambda > 0.0) != self.lambda_positive() || lambda == 0.0 {
            return Err(Error::Parameter(format!(
                "{} needs lambda {} 0, got {lambda}",
                self.name(),
                if self.lambda_positive() { ">" } else { "<" }
            )));
        }
        let family = match self {
            DesitterSource::Type3LambdaPos | DesitterSource::Type3LambdaNeg | DesitterSource::Type3Euclid => Family::Desitter3,
            _ => Family::Bianchi5Conformal,
        };
        build_with(family, &[("epsilon", self.epsilon()), ("lambda", lambda)])
    }
}

impl fmt::Display for DesitterSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DesitterSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DesitterSource::ALL
            .into_iter()
            .find(|d| d.name() == s)
            .ok_or_else(|| Error::Parameter(format!("unknown embedding source {s:?}")))
    }
}

/// Whether to use the formulas exactly as printed or the corrected ones. The two
/// coincide for the sources whose printed display already verifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MapVariant {
    Printed,
    Corrected,
}

impl MapVariant {
    pub fn name(self) -> &'static str {
        match self {
            MapVariant::Printed => "printed",
            MapVariant::Corrected => "corrected",
        }
    }
}

/// Whether the printed formulas for `source` differ from the corrected ones.
pub fn has_printed_variant(source: DesitterSource) -> bool {
    matches!(source, DesitterSource::Type3LambdaNeg | DesitterSource::Type3Euclid | DesitterSource::Type5Euclid)
}

/// The H³ (or H²×ℝ for type III) part shared by the type III maps, times `t`:
/// `(z⁰, z¹, z²) = t(cosh x + e^{−x}z²/2, z e^{−x}, sinh x + e^{−x}z²/2)`.
fn type3_hyperboloid(x: &[Jet; 4]) -> [Jet; 3] {
    let (t, z) = (x[3], x[2]);
    let em = (-x[0]).exp();
    let a = em * z * z * 0.5;
    [t * (x[0].cosh() + a), t * z * em, t * (x[0].sinh() + a)]
}

/// Unit hyperboloid `r⃗² − x₀² = −1` of the type V chart:
/// `r⃗ = (eˣy, eˣz, −sinh x + eˣ(y²+z²)/2)`, `x₀ = cosh x + eˣ(y²+z²)/2`.
fn type5_hyperboloid(x: &[Jet; 4]) -> (Jet, [Jet; 3]) {
    let e = x[0].exp();
    let a = e * (x[1] * x[1] + x[2] * x[2]) * 0.5;
    (x[0].cosh() + a, [e * x[1], e * x[2], a - x[0].sinh()])
}

fn root(v: Jet, what: &str) -> Result<Jet> {
    if v.v < 0.0 {
        return Err(Error::Domain(format!("{what} = {} < 0", v.v)));
    }
    Ok(v.sqrt())
}

/// The 5d quadric map for a conformally flat special case. Target order is
/// `(z⁰, z¹, z², z³, z⁴)`; overall factors `3/λ` or `3/|λ|` sit in the ambient
/// metric.
pub fn desitter_map(source: DesitterSource, variant: MapVariant, lambda: f64) -> Result<EmbeddingMap> {
    source.source_metric(lambda)?;
    let names = vec!["z0", "z1", "z2", "z3", "z4"];
    let k = 3.0 / lambda.abs();
    let printed = variant == MapVariant::Printed;
    let label = format!("desitter_map({source}, {}, lambda={lambda})", variant.name());
    let flat = |scale: f64, signs: [f64; 5]| Ambient::Flat { scale, signs: signs.to_vec() };
    let quadric = |signs: [f64; 5], value: f64| Some(Quadric { signs: signs.to_vec(), value });
    let map = match source {
        DesitterSource::Type3LambdaPos => {
            EmbeddingMap::new(label, names, flat(k, [-1.0, 1.0, 1.0, 1.0, 1.0]), quadric([-1.0, 1.0, 1.0, 1.0, 1.0], 1.0), |x| {
                let [z0, z1, z2] = type3_hyperboloid(x);
                let r = (x[3] * x[3] + 1.0).sqrt();
                Ok(vec![z0, z1, z2, r * x[1].cos(), r * x[1].sin()])
            })
        }
        DesitterSource::Type3LambdaNeg if printed => EmbeddingMap::new(
            label,
            names,
            flat(3.0 / lambda, [-1.0, 1.0, 1.0, -1.0, 1.0]),
            quadric([-1.0, 1.0, 1.0, -1.0, 1.0], 1.0),
            |x| {
                let [z0, z1, z2] = type3_hyperboloid(x);
                let r = (x[3] * x[3] + 1.0).sqrt();
                Ok(vec![z0, z1, z2, r * x[1].cosh(), r * x[1].sinh()])
            },
        ),
        DesitterSource::Type3LambdaNeg => EmbeddingMap::new(
            label,
            names,
            flat(k, [-1.0, 1.0, 1.0, -1.0, 1.0]),
            quadric([-1.0, 1.0, 1.0, -1.0, 1.0], -1.0),
            |x| {
                let [z0, z1, z2] = type3_hyperboloid(x);
                let r = root(-(x[3] * x[3]) + 1.0, "1 - t^2")?;
                Ok(vec![z0, z1, z2, r * x[1].cosh(), r * x[1].sinh()])
            },
        ),
        DesitterSource::Type3Euclid => EmbeddingMap::new(
            label,
            names,
            if printed { flat(3.0 / lambda, [-1.0, 1.0, 1.0, -1.0, 1.0]) } else { flat(k, [-1.0, 1.0, 1.0, 1.0, 1.0]) },
            quadric([-1.0, 1.0, 1.0, 1.0, 1.0], -1.0),
            |x| {
                let [z0, z1, z2] = type3_hyperboloid(x);
                let r = root(x[3] * x[3] - 1.0, "t^2 - 1")?;
                Ok(vec![z0, z1, z2, r * x[1].cos(), r * x[1].sin()])
            },
        ),
        DesitterSource::Type5LambdaPos | DesitterSource::Type5LambdaNeg => {
            // Inverse stereographic projection of the flat chart (r⃗, τ), Q = r⃗² − τ² = −t².
            let pos = source == DesitterSource::Type5LambdaPos;
            let s = if pos { 1.0 } else { -1.0 };
            EmbeddingMap::new(label, names, flat(k, [s, 1.0, 1.0, 1.0, -1.0]), quadric([s, 1.0, 1.0, 1.0, -1.0], s), move |x| {
                let [a, b, c, tau] = flat5_point(x);
                let q = a * a + b * b + c * c - tau * tau;
                let d = q * s + 1.0;
                Ok(vec![(1.0 - q * s) / d, a * 2.0 / d, b * 2.0 / d, c * 2.0 / d, tau * 2.0 / d])
            })
        }
        DesitterSource::Type5Euclid => EmbeddingMap::new(
            label,
            names,
            flat(k, [-1.0, 1.0, 1.0, 1.0, 1.0]),
            quadric([-1.0, 1.0, 1.0, 1.0, 1.0], -1.0),
            move |x| {
                let (x0, r) = type5_hyperboloid(x);
                let ch = x[3].cosh();
                let z0 = if printed { ch } else { ch * x0 };
                Ok(vec![z0, ch * r[0], ch * r[1], ch * r[2], x[3].sinh()])
            },
        ),
    };
    Ok(map)
}

/// `(x, y, z, t) → (μ, φ, y, t)` for the Minkowskian product metric with γ₀ = 1,
/// `μ = ½[eˣ + (1+z²)e^{−x}]`, `tan φ = (e^{2x} − (1−z²))/(2z)` taken quadrant-aware.
/// The target metric is `(1/|λ|){dμ²/(μ²−1) + (μ²−1)dφ² + (1−t²)dy² − dt²/(1−t²)}`.
pub fn product_split_map(lambda: f64) -> Result<EmbeddingMap> {
    if lambda >= 0.0 {
        return Err(Error::Parameter(format!("the product family needs lambda < 0, got {lambda}")));
    }
    let k = 1.0 / lambda.abs();
    let field = move |w: &[f64]| -> Result<Vec<Vec<f64>>> {
        let (mu, t) = (w[0], w[3]);
        let a = mu * mu - 1.0;
        let b = 1.0 - t * t;
        if a <= 0.0 || b <= 0.0 {
            return Err(Error::Domain(format!("mu^2 - 1 = {a}, 1 - t^2 = {b}")));
        }
        let mut g = vec![vec![0.0; 4]; 4];
        g[0][0] = k / a;
        g[1][1] = k * a;
        g[2][2] = k * b;
        g[3][3] = -k / b;
        Ok(g)
    };
    Ok(EmbeddingMap::new(
        format!("product_split(lambda={lambda})"),
        vec!["mu", "phi", "y", "t"],
        Ambient::Field(Arc::new(field)),
        None,
        |x| {
            let (z, e) = (x[2], x[0].exp());
            let mu = (e + (z * z + 1.0) / e) * 0.5;
            let phi = Jet::atan2(e * e + z * z - 1.0, z * 2.0);
            Ok(vec![mu, phi, x[1], x[3]])
        },
    ))
}

/// The catalog metric [`product_split_map`] applies to.
pub fn product_split_source(lambda: f64) -> Result<FamilyMetric> {
    build_with(Family::Bianchi3Product, &[("epsilon", -1.0), ("gamma0", 1.0), ("lambda", lambda)])
}

#[derive(Clone, Debug, Serialize)]
pub struct SplitCheck {
    /// `max |Jᵀ G J − g|` with `G` the H²×AdS₂ form.
    pub pullback_residual: f64,
    /// Largest `(μ,φ)`–`(y,t)` component of the source metric pushed to the new chart.
    pub off_block: f64,
    /// `μ² − 1` at the point.
    pub mu_sq_minus_one: f64,
}

fn invert_jacobian(jac: &[[f64; 4]]) -> Result<Mat4> {
    let m = nalgebra::Matrix4::from_fn(|i, j| jac[i][j]);
    let inv = m.try_inverse().ok_or(Error::RankDeficient(0.0))?;
    Ok(std::array::from_fn(|i| std::array::from_fn(|j| inv[(i, j)])))
}

/// Pushes the source metric forward through the split and measures the
/// off-block entries.
pub fn product_split_check(map: &EmbeddingMap, source: &FamilyMetric, x: &ChartPoint) -> Result<SplitCheck> {
    let pullback_residual = super::pullback_residual(map, &source.metric, x)?;
    let (w, jac) = map.jacobian(x)?;
    let ji = invert_jacobian(&jac)?;
    let g = source.metric.components(x)?;
    let mut off = 0.0f64;
    for a in 0..2 {
        for b in 2..4 {
            let mut acc = 0.0;
            for mu in 0..4 {
                for nu in 0..4 {
                    acc += ji[mu][a] * ji[nu][b] * g[mu][nu];
                }
            }
            off = off.max(acc.abs());
        }
    }
    Ok(SplitCheck { pullback_residual, off_block: off, mu_sq_minus_one: w[0] * w[0] - 1.0 })
}
