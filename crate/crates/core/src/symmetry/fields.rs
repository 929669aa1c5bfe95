use crate::error::Result;
use crate::geometry::{christoffel, ChartPoint, Mat4, Metric};
use crate::jet::{Jet, JetMatrix, DIM};
use std::fmt;
use std::sync::Arc;

pub type VectorFn = dyn Fn(&[Jet; DIM]) -> [Jet; DIM] + Send + Sync;
pub type TensorFn = dyn Fn(&[Jet; DIM]) -> Result<JetMatrix> + Send + Sync;

/// A vector field given by component jets, so its Jacobian is exact.
#[derive(Clone)]
pub struct VectorField {
    pub label: String,
    f: Arc<VectorFn>,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({})", self.label)
    }
}

impl VectorField {
    pub fn new(label: impl Into<String>, f: impl Fn(&[Jet; DIM]) -> [Jet; DIM] + Send + Sync + 'static) -> Self {
        VectorField { label: label.into(), f: Arc::new(f) }
    }

    pub fn jets(&self, x: &[Jet; DIM]) -> [Jet; DIM] {
        (self.f)(x)
    }

    pub fn at(&self, x: &ChartPoint) -> [f64; DIM] {
        (self.f)(&Jet::constants(x)).map(|j| j.v)
    }

    /// Components and Jacobian `jac[μ][ν] = ∂_ν ξ^μ`.
    pub fn with_jacobian(&self, x: &ChartPoint) -> ([f64; DIM], Mat4) {
        let j = (self.f)(&Jet::point(x));
        (j.map(|c| c.v), j.map(|c| c.d))
    }

    /// Linear combination `Σ c_i X_i` of fields.
    pub fn combination(label: impl Into<String>, terms: Vec<(f64, VectorField)>) -> Self {
        VectorField::new(label, move |x| {
            let mut out = [Jet::cst(0.0); DIM];
            for (c, v) in &terms {
                let comp = v.jets(x);
                for k in 0..DIM {
                    out[k] += comp[k] * *c;
                }
            }
            out
        })
    }
}

/// Largest component of the Lie derivative `(L_ξ g)_{μν} = ∇_μξ_ν + ∇_νξ_μ`.
pub fn killing_residual(xi: &VectorField, metric: &Metric, x: &ChartPoint) -> Result<f64> {
    let jet = metric.exact_jet(x)?;
    let g = if metric.exact { jet } else { crate::geometry::partials(metric, x, 1)?.jet };
    let (v, jac) = xi.with_jacobian(x);
    let mut worst: f64 = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            let mut acc = 0.0;
            for k in 0..DIM {
                acc += v[k] * g.dg[k][i][j] + g.g[k][j] * jac[k][i] + g.g[i][k] * jac[k][j];
            }
            worst = worst.max(acc.abs());
        }
    }
    Ok(worst)
}

/// `[ξ, η]^μ = ξ^ν ∂_ν η^μ − η^ν ∂_ν ξ^μ`.
pub fn lie_bracket(xi: &VectorField, eta: &VectorField, x: &ChartPoint) -> [f64; DIM] {
    let (a, ja) = xi.with_jacobian(x);
    let (b, jb) = eta.with_jacobian(x);
    let mut out = [0.0; DIM];
    for mu in 0..DIM {
        for nu in 0..DIM {
            out[mu] += a[nu] * jb[mu][nu] - b[nu] * ja[mu][nu];
        }
    }
    out
}

/// Antisymmetric 2-form `Y_{μν}`.
#[derive(Clone)]
pub struct KillingYanoField {
    pub label: String,
    f: Arc<TensorFn>,
}

/// Symmetric 2-tensor `S_{μν}`.
#[derive(Clone)]
pub struct KillingStaeckelField {
    pub label: String,
    f: Arc<TensorFn>,
}

impl fmt::Debug for KillingYanoField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KillingYanoField({})", self.label)
    }
}

impl fmt::Debug for KillingStaeckelField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KillingStaeckelField({})", self.label)
    }
}

fn antisymmetrize(m: JetMatrix) -> JetMatrix {
    let mut out = m;
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = (m[i][j] - m[j][i]) * 0.5;
        }
    }
    out
}

fn symmetrize(m: JetMatrix) -> JetMatrix {
    let mut out = m;
    for i in 0..DIM {
        for j in 0..DIM {
            out[i][j] = (m[i][j] + m[j][i]) * 0.5;
        }
    }
    out
}

impl KillingYanoField {
    /// Antisymmetry is enforced on the supplied components.
    pub fn new(label: impl Into<String>, f: impl Fn(&[Jet; DIM]) -> Result<JetMatrix> + Send + Sync + 'static) -> Self {
        KillingYanoField { label: label.into(), f: Arc::new(move |x| f(x).map(antisymmetrize)) }
    }

    /// `Σ c · (e^A ∧ e^B)` built from coframe rows supplied as jets.
    pub fn from_frame_terms(
        label: impl Into<String>,
        frame: impl Fn(&[Jet; DIM]) -> Result<[[Jet; DIM]; DIM]> + Send + Sync + 'static,
        terms: impl Fn(&[Jet; DIM]) -> Vec<(Jet, usize, usize)> + Send + Sync + 'static,
    ) -> Self {
        KillingYanoField::new(label, move |x| {
            let e = frame(x)?;
            let mut y = [[Jet::cst(0.0); DIM]; DIM];
            for (c, a, b) in terms(x) {
                for m in 0..DIM {
                    for n in 0..DIM {
                        y[m][n] += c * (e[a][m] * e[b][n] - e[b][m] * e[a][n]);
                    }
                }
            }
            Ok(y)
        })
    }

    pub fn jets(&self, x: &[Jet; DIM]) -> Result<JetMatrix> {
        (self.f)(x)
    }
}

impl KillingStaeckelField {
    pub fn new(label: impl Into<String>, f: impl Fn(&[Jet; DIM]) -> Result<JetMatrix> + Send + Sync + 'static) -> Self {
        KillingStaeckelField { label: label.into(), f: Arc::new(move |x| f(x).map(symmetrize)) }
    }

    /// `Σ c · (e^A)²` from coframe rows.
    pub fn from_frame_squares(
        label: impl Into<String>,
        frame: impl Fn(&[Jet; DIM]) -> Result<[[Jet; DIM]; DIM]> + Send + Sync + 'static,
        terms: impl Fn(&[Jet; DIM]) -> Vec<(Jet, usize)> + Send + Sync + 'static,
    ) -> Self {
        KillingStaeckelField::new(label, move |x| {
            let e = frame(x)?;
            let mut s = [[Jet::cst(0.0); DIM]; DIM];
            for (c, a) in terms(x) {
                for m in 0..DIM {
                    for n in 0..DIM {
                        s[m][n] += c * e[a][m] * e[a][n];
                    }
                }
            }
            Ok(s)
        })
    }

    /// The metric itself, a trivial Killing–Stäckel tensor.
    pub fn metric(metric: &Metric) -> Self {
        let m = metric.clone();
        KillingStaeckelField::new(format!("g[{}]", metric.label), move |x| m.jets(x))
    }

    pub fn jets(&self, x: &[Jet; DIM]) -> Result<JetMatrix> {
        (self.f)(x)
    }

    pub fn at(&self, x: &ChartPoint) -> Result<Mat4> {
        Ok((self.f)(&Jet::constants(x))?.map(|r| r.map(|c| c.v)))
    }
}

fn values_and_partials(m: &JetMatrix) -> (Mat4, [Mat4; DIM]) {
    let v = m.map(|r| r.map(|c| c.v));
    let mut d = [[[0.0; DIM]; DIM]; DIM];
    for k in 0..DIM {
        for i in 0..DIM {
            for j in 0..DIM {
                d[k][i][j] = m[i][j].d[k];
            }
        }
    }
    (v, d)
}

/// `∇_μ T_{νρ}` for a covariant 2-tensor.
fn covariant_derivative(metric: &Metric, t: &JetMatrix, x: &ChartPoint) -> Result<[[[f64; DIM]; DIM]; DIM]> {
    let gam = christoffel(metric, x)?;
    let (v, d) = values_and_partials(t);
    let mut out = [[[0.0; DIM]; DIM]; DIM];
    for m in 0..DIM {
        for n in 0..DIM {
            for r in 0..DIM {
                let mut acc = d[m][n][r];
                for l in 0..DIM {
                    acc -= gam[l][m][n] * v[l][r] + gam[l][m][r] * v[n][l];
                }
                out[m][n][r] = acc;
            }
        }
    }
    Ok(out)
}

/// Largest |∇_μY_{νρ} + ∇_νY_{μρ}|.
pub fn killing_yano_residual(y: &KillingYanoField, metric: &Metric, x: &ChartPoint) -> Result<f64> {
    let n = covariant_derivative(metric, &y.jets(&Jet::point(x))?, x)?;
    let mut worst: f64 = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            for c in 0..DIM {
                worst = worst.max((n[a][b][c] + n[b][a][c]).abs());
            }
        }
    }
    Ok(worst)
}

/// Largest |∇_{(μ}S_{νρ)}| (unnormalized cyclic sum).
pub fn ks_residual(s: &KillingStaeckelField, metric: &Metric, x: &ChartPoint) -> Result<f64> {
    let n = covariant_derivative(metric, &s.jets(&Jet::point(x))?, x)?;
    let mut worst: f64 = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            for c in 0..DIM {
                worst = worst.max((n[a][b][c] + n[b][c][a] + n[c][a][b]).abs());
            }
        }
    }
    Ok(worst)
}

/// `K_{μν} = Y_{μλ} Y_ν^λ`, the Killing–Stäckel tensor induced by a Killing–Yano form.
pub fn yano_square(y: &KillingYanoField, metric: &Metric) -> KillingStaeckelField {
    let y = y.clone();
    let m = metric.clone();
    KillingStaeckelField::new(format!("{}^2", y.label), move |x| {
        let yy = y.jets(x)?;
        let g = m.jets(x)?;
        let ginv = crate::jet::invert(&g).ok_or_else(|| crate::error::Error::SingularMetric(x.map(|c| c.v)))?;
        let mut out = [[Jet::cst(0.0); DIM]; DIM];
        for mu in 0..DIM {
            for nu in 0..DIM {
                for l in 0..DIM {
                    for s in 0..DIM {
                        out[mu][nu] += yy[mu][l] * ginv[l][s] * yy[nu][s];
                    }
                }
            }
        }
        Ok(out)
    })
}

/// Largest component of the exterior derivative of a 2-form.
pub fn exterior_derivative_residual(form: &KillingYanoField, x: &ChartPoint) -> Result<f64> {
    let (_, d) = values_and_partials(&form.jets(&Jet::point(x))?);
    let mut worst: f64 = 0.0;
    for a in 0..DIM {
        for b in 0..DIM {
            for c in 0..DIM {
                worst = worst.max((d[a][b][c] + d[b][c][a] + d[c][a][b]).abs());
            }
        }
    }
    Ok(worst)
}

/// Largest deviation of `J^μ_ν J^ν_ρ` from `−δ^μ_ρ` for a 2-form `J` raised with the metric.
pub fn complex_structure_residual(form: &KillingYanoField, metric: &Metric, x: &ChartPoint) -> Result<f64> {
    let j = form.jets(&Jet::constants(x))?.map(|r| r.map(|c| c.v));
    let ginv = crate::geometry::invert4(&metric.components(x)?)?;
    let mut mixed = [[0.0; DIM]; DIM];
    for mu in 0..DIM {
        for nu in 0..DIM {
            mixed[mu][nu] = (0..DIM).map(|l| ginv[mu][l] * j[l][nu]).sum();
        }
    }
    let mut worst: f64 = 0.0;
    for mu in 0..DIM {
        for rho in 0..DIM {
            let sq: f64 = (0..DIM).map(|nu| mixed[mu][nu] * mixed[nu][rho]).sum();
            let target = if mu == rho { -1.0 } else { 0.0 };
            worst = worst.max((sq - target).abs());
        }
    }
    Ok(worst)
}

/// Largest |S_{μν} − T_{μν}| between two symmetric tensors at `x`.
pub fn tensor_difference(s: &KillingStaeckelField, t: &KillingStaeckelField, x: &ChartPoint) -> Result<f64> {
    let a = s.at(x)?;
    let b = t.at(x)?;
    let mut worst: f64 = 0.0;
    for i in 0..DIM {
        for j in 0..DIM {
            worst = worst.max((a[i][j] - b[i][j]).abs());
        }
    }
    Ok(worst)
}
