use crate::error::{Error, Result};
use crate::jet::{zero_matrix, Jet, JetMatrix, DIM};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

pub type ChartPoint = [f64; DIM];
pub type Mat4 = [[f64; DIM]; DIM];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Signature {
    Euclidean,
    Lorentzian,
}

impl Signature {
    /// Sign ε carried by the fourth leg: +1 Euclidean, −1 Lorentzian.
    pub fn epsilon(self) -> f64 {
        match self {
            Signature::Euclidean => 1.0,
            Signature::Lorentzian => -1.0,
        }
    }

    pub fn from_epsilon(eps: f64) -> Result<Self> {
        if eps == 1.0 {
            Ok(Signature::Euclidean)
        } else if eps == -1.0 {
            Ok(Signature::Lorentzian)
        } else {
            Err(Error::Parameter(format!("epsilon must be +1 or -1, got {eps}")))
        }
    }

    pub fn eta(self) -> [f64; DIM] {
        [self.epsilon(), 1.0, 1.0, 1.0]
    }
}

/// Open coordinate box on which a metric is declared valid, plus a strictly
/// interior box used for sampling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: ChartPoint,
    pub hi: ChartPoint,
    pub sample_lo: ChartPoint,
    pub sample_hi: ChartPoint,
}

impl Domain {
    pub fn new(lo: ChartPoint, hi: ChartPoint, sample_lo: ChartPoint, sample_hi: ChartPoint) -> Self {
        Domain { lo, hi, sample_lo, sample_hi }
    }

    pub fn contains(&self, x: &ChartPoint) -> bool {
        (0..DIM).all(|k| x[k].is_finite() && x[k] > self.lo[k] && x[k] < self.hi[k])
    }

    /// Euclidean distance-like slack to the nearest face along axis `k`.
    pub fn slack(&self, x: &ChartPoint, k: usize) -> f64 {
        (x[k] - self.lo[k]).min(self.hi[k] - x[k])
    }
}

/// Metric components with their first and second coordinate partials.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricJet {
    pub g: Mat4,
    /// `dg[k][i][j] = ∂_k g_ij`
    pub dg: [Mat4; DIM],
    /// `ddg[k][l][i][j] = ∂_k ∂_l g_ij`
    pub ddg: [[Mat4; DIM]; DIM],
}

impl MetricJet {
    pub fn from_jets(m: &JetMatrix) -> Self {
        let mut out = MetricJet { g: [[0.0; DIM]; DIM], dg: [[[0.0; DIM]; DIM]; DIM], ddg: [[[[0.0; DIM]; DIM]; DIM]; DIM] };
        for i in 0..DIM {
            for j in 0..DIM {
                out.g[i][j] = m[i][j].v;
                for k in 0..DIM {
                    out.dg[k][i][j] = m[i][j].d[k];
                    for l in 0..DIM {
                        out.ddg[k][l][i][j] = m[i][j].h[k][l];
                    }
                }
            }
        }
        out
    }
}

pub type JetMetricFn = dyn Fn(&[Jet; DIM]) -> Result<JetMatrix> + Send + Sync;
pub type JetTetradFn = dyn Fn(&[Jet; DIM]) -> Result<[[Jet; DIM]; DIM]> + Send + Sync;

/// A metric on a four-dimensional chart.
///
/// Components are produced by a closure over coordinate jets, so exact first
/// and second partials come for free. Marking a metric `fd_only` forces the
/// finite-difference path, which evaluates the same closure on plain values.
#[derive(Clone)]
pub struct Metric {
    pub label: String,
    pub signature: Signature,
    pub coords: [&'static str; DIM],
    pub domain: Domain,
    eval: Arc<JetMetricFn>,
    tetrad: Option<Arc<JetTetradFn>>,
    /// +1 or −1; −1 flips the time leg of the tetrad in self-dual work.
    pub orientation: f64,
    pub exact: bool,
}

impl fmt::Debug for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Metric")
            .field("label", &self.label)
            .field("signature", &self.signature)
            .field("coords", &self.coords)
            .field("domain", &self.domain)
            .field("exact", &self.exact)
            .finish()
    }
}

impl Metric {
    pub fn new(
        label: impl Into<String>,
        signature: Signature,
        coords: [&'static str; DIM],
        domain: Domain,
        eval: impl Fn(&[Jet; DIM]) -> Result<JetMatrix> + Send + Sync + 'static,
    ) -> Self {
        Metric {
            label: label.into(),
            signature,
            coords,
            domain,
            eval: Arc::new(eval),
            tetrad: None,
            orientation: 1.0,
            exact: true,
        }
    }

    /// Metric `Σ_A η_A e^A ⊗ e^A` reconstructed from an orthonormal coframe.
    pub fn from_tetrad(
        label: impl Into<String>,
        signature: Signature,
        coords: [&'static str; DIM],
        domain: Domain,
        tetrad: impl Fn(&[Jet; DIM]) -> Result<[[Jet; DIM]; DIM]> + Send + Sync + 'static,
    ) -> Self {
        let tetrad: Arc<JetTetradFn> = Arc::new(tetrad);
        let eta = signature.eta();
        let t2 = tetrad.clone();
        let eval = move |x: &[Jet; DIM]| -> Result<JetMatrix> {
            let e = t2(x)?;
            let mut g = zero_matrix();
            for (a, row) in e.iter().enumerate() {
                for i in 0..DIM {
                    for j in i..DIM {
                        let term = row[i] * row[j] * eta[a];
                        g[i][j] += term;
                    }
                }
            }
            for i in 0..DIM {
                for j in 0..i {
                    g[i][j] = g[j][i];
                }
            }
            Ok(g)
        };
        let mut m = Metric::new(label, signature, coords, domain, eval);
        m.tetrad = Some(tetrad);
        m
    }

    /// Diagonal metric whose tetrad is the square root of the diagonal.
    pub fn diagonal(
        label: impl Into<String>,
        signature: Signature,
        coords: [&'static str; DIM],
        domain: Domain,
        diag: impl Fn(&[Jet; DIM]) -> Result<[Jet; DIM]> + Send + Sync + 'static,
    ) -> Self {
        // Tetrad leg 0 is the last coordinate so that it carries the signature sign.
        let eta = signature.eta();
        Metric::from_tetrad(label, signature, coords, domain, move |x| {
            let d = diag(x)?;
            let mut e = [[Jet::cst(0.0); DIM]; DIM];
            let order = [3usize, 0, 1, 2];
            for (a, &mu) in order.iter().enumerate() {
                let val = d[mu] * eta[a];
                if val.v <= 0.0 {
                    return Err(Error::Signature(format!("diagonal entry {mu} has the wrong sign ({})", d[mu].v)));
                }
                e[a][mu] = val.sqrt();
            }
            Ok(e)
        })
    }

    pub fn with_orientation(mut self, orientation: f64) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Forces finite-difference partials.
    pub fn fd_only(mut self) -> Self {
        self.exact = false;
        self
    }

    pub fn has_tetrad(&self) -> bool {
        self.tetrad.is_some()
    }

    pub fn contains(&self, x: &ChartPoint) -> bool {
        self.domain.contains(x)
    }

    fn check(&self, x: &ChartPoint) -> Result<()> {
        if !self.contains(x) {
            return Err(Error::OutsideDomain(*x));
        }
        Ok(())
    }

    /// Jet-valued components, for callers composing further jets.
    pub fn jets(&self, x: &[Jet; DIM]) -> Result<JetMatrix> {
        (self.eval)(x)
    }

    pub fn components(&self, x: &ChartPoint) -> Result<Mat4> {
        self.check(x)?;
        let m = (self.eval)(&Jet::constants(x))?;
        let mut g = [[0.0; DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                g[i][j] = m[i][j].v;
            }
        }
        Ok(g)
    }

    /// Exact partials from the jet closure, ignoring the `exact` flag.
    pub fn exact_jet(&self, x: &ChartPoint) -> Result<MetricJet> {
        self.check(x)?;
        Ok(MetricJet::from_jets(&(self.eval)(&Jet::point(x))?))
    }

    /// Tetrad rows `e^A_μ` as jets, with leg 0 the time-like (or fourth) leg.
    pub fn tetrad_jets(&self, x: &[Jet; DIM]) -> Option<Result<[[Jet; DIM]; DIM]>> {
        self.tetrad.as_ref().map(|t| t(x))
    }

    pub fn tetrad(&self, x: &ChartPoint) -> Result<Mat4> {
        self.check(x)?;
        let t = self.tetrad.as_ref().ok_or_else(|| Error::Config(format!("metric {} has no tetrad", self.label)))?;
        let e = t(&Jet::constants(x))?;
        let mut out = [[0.0; DIM]; DIM];
        for a in 0..DIM {
            for m in 0..DIM {
                out[a][m] = e[a][m].v;
            }
        }
        Ok(out)
    }
}

/// Which derivative path produced a [`Partials`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartialsMethod {
    Exact,
    FiniteDifference,
}

#[derive(Clone, Copy, Debug)]
pub struct Partials {
    pub jet: MetricJet,
    pub method: PartialsMethod,
    /// Largest Richardson error estimate over all entries (0 for exact partials).
    pub error_estimate: f64,
}

fn fd_steps(x: &ChartPoint) -> ([f64; DIM], [f64; DIM]) {
    let mut h1 = [0.0; DIM];
    let mut h2 = [0.0; DIM];
    for k in 0..DIM {
        let s = x[k].abs().max(1.0);
        h1[k] = f64::EPSILON.powf(1.0 / 3.0) * s;
        h2[k] = f64::EPSILON.powf(1.0 / 6.0) * s;
    }
    (h1, h2)
}

fn shifted(x: &ChartPoint, moves: &[(usize, f64)]) -> ChartPoint {
    let mut y = *x;
    for &(k, d) in moves {
        y[k] += d;
    }
    y
}

/// Metric partials up to `order` (1 or 2) at `x`.
///
/// Uses the exact jet path when the metric allows it; otherwise central
/// differences at steps `h` and `h/2` combined by Richardson extrapolation.
pub fn partials(metric: &Metric, x: &ChartPoint, order: u8) -> Result<Partials> {
    if metric.exact {
        return Ok(Partials { jet: metric.exact_jet(x)?, method: PartialsMethod::Exact, error_estimate: 0.0 });
    }
    metric.check(x)?;
    let (h1, h2) = fd_steps(x);
    for k in 0..DIM {
        let reach = 2.0 * if order >= 2 { h2[k] } else { h1[k] };
        let lo = shifted(x, &[(k, -reach)]);
        let hi = shifted(x, &[(k, reach)]);
        if !metric.contains(&lo) || !metric.contains(&hi) {
            return Err(Error::StencilOutsideDomain(*x));
        }
    }
    let g = metric.components(x)?;
    let mut jet = MetricJet { g, dg: [[[0.0; DIM]; DIM]; DIM], ddg: [[[[0.0; DIM]; DIM]; DIM]; DIM] };
    let mut err: f64 = 0.0;

    let first = |k: usize, h: f64| -> Result<Mat4> {
        let p = metric.components(&shifted(x, &[(k, h)]))?;
        let m = metric.components(&shifted(x, &[(k, -h)]))?;
        let mut d = [[0.0; DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                d[i][j] = (p[i][j] - m[i][j]) / (2.0 * h);
            }
        }
        Ok(d)
    };
    for k in 0..DIM {
        let a = first(k, h1[k])?;
        let b = first(k, 0.5 * h1[k])?;
        for i in 0..DIM {
            for j in 0..DIM {
                let r = (4.0 * b[i][j] - a[i][j]) / 3.0;
                jet.dg[k][i][j] = r;
                err = err.max((r - b[i][j]).abs());
            }
        }
    }
    if order >= 2 {
        let second = |k: usize, l: usize, hk: f64, hl: f64| -> Result<Mat4> {
            let mut d = [[0.0; DIM]; DIM];
            if k == l {
                let p = metric.components(&shifted(x, &[(k, hk)]))?;
                let m = metric.components(&shifted(x, &[(k, -hk)]))?;
                for i in 0..DIM {
                    for j in 0..DIM {
                        d[i][j] = (p[i][j] - 2.0 * g[i][j] + m[i][j]) / (hk * hk);
                    }
                }
            } else {
                let pp = metric.components(&shifted(x, &[(k, hk), (l, hl)]))?;
                let pm = metric.components(&shifted(x, &[(k, hk), (l, -hl)]))?;
                let mp = metric.components(&shifted(x, &[(k, -hk), (l, hl)]))?;
                let mm = metric.components(&shifted(x, &[(k, -hk), (l, -hl)]))?;
                for i in 0..DIM {
                    for j in 0..DIM {
                        d[i][j] = (pp[i][j] - pm[i][j] - mp[i][j] + mm[i][j]) / (4.0 * hk * hl);
                    }
                }
            }
            Ok(d)
        };
        for k in 0..DIM {
            for l in k..DIM {
                let a = second(k, l, h2[k], h2[l])?;
                let b = second(k, l, 0.5 * h2[k], 0.5 * h2[l])?;
                for i in 0..DIM {
                    for j in 0..DIM {
                        let r = (4.0 * b[i][j] - a[i][j]) / 3.0;
                        jet.ddg[k][l][i][j] = r;
                        jet.ddg[l][k][i][j] = r;
                        err = err.max((r - b[i][j]).abs());
                    }
                }
            }
        }
    }
    Ok(Partials { jet, method: PartialsMethod::FiniteDifference, error_estimate: err })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flat5() -> Metric {
        let dom = Domain::new([-10.0, -10.0, -10.0, 0.0], [10.0, 10.0, 10.0, 10.0], [-1.0; 4], [1.0, 1.0, 1.0, 3.0]);
        Metric::new("flat5", Signature::Lorentzian, ["x", "y", "z", "t"], dom, |p| {
            let t2 = p[3] * p[3];
            let e2x = (p[0] * 2.0).exp();
            let mut g = zero_matrix();
            g[0][0] = t2;
            g[1][1] = t2 * e2x;
            g[2][2] = t2 * e2x;
            g[3][3] = Jet::cst(-1.0);
            Ok(g)
        })
    }

    #[test]
    fn exact_polynomial_partial() {
        let m = flat5();
        let p = partials(&m, &[0.1, 0.2, 0.3, 1.7], 2).unwrap();
        assert_eq!(p.method, PartialsMethod::Exact);
        assert!((p.jet.dg[3][0][0] - 3.4).abs() < 1e-15);
        assert!((p.jet.ddg[3][3][0][0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn fd_agrees_with_exact() {
        let m = flat5();
        let x = [0.1, 0.2, 0.3, 1.7];
        let e = partials(&m, &x, 2).unwrap().jet;
        let f = partials(&m.clone().fd_only(), &x, 2).unwrap();
        assert_eq!(f.method, PartialsMethod::FiniteDifference);
        for k in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    assert!((e.dg[k][i][j] - f.jet.dg[k][i][j]).abs() < 1e-8);
                    for l in 0..4 {
                        assert!((e.ddg[k][l][i][j] - f.jet.ddg[k][l][i][j]).abs() < 1e-7);
                    }
                }
            }
        }
    }

    #[test]
    fn stencil_leaving_domain_is_reported() {
        let m = flat5().fd_only();
        assert!(matches!(partials(&m, &[0.1, 0.2, 0.3, 1e-4], 2), Err(Error::StencilOutsideDomain(_))));
        assert!(matches!(partials(&m, &[0.1, 0.2, 0.3, -1.0], 2), Err(Error::OutsideDomain(_))));
    }

    #[test]
    fn constant_metric_has_zero_second_partials() {
        let dom = Domain::new([-1.0; 4], [1.0; 4], [-0.5; 4], [0.5; 4]);
        let m = Metric::diagonal("const", Signature::Euclidean, ["a", "b", "c", "d"], dom, |_| {
            Ok([Jet::cst(2.0), Jet::cst(3.0), Jet::cst(1.0), Jet::cst(5.0)])
        })
        .fd_only();
        let p = partials(&m, &[0.1, 0.1, 0.1, 0.1], 2).unwrap();
        assert!(p.jet.ddg.iter().flatten().flatten().flatten().all(|v| v.abs() < 1e-9));
    }
}
