use super::metric::{partials, ChartPoint, Mat4, Metric, MetricJet};
use crate::error::{Error, Result};
use nalgebra::Matrix4;

pub type Christoffel = [[[f64; 4]; 4]; 4];
pub type Rank4 = [[[[f64; 4]; 4]; 4]; 4];

/// Curvature data at one chart point.
#[derive(Clone, Debug)]
pub struct CurvatureBundle {
    pub g: Mat4,
    pub ginv: Mat4,
    /// `christoffel[l][m][n] = Γ^l_{mn}`
    pub christoffel: Christoffel,
    /// `riemann[r][s][m][n] = R^r_{smn}`
    pub riemann: Rank4,
    /// `ricci[s][n] = R^r_{srn}`
    pub ricci: Mat4,
    pub scalar: f64,
    /// All-lower Weyl tensor `C_{abcd}`.
    pub weyl: Rank4,
}

pub fn invert4(g: &Mat4) -> Result<Mat4> {
    let m = Matrix4::from_fn(|i, j| g[i][j]);
    let scale = g.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    let det = m.determinant();
    if !det.is_finite() || det.abs() <= 1e-14 * scale.powi(4) {
        return Err(Error::SingularMetric([f64::NAN; 4]));
    }
    let inv = m.try_inverse().ok_or(Error::SingularMetric([f64::NAN; 4]))?;
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = inv[(i, j)];
        }
    }
    Ok(out)
}

/// Levi-Civita connection from metric components and first partials.
pub fn christoffel_from(jet: &MetricJet, ginv: &Mat4) -> Christoffel {
    let mut gam = [[[0.0; 4]; 4]; 4];
    for l in 0..4 {
        for m in 0..4 {
            for n in m..4 {
                let mut acc = 0.0;
                for s in 0..4 {
                    acc += ginv[l][s] * (jet.dg[m][s][n] + jet.dg[n][s][m] - jet.dg[s][m][n]);
                }
                gam[l][m][n] = 0.5 * acc;
                gam[l][n][m] = 0.5 * acc;
            }
        }
    }
    gam
}

/// Full curvature bundle from a metric jet.
pub fn curvature_from_jet(jet: &MetricJet) -> Result<CurvatureBundle> {
    let ginv = invert4(&jet.g)?;
    let gam = christoffel_from(jet, &ginv);

    // ∂_a g^{ls} = −g^{lp} ∂_a g_{pq} g^{qs}
    let mut dginv = [[[0.0; 4]; 4]; 4];
    for a in 0..4 {
        for l in 0..4 {
            for s in 0..4 {
                let mut acc = 0.0;
                for p in 0..4 {
                    for q in 0..4 {
                        acc -= ginv[l][p] * jet.dg[a][p][q] * ginv[q][s];
                    }
                }
                dginv[a][l][s] = acc;
            }
        }
    }
    // Γ_{smn} (first index lowered) and its partials.
    let mut low = [[[0.0; 4]; 4]; 4];
    let mut dlow = [[[[0.0; 4]; 4]; 4]; 4];
    for s in 0..4 {
        for m in 0..4 {
            for n in 0..4 {
                low[s][m][n] = 0.5 * (jet.dg[m][s][n] + jet.dg[n][s][m] - jet.dg[s][m][n]);
                for a in 0..4 {
                    dlow[a][s][m][n] = 0.5 * (jet.ddg[a][m][s][n] + jet.ddg[a][n][s][m] - jet.ddg[a][s][m][n]);
                }
            }
        }
    }
    // dgam[a][l][m][n] = ∂_a Γ^l_{mn}
    let mut dgam = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for l in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let mut acc = 0.0;
                    for s in 0..4 {
                        acc += dginv[a][l][s] * low[s][m][n] + ginv[l][s] * dlow[a][s][m][n];
                    }
                    dgam[a][l][m][n] = acc;
                }
            }
        }
    }
    let mut riemann = [[[[0.0; 4]; 4]; 4]; 4];
    for r in 0..4 {
        for s in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    let mut acc = dgam[m][r][n][s] - dgam[n][r][m][s];
                    for l in 0..4 {
                        acc += gam[r][m][l] * gam[l][n][s] - gam[r][n][l] * gam[l][m][s];
                    }
                    riemann[r][s][m][n] = acc;
                }
            }
        }
    }
    let mut ricci = [[0.0; 4]; 4];
    for s in 0..4 {
        for n in 0..4 {
            ricci[s][n] = (0..4).map(|r| riemann[r][s][r][n]).sum();
        }
    }
    let mut scalar = 0.0;
    for s in 0..4 {
        for n in 0..4 {
            scalar += ginv[s][n] * ricci[s][n];
        }
    }
    let g = jet.g;
    let mut rlow = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    rlow[a][b][c][d] = (0..4).map(|r| g[a][r] * riemann[r][b][c][d]).sum();
                }
            }
        }
    }
    let mut weyl = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let ric_part = g[a][c] * ricci[b][d] - g[a][d] * ricci[b][c] - g[b][c] * ricci[a][d] + g[b][d] * ricci[a][c];
                    let sc_part = g[a][c] * g[b][d] - g[a][d] * g[b][c];
                    weyl[a][b][c][d] = rlow[a][b][c][d] - 0.5 * ric_part + scalar / 6.0 * sc_part;
                }
            }
        }
    }
    Ok(CurvatureBundle { g, ginv, christoffel: gam, riemann, ricci, scalar, weyl })
}

fn jet_at(metric: &Metric, x: &ChartPoint) -> Result<MetricJet> {
    Ok(partials(metric, x, 2)?.jet)
}

pub fn christoffel(metric: &Metric, x: &ChartPoint) -> Result<Christoffel> {
    let jet = partials(metric, x, 1)?.jet;
    let ginv = invert4(&jet.g).map_err(|_| Error::SingularMetric(*x))?;
    Ok(christoffel_from(&jet, &ginv))
}

pub fn curvature(metric: &Metric, x: &ChartPoint) -> Result<CurvatureBundle> {
    curvature_from_jet(&jet_at(metric, x)?).map_err(|e| match e {
        Error::SingularMetric(_) => Error::SingularMetric(*x),
        other => other,
    })
}

/// max |Ric_μ^ν − λ δ_μ^ν|.
pub fn einstein_residual_of(bundle: &CurvatureBundle, lambda: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let mixed: f64 = (0..4).map(|r| bundle.ginv[nu][r] * bundle.ricci[r][mu]).sum();
            let target = if mu == nu { lambda } else { 0.0 };
            worst = worst.max((mixed - target).abs());
        }
    }
    worst
}

pub fn einstein_residual(metric: &Metric, x: &ChartPoint, lambda: f64) -> Result<f64> {
    Ok(einstein_residual_of(&curvature(metric, x)?, lambda))
}

/// Largest |∇_λ g_{μν}| computed from the connection.
pub fn compatibility_residual(metric: &Metric, x: &ChartPoint) -> Result<f64> {
    let jet = partials(metric, x, 1)?.jet;
    let ginv = invert4(&jet.g)?;
    let gam = christoffel_from(&jet, &ginv);
    let mut worst: f64 = 0.0;
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                let mut v = jet.dg[k][i][j];
                for l in 0..4 {
                    v -= gam[l][k][i] * jet.g[l][j] + gam[l][k][j] * jet.g[i][l];
                }
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(worst)
}

/// Largest |R^λ_{σμν} + R^λ_{μνσ} + R^λ_{νσμ}|.
pub fn first_bianchi_residual(bundle: &CurvatureBundle) -> f64 {
    let r = &bundle.riemann;
    let mut worst: f64 = 0.0;
    for l in 0..4 {
        for s in 0..4 {
            for m in 0..4 {
                for n in 0..4 {
                    worst = worst.max((r[l][s][m][n] + r[l][m][n][s] + r[l][n][s][m]).abs());
                }
            }
        }
    }
    worst
}

pub fn max_abs4(t: &Rank4) -> f64 {
    t.iter().flatten().flatten().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::metric::{Domain, Signature};
    use crate::jet::{zero_matrix, Jet};

    /// Unit 2-sphere in (θ, φ) padded with a flat Euclidean plane.
    fn sphere_times_plane() -> Metric {
        let dom = Domain::new([0.0, -10.0, -10.0, -10.0], [3.1, 10.0, 10.0, 10.0], [0.3, -1.0, -1.0, -1.0], [2.8, 1.0, 1.0, 1.0]);
        Metric::new("s2xr2", Signature::Euclidean, ["theta", "phi", "a", "b"], dom, |p| {
            let mut g = zero_matrix();
            g[0][0] = Jet::cst(1.0);
            g[1][1] = p[0].sin().square();
            g[2][2] = Jet::cst(1.0);
            g[3][3] = Jet::cst(1.0);
            Ok(g)
        })
    }

    #[test]
    fn sphere_connection_and_positive_curvature() {
        let m = sphere_times_plane();
        let x = [0.7, 0.2, 0.0, 0.0];
        let gam = christoffel(&m, &x).unwrap();
        assert!((gam[0][1][1] + 0.7f64.sin() * 0.7f64.cos()).abs() < 1e-15);
        let b = curvature(&m, &x).unwrap();
        assert!((b.scalar - 2.0).abs() < 1e-13);
        assert!(first_bianchi_residual(&b) < 1e-13);
        assert!(compatibility_residual(&m, &x).unwrap() < 1e-14);
    }

    #[test]
    fn perturbed_metric_is_not_einstein() {
        let dom = Domain::new([-5.0; 4], [5.0; 4], [-1.0; 4], [1.0; 4]);
        let m = Metric::diagonal("probe", Signature::Euclidean, ["a", "b", "c", "d"], dom, |p| {
            let bump = 1.0 + p[0] * p[0] * 0.1;
            Ok([Jet::cst(1.0) + p[3] * 0.0, bump, Jet::cst(1.0), Jet::cst(1.0)])
        });
        assert!(einstein_residual(&m, &[0.5, 0.1, 0.1, 0.1], 0.0).unwrap() > 1e-3);
    }
}
