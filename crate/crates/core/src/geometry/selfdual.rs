use super::curvature::{curvature, CurvatureBundle, Rank4};
use super::metric::{ChartPoint, Mat4, Metric, Signature};
use crate::error::{Error, Result};
use nalgebra::{Matrix3, Matrix4};
use serde::{Deserialize, Serialize};

pub type Mat3 = [[f64; 3]; 3];

/// The (A, B, C) blocks of the curvature operator on Λ⁺ ⊕ Λ⁻.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelfDualBlocks {
    pub a: Mat3,
    pub b: Mat3,
    pub c: Mat3,
}

fn trace_free(m: &Mat3) -> Mat3 {
    let tr = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    let mut out = *m;
    for (i, row) in out.iter_mut().enumerate() {
        row[i] -= tr;
    }
    out
}

pub fn mat3_max_abs(m: &Mat3) -> f64 {
    m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()))
}

pub fn symmetric_eigenvalues(m: &Mat3) -> [f64; 3] {
    let mm = Matrix3::from_fn(|i, j| 0.5 * (m[i][j] + m[j][i]));
    let mut e: Vec<f64> = mm.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    [e[0], e[1], e[2]]
}

impl SelfDualBlocks {
    pub fn trace_a(&self) -> f64 {
        self.a[0][0] + self.a[1][1] + self.a[2][2]
    }

    pub fn trace_c(&self) -> f64 {
        self.c[0][0] + self.c[1][1] + self.c[2][2]
    }

    pub fn weyl_plus(&self) -> Mat3 {
        trace_free(&self.a)
    }

    pub fn weyl_minus(&self) -> Mat3 {
        trace_free(&self.c)
    }

    /// Largest asymmetry of A and C.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max((self.a[i][j] - self.a[j][i]).abs());
                worst = worst.max((self.c[i][j] - self.c[j][i]).abs());
            }
        }
        worst
    }
}

/// Largest deviation of `η_AB e^A_μ e^B_ν` from `g_μν`, relative to the metric scale.
pub fn tetrad_residual(g: &Mat4, tetrad: &Mat4, signature: Signature) -> f64 {
    let eta = signature.eta();
    let scale = g.iter().flatten().fold(1e-300f64, |a, v| a.max(v.abs()));
    let mut worst: f64 = 0.0;
    for m in 0..4 {
        for n in 0..4 {
            let s: f64 = (0..4).map(|a| eta[a] * tetrad[a][m] * tetrad[a][n]).sum();
            worst = worst.max((s - g[m][n]).abs() / scale);
        }
    }
    worst
}

/// Riemann tensor with all indices on the frame: `R_{ABCD}`.
pub fn frame_riemann(bundle: &CurvatureBundle, tetrad: &Mat4) -> Result<Rank4> {
    let e = Matrix4::from_fn(|a, m| tetrad[a][m]);
    let inv = e.try_inverse().ok_or_else(|| Error::NonOrthonormalTetrad(f64::INFINITY))?;
    // inv[(μ, A)] = e_A^μ
    let mut rlow = [[[[0.0; 4]; 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    rlow[a][b][c][d] = (0..4).map(|r| bundle.g[a][r] * bundle.riemann[r][b][c][d]).sum();
                }
            }
        }
    }
    let contract = |t: &Rank4, slot: usize| -> Rank4 {
        let mut out = [[[[0.0; 4]; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let mut acc = 0.0;
                        for m in 0..4 {
                            let (w, v) = match slot {
                                0 => (inv[(m, i)], t[m][j][k][l]),
                                1 => (inv[(m, j)], t[i][m][k][l]),
                                2 => (inv[(m, k)], t[i][j][m][l]),
                                _ => (inv[(m, l)], t[i][j][k][m]),
                            };
                            acc += w * v;
                        }
                        out[i][j][k][l] = acc;
                    }
                }
            }
        }
        out
    };
    let mut t = rlow;
    for slot in 0..4 {
        t = contract(&t, slot);
    }
    Ok(t)
}

const EPS3: [[[f64; 3]; 3]; 3] = {
    let mut e = [[[0.0; 3]; 3]; 3];
    e[0][1][2] = 1.0;
    e[1][2][0] = 1.0;
    e[2][0][1] = 1.0;
    e[1][0][2] = -1.0;
    e[0][2][1] = -1.0;
    e[2][1][0] = -1.0;
    e
};

/// Splits a frame 2-form Ω on the basis λ^±_b = e⁰∧e^b ± ½ε_bcd e^c∧e^d.
/// Returns the (λ⁺, λ⁻) coefficient triples.
fn split_two_form(om: &[[f64; 4]; 4]) -> ([f64; 3], [f64; 3]) {
    let mut plus = [0.0; 3];
    let mut minus = [0.0; 3];
    for b in 0..3 {
        let p = om[0][b + 1];
        let mut q = 0.0;
        for c in 0..3 {
            for d in 0..3 {
                q += 0.5 * EPS3[b][c][d] * om[c + 1][d + 1];
            }
        }
        plus[b] = 0.5 * (p + q);
        minus[b] = 0.5 * (p - q);
    }
    (plus, minus)
}

/// Self-dual decomposition of the curvature from a frame Riemann tensor.
pub fn blocks_from_frame(rf: &Rank4) -> SelfDualBlocks {
    let mut out = SelfDualBlocks { a: [[0.0; 3]; 3], b: [[0.0; 3]; 3], c: [[0.0; 3]; 3] };
    for a in 0..3 {
        let mut rp = rf[0][a + 1];
        let mut rm = rf[0][a + 1];
        for b in 0..3 {
            for c in 0..3 {
                let e = 0.5 * EPS3[a][b][c];
                if e == 0.0 {
                    continue;
                }
                for (i, row) in rf[b + 1][c + 1].iter().enumerate() {
                    for (j, v) in row.iter().enumerate() {
                        rp[i][j] += e * v;
                        rm[i][j] -= e * v;
                    }
                }
            }
        }
        let (pp, pm) = split_two_form(&rp);
        let (_, mm) = split_two_form(&rm);
        out.a[a] = pp;
        out.b[a] = pm;
        out.c[a] = mm;
    }
    out
}

/// Self-dual blocks of a Euclidean metric in its catalog tetrad at `x`.
pub fn selfdual_decompose(metric: &Metric, x: &ChartPoint) -> Result<SelfDualBlocks> {
    let tetrad = metric.tetrad(x)?;
    selfdual_decompose_with(metric, &tetrad, x)
}

/// Self-dual blocks for a caller-supplied orthonormal tetrad (rows `e^A_μ`).
pub fn selfdual_decompose_with(metric: &Metric, tetrad: &Mat4, x: &ChartPoint) -> Result<SelfDualBlocks> {
    if metric.signature != Signature::Euclidean {
        return Err(Error::Signature("self-dual blocks need a Euclidean metric; use the NP scalars".into()));
    }
    let bundle = curvature(metric, x)?;
    let res = tetrad_residual(&bundle.g, tetrad, metric.signature);
    if res > 1e-10 {
        return Err(Error::NonOrthonormalTetrad(res));
    }
    let mut e = *tetrad;
    if metric.orientation < 0.0 {
        for v in e[0].iter_mut() {
            *v = -*v;
        }
    }
    Ok(blocks_from_frame(&frame_riemann(&bundle, &e)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::metric::Domain;
    use crate::jet::Jet;

    /// Round S⁴ of unit radius in hyperspherical coordinates.
    fn s4() -> Metric {
        let dom = Domain::new([0.0, 0.0, 0.0, -10.0], [3.1, 3.1, 3.1, 10.0], [0.4; 4], [2.7, 2.7, 2.7, 1.0]);
        Metric::diagonal("s4", Signature::Euclidean, ["a", "b", "c", "d"], dom, |p| {
            let s0 = p[0].sin().square();
            let s1 = p[1].sin().square();
            let s2 = p[2].sin().square();
            Ok([Jet::cst(1.0), s0, s0 * s1, s0 * s1 * s2])
        })
    }

    #[test]
    fn round_sphere_has_identity_a_block() {
        let b = selfdual_decompose(&s4(), &[0.9, 1.2, 0.7, 0.3]).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let id = if i == j { 1.0 } else { 0.0 };
                assert!((b.a[i][j] - id).abs() < 1e-12);
                assert!((b.c[i][j] - id).abs() < 1e-12);
                assert!(b.b[i][j].abs() < 1e-12);
            }
        }
    }

    #[test]
    fn non_orthonormal_tetrad_rejected() {
        let m = s4();
        let x = [0.9, 1.2, 0.7, 0.3];
        let mut t = m.tetrad(&x).unwrap();
        t[1][0] *= 1.5;
        assert!(matches!(selfdual_decompose_with(&m, &t, &x), Err(Error::NonOrthonormalTetrad(_))));
    }
}
