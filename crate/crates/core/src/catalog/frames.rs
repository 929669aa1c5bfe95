use crate::error::{Error, Result};
use crate::geometry::ChartPoint;
use crate::jet::{Jet, DIM};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BianchiClass {
    II,
    III,
    V,
}

impl fmt::Display for BianchiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BianchiClass::II => "II",
            BianchiClass::III => "III",
            BianchiClass::V => "V",
        };
        f.write_str(s)
    }
}

pub type Covector = [Jet; DIM];

/// Invariant one-forms σ₁, σ₂, σ₃ on the first three chart coordinates.
///
/// II: σ₁ = dx + y dz, σ₂ = dy, σ₃ = dz.
/// III: σ₁ = dx, σ₂ = dy, σ₃ = e⁻ˣ dz.
/// V: σ₁ = dx, σ₂ = eˣ dy, σ₃ = eˣ dz.
pub fn sigma(class: BianchiClass, p: &[Jet; DIM]) -> [Covector; 3] {
    let o = Jet::cst(0.0);
    let i = Jet::cst(1.0);
    match class {
        BianchiClass::II => [[i, o, p[1], o], [o, i, o, o], [o, o, i, o]],
        BianchiClass::III => [[i, o, o, o], [o, i, o, o], [o, o, (-p[0]).exp(), o]],
        BianchiClass::V => {
            let ex = p[0].exp();
            [[i, o, o, o], [o, ex, o, o], [o, o, ex, o]]
        }
    }
}

pub fn dt_form() -> Covector {
    let o = Jet::cst(0.0);
    [o, o, o, Jet::cst(1.0)]
}

pub fn scaled(k: Jet, c: &Covector) -> Covector {
    c.map(|v| v * k)
}

/// Coframe rows `[e⁰, e¹, e², e³]` = `[a₀ dT, a₁σ₁, a₂σ₂, a₃σ₃]`.
pub fn diagonal_coframe(class: BianchiClass, p: &[Jet; DIM], a: [Jet; 4]) -> [Covector; 4] {
    let s = sigma(class, p);
    [scaled(a[0], &dt_form()), scaled(a[1], &s[0]), scaled(a[2], &s[1]), scaled(a[3], &s[2])]
}

/// Components of the exterior derivative of σ_a: `(dσ)_{μν} = ∂_μσ_ν − ∂_νσ_μ`.
pub fn d_sigma(class: BianchiClass, x: &ChartPoint) -> [[[f64; DIM]; DIM]; 3] {
    let s = sigma(class, &Jet::point(x));
    let mut out = [[[0.0; DIM]; DIM]; 3];
    for (a, form) in s.iter().enumerate() {
        for m in 0..DIM {
            for n in 0..DIM {
                out[a][m][n] = form[n].d[m] - form[m].d[n];
            }
        }
    }
    out
}

fn wedge(a: &[f64; DIM], b: &[f64; DIM]) -> [[f64; DIM]; DIM] {
    let mut w = [[0.0; DIM]; DIM];
    for m in 0..DIM {
        for n in 0..DIM {
            w[m][n] = a[m] * b[n] - a[n] * b[m];
        }
    }
    w
}

/// Largest deviation from the Maurer–Cartan relations of the class:
/// II dσ₁ = σ₂∧σ₃; III dσ₃ = σ₃∧σ₁; V dσ₂ = σ₁∧σ₂, dσ₃ = σ₁∧σ₃.
pub fn maurer_cartan_residual(class: BianchiClass, x: &ChartPoint) -> Result<f64> {
    if !x.iter().all(|v| v.is_finite()) {
        return Err(Error::Domain(format!("non-finite point {x:?}")));
    }
    let d = d_sigma(class, x);
    let s = sigma(class, &Jet::constants(x)).map(|f| f.map(|j| j.v));
    let zero = [[0.0; DIM]; DIM];
    let expected = match class {
        BianchiClass::II => [wedge(&s[1], &s[2]), zero, zero],
        BianchiClass::III => [zero, zero, wedge(&s[2], &s[0])],
        BianchiClass::V => [zero, wedge(&s[0], &s[1]), wedge(&s[0], &s[2])],
    };
    let mut worst: f64 = 0.0;
    for a in 0..3 {
        for m in 0..DIM {
            for n in 0..DIM {
                worst = worst.max((d[a][m][n] - expected[a][m][n]).abs());
            }
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure_equations_hold() {
        for class in [BianchiClass::II, BianchiClass::III, BianchiClass::V] {
            for x in [[0.3, -1.0, 2.0, 1.7], [-0.4, 0.5, -0.2, 0.9]] {
                assert!(maurer_cartan_residual(class, &x).unwrap() < 1e-14, "{class}");
            }
        }
    }

    #[test]
    fn type2_sign_is_positive() {
        let d = d_sigma(BianchiClass::II, &[0.0, 0.7, 0.0, 0.0]);
        assert_eq!(d[0][1][2], 1.0);
    }
}
