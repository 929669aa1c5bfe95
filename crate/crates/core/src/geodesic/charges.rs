//! Conserved observables along the flow and their Poisson brackets.

use super::{explicit_staeckel, hamiltonian, PhaseState};
use crate::catalog::{FamilyMetric, IntegrableModel};
use crate::error::{Error, Result};
use crate::geometry::{invert4, Metric};
use crate::sampling;
use crate::symmetry::{bilinear_fit, BilinearFit, KillingStaeckelField, VectorField};
use std::fmt;
use std::sync::Arc;

type ChargeFn = dyn Fn(&PhaseState) -> f64 + Send + Sync;

#[derive(Clone)]
pub struct Charge {
    pub name: String,
    f: Arc<ChargeFn>,
}

impl fmt::Debug for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Charge({})", self.name)
    }
}

impl Charge {
    pub fn new(name: impl Into<String>, f: impl Fn(&PhaseState) -> f64 + Send + Sync + 'static) -> Self {
        Charge { name: name.into(), f: Arc::new(f) }
    }

    pub fn eval(&self, s: &PhaseState) -> f64 {
        (self.f)(s)
    }
}

/// `ξ^μ Π_μ`.
pub fn killing_charge(name: impl Into<String>, xi: VectorField) -> Charge {
    Charge::new(name, move |s| xi.at(&s.x).iter().zip(s.p.iter()).map(|(a, b)| a * b).sum())
}

/// `S^{μν} Π_μ Π_ν` with indices raised by the metric.
pub fn staeckel_charge(name: impl Into<String>, st: KillingStaeckelField, metric: Metric) -> Charge {
    Charge::new(name, move |s| {
        let (Ok(sl), Ok(g)) = (st.at(&s.x), metric.components(&s.x)) else { return f64::NAN };
        let Ok(gi) = invert4(&g) else { return f64::NAN };
        let mut v = [0.0; 4];
        for i in 0..4 {
            for j in 0..4 {
                v[i] += gi[i][j] * s.p[j];
            }
        }
        let mut acc = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                acc += sl[i][j] * v[i] * v[j];
            }
        }
        acc
    })
}

fn hamiltonian_charge(metric: Metric) -> Charge {
    Charge::new("H", move |s| hamiltonian(&metric, s).unwrap_or(f64::NAN))
}

/// `H`, every Killing charge `L̃ᵢ`, and `𝒮` for the integrable families.
pub fn conserved_quantities(fm: &FamilyMetric) -> Vec<Charge> {
    let mut out = vec![hamiltonian_charge(fm.metric.clone())];
    for (i, xi) in fm.killing.iter().enumerate() {
        out.push(killing_charge(format!("L{}", i + 1), xi.clone()));
    }
    if let Some(model) = fm.integrable {
        out.push(Charge::new("S", move |s| explicit_staeckel(&model, s)));
    }
    out
}

/// The four quantities claimed to be in involution: `H`, `𝒮` and two linear charges
/// (`Π_x, Π_z` for type II, `Π_y, Π_z` for type III).
pub fn involution_set(fm: &FamilyMetric) -> Result<Vec<Charge>> {
    let model = fm.integrable.ok_or_else(|| Error::Parameter(format!("{} has no integrable model", fm.family)))?;
    let (a, b) = match model {
        IntegrableModel::TypeII { .. } => (("Px", 0), ("Pz", 2)),
        IntegrableModel::TypeIII { .. } => (("Py", 1), ("Pz", 2)),
    };
    let lin = |(name, k): (&'static str, usize)| Charge::new(name, move |s| s.p[k]);
    Ok(vec![hamiltonian_charge(fm.metric.clone()), Charge::new("S", move |s| explicit_staeckel(&model, s)), lin(a), lin(b)])
}

/// `{F, G} = Σ ∂_x F ∂_Π G − ∂_Π F ∂_x G` by fourth-order central differences.
pub fn poisson_bracket(f: &Charge, g: &Charge, s: &PhaseState, step: f64) -> f64 {
    let y = s.to_vec();
    let d = |c: &Charge, k: usize| -> f64 {
        let at = |off: f64| {
            let mut z = y;
            z[k] += off;
            c.eval(&PhaseState::from_vec(&z))
        };
        let h = step * y[k].abs().max(1.0);
        (8.0 * (at(h) - at(-h)) - (at(2.0 * h) - at(-2.0 * h))) / (12.0 * h)
    };
    (0..4).map(|m| d(f, m) * d(g, m + 4) - d(f, m + 4) * d(g, m)).sum()
}

/// Least-squares fit of `𝒮` by bilinears in the Killing charges over seeded
/// random phase points inside the sampling window.
pub fn staeckel_bilinear_fit(fm: &FamilyMetric, count: usize, seed: u64) -> Result<BilinearFit> {
    let model = fm.integrable.ok_or_else(|| Error::Parameter(format!("{} has no integrable model", fm.family)))?;
    let xs = fm.sample_points(count, seed);
    let ps = sampling::scale_to_box(&sampling::halton(count, seed.wrapping_add(17)), &[-1.0; 4], &[1.0; 4]);
    let samples: Vec<(Vec<f64>, f64)> = xs
        .iter()
        .zip(ps.iter())
        .map(|(x, p)| {
            let s = PhaseState::new(*x, *p);
            let q = fm.killing.iter().map(|xi| xi.at(x).iter().zip(p.iter()).map(|(a, b)| a * b).sum()).collect();
            (q, explicit_staeckel(&model, &s))
        })
        .collect();
    bilinear_fit(&samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_bracket() {
        let x = Charge::new("x", |s| s.x[1]);
        let p = Charge::new("p", |s| s.p[1]);
        let s = PhaseState::new([0.1, 0.2, 0.3, 0.4], [1.0, 2.0, 3.0, 4.0]);
        assert!((poisson_bracket(&x, &p, &s, 1e-4) - 1.0).abs() < 1e-10);
        assert!(poisson_bracket(&x, &x, &s, 1e-4).abs() < 1e-12);
    }
}
