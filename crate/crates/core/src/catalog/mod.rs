//! Einstein metric families of diagonal Bianchi II, III and V type.
//!
//! Every family is built from an explicit coframe (rows `e^A_μ`, leg 0 along
//! the evolution coordinate), so the metric, its tetrad and its exact partial
//! derivatives come from one closure. Charts are `(x, y, z, T)` with `T` the
//! family's evolution coordinate, except the two Poincaré-type de Sitter
//! charts whose coordinate names are declared on the metric.

mod frames;
mod interval;
mod type2;
mod type3;
mod type5;

pub use frames::{d_sigma, diagonal_coframe, dt_form, maurer_cartan_residual, scaled, sigma, BianchiClass, Covector};
pub use interval::{breakpoints, select_interval, valid_intervals, Interval};
pub use type2::{bianchi2_rescaled_params, TYPE2_RESCALING};
pub use type5::{bianchi5_euclid_w, minkowski_change_of_variable};

use crate::error::{Error, Result};
use crate::geometry::{ChartPoint, Domain, Mat3, Metric};
use crate::sampling;
use crate::symmetry::{KillingStaeckelField, KillingYanoField, VectorField};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub type Params = BTreeMap<String, f64>;
pub type WeylFn = dyn Fn(&ChartPoint) -> (Mat3, Mat3) + Send + Sync;
pub type ScalarFn = dyn Fn(&ChartPoint) -> f64 + Send + Sync;
pub type FirstIntegralFn = dyn Fn(f64, f64) -> Result<f64> + Send + Sync;

/// Catalogued families; the string names are the CLI contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Bianchi2,
    Bianchi2Mirror,
    Bianchi2Kahler,
    Bianchi2Selfdual,
    Bianchi3,
    Bianchi3Product,
    Bianchi3ProductTau,
    Desitter3,
    Desitter3Poincare,
    Bianchi5Special,
    Bianchi5Conformal,
    Desitter5Poincare,
    Bianchi5Euclid,
    Bianchi5Minkowski,
    Flat3,
    Flat5,
}

/// A parameter slot: name and default (`None` means required).
pub type ParamSpec = (&'static str, Option<f64>);

impl Family {
    pub const ALL: [Family; 16] = [
        Family::Bianchi2,
        Family::Bianchi2Mirror,
        Family::Bianchi2Kahler,
        Family::Bianchi2Selfdual,
        Family::Bianchi3,
        Family::Bianchi3Product,
        Family::Bianchi3ProductTau,
        Family::Desitter3,
        Family::Desitter3Poincare,
        Family::Bianchi5Special,
        Family::Bianchi5Conformal,
        Family::Desitter5Poincare,
        Family::Bianchi5Euclid,
        Family::Bianchi5Minkowski,
        Family::Flat3,
        Family::Flat5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Bianchi2 => "bianchi2",
            Family::Bianchi2Mirror => "bianchi2_mirror",
            Family::Bianchi2Kahler => "bianchi2_kahler",
            Family::Bianchi2Selfdual => "bianchi2_selfdual",
            Family::Bianchi3 => "bianchi3",
            Family::Bianchi3Product => "bianchi3_product",
            Family::Bianchi3ProductTau => "bianchi3_product_tau",
            Family::Desitter3 => "desitter3",
            Family::Desitter3Poincare => "desitter3_poincare",
            Family::Bianchi5Special => "bianchi5_special",
            Family::Bianchi5Conformal => "bianchi5_conformal",
            Family::Desitter5Poincare => "desitter5_poincare",
            Family::Bianchi5Euclid => "bianchi5_euclid",
            Family::Bianchi5Minkowski => "bianchi5_minkowski",
            Family::Flat3 => "flat3",
            Family::Flat5 => "flat5",
        }
    }

    pub fn param_schema(self) -> &'static [ParamSpec] {
        match self {
            Family::Bianchi2 => &[("epsilon", None), ("m", None), ("l", None), ("lambda", None), ("t0", Some(f64::NAN))],
            Family::Bianchi2Mirror => &[("m", None), ("l", None), ("lambda", None), ("t0", Some(f64::NAN))],
            Family::Bianchi2Kahler => &[("l", None), ("lambda", None), ("t0", Some(f64::NAN))],
            Family::Bianchi2Selfdual => &[("b", None), ("lambda", None), ("t0", Some(f64::NAN))],
            Family::Bianchi3 => &[("epsilon", None), ("gamma0", None), ("lambda", None), ("t0", Some(f64::NAN))],
            Family::Bianchi3Product => &[("epsilon", None), ("gamma0", None), ("lambda", None), ("t0", Some(f64::NAN))],
            Family::Bianchi3ProductTau => &[("gamma0_sign", None), ("lambda", None)],
            Family::Desitter3 => &[("epsilon", None), ("lambda", None)],
            Family::Desitter3Poincare => &[("lambda", None)],
            Family::Bianchi5Special => &[("epsilon", None), ("lambda", None)],
            Family::Bianchi5Conformal => &[("epsilon", None), ("lambda", None)],
            Family::Desitter5Poincare => &[("lambda", None)],
            Family::Bianchi5Euclid => &[("lambda", None), ("branch", Some(0.0)), ("swap", Some(0.0))],
            Family::Bianchi5Minkowski => &[("theta", None), ("c", Some(1.0)), ("swap", Some(0.0))],
            Family::Flat3 | Family::Flat5 => &[],
        }
    }

    pub fn class(self) -> Option<BianchiClass> {
        match self {
            Family::Bianchi2 | Family::Bianchi2Mirror | Family::Bianchi2Kahler | Family::Bianchi2Selfdual => {
                Some(BianchiClass::II)
            }
            Family::Bianchi3 | Family::Bianchi3Product | Family::Bianchi3ProductTau | Family::Desitter3 | Family::Flat3 => {
                Some(BianchiClass::III)
            }
            Family::Bianchi5Special
            | Family::Bianchi5Conformal
            | Family::Bianchi5Euclid
            | Family::Bianchi5Minkowski
            | Family::Flat5 => Some(BianchiClass::V),
            Family::Desitter3Poincare | Family::Desitter5Poincare => None,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL.iter().copied().find(|f| f.name() == s).ok_or_else(|| Error::Config(format!("unknown family '{s}'")))
    }
}

/// Fills defaults and rejects unknown or missing parameters.
pub fn resolve_params(family: Family, given: &Params) -> Result<Params> {
    let schema = family.param_schema();
    for k in given.keys() {
        if !schema.iter().any(|(n, _)| n == k) {
            return Err(Error::Config(format!("family {family} has no parameter '{k}'")));
        }
    }
    let mut out = Params::new();
    for (name, default) in schema {
        match (given.get(*name), default) {
            (Some(v), _) => {
                out.insert(name.to_string(), *v);
            }
            (None, Some(d)) => {
                if !d.is_nan() {
                    out.insert(name.to_string(), *d);
                }
            }
            (None, None) => return Err(Error::Config(format!("family {family} needs parameter '{name}'"))),
        }
    }
    Ok(out)
}

pub(crate) fn get(params: &Params, key: &str) -> Result<f64> {
    params.get(key).copied().ok_or_else(|| Error::Config(format!("missing parameter '{key}'")))
}

pub(crate) fn epsilon(params: &Params) -> Result<f64> {
    let e = get(params, "epsilon")?;
    if e != 1.0 && e != -1.0 {
        return Err(Error::Parameter(format!("epsilon must be +1 or -1, got {e}")));
    }
    Ok(e)
}

/// A first-integral residual `r(T, k)`: `k = 1` uses the catalog constants,
/// other values distort the conserved constant for detector probes.
#[derive(Clone)]
pub struct FirstIntegral {
    pub equation: &'static str,
    residual: Arc<FirstIntegralFn>,
}

impl FirstIntegral {
    pub fn new(equation: &'static str, f: impl Fn(f64, f64) -> Result<f64> + Send + Sync + 'static) -> Self {
        FirstIntegral { equation, residual: Arc::new(f) }
    }

    pub fn residual(&self, t: f64) -> Result<f64> {
        (self.residual)(t, 1.0)
    }

    pub fn distorted_residual(&self, t: f64, factor: f64) -> Result<f64> {
        (self.residual)(t, factor)
    }
}

/// Parameters for the families whose geodesic flow is claimed integrable.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum IntegrableModel {
    TypeII { eps: f64, m: f64, l: f64, lambda: f64 },
    TypeIII { eps: f64, gamma0: f64, lambda: f64 },
}

/// A constructed catalog metric with everything the checks need.
#[derive(Clone)]
pub struct FamilyMetric {
    pub family: Family,
    pub params: Params,
    pub metric: Metric,
    pub lambda: f64,
    pub class: Option<BianchiClass>,
    pub interval: Interval,
    pub killing: Vec<VectorField>,
    pub yano: Option<KillingYanoField>,
    pub staeckel: Option<KillingStaeckelField>,
    /// `yano_square(Y) = S + shift·g`.
    pub yano_metric_shift: f64,
    pub complex_structure: Option<KillingYanoField>,
    /// Closed-form (W⁺, W⁻) in the catalog tetrad, when known.
    pub expected_weyl: Option<Arc<WeylFn>>,
    /// Spatial leg paired with the time leg in the NP null tetrad.
    pub null_axis: Option<usize>,
    /// Closed-form Ψ₂ in the catalog null tetrad, when known.
    pub expected_psi2: Option<Arc<ScalarFn>>,
    pub first_integral: Option<FirstIntegral>,
    pub integrable: Option<IntegrableModel>,
}

impl fmt::Debug for FamilyMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FamilyMetric")
            .field("family", &self.family)
            .field("params", &self.params)
            .field("lambda", &self.lambda)
            .field("interval", &self.interval)
            .finish()
    }
}

impl FamilyMetric {
    pub(crate) fn base(family: Family, params: Params, metric: Metric, lambda: f64, interval: Interval) -> Self {
        FamilyMetric {
            family,
            params,
            metric,
            lambda,
            class: family.class(),
            interval,
            killing: Vec::new(),
            yano: None,
            staeckel: None,
            yano_metric_shift: 0.0,
            complex_structure: None,
            expected_weyl: None,
            null_axis: None,
            expected_psi2: None,
            first_integral: None,
            integrable: None,
        }
    }

    /// Seeded quasi-random points in the sampling window of the domain.
    pub fn sample_points(&self, count: usize, seed: u64) -> Vec<ChartPoint> {
        let d = &self.metric.domain;
        sampling::scale_to_box(&sampling::halton(count, seed), &d.sample_lo, &d.sample_hi)
    }

    pub fn expected_weyl_at(&self, x: &ChartPoint) -> Option<(Mat3, Mat3)> {
        self.expected_weyl.as_ref().map(|f| f(x))
    }
}

const SPATIAL: f64 = 1e3;

/// Domain for a Bianchi chart: unbounded group directions and the given interval.
pub(crate) fn bianchi_domain(iv: &Interval) -> Domain {
    Domain::new(
        [-SPATIAL, -SPATIAL, -SPATIAL, iv.lo],
        [SPATIAL, SPATIAL, SPATIAL, iv.hi],
        [-1.0, -1.0, -1.0, iv.sample_lo],
        [1.0, 1.0, 1.0, iv.sample_hi],
    )
}

pub(crate) fn diag3(a: f64, b: f64, c: f64) -> Mat3 {
    [[a, 0.0, 0.0], [0.0, b, 0.0], [0.0, 0.0, c]]
}

/// Builds a catalog family from (possibly partial) user parameters.
pub fn build(family: Family, params: &Params) -> Result<FamilyMetric> {
    let p = resolve_params(family, params)?;
    match family {
        Family::Bianchi2 => type2::bianchi2(p),
        Family::Bianchi2Mirror => type2::bianchi2_mirror(p),
        Family::Bianchi2Kahler => type2::bianchi2_kahler(p),
        Family::Bianchi2Selfdual => type2::bianchi2_selfdual(p),
        Family::Bianchi3 => type3::bianchi3(p),
        Family::Bianchi3Product => type3::bianchi3_product(p),
        Family::Bianchi3ProductTau => type3::bianchi3_product_tau(p),
        Family::Desitter3 => type3::desitter3(p),
        Family::Desitter3Poincare => type3::desitter3_poincare(p),
        Family::Flat3 => type3::flat3(p),
        Family::Bianchi5Special => type5::bianchi5_special(p),
        Family::Bianchi5Conformal => type5::bianchi5_conformal(p),
        Family::Desitter5Poincare => type5::desitter5_poincare(p),
        Family::Bianchi5Euclid => type5::bianchi5_euclid(p),
        Family::Bianchi5Minkowski => type5::bianchi5_minkowski(p),
        Family::Flat5 => type5::flat5(p),
    }
}

/// Convenience wrapper taking `(name, value)` pairs.
pub fn build_with(family: Family, pairs: &[(&str, f64)]) -> Result<FamilyMetric> {
    let p: Params = pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    build(family, &p)
}

/// Representative parameter sets used by the default verification runs.
pub fn reference_configurations() -> Vec<(Family, Params)> {
    let mk = |pairs: &[(&str, f64)]| -> Params { pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect() };
    let lam = -0.75f64;
    vec![
        (Family::Bianchi2, mk(&[("epsilon", -1.0), ("m", 0.7), ("l", 0.9), ("lambda", -0.4)])),
        (Family::Bianchi2, mk(&[("epsilon", -1.0), ("m", 0.7), ("l", 0.9), ("lambda", 0.3)])),
        (Family::Bianchi2, mk(&[("epsilon", 1.0), ("m", 0.8), ("l", 0.6), ("lambda", -0.5)])),
        (Family::Bianchi2, mk(&[("epsilon", 1.0), ("m", 0.8), ("l", 0.6), ("lambda", 0.2)])),
        (Family::Bianchi2Mirror, mk(&[("m", 0.8), ("l", 0.6), ("lambda", 0.3)])),
        (Family::Bianchi2Kahler, mk(&[("l", 0.7), ("lambda", -0.6)])),
        (Family::Bianchi2Selfdual, mk(&[("b", -1.0), ("lambda", -0.9)])),
        (Family::Bianchi3, mk(&[("epsilon", 1.0), ("gamma0", 0.8), ("lambda", -0.6)])),
        (Family::Bianchi3, mk(&[("epsilon", 1.0), ("gamma0", -(2.0 / 3.0) / lam.abs().sqrt()), ("lambda", lam)])),
        (Family::Bianchi3, mk(&[("epsilon", -1.0), ("gamma0", 0.8), ("lambda", 0.5)])),
        (Family::Bianchi3, mk(&[("epsilon", -1.0), ("gamma0", 0.8), ("lambda", -0.5)])),
        (Family::Bianchi3Product, mk(&[("epsilon", -1.0), ("gamma0", 1.0), ("lambda", -0.8)])),
        (Family::Bianchi3Product, mk(&[("epsilon", 1.0), ("gamma0", 1.0), ("lambda", -0.8)])),
        (Family::Bianchi3Product, mk(&[("epsilon", 1.0), ("gamma0", 0.0), ("lambda", -0.8)])),
        (Family::Bianchi3Product, mk(&[("epsilon", 1.0), ("gamma0", -1.0), ("lambda", -0.8)])),
        (Family::Bianchi3ProductTau, mk(&[("gamma0_sign", 1.0), ("lambda", -0.8)])),
        (Family::Bianchi3ProductTau, mk(&[("gamma0_sign", 0.0), ("lambda", -0.8)])),
        (Family::Bianchi3ProductTau, mk(&[("gamma0_sign", -1.0), ("lambda", -0.8)])),
        (Family::Desitter3, mk(&[("epsilon", -1.0), ("lambda", 0.9)])),
        (Family::Desitter3, mk(&[("epsilon", -1.0), ("lambda", -0.9)])),
        (Family::Desitter3, mk(&[("epsilon", 1.0), ("lambda", -0.9)])),
        (Family::Desitter3Poincare, mk(&[("lambda", 0.9)])),
        (Family::Bianchi5Special, mk(&[("epsilon", -1.0), ("lambda", 0.7)])),
        (Family::Bianchi5Special, mk(&[("epsilon", -1.0), ("lambda", -0.7)])),
        (Family::Bianchi5Special, mk(&[("epsilon", 1.0), ("lambda", -0.7)])),
        (Family::Bianchi5Conformal, mk(&[("epsilon", -1.0), ("lambda", 0.7)])),
        (Family::Bianchi5Conformal, mk(&[("epsilon", -1.0), ("lambda", -0.7)])),
        (Family::Bianchi5Conformal, mk(&[("epsilon", 1.0), ("lambda", -0.7)])),
        (Family::Desitter5Poincare, mk(&[("lambda", 0.7)])),
        (Family::Bianchi5Euclid, mk(&[("lambda", 1.0)])),
        (Family::Bianchi5Euclid, mk(&[("lambda", -1.0), ("branch", 0.0)])),
        (Family::Bianchi5Euclid, mk(&[("lambda", -1.0), ("branch", -1.0)])),
        (Family::Bianchi5Euclid, mk(&[("lambda", -1.0), ("branch", 1.0)])),
        (Family::Bianchi5Minkowski, mk(&[("theta", -0.8)])),
        (Family::Bianchi5Minkowski, mk(&[("theta", 0.8)])),
        (Family::Flat3, Params::new()),
        (Family::Flat5, Params::new()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.name().parse::<Family>().unwrap(), f);
        }
        assert!("nope".parse::<Family>().is_err());
    }

    #[test]
    fn missing_and_unknown_params() {
        assert!(matches!(build_with(Family::Bianchi3, &[("epsilon", 1.0)]), Err(Error::Config(_))));
        assert!(matches!(build_with(Family::Flat3, &[("q", 1.0)]), Err(Error::Config(_))));
    }

    #[test]
    fn reference_configurations_build() {
        for (f, p) in reference_configurations() {
            let fm = build(f, &p).unwrap_or_else(|e| panic!("{f} {p:?}: {e}"));
            for x in fm.sample_points(4, 1) {
                assert!(fm.metric.contains(&x), "{f} {x:?}");
            }
        }
    }
}
