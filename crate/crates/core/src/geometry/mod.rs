//! Coordinate tensor calculus on four-dimensional charts.
//!
//! Riemann convention: `R^ρ_{σμν} = ∂_μΓ^ρ_{νσ} − ∂_νΓ^ρ_{μσ} + Γ^ρ_{μλ}Γ^λ_{νσ} − Γ^ρ_{νλ}Γ^λ_{μσ}`
//! with `R_{σν} = R^ρ_{σρν}`, so round spheres have positive scalar curvature.

mod curvature;
mod metric;
mod np;
mod petrov;
mod selfdual;

pub use curvature::{
    christoffel, christoffel_from, compatibility_residual, curvature, curvature_from_jet, einstein_residual,
    einstein_residual_of, first_bianchi_residual, invert4, max_abs4, Christoffel, CurvatureBundle, Rank4,
};
pub use metric::{
    partials, ChartPoint, Domain, JetMetricFn, JetTetradFn, Mat4, Metric, MetricJet, Partials, PartialsMethod, Signature,
};
pub use np::{np_weyl_scalars, np_weyl_scalars_with, weyl_scalars_of, NullTetrad, WeylScalars};
pub use petrov::{
    classify_block, petrov_classify, petrov_from_scalars, LorentzianPetrov, PetrovLabel, PetrovSide, PetrovTolerance, PetrovType,
};
pub use selfdual::{
    blocks_from_frame, frame_riemann, mat3_max_abs, selfdual_decompose, selfdual_decompose_with, symmetric_eigenvalues,
    tetrad_residual, Mat3, SelfDualBlocks,
};
