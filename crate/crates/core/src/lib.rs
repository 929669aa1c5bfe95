//! Diagonal Bianchi II, III and V Einstein metrics: construction, curvature,
//! symmetries, geodesic flows and the elliptic-function machinery behind the
//! Lorentzian type V family.

pub mod catalog;
pub mod cli;
pub mod ellipticfn;
pub mod embedding;
pub mod error;
pub mod geodesic;
pub mod geometry;
pub mod jet;
pub mod poly;
pub mod quad;
pub mod sampling;
pub mod symmetry;

pub use error::{Error, Result};
