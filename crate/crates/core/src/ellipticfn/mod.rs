//! Jacobi elliptic and theta functions, and the quartic change of variable
//! that turns `∫ρ dρ/√P(ρ)` into theta-function quotients.

mod jacobi;
mod quartic;
mod selftest;
mod theta;

pub use jacobi::{carlson_rf, complete_k, incomplete_f, inverse_sn, jacobi_jets, jacobi_sncn_dn};
pub use quartic::{
    build_change_of_variable, forward_sn2, gamma_squared_of_v, log_gamma_sq_jet, quartic_roots, rho_jet, rho_of_v,
    xi_as_displayed, xi_unified, ChangeOfVariable, LambdaBranch, Quartic, QuarticRoots, RhoValue,
};
pub use selftest::{elliptic_selftest, type5_change_of_variable, SelfTestItem};
pub use theta::{theta, theta_full, theta_logderivative, EllipticContext, ThetaKind, ThetaValue};
