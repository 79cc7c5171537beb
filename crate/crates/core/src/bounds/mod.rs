//! Effective constants and the conditions on generators of `Gamma`.

pub mod chain;
pub mod gamma;
pub mod real;

pub use chain::{
    bogomolov_epsilon, centro_m, deg_helping_bound, deg_image_bound, deg_subgroup_bound, em_lower_bounds, eps1_v, eps2_v,
    equi_kprime, finito_thresholds, main_delta_chain, multiplication_image_degree, BoundParams, BoundReport, Finito,
};
pub use gamma::{gamma_basis_check, GammaCheck};
pub use real::Real;
