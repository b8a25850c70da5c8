//! Optimal liquidation under power-law temporary impact.
//!
//! The Beltrami first integral reduces the Euler-Lagrange equation to
//! `v^(k+1) = v0^(k+1) + lambda sigma^2 x^2 / (k eta)`, where `v0` is the
//! trading speed at the horizon. Its solution is implicit in the Gauss
//! hypergeometric function; `v0` is pinned by the initial holdings through a
//! shooting equation. See [`solver::solve`] for the end-to-end entry point.

// `!(x > 0.0)` style guards deliberately reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod model;
pub mod solver;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use model::{
    beltrami_constant, cost_of_trajectory, impact_integrand, legendre_check, ModelParams, Trajectory, TrajectoryPoint,
};
pub use solver::{solve, solve_v0, ShootingResult, SolveChecks, SolveReport};
pub use specfun::{gamma_fn, hyp2f1, hyp2f1_quadrature, pochhammer, Hyp2F1Eval, Hyp2F1Params, Method};
pub use verify::{cross_validate, integrate_first_order, reduction_check, OdeSolution};
