//! Special functions: rising factorial, Gamma, and the Gauss hypergeometric
//! function with an independent quadrature evaluator.

mod gamma;
mod hyp2f1;
mod quadrature;

pub use gamma::{gamma_fn, pochhammer};
pub use hyp2f1::{hyp2f1, hyp2f1_quadrature, Hyp2F1Eval, Hyp2F1Params, Method, MAX_TERMS};
