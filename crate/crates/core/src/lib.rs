//! Asymptotic expansions of Laplace-Fourier-type integrals
//!
//! ```text
//! P(k) = ∫_Ω exp(-|k|^s f(x)) exp(i k·x) dx
//! ```
//!
//! together with an independent brute-force quadrature oracle and a sweep
//! harness that compares the two.
//!
//! - [`specfun`]: log-gamma, hypergeometric series and the Fox-Wright ₁Ψ₀.
//! - [`series1d`]: Bell polynomials, the coefficients `d_{m,n}`, the resummed
//!   symbols `I_m(λ, k)` and the one-dimensional asymptotic evaluator.
//! - [`multidim`]: Hessian eigen-decomposition and the d-dimensional formula.
//! - [`oracle`]: adaptive Gauss-Kronrod quadrature of the integrals themselves.
//! - [`harness`]: presets, sweeps, slope fits and CSV/JSON reports.

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod dd;
pub mod error;
pub mod harness;
pub mod multidim;
pub mod oracle;
pub mod series1d;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;

/// All integral values and symbols are complex.
pub type ComplexValue = Complex64;
