//! Exact finite-N moments and correlations of characteristic polynomials of
//! unitary-invariant Hermitian matrix ensembles (Gaussian, Laguerre/Wishart
//! and Jacobi/MANOVA), together with the parity-split large-N expansions of
//! the Gaussian moments and Monte Carlo cross-checks.
//!
//! All symbolic computation is done over arbitrary-precision rationals; where
//! a quantity carries a transcendental factor (powers of pi, Gamma values,
//! Gaussian integrals) that factor is tracked as a symbolic unit and never
//! approximated. Floating point appears only in the Monte Carlo estimators
//! and in the explicitly numeric asymptotic-order checks.

pub mod asymptotics;
pub mod combinatorics;
pub mod ensemble;
pub mod error;
pub mod exact;
pub mod expansions;
pub mod moments;
pub mod montecarlo;
pub mod ortho;
pub mod secular;
pub mod validate;

pub use combinatorics::Partition;
pub use ensemble::{Ensemble, EnsembleSpec};
pub use error::Error;
pub use exact::{ExactMatrix, ExactPolynomial, ExactScalar};
