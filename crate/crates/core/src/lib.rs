//! Exact computer algebra for the KP tau-function of open intersection numbers.
//!
//! Everything here is exact: the coefficient field is arbitrary-precision
//! rationals, series are truncated Laurent tails with tracked completeness
//! windows, and every generating-series identity is either verified by an
//! exact polynomial division or cross-checked against an independent route.
//!
//! Module map:
//!
//! - [`symmfunc`] - partitions, Frobenius notation, symmetric-group
//!   characters (Murnaghan-Nakayama), and the Schur <-> power-sum change of
//!   basis.
//! - [`series`] - sparse multivariate truncated Laurent series over the
//!   rationals, with window tracking, region expansions of 1/(z_i - z_j),
//!   and exact division by x - y, x^2 - y^2, or a single variable.
//! - [`wk`] - affine coordinates of the Witten-Kontsevich tau-function,
//!   the Faber-Zagier series a(z), b(z), and the generating series A(x,y).
//! - [`open`] - affine coordinates of the extended open tau-function by two
//!   independent routes, the c(z) series, normalized basis vectors, the
//!   generating series, and the recursion/constraint/symmetry verifiers.
//! - [`npoint`] - connected n-point functions via the cycle formula, the
//!   closed 1/2/3-point forms, and the boundary-sector correlators.
//! - [`tau`] - the tau-function as a Schur sum and as a weighted polynomial
//!   in time variables, the free energy, and the bosonic Virasoro and
//!   Hirota verifiers.

pub mod error;
pub mod npoint;
pub mod open;
pub mod rational;
pub mod report;
pub mod series;
pub mod symmfunc;
pub mod tau;
pub mod wk;

pub use error::{Error, Result};
pub use rational::Rat;
