//! Ablowitz–Segur solutions of the inhomogeneous Painlevé II equation
//! `u'' = x u + 2u³ − α`, their symmetric total integrals, and the explicit
//! monodromy and Bessel-parametrix algebra that predicts those integrals.

mod dd;
pub mod error;
pub mod identities;
pub mod matrix2;
pub mod monodromy;
pub mod parametrix;
pub mod phase;
pub mod pii_ode;
mod quadrature;
pub mod specfun;
pub mod totals;

pub use error::{Error, Result};
pub use identities::{Grid, IdentityReport};
pub use matrix2::{ArgWindow, Complex, Matrix2};
pub use monodromy::{ASParameters, Family};
pub use pii_ode::{PIIProblem, SolverConfig, Trajectory};
pub use totals::{IntegralResult, Method, SweepReport, SweepRow};
