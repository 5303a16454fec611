//! Stationary states of the cubic nonlinear Schrödinger (Gross-Pitaevskii)
//! equation `H psi + nu |psi|^2 psi = E psi` as Rayleigh-Schrödinger power
//! series in the nonlinearity strength `nu`.
//!
//! * [`spectral`]: linear backends, function storage, resolvent.
//! * [`series`]: the order-by-order recursion, partial sums and residuals.
//! * [`bounds`]: explicit convergence-radius constants and the empirical
//!   radius estimate.
//! * [`elliptic`]: exact infinite-well solutions through Jacobi elliptic
//!   functions, used as an independent check of the series.

pub mod bounds;
pub mod elliptic;
pub mod error;
pub mod quadrature;
pub mod real;
pub mod series;
pub mod spectral;

pub use error::{Error, Result};
pub use real::{DoubleDouble, Real};
