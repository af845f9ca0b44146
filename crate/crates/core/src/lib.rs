//! Barnes G-function evaluation and the gamma/beta/GGC identities built on it.
//!
//! The crate is organised bottom-up:
//!
//! * [`num_core`] holds the scalar special functions (log-gamma, digamma,
//!   real zeta) and a double-exponential quadrature engine for integrals
//!   over `(0, ∞)`.
//! * [`barnes`] evaluates `log G(1+z)` by the infinite product, by the zeta
//!   power series and by the Lévy–Khintchine type integral.
//! * [`cue_moments`] contains the exact finite-`N` moments of `|det(I-U)|`
//!   for Haar unitary `U`, their large-`N` limits and the analytic residuals
//!   of the gamma and beta product identities.
//! * [`samplers`] provides seeded variate generation and empirical
//!   Mellin/Laplace estimators for the Monte Carlo side of every identity.
//! * [`ggc`] covers generalized gamma convolutions: Thorin measures, the
//!   scaled Laplace transform of the centred block sums `S_N` and the limit
//!   functional `H(λ)`.

pub mod barnes;
pub mod cue_moments;
mod error;
pub mod ggc;
pub mod num_core;
pub mod report;
pub mod samplers;

pub use error::{Error, Result};
pub use num_core::ComplexScalar;
pub use report::IdentityReport;
