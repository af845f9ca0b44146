use serde::{Deserialize, Serialize};

/// Outcome of checking an analytic identity `lhs = rhs` in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub fn new(lhs_log: f64, rhs_log: f64, tolerance: f64) -> Self {
        Self::with_residual(lhs_log, rhs_log, lhs_log - rhs_log, tolerance)
    }

    /// Build a report whose residual was computed by a route other than
    /// `lhs_log - rhs_log`.
    pub fn with_residual(lhs_log: f64, rhs_log: f64, residual: f64, tolerance: f64) -> Self {
        let pass = residual.is_finite() && residual.abs() <= tolerance;
        Self {
            lhs_log,
            rhs_log,
            residual,
            tolerance,
            pass,
        }
    }
}
