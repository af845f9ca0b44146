//! Scalar special functions, numerically stable elementary kernels and the
//! semi-infinite quadrature engine shared by every other module.

mod quadrature;
mod special;
pub(crate) mod stable;

pub use quadrature::{
    integrate_interval, integrate_semi_infinite, QuadValue, QuadratureResult, QuadratureSpec,
};
pub use special::{
    digamma, euler_gamma, harmonic, log_gamma, log_gamma_real, zeta, zeta_minus_one,
};
pub use stable::{exp_taylor_tail, inv_four_sinh_sq};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Complex scalar used for every `z`, `λ`, `t`, `s` argument.
pub type ComplexScalar = num_complex::Complex64;

/// Accuracy contract for a comparison: passes when the residual is within
/// `abs_err` or within `rel_err` of the reference magnitude.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub abs_err: f64,
    pub rel_err: f64,
}

impl Tolerance {
    pub fn new(abs_err: f64, rel_err: f64) -> Result<Self> {
        if !(abs_err >= 0.0 && rel_err >= 0.0) || (abs_err == 0.0 && rel_err == 0.0) {
            return Err(Error::parameter(
                "tolerance",
                format!("({abs_err}, {rel_err})"),
                "both non-negative and at least one strictly positive",
            ));
        }
        Ok(Self { abs_err, rel_err })
    }

    pub fn absolute(abs_err: f64) -> Result<Self> {
        Self::new(abs_err, 0.0)
    }

    pub fn bound(&self, reference: f64) -> f64 {
        self.abs_err.max(self.rel_err * reference.abs())
    }

    pub fn admits(&self, value: f64, reference: f64) -> bool {
        (value - reference).abs() <= self.bound(reference)
    }
}

pub(crate) fn check_finite(function: &'static str, z: ComplexScalar) -> Result<ComplexScalar> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(z)
    } else {
        Err(Error::NonFinite(function))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_requires_a_positive_component() {
        assert!(Tolerance::new(0.0, 0.0).is_err());
        assert!(Tolerance::new(-1.0, 1.0).is_err());
        assert!(Tolerance::new(f64::NAN, 1.0).is_err());
        let t = Tolerance::new(1e-10, 1e-6).unwrap();
        assert!(t.admits(1000.0005, 1000.0));
        assert!(!t.admits(1000.01, 1000.0));
        assert!(t.admits(5e-11, 0.0));
    }
}
