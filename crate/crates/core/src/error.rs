use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of {function} at {at}")]
    Pole { function: &'static str, at: String },

    #[error("{function}: argument {arg} outside domain ({requirement})")]
    Domain {
        function: &'static str,
        arg: String,
        requirement: &'static str,
    },

    #[error("invalid parameter {name} = {value}: {requirement}")]
    Parameter {
        name: &'static str,
        value: String,
        requirement: &'static str,
    },

    #[error("quadrature did not reach {target:e} after {levels} refinements (last change {achieved:e})")]
    NonConvergence {
        target: f64,
        achieved: f64,
        levels: u32,
    },

    #[error("{0}: non-finite value produced")]
    NonFinite(&'static str),

    #[error("empty sample")]
    EmptySample,

    #[error("operation requires an atomic Thorin measure; discretize the density grid first")]
    UnsupportedMeasure,

    #[error("matrix dimension {dim} outside supported range 1..={max}")]
    Dimension { dim: usize, max: usize },
}

impl Error {
    pub(crate) fn domain(function: &'static str, arg: impl std::fmt::Display, requirement: &'static str) -> Self {
        Error::Domain {
            function,
            arg: arg.to_string(),
            requirement,
        }
    }

    pub(crate) fn parameter(name: &'static str, value: impl std::fmt::Display, requirement: &'static str) -> Self {
        Error::Parameter {
            name,
            value: value.to_string(),
            requirement,
        }
    }
}
