use std::fmt;

use thiserror::Error;

/// Named optimization constraints.
///
/// C1 is the interference cap, C2 the power budget, C3 the SINR threshold,
/// C4/C5 the parallel-topology separation bounds on the source and
/// destination sides, C6/C7 the elliptical equivalents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Constraint {
    C1,
    C2,
    C3,
    C4,
    C5,
    C6,
    C7,
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Constraint::C1 => "C1",
            Constraint::C2 => "C2",
            Constraint::C3 => "C3",
            Constraint::C4 => "C4",
            Constraint::C5 => "C5",
            Constraint::C6 => "C6",
            Constraint::C7 => "C7",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("constraint {constraint} violated: {detail}")]
    Constraint {
        constraint: Constraint,
        detail: String,
    },
    #[error("infeasible problem: {0}")]
    Infeasible(String),
    #[error("invalid mode: {0}")]
    InvalidMode(String),
    #[error("ill-conditioned evaluation: {0}")]
    Conditioning(String),
    #[error(
        "quadrature did not converge: value {value:e}, error estimate {abs_error:e} after {evaluations} evaluations"
    )]
    Quadrature {
        value: f64,
        abs_error: f64,
        evaluations: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn constraint(constraint: Constraint, detail: impl Into<String>) -> Self {
        Error::Constraint {
            constraint,
            detail: detail.into(),
        }
    }

    /// Short stable identifier for the error family.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Constraint { .. } => "constraint",
            Error::Infeasible(_) => "infeasible",
            Error::InvalidMode(_) => "invalid-mode",
            Error::Conditioning(_) => "conditioning",
            Error::Quadrature { .. } => "quadrature",
            Error::InvalidArgument(_) => "invalid-argument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
