use std::fmt;

use thiserror::Error;

use crate::bidegree::Bidegree;
use crate::ring::RingSpec;

/// Which identity a raw object failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// A matrix has the wrong shape or sits where a module is zero.
    Dimension {
        index: String,
        rows: usize,
        cols: usize,
        expected: (usize, usize),
    },
    /// A module lives in negative horizontal degree.
    NegativeColumn,
    /// `Σ_{i+j=n} d_i d_j ≠ 0`.
    Quadratic { n: usize },
    /// `d_v d_v ≠ 0`.
    VerticalSquare,
    /// `d_h d_h ≠ 0`.
    HorizontalSquare,
    /// `d_v d_h + d_h d_v ≠ 0`.
    Anticommutation,
    /// `d d ≠ 0` on a chain complex.
    ChainSquare,
    /// A bicomplex carries a nonzero `d_i` with `i ≥ 2`.
    HigherDifferential { index: usize },
    /// A map does not commute with `d_i`.
    NotChainMap { index: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub at: Bidegree,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ViolationKind::Dimension {
                index,
                rows,
                cols,
                expected,
            } => write!(
                f,
                "dimension violation: {index} at {} is {rows}x{cols}, expected {}x{}",
                self.at, expected.0, expected.1
            ),
            ViolationKind::NegativeColumn => write!(f, "nonzero module at {} with p < 0", self.at),
            ViolationKind::Quadratic { n } => {
                write!(f, "quadratic relation n={n} fails at {}", self.at)
            }
            ViolationKind::VerticalSquare => write!(f, "d_v d_v != 0 at {}", self.at),
            ViolationKind::HorizontalSquare => write!(f, "d_h d_h != 0 at {}", self.at),
            ViolationKind::Anticommutation => {
                write!(f, "anticommutation d_v d_h + d_h d_v != 0 at {}", self.at)
            }
            ViolationKind::ChainSquare => write!(f, "d d != 0 at degree {}", self.at.q),
            ViolationKind::HigherDifferential { index } => {
                write!(f, "bicomplex has nonzero d{index} at {}", self.at)
            }
            ViolationKind::NotChainMap { index } => {
                write!(f, "map does not commute with {index} at {}", self.at)
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("operation `{op}` is not supported over {ring}")]
    UnsupportedRing { op: &'static str, ring: RingSpec },
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("validation failed: {}", join(.0))]
    Validation(Vec<Violation>),
    #[error("subquotient has torsion at {0}")]
    TorsionInSubquotient(Bidegree),
    #[error("cokernel has torsion at {0}")]
    TorsionCokernel(Bidegree),
    #[error("quotient has torsion at {0}")]
    TorsionQuotient(Bidegree),
    #[error("square does not commute: {0}")]
    BadSquare(String),
    #[error("mismatch at {at}, basis element {element}")]
    MismatchAt { at: Bidegree, element: String },
    #[error("ring mismatch: {0} vs {1}")]
    RingMismatch(RingSpec, RingSpec),
    #[error("internal invariant failed: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
}

fn join(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
