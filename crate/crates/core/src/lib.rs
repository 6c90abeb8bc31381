//! Exact homological algebra of chain complexes, bicomplexes and twisted
//! complexes over ℤ, ℚ and prime fields.

pub mod bicomplex;
pub mod bidegree;
pub mod chain;
pub mod doc;
pub mod error;
pub mod linalg;
pub mod matrix;
pub mod model;
pub mod multi;
pub mod random;
pub mod ring;
pub mod spectral;
pub(crate) mod system;
pub mod twisted;
pub mod verify;

pub use bidegree::Bidegree;
pub use error::{Error, Result, Violation, ViolationKind};
pub use matrix::ExactMatrix;
pub use ring::{RingSpec, Scalar};
