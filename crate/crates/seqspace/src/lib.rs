//! Exact-arithmetic toolkit for the integrated and differentiated sequence
//! spaces built over bounded-variation and l1-type spaces.
//!
//! Everything is computed over arbitrary-precision rationals: transforms,
//! norms, membership verdicts with certificates, Kothe-Toeplitz dual
//! checks, and matrix-class characterizations.

pub mod error;
pub mod scalar;
pub mod seq;
pub mod space;
pub mod ratfn;
pub mod op;
pub mod series;
pub mod verdict;
pub mod spaces;
pub mod dual;
pub mod matclass;
pub mod suites;
pub mod cli;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use seq::{Decoration, Family, Seq};
pub use space::{BaseSpace, SpaceId};
pub use op::TriangleOp;
pub use verdict::{Status, Verdict};
