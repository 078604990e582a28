//! Exact computation with A-hypergeometric series whose coefficients are
//! factorial ratios.
//!
//! The crate is organized around one pipeline:
//!
//! - [`lattice`]: exact integer/rational geometry of a point configuration
//!   on a height-one hyperplane (group, cone, faces, minimality).
//! - [`series`]: truncated expansion of the attached hypergeometric series
//!   over exact big rationals, the contiguity relation, and the
//!   annihilating box and Euler operators.
//! - [`criterion`]: Landau's step-function criterion for factorial-ratio
//!   integrality, its exact minimization, and the minimal-height
//!   hypothesis connecting it to the series expansion.
//! - [`padic`]: prime-by-prime integrality verification with dual
//!   valuation paths.
//! - [`dwork`]: truncated arithmetic in the ramified extension
//!   `Z_p[pi]/(pi^(p-1)+p)`, the splitting-function tower, and the
//!   coefficientwise eigenvector and recursion verifications.
//!
//! Everything is exact: big integers, big rationals, or truncated pi-adics
//! with explicit precision. No floating point anywhere.

pub mod arith;
pub mod criterion;
pub mod dwork;
pub mod error;
pub mod io;
pub mod lattice;
pub mod matrix;
pub mod padic;
pub mod polytope;
pub mod report;
pub mod series;

pub use error::{Error, Result};
pub use lattice::LatticeConfig;
pub use report::{Outcome, VerificationReport};
