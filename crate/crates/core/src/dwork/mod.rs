//! Truncated arithmetic in the ramified extension `Z_p[pi]/(pi^(p-1)+p)`
//! and the splitting-function machinery built on it: the Artin-Hasse
//! exponential, the tail series of negative powers, the semilinear operator
//! on the normalized generating series, and its eigenvector and recursion
//! verifications.

mod frobenius;
mod pi_adic;
mod splitting;

pub use frobenius::{
    expand_normalized, operator_coefficient, verify_eigenvector, verify_recursion, VerifyParams,
};
pub use pi_adic::PiAdic;
pub use splitting::{
    artin_hasse_coeffs, verify_key_identity, verify_splitting, ContextSizes, DworkContext,
};
