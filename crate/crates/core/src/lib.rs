//! Eigenvalue structure of the Kac-Murdock-Szegő matrix
//! `K_n(rho) = [rho^|j-k|]` for complex `rho`.
//!
//! The crate traces the two borderline curves in the `rho` plane on which
//! `K_n(rho)` has an eigenvalue of modulus exactly `n`, locates their cusps
//! (where that eigenvalue is the double eigenvalue `-n`), counts
//! extraordinary eigenvalues (`|lambda| > n`) by winding number, and checks
//! all of it against an independent dense-spectrum oracle.

pub mod borderline;
pub mod classification;
pub mod complex;
pub mod error;
pub mod matrix;
pub mod oracle;
pub mod relations;
pub mod singularities;
pub mod verify;
mod trig;

pub use complex::{format_complex, parse_complex, ComplexPoint};
pub use error::{Error, Result};
pub use matrix::{build_kms, dirichlet_ratio, signature_matrix, xi, DenseMatrix, Dimension, EigType, KmsMatrix};
