//! Exact computer algebra for the divided-power quantum algebra of sl2 at an
//! odd root of unity, the hyperalgebra of SL2 in characteristic p, and the
//! multiplicative (non-unital) splitting of the quantum Frobenius morphism.
//!
//! Everything is exact: coefficients live in Q[v]/Phi_l (with a flag for the
//! 2-integral subring Z[1/2][v]/Phi_l) or in F_p.  There is no floating point
//! anywhere.

pub mod bridge;
pub mod cyclo;
pub mod error;
pub mod hyper;
pub mod identities;
pub mod laurent;
pub mod linalg;
pub mod modp;
pub mod multi_torus;
pub mod pbw;
pub mod qbinom;
pub mod repr;
pub mod report;
pub mod serialize;
pub mod suites;
pub mod tensor;
pub mod torus;

pub use cyclo::{CycloScalar, RootParams};
pub use error::{AlgebraError, Result};
pub use modp::ModPScalar;
