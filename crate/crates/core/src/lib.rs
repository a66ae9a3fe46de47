//! Exact construction and verification toolkit for symplectic BMW-type
//! R-matrices and the quantum matrix algebras they define.

pub mod scalar;
pub mod report;
pub mod rmatrix;
pub mod tensor;
pub mod qma;
pub mod ideal;
pub mod spectral;
pub mod classical;
pub mod suites;
