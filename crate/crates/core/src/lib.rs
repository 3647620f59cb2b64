//! Characteristic functions of row contractions and their factorizations.
//!
//! A row contraction `T = (T_1, ..., T_n)` on a finite-dimensional space is
//! stored as a tuple of dense complex matrices. Its characteristic function
//! is computed exactly on the Fock space truncated at word length `k`, where
//! the creation operators are nilpotent and the defining Neumann series is a
//! finite sum. On top of that the crate builds the Julia-Halmos factorization
//! of the characteristic function of an upper-triangular row contraction,
//! its converse construction, and the commutative (symmetric Fock space)
//! specialization, each returning residual certificates.
//!
//! Modules, bottom-up:
//!
//! - [`matkit`]: dense complex kernel (PSD square roots, SVD-based ranges, pseudoinverse, norms)
//! - [`rowcon`]: row operators, defect data, upper-triangular assembly, seeded generation
//! - [`fock`]: words, truncated Fock basis, creation and flip operators
//! - [`charfun`]: truncated multi-analytic operators and characteristic functions
//! - [`factorize`]: Julia-Halmos matrices, defect unitaries, factorization certificates
//! - [`constrained`]: symmetric Fock compression and pointwise evaluation on the ball

pub mod charfun;
pub mod constrained;
pub mod error;
pub mod factorize;
pub mod fock;
pub mod matkit;
pub mod rowcon;

pub use charfun::{char_fun, CharFunInput, TruncatedMultiAnalytic};
pub use error::{Error, Result};
pub use fock::{FockBasis, Word};
pub use matkit::{ComplexMatrix, RankTolerance};
pub use rowcon::{DefectData, RowOperator, UpperTriangularPair};

pub use num_complex::Complex64;
