//! Sparse Kronecker algebra over Hubbard operators X^{i,j}.

pub mod cg;
pub mod coupling;
pub mod error;
pub mod exactnum;
pub mod fourier;
pub mod hubbard;
pub mod kron;
pub mod models;
pub mod perm;
pub mod su2;
pub mod verify;

pub use error::{KronError, Result};
pub use exactnum::{ExactRational, Field, Scalar, SqrtRational};
pub use hubbard::{Ket, XSum};
pub use perm::Permutation;
