//! Numerics on the Bargmann-Fock space.
//!
//! The crate works with coefficient vectors in the orthonormal basis
//! `e_n = z^n / sqrt(n!)`, builds banded truncations of polynomial
//! Hamiltonians in the ladder operators, and provides the tools to study them.

// `!(x > 0.0)` is used on purpose so NaN fails the check; banded kernels index by row.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod evolve;
pub mod fock;
pub mod linalg;
pub mod spectra;
pub mod trace;
pub mod tridiag;
pub mod xform;

pub use error::{Error, Result};
pub use fock::{
    apply_op, build_matrix, inner, BandedMatrix, CoeffVec, HamiltonianSpec, MonomialTerm, C64,
};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fock-space.md")]
    mod fock_space {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/tridiagonal.md")]
    mod tridiagonal {}
    #[doc = include_str!("../../../book/src/spectra.md")]
    mod spectra {}
    #[doc = include_str!("../../../book/src/trace.md")]
    mod trace {}
    #[doc = include_str!("../../../book/src/evolution.md")]
    mod evolution {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
