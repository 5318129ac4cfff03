//! Exact arithmetic and counting machinery for nilpotent-independent (NI)
//! subsets of matrix algebras `M(d, q)` over finite fields.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; IO, parallel drivers and file formats live in the
//! `nicensus` companion crate.
//!
//! Layout:
//!
//! - [`gf`]: prime and extension fields `F_{p^k}`, Frobenius.
//! - [`poly`]: univariate polynomials, factorization, irreducible counts.
//! - [`matrix`]: dense matrices, characteristic/minimal polynomials, the
//!   invertible/nilpotent (Fitting) split, primary components.
//! - [`embed`]: the blow-up `M(c, q^b) -> M(bc, q)` and primary-cyclic
//!   membership tests for large-degree polynomials.
//! - [`census`]: flag-sum identity, subspace counts and the NI spec registry.
//! - [`quokka`]: cycle-type sums over `S_c` and closed-form proportions.
//! - [`estimate`]: seedable Monte Carlo proportions with Wilson intervals.
//! - [`interval`]: outward-rounded `f64` intervals for transcendental bounds.
#![no_std]

extern crate alloc;

pub mod census;
pub mod embed;
pub mod estimate;
pub mod gf;
pub mod interval;
pub mod matrix;
pub mod poly;
pub mod quokka;
pub mod rational;

mod error;

pub use error::{Error, Result};
pub use gf::{Elem, Field};
pub use matrix::Mat;
pub use poly::Poly;
