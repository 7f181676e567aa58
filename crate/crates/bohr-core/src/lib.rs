//! Computational side of the Bohr correspondence between ordinary Dirichlet
//! series and power series in infinitely many variables.
//!
//! The crate is organized around five layers:
//!
//! * [`kernel`] — multi-index combinatorics and the prime-side arithmetic
//!   that identifies `n = p^alpha` with a sparse exponent vector.
//! * [`series`] — coefficient containers for Dirichlet and power polynomials,
//!   the Bohr transform between them, and the lift onto the polytorus.
//! * [`seqlab`] — positive-sequence analytics: decreasing rearrangement, the
//!   `b(z)` functional, sequence-space membership, and explicit block
//!   counterexamples.
//! * [`multiplier`] — classification of completely multiplicative sequences
//!   as absolute (`l1`) multipliers of the Hardy spaces of Dirichlet series,
//!   driven by the prime-subsequence criterion.
//! * [`torusnum`] — numerics on the finite polytorus: exact and Monte-Carlo
//!   norms, sup-norm ascent with certified witnesses, randomized sign
//!   searches, and desk-scale inequality checks.
//!
//! The crate is `no_std` (with `alloc`); all floating-point math goes through
//! `libm`, and every randomized operation takes an explicit seed.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod kernel;
pub mod multiplier;
mod numeric;
pub mod seqlab;
pub mod series;
pub mod torusnum;

pub use num_complex::Complex64;
