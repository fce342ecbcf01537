//! Construction and exact verification of skew Hadamard difference sets and
//! Paley-type partial difference sets built from unions of cyclotomic classes
//! of finite fields.
//!
//! The verification spine is exact: character sums are computed as cyclotomic
//! integers (or as images modulo a large prime when conductors grow), Gauss-sum
//! identities are checked coefficient-by-coefficient, and set-theoretic claims
//! are re-checked by brute-force difference counting wherever the field is
//! small enough. Floating-point appears only as a clearly-labelled screening
//! path with explicit error bounds.

pub mod arith;
pub mod charsum;
pub mod construct;
pub mod cycint;
pub mod error;
pub mod field;
pub mod modeval;
pub mod sw;
pub mod verify;

pub use error::{Error, Result};
