//! Analysis and construction of APN (almost perfect nonlinear) functions.
//!
//! The crate covers three layers:
//!
//! * measurements on lookup tables ([`vbf`], [`ortho`]): degree, Walsh and
//!   difference spectra, ortho-derivatives and an EA-invariant signature;
//! * trims ([`trim`]): restricting a function to a hyperplane and projecting
//!   its output one dimension down, plus the spectra, graphs and recursive
//!   chains built from them;
//! * extensions ([`extension`]): adding one input and one output dimension,
//!   including the classification of extensions with `r = 0` and a
//!   randomized backtracking search for general quadratic `r`.
//!
//! [`catalog`] reads and writes functions and ships the reference
//! functions used throughout the tests.

pub mod catalog;
pub mod ea;
pub mod error;
pub mod exec;
pub mod extension;
pub mod field;
pub mod gf2;
pub mod ortho;
pub mod trim;
pub mod vbf;

pub use error::{Error, ParseError, Result};
pub use exec::Exec;
pub use field::FieldSpec;
pub use gf2::{GF2Matrix, GF2Vector};
pub use ortho::{InvariantSignature, Pairing};
pub use vbf::{Spectrum, Vbf};
