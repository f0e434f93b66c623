//! Exact finite-field character sums and their Frobenius data for the
//! elliptic surfaces E_n, genus-2 and superelliptic point counts, and
//! Atkin–Swinnerton-Dyer congruences for a weight-4 noncongruence pair.

pub mod arith;
pub mod asd;
pub mod charsums;
pub mod cli;
pub mod error;
pub mod finite_fields;
pub mod fp_poly;
pub mod frobenius;
pub mod curves;
pub mod cyclotomic;
pub mod json;
pub mod places;
pub mod qseries;
pub mod suite;

pub use error::{Error, Result};
