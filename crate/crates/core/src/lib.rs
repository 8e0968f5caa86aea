//! Exact arithmetic for integer sequences that count periodic points.
//!
//! The crate tests Dold congruences and realizability, moves between
//! fixed-point counts, orbit counts and generating sequences, builds explicit
//! finite maps with prescribed orbit structure, works with truncated
//! dynamical zeta functions, detects Lefschetz sequences through
//! Kronecker–Hankel determinants, and measures how far a sequence is from
//! being realizable.
//!
//! Everything is exact: integers are arbitrary precision and rationals are
//! kept in lowest terms. No floating point is used anywhere.
//!
//! ```
//! use doldkit::seqkit::{is_realizable, SeqPrefix};
//!
//! let lucas = SeqPrefix::from_i64(&[1, 3, 4, 7, 11, 18]).unwrap();
//! assert!(is_realizable(&lucas).holds());
//!
//! let fib = SeqPrefix::from_i64(&[1, 1, 2, 3, 5, 8]).unwrap();
//! assert_eq!(is_realizable(&fib).failing_index(), Some(3));
//! ```

pub mod arith;
pub mod dynsys;
mod error;
pub mod lefschetz;
pub mod linalg;
pub mod repair;
pub mod seqkit;
pub mod series;

pub use error::{Error, Result};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Signed arbitrary-precision integer.
pub type Int = BigInt;
/// Exact rational in lowest terms with positive denominator.
pub type Rat = BigRational;
