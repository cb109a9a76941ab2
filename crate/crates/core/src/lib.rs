//! Exact ternary field arithmetic, multiplexing Hadamard transforms and the
//! digit-weight machinery for deciding when a `(v, t)` pair realizes a
//! ternary sequence with ideal two-level autocorrelation.

pub mod arith;
pub mod charsums;
pub mod dht;
pub mod eisenstein;
pub mod error;
pub mod field;
pub mod harness;
pub mod sequences;
pub mod tally;
pub mod weights;

pub use eisenstein::Eisenstein;
pub use error::{Error, Result};
pub use field::{FieldContext, FieldElement};
