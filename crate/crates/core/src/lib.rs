//! Exact invariants of quadratic forms over Q, Clifford-group cocycles,
//! twists by orthogonal representations through Galois algebras, and tame
//! ramification data.

pub mod arith;
pub mod cli;
pub mod clifford;
pub mod error;
pub mod exec;
pub mod galois;
pub mod groupalg;
pub mod linalg;
pub mod poly;
pub mod quadform;
pub mod ramify;
pub mod twist;
pub mod verify;

pub use error::{Error, Result};
