//! Exactly-verifiable moment computations for random multiplicative
//! functions over F_q[t].

pub mod constants;
pub mod error;
pub mod field;
pub mod irreducible;
pub mod magic;
pub mod moments;
pub mod montecarlo;
pub mod poly;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use field::Field;
