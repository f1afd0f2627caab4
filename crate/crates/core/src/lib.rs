//! Exact algebra for stationary Bratteli diagrams: dimension groups,
//! Perron-Frobenius data, shift equivalence, power conjugacy and
//! C*-equivalence certificates for nonnegative integer matrices.

pub mod corpus;
pub mod dimgroup;
pub mod equiv;
pub mod error;
pub mod exact;
pub mod matops;
pub mod padic;
pub mod perron;
pub(crate) mod ser;

pub use error::{Error, Result};
