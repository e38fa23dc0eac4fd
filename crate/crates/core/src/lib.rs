//! Exact-arithmetic verification engine for genus bounds of primitive
//! classical point actions.
//!
//! The crate re-derives, with arbitrary-precision rational arithmetic, the
//! classification machinery for point actions of degree at least 10^4 and
//! genus at most 2: the zeta-family bounds, the signature sieve with its
//! proof ledger, the Grassmann-condition exception scan and the genus
//! certificates for the surviving cases.

pub mod geometry;
pub mod mustar;
pub mod numth;
pub mod rat;
pub mod sieve;
pub mod zeta;

pub use rat::{Rat, Thresholds};
pub use zeta::{PowerBounds, Signature};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("verification failure: {0}")]
    Verification(String),
    #[error("insufficient bounds: {0}")]
    InsufficientBounds(String),
}
