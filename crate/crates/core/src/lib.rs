//! Exact arithmetic on powers of an elliptic curve over Q: canonical heights,
//! Gauss-reduced morphisms, effective bound chains and tube scans.

pub mod bounds;
pub mod check;
pub mod config;
pub mod elliptic;
pub mod error;
pub mod morphism;
pub mod rational;
pub mod report;
pub mod scan;

pub use error::{Error, Result};
