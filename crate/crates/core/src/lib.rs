//! Universal arrows over finite concrete categories of equational structures.

pub mod adjoint;
pub mod cli;
pub mod construct;
pub mod dsl;
pub mod engine;
pub mod error;
pub mod finset;
pub mod functor;
pub mod kinds;
pub mod report;

pub use error::{Error, Result};
