pub mod closed_forms;
pub mod constants;
pub mod error;
pub mod fields;
pub mod operators;
pub mod par;
pub mod quadrature;
pub mod suites;

pub use error::{Error, Result};
