//! Finite parametrized universal algebra over presheaf categories.

pub mod algebra;
pub mod base;
pub mod birkhoff;
pub mod cli;
pub mod clones;
pub mod error;
pub mod library;
pub mod presentation;
pub mod pretheory;
pub mod syntax;

pub use error::{Error, Result};
