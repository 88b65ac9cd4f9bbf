//! Exact module theory over finite-dimensional algebras.

pub mod algebra;
pub mod bimodule;
pub mod error;
pub mod functors;
pub mod instance;
pub mod linalg;
pub mod module;
pub mod quiver;
pub mod resolution;
pub mod verify;

pub use error::{Error, Result};
