//! Decorated marked surfaces, their CY3 algebras and the string model of
//! closed arcs as spherical dg modules.

pub mod algebra;
pub mod dgmod;
pub mod error;
pub mod field;
pub mod linalg;
pub mod quiver;
pub mod strings;
pub mod surface;
pub mod tilting;
pub mod twists;
pub mod verify;

pub use error::{DmsError, Result};
