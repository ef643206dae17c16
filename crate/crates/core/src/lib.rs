//! Dimer models, moduli of quiver representations, and wall crossing.

pub mod catalog;
pub mod chambers;
pub mod dimer;
pub mod error;
pub mod model;
pub mod oracle;
pub mod paths;
pub mod moduli;
pub mod reps;
pub mod tiling;
pub mod wallcross;

pub use error::{Error, Result};
