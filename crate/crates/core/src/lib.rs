//! Exact constructions of linear differential systems `Y' = AY` whose local
//! data satisfy sufficient criteria for a prescribed semisimple differential
//! Galois group, together with machine-checkable certificates for every
//! hypothesis those criteria need.

pub mod alternate;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod funcfield;
pub mod lie;
pub mod linalg;
pub mod local;
pub mod puiseux;
pub mod roots;
pub mod system;
pub mod verify;
pub mod weyl;

pub use error::{Error, Result};
pub use field::{CycloField, FieldElem};
