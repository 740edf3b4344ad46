pub mod error;
pub mod intlat;
pub mod abgroups;
pub mod complexes;
pub mod simplicial;
pub mod extuct;
pub mod proind;
pub mod catalog;
pub mod random;

pub use error::{Error, Result};
