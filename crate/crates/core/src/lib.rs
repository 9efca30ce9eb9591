pub mod characters;
pub mod class_space;
pub mod coleman;
pub mod cyclotomic;
pub mod error;
pub mod group_ring;
pub mod groups;
pub mod k1;
pub mod linalg;
pub mod padic;
pub mod report;
pub mod unipotent;

pub use error::{Error, Result};
