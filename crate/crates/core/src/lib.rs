pub mod codes;
pub mod error;
pub mod gf;
pub mod harness;
pub mod pir;
pub mod rational;
pub mod verification;

pub use error::{Error, Result};
