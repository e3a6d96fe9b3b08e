//! Numerical engine for Mittag-Leffler (grey noise) analysis in finite
//! dimensions.

pub mod appell;
pub mod cjson;
pub mod error;
pub mod measure;
pub mod operators;
pub mod special;
pub mod tensor;
pub mod transforms;
pub mod verify;

pub use error::{Error, Result};
pub use special::MLParams;
