pub mod algebra;
pub mod dsl;
pub mod error;
pub mod fab;
pub mod fgl;
pub mod hopf;
pub mod hopf_fgl;
pub mod report;
pub mod series;

pub use error::{Error, Result};
