pub mod asymptotics;
pub mod bounds;
pub mod error;
pub mod exact;
pub mod optimize;
pub mod real;
pub mod render;
pub mod spectrum;
pub mod table;

pub use error::{Error, Result};
