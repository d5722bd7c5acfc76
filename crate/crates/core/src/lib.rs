pub mod acceptance;
pub mod error;
pub mod basis;
pub mod embed;
pub mod entropy;
pub mod manifold;
pub mod spectrum;
pub mod waves;
pub mod specfun;

pub use error::{Error, Result};
