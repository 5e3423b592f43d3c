pub mod ascent;
pub mod decision;
pub mod eigen;
pub mod ensemble;
pub mod error;
pub mod line;
pub mod minimax;
pub mod matrix;
pub mod numrange;
pub mod spectral;
pub mod suite;
pub mod witness;

pub use error::{Error, Result};
