pub mod acceptance;
pub mod decomposition;
pub mod error;
pub mod fractal;
pub mod fuzz;
pub mod graph;
pub mod pegsets;
pub mod separators;
pub mod setfamilies;
pub mod state_space;

pub use error::{Error, Result};
pub use graph::Graph;
