//! Fine-grained algorithms on a metered MapReduce-class simulator.

pub mod bounds;
pub mod engine;
pub mod error;
pub mod fft;
pub mod graph;
pub mod instances;
pub mod kernels;
pub mod matmul;
pub mod matrix;
pub mod minplus;
pub mod num;
pub mod oracles;
pub mod paths;

pub use error::{MrcError, Result};
