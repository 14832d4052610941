//! Simulation of quantum channels in superposed causal orders.

pub mod error;
pub mod capacity;
pub mod channels;
pub mod process;
pub mod protocols;
pub mod qcore;
pub mod report;
pub mod switch;

pub use error::{Error, Result};
