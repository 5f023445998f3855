//! Numerical verification of entropy power inequalities for bosonic
//! classical-noise channels with quantum memory.

pub mod channels;
pub mod cli;
pub mod error;
pub mod fock;
pub mod gaussian;
pub mod harness;
pub mod linalg;
pub mod measures;
pub mod phase_space;
pub mod spec;

pub use error::{Error, Result};
