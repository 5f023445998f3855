//! Channels acting on Fock-basis states: classical noise, beam splitters and
//! the quantum Ornstein-Uhlenbeck semigroup, plus their classical-quantum
//! extensions.

mod beam_splitter;
mod cq;
mod noise;

pub use beam_splitter::*;
pub use cq::*;
pub use noise::*;
