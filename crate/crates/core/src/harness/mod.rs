//! Executable checks of the inequalities, each producing a [`CheckReport`].

mod checks;
mod report;
mod suite;

pub use checks::*;
pub use report::*;
pub use suite::*;
