pub mod classical_states;
pub mod entanglement;
pub mod error;
pub mod numerics;
pub mod oracle;
pub mod spin_oscillator;
pub mod vanhove_algebra;

pub use error::{Error, Result};
