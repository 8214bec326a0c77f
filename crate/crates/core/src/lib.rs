//! One-way deficit, quantum discord and entanglement of formation for
//! SU(2)-invariant states of a spin-j and a spin-1/2.
//!
//! Every quantity is available twice: from scalar closed forms
//! ([`measures`]) and from explicit density matrices with sampled qubit
//! measurements ([`oracle`]).

pub mod error;
pub mod measurement;
pub mod measures;
pub mod numeric;
pub mod oracle;
pub mod spin;
pub mod state;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};
