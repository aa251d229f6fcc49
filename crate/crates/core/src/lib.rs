//! Multiport beam-splitter networks: unitary factorization, single-particle
//! propagation, singlet states, context observables and Greechie diagrams.

pub mod cli;
pub mod contexts;
pub mod decompose;
pub mod devices;
mod error;
pub mod interferometer;
pub mod numerics;
pub mod observables;
pub mod states;

pub use error::{Error, Result};
pub use numerics::{ComplexMatrix, ComplexVector, C64};
