//! Nonlinear coherent states of the Fokas-Lagerstrom oscillator.
//!
//! The crate covers the deformed ladder algebra on a fixed energy shell,
//! construction of the finite-dimensional coherent states, their photon
//! statistics and quadrature squeezing, a numerical check of the resolution
//! of identity through the Mellin-Barnes weight function, and planning plus
//! simulation of the atom-by-atom cavity protocol that synthesizes them.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod format;
pub mod generation;
pub mod identity;
pub mod poly;
pub mod quadrature;
pub mod special;
pub mod states;
pub mod statistics;

pub use algebra::{Branch, ModelParams};
pub use error::{Error, Result};
pub use states::FockVector;
