//! Simulation library for quantum database search and its environment
//! effects.
//!
//! The search walks a two-dimensional plane spanned by the marked state
//! and the collective unmarked state; [`su2`] holds the closed forms for
//! that walk (rotation operators, success probabilities, optimal step
//! counts), and [`fullstate`] holds a literal full-Hilbert-space
//! simulator used as an independent oracle for each of them. [`decoherence`]
//! carries the environment closed forms (decoherence factors, the
//! decohered/classical/phase-matched probabilities, minimal-coupling
//! dephasing, the harmonic-bath factor and step budget), and
//! [`environment`] validates those against exact system-plus-environment
//! evolutions.
//!
//! All values are immutable after construction and every operation is a
//! pure function of its inputs, so anything here may be evaluated
//! concurrently without coordination.

pub mod decoherence;
pub mod environment;
pub mod error;
pub mod fullstate;
pub mod linalg;
pub mod su2;

pub use error::{Error, Result};
