//! Numerics for measurement-induced quadrature phase gates driven by ON
//! resource states (superpositions of vacuum and a single Fock state).
//!
//! The crate is organized bottom-up:
//!
//! * [`grid`], [`special`]: position lattice, quadrature, sampling and
//!   special functions;
//! * [`wavefunction`], [`states`]: position-representation states and the
//!   gates that act diagonally in `x`;
//! * [`fock`], [`symplectic`], [`linalg`]: truncated Fock-space algebra;
//! * [`prep`]: optical preparation of the 03 resource;
//! * [`circuit`]: the gate-teleportation circuit with homodyne feed-forward;
//! * [`metrics`]: fidelities and sweeps over test-state families.

pub mod circuit;
pub mod error;
pub mod fock;
pub mod grid;
pub mod linalg;
pub mod metrics;
pub mod prep;
pub mod special;
pub mod states;
pub mod symplectic;
pub mod wavefunction;

pub use error::{Error, Result};
pub use grid::{sample_from_density, DensitySamples, Grid};
pub use states::{GateSpec, OnSpec, TestState};
pub use wavefunction::PositionWaveFunction;
