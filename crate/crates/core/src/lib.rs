//! Quantum mechanics of a charged particle in a constant magnetic field.
//!
//! The crate covers the infinite plane (Landau levels, ladder algebra,
//! coherent states, cyclotron orbits) and the flux-quantized torus with
//! twisted boundary conditions (magnetic translation group, lattice-sum
//! eigenstates, torus coherent states). An independent finite-difference
//! Hamiltonian on the twisted torus is provided as a spectral cross-check.
//!
//! Natural units are used throughout (`ħ = c = 1`).

pub mod config;
pub mod error;
pub mod export;
pub mod fd;
pub mod landau_inf;
pub mod linalg;
pub mod maggroup;
pub mod oscillator;
pub mod plane;
pub mod spectral;
pub mod torus_gauge;
pub mod torus_states;

pub use config::{InfiniteConfig, TorusConfig};
pub use error::{Error, Result};

/// Complex amplitude type used everywhere.
pub type C64 = num_complex::Complex64;

pub(crate) const TAU: f64 = std::f64::consts::TAU;
