//! Noncommutative phase-space charged isotropic oscillator in a uniform
//! magnetic field.
//!
//! * [`opalg`]: exact operator algebra, Bopp shift and the θ/η expansion.
//! * [`fock`]: truncated Fock-basis matrices and the cylindrical eigenbasis.
//! * [`spectra`]: Hamiltonian pieces as matrices and a Hermitian eigensolver.
//! * [`pt`]: closed-form first-order corrections exactly as published.
//! * [`adjudicate`]: oracle corrections, finite-difference slopes and reports.

pub mod adjudicate;
pub mod error;
pub mod fock;
pub mod matrix;
pub mod opalg;
pub mod pt;
pub mod spectra;

pub use error::{Error, Result};
