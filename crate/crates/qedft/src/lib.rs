//! Plane-wave Kohn-Sham DFT on simulated quantum registers.
//!
//! This crate simulates, at the operator level, quantum algorithms for
//! Kohn-Sham density functional theory that avoid reading the electron
//! density out of the quantum registers:
//!
//! - a qubit-efficient encoding of all occupied orbitals on a
//!   band-label ⊗ grid register ([`qstate`]),
//! - adiabatic real-time evolution under Trotterized KS Hamiltonians
//!   ([`evolution`]),
//! - band-energy and density-of-states readout via Hadamard tests and
//!   quantum phase estimation ([`readout`]),
//! - Harris-functional total energies that need only the input density
//!   ([`dft`]),
//! - readout-free self-consistency through wavefunction copies: the exact
//!   single-copy reduced channel and a probabilistic imaginary-time variant
//!   ([`nonlinear`]),
//! - a classical plane-wave KS-DFT solver used as the reference for all of
//!   the above ([`oracle`]).
//!
//! Everything internal is in Hartree atomic units (bohr, hartree); angstrom
//! and eV are converted at the I/O boundary ([`units`]).
//!
//! The `examples/` directory contains one runnable program per capability;
//! the `qedft` binary drives the same pipelines from TOML config files.

pub mod cli;
pub mod dft;
pub mod error;
pub mod evolution;
pub mod fft;
pub mod lattice;
pub mod nonlinear;
pub mod oracle;
pub mod qstate;
pub mod readout;
pub mod units;

#[doc(hidden)]
pub mod testing;

pub use error::{Error, Result};
