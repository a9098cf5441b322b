//! Electronic Casimir-Polder interaction between two impurity atoms
//! side-coupled to a one-dimensional tight-binding nanowire.
//!
//! - [`lattice`]: chain/impurity parameters, dispersion, Brillouin-zone mesh.
//! - [`perturbation`]: second-order effective Hamiltonian and its spectrum.
//! - [`casimir`]: zero-temperature CP energy, discrete force, decay rate.
//! - [`thermal`]: canonical ensemble and the thermal force.
//! - [`oracle`]: exact diagonalization and direct quadrature used to check
//!   the closed forms.
//! - [`cli`]: configuration, sweeps and CSV/JSON output for the `ecp` binary.

pub mod casimir;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod oracle;
pub mod perturbation;
pub mod summation;
pub mod thermal;

pub use error::{Error, Result};
pub use lattice::{ChainParams, ImpurityConfig, SymmetricSystem};
