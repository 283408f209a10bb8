//! Entropy production in sudden quenches of the one-dimensional XY chain,
//! split into a population part and a quantum-coherence part.
//!
//! The free-fermion closed forms live in [`observables`] (thermodynamic
//! limit) and [`lattice`] (finite `N`); [`limits`] holds the analytic
//! high- and zero-temperature forms. Two brute-force oracles check them:
//! [`modestate`] builds the 4x4 density matrix of each `±k` mode pair, and
//! [`spinchain`] diagonalizes the full spin Hamiltonian on up to 12 sites.

pub mod error;
pub mod lattice;
pub mod limits;
pub mod model;
pub mod modestate;
pub mod numerics;
pub mod observables;
pub mod quadrature;
pub mod spinchain;

pub use error::{Error, Result};
pub use model::{ModeData, ModelParams, QuenchKind, QuenchSpec};
pub use observables::{breakdown, EntropyBreakdown};
pub use quadrature::QuadratureConfig;
