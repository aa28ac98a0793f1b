//! Interaction energies of two-dimensional Bravais lattices.
//!
//! The crate evaluates lattice sums `E_f[L] = sum_{p != 0} f(|p|^2)` for
//! several families of radial potentials, decides by closed-form bounds when
//! the triangular lattice minimizes them at fixed area or globally, and falls
//! back on numerical search over the fundamental domain otherwise.

pub mod criteria;
pub mod energy;
pub mod error;
pub mod lattice;
pub mod potentials;
pub mod quadrature;
pub mod roots;
pub mod search;
pub mod specfun;

pub use energy::{ConditionReport, ConditionStatus, EnergyMethod, EnergyValue};
pub use error::{Error, Result};
pub use lattice::{make_square, make_triangular, reduce, Basis2, ReducedLattice, Shell, ShellList};
pub use potentials::{Family, Potential, PotentialSpec};
pub use search::{MinimizationResult, SearchOptions, ShapeClass};
pub use specfun::{Precision, SeriesValue};
