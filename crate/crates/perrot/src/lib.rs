//! Symmetry-adapted rigid-rotor toolkit: point-group structure, exact irrep
//! matrices over cyclotomic numbers, Wigner-D isotypic decompositions,
//! nuclear-spin statistical weights and species, symmetry-adapted phase-space
//! (position/momentum) states with a generalized Fourier transform, Berry
//! connections and monodromy of adapted bands, and simple rotor dynamics.
//!
//! Conventions (used consistently everywhere):
//! - Active z-y-z Euler angles; `D^l_{m'm}(a, b, c) = e^{-i m' a} d^l_{m'm}(b) e^{-i m c}`
//!   with rows and columns ordered by ascending magnetic quantum number.
//! - Molecule-frame symmetry acts through the complex-conjugate blocks
//!   `D^{l*}`, and all isotypic decompositions refer to those.

pub mod cyclotomic;
pub mod dynamics;
pub mod group;
pub mod holonomy;
pub mod irreps;
pub mod isotypic;
pub mod molecule;
pub mod phasespace;
pub mod rotation;
pub mod species;
pub mod wigner;

use thiserror::Error as ThisError;

/// Library-wide error type.
#[derive(Debug, ThisError)]
pub enum Error {
    #[error("angular momentum l = {ell} exceeds the supported cap {cap}")]
    EllCap { ell: usize, cap: usize },

    #[error("unrecognized group name: {0:?} (expected C<N>, D<N>, T, O, I, Cinf, Dinf)")]
    GroupName(String),

    #[error("unknown irrep label {label:?} for group {group}")]
    IrrepLabel { group: String, label: String },

    #[error("unknown molecule preset: {0:?}")]
    Molecule(String),

    #[error("kernel is not a normal subgroup: {0}")]
    KernelNotNormal(String),

    #[error("geometry is not invariant under the claimed symmetry group: {0}")]
    Geometry(String),

    #[error("invalid input: {0}")]
    Domain(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub use group::{build_group, ContinuousGroup, FiniteGroup, GroupName, GroupSpec};
pub use rotation::Rotation;
