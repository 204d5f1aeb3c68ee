//! Finite-dimensional Hilbert representations of quivers: intertwiner
//! spaces, structural verdicts (indecomposable, transitive, simple,
//! irreducible), decompositions, Kronecker and shift-operator models, and
//! subspace-system reductions.

pub mod document;
pub mod error;
pub mod intertwiner;
pub mod kronecker;
pub mod linalg;
pub mod models;
pub mod operators;
pub mod quiver;
pub mod rep;
pub mod report;
pub mod settings;
pub mod structure;
pub mod subspace;
pub mod sweep;

pub use error::{Error, Result};
pub use quiver::{Arrow, CanonicalKind, Path, Quiver};
pub use rep::{DimensionVector, Representation};
pub use settings::Settings;
