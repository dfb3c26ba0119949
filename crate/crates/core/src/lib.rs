//! Exact computational algebra for Chevalley Lie algebras over prime
//! fields: structure constants for the exceptional types, restricted
//! p-th power maps, Witt algebras of Cartan type, exotic semidirect
//! products, and a catalogue of named verification scenarios with
//! machine-checkable reports.

pub mod cartan;
pub mod chevalley;
pub mod error;
pub mod expmap;
pub mod field;
pub mod liealg;
pub mod linalg;
pub mod poly;
pub mod reps;
pub mod rootsys;
pub mod scenarios;
pub mod sl2rep;

pub use chevalley::ChevalleyZ;
pub use error::ModlieError;
pub use field::{Field, Fp, Rationals};
pub use liealg::{Element, LieAlgebra, OrbitFingerprint};
pub use linalg::{Matrix, Subspace};
pub use rootsys::{Cocharacter, Root, RootSystem, TypeLabel};
pub use scenarios::{Check, CheckStatus, Provenance, ScenarioReport};
