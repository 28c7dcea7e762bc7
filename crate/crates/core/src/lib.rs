//! Exact-arithmetic toolkit for |1|-graded semisimple Lie algebras realised
//! as matrix algebras.
//!
//! The crate builds the four classical families (projective, conformal,
//! almost Grassmannian, almost quaternionic), finds the group elements that
//! induce symmetries of their homogeneous models, computes the harmonic
//! curvature space `H^2(g_-, g)` as homology of the Kostant codifferential,
//! and evaluates the eigenvalue criterion that forces the curvature to vanish
//! at a point with two distinct symmetries. Every number is an exact
//! rational.

pub mod cohomology;
pub mod crosscheck;
pub mod error;
pub mod gate;
pub mod linalg;
pub mod models;
pub mod par;
pub mod rational;
pub mod symmetry;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::{Mat, SparseMat};
pub use models::{build_model, AlgebraElement, Family, GradedModel, GroupVariant, ModelSpec};
pub use rational::Rational;
