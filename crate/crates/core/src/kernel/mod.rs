//! Geometry in the hyperboloid model of hyperbolic 3-space.
//!
//! Everything here is generic over the float type; the rest of the crate uses
//! the `f64` instantiations re-exported at the crate root.

pub mod cell;
pub mod hull;
pub mod linalg;
pub mod minkowski;
pub mod prism;
pub mod tetra;

use num_traits::Float;
use serde::Serialize;
use thiserror::Error;

pub use linalg::{signature, Signature, SquareMatrix};
pub use minkowski::{Isometry, Vector};

/// Absolute tolerance for algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-9;
/// Absolute tolerance for solved or accumulated quantities.
pub const SOLVED_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("Gram matrix does not have signature (3,1)")]
    FactorizationFailure,
    #[error("vertex {0} is not inside hyperbolic space")]
    NonCompact(usize),
    #[error("degenerate edge between vertices {0} and {1}")]
    DegenerateEdge(usize, usize),
    #[error("prism solve did not converge")]
    NoConvergence,
    #[error("half-space arrangement does not bound a polyhedron")]
    DegenerateHull,
}

/// Face normals and vertices of a polyhedron in the hyperboloid model.
#[derive(Clone, Debug, Serialize)]
pub struct Realization<T> {
    pub normals: Vec<Vector<T>>,
    pub vertices: Vec<Vector<T>>,
    /// Faces through each vertex.
    pub incidence: Vec<Vec<usize>>,
}

impl<T: Float> Realization<T> {
    /// Interior dihedral angle between faces `i` and `j`.
    pub fn dihedral_angle(&self, i: usize, j: usize) -> T {
        let c = -minkowski::dot(&self.normals[i], &self.normals[j]);
        c.max(-T::one()).min(T::one()).acos()
    }

    pub fn edge_length(&self, v: usize, w: usize) -> Result<T, KernelError> {
        let c = -minkowski::dot(&self.vertices[v], &self.vertices[w]);
        if c <= T::one() + T::from(ALGEBRAIC_TOL).unwrap() {
            return Err(KernelError::DegenerateEdge(v, w));
        }
        Ok(c.acosh())
    }

    /// Largest `|<n,n> - 1|`, `|<v,v> + 1|` and `|<v,n>|` over incident pairs.
    pub fn residual(&self) -> T {
        let mut worst = T::zero();
        for n in &self.normals {
            worst = worst.max((minkowski::dot(n, n) - T::one()).abs());
        }
        for (vi, v) in self.vertices.iter().enumerate() {
            worst = worst.max((minkowski::dot(v, v) + T::one()).abs());
            for &f in &self.incidence[vi] {
                worst = worst.max(minkowski::dot(v, &self.normals[f]).abs());
            }
        }
        worst
    }
}
