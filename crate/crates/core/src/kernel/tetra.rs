//! Coxeter tetrahedra: labels, Gram matrices, compactness and realization.

use num_traits::{Float, FloatConst};
use serde::{Deserialize, Serialize};

use super::linalg::{signature, Signature, SquareMatrix};
use super::minkowski::{self, Vector};
use super::{KernelError, Realization};

/// Unordered face pairs in label order: 01, 02, 03, 12, 13, 23.
pub const FACE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Index of the unordered pair `{i, j}` in [`FACE_PAIRS`].
pub fn pair_index(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    FACE_PAIRS.iter().position(|&p| p == (a, b)).expect("distinct faces 0..4")
}

/// A tetrahedron with dihedral angle `π/q_ij` between faces `i` and `j`.
///
/// Vertex `v` is the vertex opposite face `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CoxeterTetrahedron {
    labels: [u32; 6],
}

impl CoxeterTetrahedron {
    pub fn new(labels: [u32; 6]) -> Self {
        assert!(labels.iter().all(|&q| q >= 2), "Coxeter labels are >= 2");
        Self { labels }
    }

    /// Linear diagram `0 -a- 1 -b- 2 -c- 3`, all other labels 2.
    pub fn linear(a: u32, b: u32, c: u32) -> Self {
        Self::new([a, 2, 2, b, 2, c])
    }

    pub fn labels(&self) -> [u32; 6] {
        self.labels
    }

    pub fn label(&self, i: usize, j: usize) -> u32 {
        self.labels[pair_index(i, j)]
    }

    /// Labels of the three edges through vertex `v`.
    pub fn vertex_labels(&self, v: usize) -> [u32; 3] {
        let f: Vec<usize> = (0..4).filter(|&i| i != v).collect();
        [
            self.label(f[0], f[1]),
            self.label(f[0], f[2]),
            self.label(f[1], f[2]),
        ]
    }

    /// Relabels faces: the result has `label'(i,j) = label(perm[i], perm[j])`.
    pub fn permuted(&self, perm: &[usize; 4]) -> Self {
        let mut labels = [0; 6];
        for (s, &(i, j)) in FACE_PAIRS.iter().enumerate() {
            labels[s] = self.label(perm[i], perm[j]);
        }
        Self { labels }
    }

    /// Lexicographically smallest relabeling.
    pub fn canonical(&self) -> Self {
        all_permutations4()
            .iter()
            .map(|p| self.permuted(p))
            .min()
            .expect("24 permutations")
    }

    /// Face permutations preserving every label.
    pub fn symmetries(&self) -> Vec<[usize; 4]> {
        all_permutations4()
            .into_iter()
            .filter(|p| self.permuted(p) == *self)
            .collect()
    }

    pub fn gram<T: Float + FloatConst>(&self) -> SquareMatrix<T> {
        SquareMatrix::from_fn(4, |i, j| {
            if i == j {
                T::one()
            } else {
                -(T::PI() / T::from(self.label(i, j)).unwrap()).cos()
            }
        })
    }

    /// Every vertex has a spherical link: `1/k + 1/l + 1/m > 1`.
    pub fn links_spherical(&self) -> bool {
        (0..4).all(|v| {
            let [k, l, m] = self.vertex_labels(v);
            crate::links::vertex_link_ok([k, l, m])
        })
    }

    /// Bounded hyperbolic tetrahedron: Gram signature (3,1,0) and spherical
    /// vertex links.
    pub fn is_compact(&self) -> bool {
        let g = self.gram::<f64>();
        signature(&g, super::ALGEBRAIC_TOL) == Signature::new(3, 1, 0) && self.links_spherical()
    }

    /// Normals from a signature-(3,1) factorization of the Gram matrix and
    /// the four vertices.
    pub fn realize<T: Float + FloatConst>(&self) -> Result<Realization<T>, KernelError> {
        let g = self.gram::<T>();
        let tol = T::from(super::ALGEBRAIC_TOL).unwrap();
        let (values, vectors) = g.symmetric_eigen();
        let mut order: Vec<usize> = (0..4).collect();
        order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
        if !(values[order[2]] > tol && values[order[3]] < -tol) {
            return Err(KernelError::FactorizationFailure);
        }
        // Row r of the factor is sqrt|λ_r| times eigenvector r; the negative
        // eigenvalue goes to the time coordinate.
        let mut normals = vec![[T::zero(); 4]; 4];
        for (coord, &r) in order.iter().enumerate() {
            let s = values[r].abs().sqrt();
            for (i, n) in normals.iter_mut().enumerate() {
                n[coord] = s * vectors[(i, r)];
            }
        }
        realize_from_normals(normals)
    }
}

/// Vertices of the simplex bounded by four outward normals.
pub(crate) fn realize_from_normals<T: Float>(mut normals: Vec<Vector<T>>) -> Result<Realization<T>, KernelError> {
    let mut vertices = Vec::with_capacity(4);
    let mut incidence = Vec::with_capacity(4);
    for v in 0..4 {
        let faces: Vec<usize> = (0..4).filter(|&i| i != v).collect();
        let raw = minkowski::orthogonal_complement(&normals[faces[0]], &normals[faces[1]], &normals[faces[2]]);
        let q = minkowski::dot(&raw, &raw);
        if q >= T::zero() {
            return Err(KernelError::NonCompact(v));
        }
        let mut p = minkowski::scale(&raw, T::one() / (-q).sqrt());
        if minkowski::dot(&p, &normals[v]) > T::zero() {
            p = minkowski::neg(&p);
        }
        vertices.push(p);
        incidence.push(faces);
    }
    let future = vertices.iter().filter(|p| p[3] > T::zero()).count();
    if future == 0 {
        for n in normals.iter_mut() {
            *n = minkowski::neg(n);
        }
        for p in vertices.iter_mut() {
            *p = minkowski::neg(p);
        }
    } else if future != 4 {
        let bad = vertices.iter().position(|p| p[3] <= T::zero()).unwrap_or(0);
        return Err(KernelError::NonCompact(bad));
    }
    Ok(Realization {
        normals,
        vertices,
        incidence,
    })
}

pub(crate) fn all_permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    p.iter().for_each(|&x| seen[x] = true);
                    if seen.iter().all(|&s| s) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Compactness through leading-minor signs only: every vertex Gram minor
/// positive definite (Sylvester) and `det G < 0`.
pub fn compact_by_minors(t: &CoxeterTetrahedron) -> bool {
    let g = t.gram::<f64>();
    let eps = 1e-12;
    if g.determinant() >= -eps {
        return false;
    }
    (0..4).all(|v| {
        let keep: Vec<usize> = (0..4).filter(|&i| i != v).collect();
        let m = g.principal_minor(&keep);
        (1..=3).all(|k| m.principal_minor(&(0..k).collect::<Vec<_>>()).determinant() > eps)
    })
}
