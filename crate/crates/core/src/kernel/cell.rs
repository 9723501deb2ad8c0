//! A realized fundamental polyhedron together with its reflection group.

use num_traits::Float;

use super::minkowski::{self, Isometry, Vector};
use super::Realization;

/// Chamber of the reflection tessellation generated by the faces of a
/// compact Coxeter polyhedron. Tiles of the tessellation are addressed by
/// words in the face reflections.
#[derive(Clone, Debug)]
pub struct FundamentalCell<T> {
    pub normals: Vec<Vector<T>>,
    pub vertices: Vec<Vector<T>>,
    pub reflections: Vec<Isometry<T>>,
    /// Normalized centroid of the vertices.
    pub center: Vector<T>,
}

/// Steps allowed when walking a point back into the chamber.
const MAX_WALK: usize = 100_000;

impl<T: Float> FundamentalCell<T> {
    pub fn new(r: &Realization<T>) -> Self {
        let sum = r
            .vertices
            .iter()
            .fold([T::zero(); 4], |acc, v| minkowski::add(&acc, v));
        let center = minkowski::to_hyperboloid(&sum).expect("sum of future timelike vectors is timelike");
        Self {
            normals: r.normals.clone(),
            vertices: r.vertices.clone(),
            reflections: r.normals.iter().map(minkowski::reflection).collect(),
            center,
        }
    }

    pub fn face_count(&self) -> usize {
        self.normals.len()
    }

    pub fn contains(&self, x: &Vector<T>, tol: T) -> bool {
        self.normals.iter().all(|n| minkowski::dot(x, n) <= tol)
    }

    /// Word `i1 i2 … im` with `x ∈ s_i1 s_i2 … s_im (F)`, found by reflecting
    /// `x` across the first violated wall until it lies in the chamber. `None` if the
    /// walk does not terminate (a point on or beyond the tessellation).
    pub fn word_for(&self, x: &Vector<T>, tol: T) -> Option<Vec<u8>> {
        let mut x = *x;
        let mut word = Vec::new();
        for _ in 0..MAX_WALK {
            match self.normals.iter().position(|n| minkowski::dot(&x, n) > tol) {
                None => return Some(word),
                Some(i) => {
                    x = minkowski::reflect(&x, &self.normals[i]);
                    word.push(i as u8);
                }
            }
        }
        None
    }

    /// Matrix `s_w0 s_w1 … s_wm` of a word.
    pub fn matrix_for(&self, word: &[u8]) -> Isometry<T> {
        word.iter().fold(minkowski::identity(), |m, &i| {
            minkowski::compose(&m, &self.reflections[i as usize])
        })
    }

    /// Center of the tile addressed by `word`.
    pub fn tile_center(&self, word: &[u8]) -> Vector<T> {
        minkowski::apply(&self.matrix_for(word), &self.center)
    }

    /// Isometries of the chamber onto itself: for each face permutation
    /// `perm` preserving the Gram matrix, the map sending `n_i` to
    /// `n_perm[i]`. Returns `None` for a permutation that does not come from
    /// an isometry.
    pub fn symmetry(&self, perm: &[usize]) -> Option<Isometry<T>> {
        let k = self.normals.len();
        // Use four normals spanning R^{3,1}.
        let basis = spanning_quadruple(&self.normals)?;
        let n = minkowski::from_columns([
            &self.normals[basis[0]],
            &self.normals[basis[1]],
            &self.normals[basis[2]],
            &self.normals[basis[3]],
        ]);
        let np = minkowski::from_columns([
            &self.normals[perm[basis[0]]],
            &self.normals[perm[basis[1]]],
            &self.normals[perm[basis[2]]],
            &self.normals[perm[basis[3]]],
        ]);
        let s = minkowski::compose(&np, &minkowski::general_inverse(&n)?);
        let tol = T::from(super::SOLVED_TOL).unwrap();
        if minkowski::isometry_defect(&s) > tol {
            return None;
        }
        let ok = (0..k).all(|i| {
            minkowski::max_diff(&minkowski::apply(&s, &self.normals[i]), &self.normals[perm[i]]) <= tol
        });
        ok.then_some(s)
    }
}

fn spanning_quadruple<T: Float>(normals: &[Vector<T>]) -> Option<[usize; 4]> {
    let k = normals.len();
    for a in 0..k {
        for b in a + 1..k {
            for c in b + 1..k {
                for d in c + 1..k {
                    let m = minkowski::from_columns([&normals[a], &normals[b], &normals[c], &normals[d]]);
                    let det = super::linalg::SquareMatrix::from_fn(4, |i, j| m[i][j]).determinant();
                    if det.abs() > T::from(1e-6).unwrap() {
                        return Some([a, b, c, d]);
                    }
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::tetra::CoxeterTetrahedron;

    #[test]
    fn words_address_tiles() {
        let r = CoxeterTetrahedron::linear(5, 3, 4).realize::<f64>().unwrap();
        let cell = FundamentalCell::new(&r);
        assert!(cell.contains(&cell.center, -1e-6));
        assert_eq!(cell.word_for(&cell.center, 1e-9).unwrap(), Vec::<u8>::new());
        let w = [0u8, 1, 2, 1, 3, 0];
        let x = cell.tile_center(&w);
        let found = cell.word_for(&x, 1e-9).unwrap();
        let y = cell.tile_center(&found);
        assert!(minkowski::max_diff(&x, &y) < 1e-9);
    }

    #[test]
    fn symmetric_simplex_has_isometry() {
        let t = CoxeterTetrahedron::linear(3, 5, 3);
        let cell = FundamentalCell::new(&t.realize::<f64>().unwrap());
        let s = cell.symmetry(&[3, 2, 1, 0]).unwrap();
        assert!(minkowski::max_diff(&minkowski::apply(&s, &cell.center), &cell.center) < 1e-9);
        assert!(cell.symmetry(&[1, 0, 2, 3]).is_none());
    }
}
