//! Vertex enumeration for small compact intersections of half-spaces.

use num_traits::Float;

use super::minkowski::{self, Vector};
use super::KernelError;

/// Face lattice of `{x : <x,n> <= 0 for all planes n}`.
#[derive(Clone, Debug)]
pub struct Hull<T> {
    /// Planes that carry a 2-dimensional face.
    pub planes: Vec<Vector<T>>,
    /// Index of each kept plane in the input list.
    pub source: Vec<usize>,
    pub vertices: Vec<Vector<T>>,
    /// Kept planes through each vertex, ascending.
    pub vertex_faces: Vec<Vec<usize>>,
    /// Vertices of each face in cyclic order.
    pub faces: Vec<Vec<usize>>,
    /// `(v, w, f, g)`: edge `vw` between faces `f < g`.
    pub edges: Vec<(usize, usize, usize, usize)>,
}

impl<T: Float> Hull<T> {
    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// The edge shared by faces `f` and `g`, if any.
    pub fn edge_between(&self, f: usize, g: usize) -> Option<(usize, usize)> {
        let (a, b) = if f < g { (f, g) } else { (g, f) };
        self.edges
            .iter()
            .find(|e| e.2 == a && e.3 == b)
            .map(|e| (e.0, e.1))
    }

    pub fn contains(&self, x: &Vector<T>, tol: T) -> bool {
        self.planes.iter().all(|n| minkowski::dot(x, n) <= tol)
    }
}

/// Computes the face lattice of a compact polyhedron from its bounding
/// planes (unit outward normals, pairwise distinct). Planes that only touch
/// the polyhedron in an edge or a vertex are dropped.
pub fn hull_from_planes<T: Float>(planes: &[Vector<T>], tol: T) -> Result<Hull<T>, KernelError> {
    let m = planes.len();
    let merge_tol = tol * T::from(100.0).unwrap();
    let mut points: Vec<Vector<T>> = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let raw = minkowski::orthogonal_complement(&planes[i], &planes[j], &planes[k]);
                let Some(p) = minkowski::to_hyperboloid(&raw) else {
                    continue;
                };
                if planes.iter().all(|n| minkowski::dot(&p, n) <= tol)
                    && !points.iter().any(|q| minkowski::max_diff(q, &p) <= merge_tol)
                {
                    points.push(p);
                }
            }
        }
    }
    let on: Vec<Vec<usize>> = points
        .iter()
        .map(|p| (0..m).filter(|&l| minkowski::dot(p, &planes[l]).abs() <= tol).collect())
        .collect();
    let source: Vec<usize> = (0..m)
        .filter(|&l| on.iter().filter(|fs| fs.contains(&l)).count() >= 3)
        .collect();
    if source.len() < 4 || points.len() < 4 {
        return Err(KernelError::DegenerateHull);
    }
    let vertex_faces: Vec<Vec<usize>> = on
        .iter()
        .map(|fs| fs.iter().filter_map(|l| source.iter().position(|s| s == l)).collect())
        .collect();
    if vertex_faces.iter().any(|fs| fs.len() < 3) {
        return Err(KernelError::DegenerateHull);
    }
    let nf = source.len();
    let mut edges = Vec::new();
    for v in 0..points.len() {
        for w in v + 1..points.len() {
            let shared: Vec<usize> = vertex_faces[v]
                .iter()
                .copied()
                .filter(|f| vertex_faces[w].contains(f))
                .collect();
            match shared.len() {
                0 | 1 => {}
                2 => edges.push((v, w, shared[0], shared[1])),
                _ => return Err(KernelError::DegenerateHull),
            }
        }
    }
    let mut faces = Vec::with_capacity(nf);
    for f in 0..nf {
        let face_edges: Vec<(usize, usize)> = edges
            .iter()
            .filter(|e| e.2 == f || e.3 == f)
            .map(|e| (e.0, e.1))
            .collect();
        let start = face_edges.first().ok_or(KernelError::DegenerateHull)?.0;
        let mut cycle = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = face_edges
                .iter()
                .filter_map(|&(a, b)| {
                    if a == cur && b != prev {
                        Some(b)
                    } else if b == cur && a != prev {
                        Some(a)
                    } else {
                        None
                    }
                })
                .next()
                .ok_or(KernelError::DegenerateHull)?;
            if next == start {
                break;
            }
            if cycle.len() > face_edges.len() {
                return Err(KernelError::DegenerateHull);
            }
            cycle.push(next);
            prev = cur;
            cur = next;
        }
        if cycle.len() != face_edges.len() {
            return Err(KernelError::DegenerateHull);
        }
        faces.push(cycle);
    }
    if points.len() + nf != edges.len() + 2 {
        return Err(KernelError::DegenerateHull);
    }
    Ok(Hull {
        planes: source.iter().map(|&l| planes[l]).collect(),
        source,
        vertices: points,
        vertex_faces,
        faces,
        edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::tetra::CoxeterTetrahedron;

    #[test]
    fn tetrahedron_lattice() {
        let r = CoxeterTetrahedron::linear(5, 3, 4).realize::<f64>().unwrap();
        let h = hull_from_planes(&r.normals, 1e-9).unwrap();
        assert_eq!(h.vertices.len(), 4);
        assert_eq!(h.edges.len(), 6);
        assert!(h.faces.iter().all(|f| f.len() == 3));
        for v in &r.vertices {
            assert!(h.vertices.iter().any(|w| minkowski::max_diff(v, w) < 1e-9));
        }
    }

    #[test]
    fn redundant_plane_dropped() {
        let r = CoxeterTetrahedron::linear(5, 3, 4).realize::<f64>().unwrap();
        let mut planes = r.normals.clone();
        // Implied by faces 1 and 2; touches the tetrahedron along an edge.
        let far = minkowski::unit_spacelike(&minkowski::add(&r.normals[1], &r.normals[2])).unwrap();
        planes.push(far);
        let h = hull_from_planes(&planes, 1e-9).unwrap();
        assert_eq!(h.face_count(), 4);
        assert_eq!(h.source, vec![0, 1, 2, 3]);
    }
}
