//! Two-dimensional Coxeter tilings: vertex links, triangle decompositions,
//! plane-tiling ray counts and prism base patterns.

pub mod plane;
pub mod tiling;

use std::collections::{HashSet, VecDeque};

use crate::kernel::tetra::CoxeterTetrahedron;
pub use plane::{Geometry, Triangle2D};
pub use tiling::{enumerate_triangle_decompositions, Tessellation, TriangleDecomposition};

/// A trivalent vertex with edge labels `(k, l, m)` has a spherical link:
/// `1/k + 1/l + 1/m > 1`.
pub fn vertex_link_ok(triple: [u32; 3]) -> bool {
    let [k, l, m] = triple.map(u64::from);
    l * m + k * m + k * l > k * l * m
}

/// The link triangle of vertex `vertex` of `tet`, with side 0 on the plane of
/// `face` and sides 1, 2 on the other two incident faces.
fn link_triangle(tet: &CoxeterTetrahedron, face: usize, vertex: usize) -> Triangle2D {
    assert!(face != vertex && face < 4 && vertex < 4, "face must contain the vertex");
    let others: Vec<usize> = (0..4).filter(|&i| i != face && i != vertex).collect();
    let (a, b) = (others[0], others[1]);
    Triangle2D::coxeter(tet.label(a, b), tet.label(face, b), tet.label(face, a))
}

/// All chambers of a finite (spherical) tessellation.
fn spherical_chambers(tess: &Tessellation) -> Vec<Vec<u8>> {
    let mut seen: HashSet<Vec<u8>> = HashSet::from([Vec::new()]);
    let mut queue = VecDeque::from([Vec::<u8>::new()]);
    while let Some(w) = queue.pop_front() {
        for i in 0..3u8 {
            let mut nw = w.clone();
            nw.push(i);
            let key = tess.word_for(&tess.chamber_center(&nw)).expect("finite group");
            if seen.insert(key.clone()) {
                queue.push_back(key);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort();
    out
}

/// Number of rays from `vertex` inside the plane of `face` along which
/// mirrors of the tetrahedron's reflection group meet that plane: the
/// vertices of the vertex-link tiling on the great circle of the face.
pub fn plane_tiling_rays(tet: &CoxeterTetrahedron, face: usize, vertex: usize) -> usize {
    let tess = Tessellation::new(link_triangle(tet, face, vertex));
    let circle = tess.sides[0];
    let mut points: Vec<plane::P3> = Vec::new();
    for w in spherical_chambers(&tess) {
        for v in tess.chamber_vertices(&w) {
            if plane::incident(&circle, &v) && !points.iter().any(|p| plane::close(p, &v)) {
                points.push(v);
            }
        }
    }
    points.len()
}

/// Arc lengths (radians) between consecutive rays of [`plane_tiling_rays`],
/// starting at the link vertex opposite side 2 and going around the circle.
pub fn plane_tiling_arcs(tet: &CoxeterTetrahedron, face: usize, vertex: usize) -> Vec<f64> {
    let tess = Tessellation::new(link_triangle(tet, face, vertex));
    let circle = tess.sides[0];
    let origin = tess.vertices[2];
    let normal = plane::scale(&circle, 1.0 / plane::dot(&circle, &circle).sqrt());
    let mut angles: Vec<f64> = Vec::new();
    let e1 = origin;
    let e2 = plane::cross(&normal, &e1);
    for w in spherical_chambers(&tess) {
        for v in tess.chamber_vertices(&w) {
            if plane::incident(&circle, &v) {
                let t = plane::dot(&v, &e2).atan2(plane::dot(&v, &e1)).rem_euclid(std::f64::consts::TAU);
                if !angles.iter().any(|a| (a - t).abs() < 1e-7 || (a - t).abs() > std::f64::consts::TAU - 1e-7) {
                    angles.push(t);
                }
            }
        }
    }
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = angles.len();
    (0..n)
        .map(|i| {
            let next = if i + 1 < n { angles[i + 1] } else { angles[0] + std::f64::consts::TAU };
            next - angles[i]
        })
        .collect()
}

/// Decompositions of a triangle by copies of the prism base `base` in which
/// no side is cut into more than two segments.
pub fn base_patterns_for_prism(base: &Triangle2D, max_tiles: usize) -> Vec<TriangleDecomposition> {
    enumerate_triangle_decompositions(base, None, max_tiles)
        .into_iter()
        .filter(|d| d.edge_splits.iter().all(|&s| s <= 2))
        .collect()
}
