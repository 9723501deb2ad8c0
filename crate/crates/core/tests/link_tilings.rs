use coxdec::kernel::tetra::CoxeterTetrahedron;
use coxdec::links::tiling::{closure_triangle_keys, orbit_triangle_keys};
use coxdec::links::{
    base_patterns_for_prism, enumerate_triangle_decompositions, plane_tiling_arcs, plane_tiling_rays, Tessellation,
    Triangle2D,
};
use num_rational::Ratio;

fn agreement(k: u32, l: u32, m: u32, max_tiles: usize) -> usize {
    let tess = Tessellation::coxeter(k, l, m);
    let a = closure_triangle_keys(&tess, max_tiles);
    let b = orbit_triangle_keys(&tess, max_tiles);
    assert_eq!(a, b, "({k},{l},{m}) at {max_tiles} tiles");
    a.len()
}

#[test]
fn closure_matches_orbit_tiler_spherical() {
    for (k, l, m) in [(2, 2, 2), (2, 2, 3), (2, 2, 5), (2, 3, 3), (2, 3, 4), (2, 3, 5)] {
        assert!(agreement(k, l, m, 12) >= 1);
    }
}

#[test]
fn closure_matches_orbit_tiler_euclidean() {
    for (k, l, m) in [(3, 3, 3), (2, 4, 4), (2, 3, 6)] {
        assert!(agreement(k, l, m, 12) >= 2);
    }
}

#[test]
fn closure_matches_orbit_tiler_hyperbolic() {
    for (k, l, m) in [(2, 3, 7), (2, 3, 8), (2, 4, 5), (2, 4, 6), (3, 3, 4), (2, 5, 5)] {
        assert!(agreement(k, l, m, 12) >= 1);
    }
}

#[test]
fn euclidean_counts() {
    // Equilateral triangles of side 1, 2, 3.
    let d = enumerate_triangle_decompositions(&Triangle2D::coxeter(3, 3, 3), None, 12);
    let tiles: Vec<usize> = d.iter().map(|x| x.tiles).collect();
    assert_eq!(tiles, vec![1, 4, 9]);
}

#[test]
fn fundamental_target_is_single_tile() {
    for (k, l, m) in [(2, 3, 7), (2, 3, 5), (2, 4, 5)] {
        let f = Triangle2D::coxeter(k, l, m);
        let d = enumerate_triangle_decompositions(&f, Some(&f), 12);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].tiles, 1);
    }
    // Euclidean targets are fixed only up to similarity.
    let f = Triangle2D::coxeter(3, 3, 3);
    let d = enumerate_triangle_decompositions(&f, Some(&f), 12);
    assert_eq!(d.iter().map(|x| x.tiles).collect::<Vec<_>>(), vec![1, 4, 9]);
}

#[test]
fn octant_with_fundamental_corners() {
    // Spherical triangles whose corners are all single tile angles, tiled
    // by at least two copies of some spherical Coxeter triangle.
    let octant = Triangle2D::new([Ratio::new(1, 2); 3]);
    let mut found = Vec::new();
    let mut funds = vec![(2, 3, 3), (2, 3, 4), (2, 3, 5)];
    funds.extend((2..=6).map(|n| (2, 2, n)));
    for (k, l, m) in funds {
        for d in enumerate_triangle_decompositions(&Triangle2D::coxeter(k, l, m), None, 20) {
            if d.tiles >= 2 && d.corners.iter().all(|c| c.0 == 1) {
                found.push(((k, l, m), d));
            }
        }
    }
    assert_eq!(found.len(), 1);
    let ((k, l, m), d) = &found[0];
    assert_eq!((*k, *l, *m), (2, 3, 5));
    assert!(d.decomposes(&octant));
    assert_eq!(d.tiles, 15);
    assert_eq!(d.edge_splits, [3, 3, 3]);
}

#[test]
fn icosahedral_link_rays() {
    // Vertex 3 of the (5,3,4) simplex has link labels (5,2,3).
    let t = CoxeterTetrahedron::linear(5, 3, 4);
    for face in 0..3 {
        let arcs = plane_tiling_arcs(&t, face, 3);
        assert_eq!(plane_tiling_rays(&t, face, 3), 12);
        let total: f64 = arcs.iter().sum();
        assert!((total - std::f64::consts::TAU).abs() < 1e-9);
        // Some three consecutive arcs make a right angle: one side of the
        // octant pattern.
        let n = arcs.len();
        assert!((0..n).any(|i| (arcs[i] + arcs[(i + 1) % n] + arcs[(i + 2) % n] - std::f64::consts::FRAC_PI_2).abs() < 1e-9));
    }
}

#[test]
fn base_patterns_respect_split_bound() {
    let f = Triangle2D::coxeter(2, 3, 8);
    let pats = base_patterns_for_prism(&f, 16);
    assert!(pats.iter().any(|p| p.tiles == 1));
    assert!(pats.iter().all(|p| p.edge_splits.iter().all(|&s| s <= 2)));
    let all = enumerate_triangle_decompositions(&f, None, 16);
    assert!(all.iter().any(|p| p.edge_splits.iter().any(|&s| s > 2)));
}
