//! Decompositions of a triangular prism into copies of a Coxeter prism.
//!
//! A scheme is a base pattern (a Coxeter decomposition of a triangle by the
//! base triangle of the tile, every side cut in at most two pieces) used on
//! both bases, together with the choice of a horizontal mirror. The base
//! triangle of the tile has vertices `V0, V1, V2` at `A1, A2, A3`; its side
//! `s_t` (opposite `V_t`) lies on prism face `2 + (t + 1) % 3`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angle::AngleFraction;
use crate::kernel::prism::{andreev_prefilter_prism, realize_prism_fractions};
use crate::links::{base_patterns_for_prism, Triangle2D, TriangleDecomposition};
use crate::model::{Decoration, ShapeKind};

/// Denominators tried for free dihedral angles `π/m`.
pub const ANGLE_GRID: [u32; 8] = [2, 3, 4, 5, 6, 8, 10, 12];

/// Tile bound for base patterns.
pub const BASE_PATTERN_TILES: usize = 8;

/// Prism angle slot of the lateral edge through `V_i`.
pub fn lateral_slot(i: usize) -> usize {
    [1, 2, 0][i]
}

/// Prism angle slots of the edges where side `s_t` meets base 0 and base 1.
pub fn base_slots(t: usize) -> (usize, usize) {
    [(4, 7), (5, 8), (3, 6)][t]
}

/// Combinatorial type of a base pattern: tile count, sorted side splits and
/// sorted corner part counts.
pub type PatternType = (usize, [u32; 3], [u32; 3]);

/// A feasible decomposition family of a prism into Coxeter prisms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrismScheme {
    pub base_tiles: usize,
    pub edge_splits: [u32; 3],
    pub corner_parts: [u32; 3],
    /// Segments on each side of the decomposed base, in side order.
    pub side_splits: [u32; 3],
    /// Whether the sides carry a horizontal mirror line.
    pub horizontal: bool,
    /// Number of tiles.
    pub tiles: usize,
    /// Labels of the base triangle of the witness tile.
    pub triangle: [u32; 3],
    /// Side types along each side of the decomposed base.
    pub side_types: [Vec<u8>; 3],
    pub interior_types: Vec<u8>,
    /// Slots forced to a right angle by the scheme.
    pub forced_right: Vec<usize>,
    /// Groups of slots whose angles must agree.
    pub equal_slots: Vec<Vec<usize>>,
    /// Witness tile record, in slot order.
    pub tile: String,
    /// Record of the decomposed prism for the witness.
    pub record: String,
}

impl PrismScheme {
    pub fn pattern_type(&self) -> PatternType {
        (self.base_tiles, self.edge_splits, self.corner_parts)
    }
}

/// Face angle of the base triangle at a vertex whose base edges make
/// dihedral angles `a`, `b` and whose lateral edge makes `g`.
pub fn base_face_angle(a: f64, b: f64, g: f64) -> f64 {
    ((g.cos() + a.cos() * b.cos()) / (a.sin() * b.sin())).clamp(-1.0, 1.0).acos()
}

/// Lateral angle `g` making [`base_face_angle`] equal to `face`, if it is
/// `π/m` for some `m` on the grid.
fn lateral_for(face: f64, a: f64, b: f64) -> Option<u32> {
    let c = face.cos() * a.sin() * b.sin() - a.cos() * b.cos();
    ANGLE_GRID
        .iter()
        .copied()
        .find(|&m| ((PI / m as f64).cos() - c).abs() < 1e-9)
}

struct Constraints {
    /// Base-0 and base-1 angle class of each side type; `None` means right.
    classes: [[Option<usize>; 2]; 3],
    /// Class of the lateral angle at each tile vertex whose base face angle
    /// is not fixed by the pattern.
    lateral: [Option<usize>; 3],
    n_classes: usize,
}

/// Tile vertices occurring only at corners of the decomposed triangle.
fn free_vertices(d: &TriangleDecomposition) -> [bool; 3] {
    std::array::from_fn(|i| {
        let at_corners: u32 = (0..3)
            .filter(|&c| d.corner_vertices[c] as usize == i)
            .map(|c| d.corners[c].0)
            .sum();
        at_corners as usize == d.tiles
    })
}

/// Angle classes of the tile. On a face of the decomposed prism, interior
/// side types meet the base at a right angle and side types along one side
/// share their angle. A horizontal mirror lies on base 1, which is then
/// right everywhere.
fn constraints(d: &TriangleDecomposition, horizontal: bool) -> Constraints {
    let mut classes = [[None; 2]; 3];
    let mut n = 0;
    let interior = |t: &u8| d.interior_types.contains(t);
    for base in 0..2 {
        if base == 1 && horizontal {
            continue;
        }
        for t in 0..3u8 {
            if interior(&t) || classes[t as usize][base].is_some() {
                continue;
            }
            let mut group = vec![t];
            for s in d.side_types.iter().filter(|s| s.contains(&t)) {
                group.extend(s.iter().copied());
            }
            if group.iter().any(interior) {
                continue;
            }
            for p in group {
                classes[p as usize][base] = Some(n);
            }
            n += 1;
        }
    }
    let mut lateral = [None; 3];
    for (i, free) in free_vertices(d).into_iter().enumerate() {
        if free {
            lateral[i] = Some(n);
            n += 1;
        }
    }
    Constraints {
        classes,
        lateral,
        n_classes: n,
    }
}

fn fraction(m: u32) -> AngleFraction {
    AngleFraction::fundamental(m)
}

/// Tile angles for one choice of class denominators, if every base face
/// angle fixed by the pattern comes out as in the triangle `labels`.
fn tile_angles(labels: [u32; 3], c: &Constraints, choice: &[u32]) -> Option<[AngleFraction; 9]> {
    let base = |t: usize, b: usize| c.classes[t][b].map_or(2, |k| choice[k]);
    let mut angles = [fraction(2); 9];
    for t in 0..3 {
        let (s0, s1) = base_slots(t);
        angles[s0] = fraction(base(t, 0));
        angles[s1] = fraction(base(t, 1));
    }
    let ang = |m: u32| PI / m as f64;
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let g = match c.lateral[i] {
            Some(class) => choice[class],
            None => {
                let face = ang(labels[i]);
                let g0 = lateral_for(face, ang(base(j, 0)), ang(base(k, 0)))?;
                let g1 = lateral_for(face, ang(base(j, 1)), ang(base(k, 1)))?;
                if g0 != g1 {
                    return None;
                }
                g0
            }
        };
        angles[lateral_slot(i)] = fraction(g);
    }
    Some(angles)
}

fn grid_choices(n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                ANGLE_GRID.iter().map(move |&m| {
                    let mut w = v.clone();
                    w.push(m);
                    w
                })
            })
            .collect();
    }
    out
}

/// Record of the decomposed prism: lateral edges collect the corner parts,
/// base edges inherit the tile's boundary angles.
fn decomposed_record(d: &TriangleDecomposition, tile: &[AngleFraction; 9], horizontal: bool) -> String {
    let angles = decomposed_angles(d, tile, horizontal).expect("witness angles compose");
    Decoration::new(ShapeKind::TriangularPrism, angles.to_vec())
        .expect("nine angles")
        .canonical_record()
}

/// Angles of the prism tiled by copies of `tile`, in slot order.
fn decomposed_angles(d: &TriangleDecomposition, tile: &[AngleFraction; 9], horizontal: bool) -> Option<[AngleFraction; 9]> {
    let mut angles = [fraction(2); 9];
    for c in 0..3 {
        let v = d.corner_vertices[c] as usize;
        let g = tile[lateral_slot(v)];
        angles[lateral_slot(c)] = AngleFraction::new(d.corners[c].0 * g.parts(), g.denom()).ok()?;
    }
    for s in 0..3 {
        let t = d.side_types[s][0] as usize;
        let (p0, p1) = base_slots(s);
        let (t0, t1) = base_slots(t);
        angles[p0] = tile[t0];
        angles[p1] = if horizontal { tile[t0] } else { tile[t1] };
    }
    Some(angles)
}

fn tile_record(tile: &[AngleFraction; 9]) -> String {
    Decoration::new(ShapeKind::TriangularPrism, tile.to_vec())
        .expect("nine angles")
        .record()
}

/// First grid assignment realizing the scheme `(d, horizontal)` on the
/// base triangle with `labels`.
fn witness(d: &TriangleDecomposition, labels: [u32; 3], horizontal: bool) -> Option<([AngleFraction; 9], Constraints)> {
    let c = constraints(d, horizontal);
    let angles = grid_choices(c.n_classes).into_par_iter().find_map_first(|choice| {
        let angles = tile_angles(labels, &c, &choice)?;
        let whole = decomposed_angles(d, &angles, horizontal)?;
        let ok = [angles, whole]
            .iter()
            .all(|a| andreev_prefilter_prism(a) && realize_prism_fractions(a).is_ok());
        ok.then_some(angles)
    })?;
    Some((angles, c))
}

fn scheme(d: &TriangleDecomposition, labels: [u32; 3], horizontal: bool, tile: [AngleFraction; 9], c: &Constraints) -> PrismScheme {
    let (_, edge_splits, corner_parts) = d.pattern_type();
    let mut forced_right = Vec::new();
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for t in 0..3 {
        let (s0, s1) = base_slots(t);
        for (b, s) in [(0, s0), (1, s1)] {
            match c.classes[t][b] {
                None => forced_right.push(s),
                Some(k) => groups.entry(k).or_default().push(s),
            }
        }
    }
    forced_right.sort();
    PrismScheme {
        base_tiles: d.tiles,
        edge_splits,
        corner_parts,
        side_splits: d.edge_splits,
        horizontal,
        tiles: d.tiles * if horizontal { 2 } else { 1 },
        triangle: labels,
        side_types: d.side_types.clone(),
        interior_types: d.interior_types.clone(),
        forced_right,
        equal_slots: groups.into_values().filter(|g| g.len() > 1).collect(),
        tile: tile_record(&tile),
        record: decomposed_record(d, &tile, horizontal),
    }
}

/// Hyperbolic Coxeter triangles with labels on the grid, `a <= b <= c`.
pub fn grid_triangles() -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for (i, &a) in ANGLE_GRID.iter().enumerate() {
        for (j, &b) in ANGLE_GRID.iter().enumerate().skip(i) {
            for &c in ANGLE_GRID.iter().skip(j) {
                if a * b + b * c + c * a < a * b * c {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

/// All feasible schemes, one per (pattern type, horizontal) pair. The
/// trivial pattern only counts with a horizontal mirror. Patterns are searched on every grid triangle
/// up to `max_base_tiles` tiles.
pub fn enumerate_prisms_into_prisms(max_base_tiles: usize) -> Vec<PrismScheme> {
    let mut found: BTreeMap<(PatternType, bool), PrismScheme> = BTreeMap::new();
    for labels in grid_triangles() {
        let f = Triangle2D::coxeter(labels[0], labels[1], labels[2]);
        for d in base_patterns_for_prism(&f, max_base_tiles) {
            for horizontal in [false, true] {
                if d.tiles == 1 && !horizontal {
                    continue;
                }
                let key = (d.pattern_type(), horizontal);
                if found.contains_key(&key) {
                    continue;
                }
                if let Some((tile, c)) = witness(&d, labels, horizontal) {
                    found.insert(key, scheme(&d, labels, horizontal, tile, &c));
                }
            }
        }
    }
    found.into_values().collect()
}

/// Base pattern types occurring on the grid, each with a witness triangle.
pub fn base_pattern_types(max_base_tiles: usize) -> BTreeMap<PatternType, ([u32; 3], TriangleDecomposition)> {
    let mut out = BTreeMap::new();
    for labels in grid_triangles() {
        let f = Triangle2D::coxeter(labels[0], labels[1], labels[2]);
        for d in base_patterns_for_prism(&f, max_base_tiles) {
            out.entry(d.pattern_type()).or_insert((labels, d));
        }
    }
    out
}
