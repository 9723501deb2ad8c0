//! Convex unions of chambers in the reflection tessellation of a Coxeter
//! triangle, and the triangles among them.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::plane::{self, Geometry, Triangle2D, M3, P3};

const TOL: f64 = 1e-9;
const MAX_WALK: usize = 100_000;

/// Reflection tessellation generated by a Coxeter triangle. Chamber `w` is
/// the image of the fundamental chamber under `s_w0 s_w1 …`.
#[derive(Clone, Debug)]
pub struct Tessellation {
    pub geometry: Geometry,
    pub fundamental: Triangle2D,
    pub labels: [u32; 3],
    pub vertices: [P3; 3],
    pub sides: [P3; 3],
    pub reflections: [M3; 3],
    pub center: P3,
}

impl Tessellation {
    /// Panics unless every angle is `π/m`.
    pub fn new(fundamental: Triangle2D) -> Self {
        assert!(
            fundamental.angles.iter().all(|a| *a.numer() == 1),
            "fundamental triangle must be a Coxeter triangle"
        );
        let placed = fundamental.place();
        let g = placed.geometry;
        let center = g
            .normalize_point(&plane::add(
                &plane::add(&placed.vertices[0], &placed.vertices[1]),
                &placed.vertices[2],
            ))
            .expect("centroid");
        Self {
            geometry: g,
            fundamental,
            labels: fundamental.angles.map(|a| *a.denom() as u32),
            vertices: placed.vertices,
            sides: placed.sides,
            reflections: placed.sides.map(|s| g.reflection(&s)),
            center,
        }
    }

    pub fn coxeter(k: u32, l: u32, m: u32) -> Self {
        Self::new(Triangle2D::coxeter(k, l, m))
    }

    pub fn word_for(&self, x: &P3) -> Option<Vec<u8>> {
        let mut x = *x;
        let mut word = Vec::new();
        for _ in 0..MAX_WALK {
            match (0..3).find(|&i| plane::rel_side(&self.sides[i], &x) > TOL) {
                None => return Some(word),
                Some(i) => {
                    x = plane::apply(&self.reflections[i], &x);
                    word.push(i as u8);
                }
            }
        }
        None
    }

    pub fn matrix_for(&self, word: &[u8]) -> M3 {
        word.iter()
            .fold(plane::identity(), |m, &i| plane::compose(&m, &self.reflections[i as usize]))
    }

    pub fn inverse_for(&self, word: &[u8]) -> M3 {
        word.iter()
            .rev()
            .fold(plane::identity(), |m, &i| plane::compose(&m, &self.reflections[i as usize]))
    }

    pub fn chamber_vertices(&self, word: &[u8]) -> [P3; 3] {
        let m = self.matrix_for(word);
        self.vertices.map(|v| plane::apply(&m, &v))
    }

    pub fn chamber_sides(&self, word: &[u8]) -> [P3; 3] {
        let inv = self.inverse_for(word);
        self.sides.map(|s| plane::map_line(&inv, &s))
    }

    pub fn chamber_center(&self, word: &[u8]) -> P3 {
        plane::apply(&self.matrix_for(word), &self.center)
    }

    /// Isometries fixing the fundamental chamber (one per angle-preserving
    /// vertex permutation).
    pub fn symmetries(&self) -> Vec<M3> {
        let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let src = columns(&self.vertices);
        let src_inv = plane::inverse(&src).expect("independent vertices");
        perms
            .iter()
            .filter(|p| (0..3).all(|i| self.labels[p[i]] == self.labels[i]))
            .map(|p| {
                let dst = columns(&[self.vertices[p[0]], self.vertices[p[1]], self.vertices[p[2]]]);
                plane::compose(&dst, &src_inv)
            })
            .filter(|m| self.geometry.isometry_defect(m) < 1e-9)
            .collect()
    }

    /// Whether `g` maps the tessellation onto itself.
    fn preserves(&self, g: &M3) -> bool {
        let image: Vec<P3> = self.vertices.iter().map(|v| plane::apply(g, v)).collect();
        let c = plane::apply(g, &self.center);
        let Some(w) = self.word_for(&c) else {
            return false;
        };
        let target = self.chamber_vertices(&w);
        (0..3).all(|i| {
            let j = (0..3).find(|&j| self.labels[j] == self.labels[i] && plane::close(&target[j], &image[i]));
            j.is_some()
        })
    }
}

fn columns(v: &[P3; 3]) -> M3 {
    let mut m = [[0.0; 3]; 3];
    for (j, c) in v.iter().enumerate() {
        for i in 0..3 {
            m[i][j] = c[i];
        }
    }
    m
}

/// A boundary segment of a piece.
#[derive(Clone, Debug)]
pub struct Edge {
    pub line: P3,
    pub ends: [usize; 2],
}

/// A convex polygon that is a union of chambers.
#[derive(Clone, Debug)]
pub struct Piece {
    /// Chamber words, sorted.
    pub words: Vec<Vec<u8>>,
    pub vertices: Vec<P3>,
    pub edges: Vec<Edge>,
    /// `(parts, label)` at each vertex: the angle is `parts·π/label`.
    pub corners: Vec<(u32, u32)>,
}

impl Piece {
    pub fn tiles(&self) -> usize {
        self.words.len()
    }

    pub fn fundamental(tess: &Tessellation) -> Self {
        Self::build(tess, vec![Vec::new()], tess.sides.to_vec()).expect("fundamental chamber")
    }

    /// Polygon from its chamber set and a superset of its boundary lines.
    fn build(tess: &Tessellation, mut words: Vec<Vec<u8>>, lines: Vec<P3>) -> Option<Self> {
        let g = tess.geometry;
        let inside = |x: &P3| lines.iter().all(|l| plane::rel_side(l, x) <= plane::CLOSE);
        let mut vertices: Vec<P3> = Vec::new();
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let Some(x) = g.meet(&lines[i], &lines[j]) else {
                    continue;
                };
                let cands = if g == Geometry::Spherical {
                    vec![x, plane::scale(&x, -1.0)]
                } else {
                    vec![x]
                };
                for x in cands {
                    if inside(&x) && !vertices.iter().any(|v| plane::close(v, &x)) {
                        vertices.push(x);
                    }
                }
            }
        }
        let mut edges = Vec::new();
        for l in &lines {
            let on: Vec<usize> = (0..vertices.len())
                .filter(|&v| plane::incident(l, &vertices[v]))
                .collect();
            match on.len() {
                0 | 1 => {}
                2 => edges.push(Edge {
                    line: *l,
                    ends: [on[0], on[1]],
                }),
                _ => return None,
            }
        }
        if vertices.len() < 3 || edges.len() != vertices.len() {
            return None;
        }
        let chamber_vertices: Vec<[P3; 3]> = words.iter().map(|w| tess.chamber_vertices(w)).collect();
        let mut corners = Vec::with_capacity(vertices.len());
        for v in &vertices {
            let mut parts = 0;
            let mut label = 0;
            for cv in &chamber_vertices {
                if let Some(i) = (0..3).find(|&i| plane::close(&cv[i], v)) {
                    parts += 1;
                    label = tess.labels[i];
                }
            }
            if parts == 0 {
                return None;
            }
            corners.push((parts, label));
        }
        words.sort();
        Some(Self {
            words,
            vertices,
            edges,
            corners,
        })
    }

    /// Chamber centers in global coordinates.
    pub fn centers(&self, tess: &Tessellation) -> Vec<P3> {
        self.words.iter().map(|w| tess.chamber_center(w)).collect()
    }

    /// Moves the piece by a tessellation automorphism.
    fn transformed(&self, tess: &Tessellation, g: &M3) -> Option<Self> {
        let g_inv = plane::inverse(g)?;
        let mut words = self
            .centers(tess)
            .iter()
            .map(|c| tess.word_for(&plane::apply(g, c)))
            .collect::<Option<Vec<_>>>()?;
        words.sort();
        Some(Self {
            words,
            vertices: self.vertices.iter().map(|v| plane::apply(g, v)).collect(),
            edges: self
                .edges
                .iter()
                .map(|e| {
                    let line = tess.geometry.normalize_line(&plane::map_line(&g_inv, &e.line))?;
                    Some(Edge { line, ends: e.ends })
                })
                .collect::<Option<_>>()?,
            corners: self.corners.clone(),
        })
    }
}

/// Invariant of a piece under tessellation automorphisms: the lexicographically
/// least sorted word list over all re-anchorings.
pub type PieceKey = Vec<Vec<u8>>;

fn anchors(tess: &Tessellation, piece: &Piece) -> Vec<M3> {
    let syms = tess.symmetries();
    let mut out = Vec::new();
    for w in &piece.words {
        let h_inv = tess.inverse_for(w);
        for s in &syms {
            let s_inv = plane::inverse(s).expect("isometry");
            out.push(plane::compose(&s_inv, &h_inv));
        }
    }
    out
}

pub fn piece_key(tess: &Tessellation, piece: &Piece) -> (PieceKey, M3) {
    let centers = piece.centers(tess);
    let mut best: Option<(PieceKey, M3)> = None;
    for t in anchors(tess, piece) {
        let mut words: Vec<Vec<u8>> = centers
            .iter()
            .map(|c| tess.word_for(&plane::apply(&t, c)).expect("chamber center"))
            .collect();
        words.sort();
        if best.as_ref().is_none_or(|(b, _)| words < *b) {
            best = Some((words, t));
        }
    }
    best.expect("nonempty piece")
}

/// Glues `b` onto edge `ea` of `a` along its edge `eb`. With `flip` the
/// endpoint matching is reversed.
pub fn glue(tess: &Tessellation, a: &Piece, ea: usize, b: &Piece, eb: usize, flip: bool) -> Option<Piece> {
    let g = tess.geometry;
    let ea_ = &a.edges[ea];
    let eb_ = &b.edges[eb];
    let (pa, qa) = (ea_.ends[0], ea_.ends[1]);
    let (pb, qb) = if flip {
        (eb_.ends[1], eb_.ends[0])
    } else {
        (eb_.ends[0], eb_.ends[1])
    };
    // Corner sums at the two ends must not exceed π.
    for (ca, cb) in [(a.corners[pa], b.corners[pb]), (a.corners[qa], b.corners[qb])] {
        if ca.1 != cb.1 || ca.0 + cb.0 > ca.1 {
            return None;
        }
    }
    let la = g.distance(&a.vertices[pa], &a.vertices[qa]);
    let lb = g.distance(&b.vertices[pb], &b.vertices[qb]);
    if (la - lb).abs() > 1e-8 {
        return None;
    }
    let src = columns(&[b.vertices[pb], b.vertices[qb], g.k_of(&eb_.line)]);
    let dst = columns(&[a.vertices[pa], a.vertices[qa], plane::scale(&g.k_of(&ea_.line), -1.0)]);
    let m = plane::compose(&dst, &plane::inverse(&src)?);
    if g.isometry_defect(&m) > 1e-8 || !tess.preserves(&m) {
        return None;
    }
    let moved = b.transformed(tess, &m)?;
    let existing: HashSet<&Vec<u8>> = a.words.iter().collect();
    if moved.words.iter().any(|w| existing.contains(w)) {
        return None;
    }
    let glued_a = ea_.line;
    let glued_b = plane::scale(&glued_a, -1.0);
    let mut lines: Vec<P3> = Vec::new();
    for e in a.edges.iter().chain(moved.edges.iter()) {
        let l = e.line;
        if plane::close(&l, &glued_a) || plane::close(&l, &glued_b) {
            continue;
        }
        if !lines.iter().any(|x| plane::close(x, &l)) {
            lines.push(l);
        }
    }
    let convex = a
        .vertices
        .iter()
        .chain(moved.vertices.iter())
        .all(|v| lines.iter().all(|l| plane::rel_side(l, v) <= plane::CLOSE));
    if !convex {
        return None;
    }
    let words = a.words.iter().chain(moved.words.iter()).cloned().collect();
    Piece::build(tess, words, lines)
}

/// All convex unions of at most `max_tiles` chambers up to automorphism,
/// built by repeatedly gluing two known pieces along a common edge.
pub fn convex_closure(tess: &Tessellation, max_tiles: usize) -> Vec<Piece> {
    let seed = Piece::fundamental(tess);
    let (key, _) = piece_key(tess, &seed);
    let mut items = vec![seed];
    let mut seen: HashSet<PieceKey> = HashSet::from([key]);
    let mut i = 0;
    while i < items.len() {
        let a = items[i].clone();
        let found: Vec<Piece> = (0..=i)
            .into_par_iter()
            .flat_map_iter(|j| {
                let b = &items[j];
                let mut out = Vec::new();
                if a.tiles() + b.tiles() > max_tiles {
                    return out;
                }
                for ea in 0..a.edges.len() {
                    for eb in 0..b.edges.len() {
                        for flip in [false, true] {
                            if let Some(p) = glue(tess, &a, ea, b, eb, flip) {
                                out.push(p);
                            }
                        }
                    }
                }
                out
            })
            .collect();
        for p in found {
            let (key, t) = piece_key(tess, &p);
            if seen.insert(key) {
                items.push(p.transformed(tess, &t).expect("automorphism image"));
            }
        }
        i += 1;
    }
    items
}

/// A Coxeter decomposition of a triangle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangleDecomposition {
    pub tiles: usize,
    /// `(parts, label)` at each corner; corner `i` is opposite side `i`.
    pub corners: [(u32, u32); 3],
    /// Index of the tile vertex sitting at each corner.
    pub corner_vertices: [u8; 3],
    /// Number of segments each side is cut into.
    pub edge_splits: [u32; 3],
    /// Fundamental side types (indices into the tile's sides) along each side.
    pub side_types: [Vec<u8>; 3],
    /// Side types occurring on interior segments.
    pub interior_types: Vec<u8>,
    pub key: PieceKey,
}

impl TriangleDecomposition {
    pub fn from_piece(tess: &Tessellation, piece: &Piece) -> Option<Self> {
        if piece.vertices.len() != 3 {
            return None;
        }
        let (key, _) = piece_key(tess, piece);
        // Side i of the triangle is the edge not containing vertex i.
        let side_of = |i: usize| piece.edges.iter().find(|e| !e.ends.contains(&i)).expect("triangle");
        let sides: [&Edge; 3] = std::array::from_fn(side_of);
        let mut all_vertices: Vec<P3> = Vec::new();
        let mut side_types: [Vec<u8>; 3] = Default::default();
        let mut interior: Vec<u8> = Vec::new();
        for w in &piece.words {
            let cv = tess.chamber_vertices(w);
            for v in cv {
                if !all_vertices.iter().any(|x| plane::close(x, &v)) {
                    all_vertices.push(v);
                }
            }
            for t in 0..3u8 {
                let a = cv[(t as usize + 1) % 3];
                let b = cv[(t as usize + 2) % 3];
                match (0..3).find(|&s| {
                    plane::incident(&sides[s].line, &a) && plane::incident(&sides[s].line, &b)
                }) {
                    Some(s) => {
                        if !side_types[s].contains(&t) {
                            side_types[s].push(t);
                        }
                    }
                    None => {
                        if !interior.contains(&t) {
                            interior.push(t);
                        }
                    }
                }
            }
        }
        side_types.iter_mut().for_each(|s| s.sort());
        interior.sort();
        let edge_splits = std::array::from_fn(|s| {
            let on = all_vertices
                .iter()
                .filter(|v| plane::incident(&sides[s].line, v))
                .count();
            (on - 1) as u32
        });
        let corner_vertices = std::array::from_fn(|c| {
            piece
                .words
                .iter()
                .find_map(|w| {
                    let cv = tess.chamber_vertices(w);
                    (0..3u8).find(|&i| plane::close(&cv[i as usize], &piece.vertices[c]))
                })
                .expect("every corner is a tile vertex")
        });
        Some(Self {
            tiles: piece.tiles(),
            corners: [piece.corners[0], piece.corners[1], piece.corners[2]],
            corner_vertices,
            edge_splits,
            side_types,
            interior_types: interior,
            key,
        })
    }

    /// Corner angles in units of π, as reduced rationals.
    pub fn angles(&self) -> [num_rational::Ratio<i64>; 3] {
        self.corners
            .map(|(p, q)| num_rational::Ratio::new(p as i64, q as i64))
    }

    /// Whether this is a decomposition of `target` (angles as a multiset).
    pub fn decomposes(&self, target: &Triangle2D) -> bool {
        let mut a = self.angles().to_vec();
        let mut b = target.angles.to_vec();
        a.sort();
        b.sort();
        a == b
    }

    /// Combinatorial type: tile count, sorted side splits, sorted corner parts.
    pub fn pattern_type(&self) -> (usize, [u32; 3], [u32; 3]) {
        let mut s = self.edge_splits;
        s.sort();
        let mut c = self.corners.map(|c| c.0);
        c.sort();
        (self.tiles, s, c)
    }
}

/// Triangle decompositions by `fund` with at most `max_tiles` tiles, each
/// listed once up to isometry; restricted to decompositions of `target` when
/// given.
pub fn enumerate_triangle_decompositions(
    fund: &Triangle2D,
    target: Option<&Triangle2D>,
    max_tiles: usize,
) -> Vec<TriangleDecomposition> {
    let tess = Tessellation::new(*fund);
    let mut out: Vec<TriangleDecomposition> = convex_closure(&tess, max_tiles)
        .iter()
        .filter_map(|p| TriangleDecomposition::from_piece(&tess, p))
        .filter(|d| target.is_none_or(|t| d.decomposes(t)))
        .collect();
    out.sort_by(|a, b| (a.tiles, &a.key).cmp(&(b.tiles, &b.key)));
    out
}

/// Independent enumeration: every triangle bounded by three walls of the
/// tessellation containing the fundamental chamber, found by breadth-first
/// search over chambers and wall triples.
pub fn orbit_triangle_keys(tess: &Tessellation, max_tiles: usize) -> Vec<PieceKey> {
    let g = tess.geometry;
    let depth = max_tiles.saturating_sub(1);
    let mut seen: HashSet<Vec<u8>> = HashSet::from([Vec::new()]);
    let mut queue = VecDeque::from([(Vec::<u8>::new(), 0usize)]);
    let mut walls: Vec<P3> = Vec::new();
    let c0 = tess.center;
    while let Some((w, d)) = queue.pop_front() {
        for s in tess.chamber_sides(&w) {
            let l = if plane::dot(&s, &c0) > 0.0 { plane::scale(&s, -1.0) } else { s };
            if !walls.iter().any(|x| plane::close(x, &l)) {
                walls.push(l);
            }
        }
        if d == depth {
            continue;
        }
        for i in 0..3u8 {
            let mut nw = w.clone();
            nw.push(i);
            let c = tess.chamber_center(&nw);
            let key = tess.word_for(&c).expect("chamber");
            if seen.insert(key.clone()) {
                queue.push_back((key, d + 1));
            }
        }
    }
    let area = |l: [&P3; 3], v: &[P3; 3]| -> f64 {
        match g {
            Geometry::Euclidean => {
                let (a, b, c) = (v[0], v[1], v[2]);
                0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])).abs()
            }
            _ => {
                let s = g.angle(l[0], l[1]) + g.angle(l[1], l[2]) + g.angle(l[0], l[2]);
                (s - std::f64::consts::PI).abs()
            }
        }
    };
    let fund_area = area([&tess.sides[0], &tess.sides[1], &tess.sides[2]], &tess.vertices);
    let n = walls.len();
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).flat_map(move |j| (j + 1..n).map(move |k| (i, j, k))))
        .collect();
    let mut keys: Vec<PieceKey> = triples
        .par_iter()
        .filter_map(|&(i, j, k)| {
            let l = [walls[i], walls[j], walls[k]];
            let mut v = [[0.0; 3]; 3];
            for (c, (x, y, z)) in [(1, 2, 0), (0, 2, 1), (0, 1, 2)].into_iter().enumerate() {
                let p = g.meet(&l[x], &l[y])?;
                let p = if plane::dot(&l[z], &p) < 0.0 { p } else { plane::scale(&p, -1.0) };
                if plane::rel_side(&l[z], &p) > -plane::CLOSE {
                    return None;
                }
                if g != Geometry::Spherical && g.normalize_point(&p).is_none() {
                    return None;
                }
                v[c] = p;
            }
            let est = area([&l[0], &l[1], &l[2]], &v) / fund_area;
            if est.round() as usize > max_tiles || est < 0.5 {
                return None;
            }
            let words = chambers_inside(tess, &l, max_tiles)?;
            let piece = Piece::build(tess, words, l.to_vec())?;
            Some(piece_key(tess, &piece).0)
        })
        .collect();
    keys.sort();
    keys.dedup();
    keys
}

/// Chambers inside the region bounded by `lines`, by flood fill from the
/// fundamental chamber; `None` beyond `limit` chambers.
fn chambers_inside(tess: &Tessellation, lines: &[P3], limit: usize) -> Option<Vec<Vec<u8>>> {
    let inside = |c: &P3| lines.iter().all(|l| plane::dot(l, c) < 0.0);
    let mut seen: HashSet<Vec<u8>> = HashSet::from([Vec::new()]);
    let mut queue = VecDeque::from([Vec::<u8>::new()]);
    while let Some(w) = queue.pop_front() {
        for i in 0..3u8 {
            let mut nw = w.clone();
            nw.push(i);
            let c = tess.chamber_center(&nw);
            if !inside(&c) {
                continue;
            }
            let key = tess.word_for(&c)?;
            if seen.insert(key.clone()) {
                if seen.len() > limit {
                    return None;
                }
                queue.push_back(key);
            }
        }
    }
    Some(seen.into_iter().collect())
}

/// Triangle keys found by [`convex_closure`], for comparison with
/// [`orbit_triangle_keys`].
pub fn closure_triangle_keys(tess: &Tessellation, max_tiles: usize) -> Vec<PieceKey> {
    let mut keys: Vec<PieceKey> = convex_closure(tess, max_tiles)
        .iter()
        .filter(|p| p.vertices.len() == 3)
        .map(|p| piece_key(tess, p).0)
        .collect();
    keys.sort();
    keys
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_piece() {
        let t = Tessellation::coxeter(2, 3, 7);
        let p = Piece::fundamental(&t);
        assert_eq!(p.tiles(), 1);
        assert_eq!(p.vertices.len(), 3);
        let mut c = p.corners.clone();
        c.sort();
        assert_eq!(c, vec![(1, 2), (1, 3), (1, 7)]);
    }

    #[test]
    fn two_tile_glue() {
        let t = Tessellation::coxeter(2, 3, 7);
        let p = Piece::fundamental(&t);
        let mut shapes = Vec::new();
        for ea in 0..3 {
            for eb in 0..3 {
                for flip in [false, true] {
                    if let Some(q) = glue(&t, &p, ea, &p, eb, flip) {
                        shapes.push((q.vertices.len(), q.tiles()));
                    }
                }
            }
        }
        assert!(shapes.iter().all(|s| s.1 == 2));
        // Reflecting across the side opposite the π/2 corner gives a kite; the
        // other two reflections give triangles.
        assert!(shapes.contains(&(3, 2)));
        assert!(shapes.contains(&(4, 2)));
    }

    #[test]
    fn triangle_identity() {
        let f = Triangle2D::coxeter(2, 3, 7);
        let d = enumerate_triangle_decompositions(&f, Some(&f), 4);
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].tiles, 1);
        assert_eq!(d[0].edge_splits, [1, 1, 1]);
    }
}
