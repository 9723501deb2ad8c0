//! Polyhedra realized as convex unions of chambers of the reflection
//! tessellation generated by a compact Coxeter tetrahedron, and the gluing
//! of two such unions along congruent faces.

use std::collections::HashSet;
use std::f64::consts::PI;
use std::sync::Arc;

use thiserror::Error;

use super::{Decoration, ModelError, ShapeKind};
use crate::angle::{AngleError, AngleFraction, MergeResult};
use crate::kernel::cell::FundamentalCell;
use crate::kernel::hull::{hull_from_planes, Hull};
use crate::kernel::minkowski::{self, Isometry, Vector};
use crate::kernel::tetra::CoxeterTetrahedron;
use crate::kernel::KernelError;

/// Incidence tolerance for assembled pieces.
pub const PIECE_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GlueError {
    #[error("faces are not congruent under the matching")]
    NotCongruent,
    #[error("placement does not preserve the tessellation")]
    Incompatible,
    #[error("pieces overlap")]
    Overlap,
    #[error("union is not convex")]
    NonConvex,
    #[error(transparent)]
    Angle(#[from] AngleError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// How a piece was assembled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GluingTree {
    Leaf,
    Node {
        left: Arc<GluingTree>,
        right: Arc<GluingTree>,
        left_face: usize,
        right_face: usize,
        /// Vertex `j` of the right face (in its cyclic order) goes to
        /// vertex `matching[j]` of the left face.
        matching: Vec<usize>,
    },
}

impl GluingTree {
    pub fn leaves(&self) -> usize {
        match self {
            GluingTree::Leaf => 1,
            GluingTree::Node { left, right, .. } => left.leaves() + right.leaves(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            GluingTree::Leaf => 0,
            GluingTree::Node { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

/// A compact Coxeter tetrahedron together with its tessellation.
#[derive(Clone, Debug)]
pub struct Frame {
    pub tet: CoxeterTetrahedron,
    pub cell: FundamentalCell<f64>,
    /// Isometries of the chamber onto itself.
    pub symmetries: Vec<Isometry<f64>>,
}

impl Frame {
    pub fn new(tet: CoxeterTetrahedron) -> Result<Self, KernelError> {
        let cell = FundamentalCell::new(&tet.realize::<f64>()?);
        let symmetries = tet
            .symmetries()
            .iter()
            .filter_map(|p| cell.symmetry(p))
            .collect();
        Ok(Self { tet, cell, symmetries })
    }

    pub fn word_for(&self, x: &Vector<f64>) -> Option<Vec<u8>> {
        self.cell.word_for(x, 1e-9)
    }

    fn chamber_vertices(&self, m: &Isometry<f64>) -> Vec<Vector<f64>> {
        self.cell.vertices.iter().map(|v| minkowski::apply(m, v)).collect()
    }

    /// Whether `g` maps the fundamental chamber onto some chamber.
    pub fn preserves(&self, g: &Isometry<f64>) -> bool {
        let Some(w) = self.word_for(&minkowski::apply(g, &self.cell.center)) else {
            return false;
        };
        let image = self.chamber_vertices(g);
        let target = self.chamber_vertices(&self.cell.matrix_for(&w));
        image
            .iter()
            .all(|v| target.iter().any(|t| minkowski::max_diff(v, t) < 1e-6))
    }

    /// Label of the tessellation edge through `x`, if `x` lies in the
    /// interior of an edge of the chamber `word`.
    fn edge_label(&self, word: &[u8], x: &Vector<f64>) -> Option<u32> {
        let inv = minkowski::lorentz_inverse(&self.cell.matrix_for(word));
        let y = minkowski::apply(&inv, x);
        if !self.cell.contains(&y, 1e-6) {
            return None;
        }
        let on: Vec<usize> = (0..4)
            .filter(|&i| minkowski::dot(&y, &self.cell.normals[i]).abs() < 1e-6)
            .collect();
        (on.len() == 2).then(|| self.tet.label(on[0], on[1]))
    }
}

/// A quasi-Coxeter polyhedron assembled from chambers, with faces numbered
/// by the canonical convention of its shape.
#[derive(Clone, Debug)]
pub struct Piece {
    pub decoration: Decoration,
    pub record: String,
    /// Chamber words, sorted.
    pub words: Vec<Vec<u8>>,
    /// Outward unit normal of each face.
    pub planes: Vec<Vector<f64>>,
    pub vertices: Vec<Vector<f64>>,
    /// Vertices of each face in cyclic order.
    pub faces: Vec<Vec<usize>>,
    pub tree: Arc<GluingTree>,
}

impl Piece {
    pub fn kind(&self) -> ShapeKind {
        self.decoration.kind
    }

    pub fn tiles(&self) -> usize {
        self.words.len()
    }

    pub fn fundamental(frame: &Frame) -> Self {
        let hull = hull_from_planes(&frame.cell.normals, PIECE_TOL).expect("fundamental tetrahedron");
        Self::from_hull(frame, vec![Vec::new()], &hull, Arc::new(GluingTree::Leaf)).expect("fundamental tetrahedron")
    }

    fn from_hull(frame: &Frame, mut words: Vec<Vec<u8>>, hull: &Hull<f64>, tree: Arc<GluingTree>) -> Result<Self, GlueError> {
        let (kind, labeling) = classify_shape(hull)?;
        let mut angles = Vec::with_capacity(kind.slot_count());
        for (a, b) in kind.slots() {
            let (fa, fb) = (labeling[a], labeling[b]);
            let (v, w) = hull.edge_between(fa, fb).ok_or(ModelError::UnsupportedShape)?;
            // Interior points of a long edge may hit chamber vertices.
            let mut q = None;
            for t in [0.5, 0.381_966, 0.618_034, 0.236_068] {
                let x = minkowski::add(&minkowski::scale(&hull.vertices[v], t), &minkowski::scale(&hull.vertices[w], 1.0 - t));
                let x = minkowski::to_hyperboloid(&x).ok_or(KernelError::DegenerateEdge(v, w))?;
                q = words.iter().find_map(|wd| frame.edge_label(wd, &x));
                if q.is_some() {
                    break;
                }
            }
            let q = q.ok_or(GlueError::Incompatible)?;
            let theta = (-minkowski::dot(&hull.planes[fa], &hull.planes[fb])).clamp(-1.0, 1.0).acos();
            let parts = (theta * q as f64 / PI).round();
            if (theta - parts * PI / q as f64).abs() > 1e-6 {
                return Err(GlueError::Incompatible);
            }
            angles.push(AngleFraction::new(parts as u32, q)?);
        }
        let decoration = Decoration::new(kind, angles)?;
        let (record, sigma) = decoration.canonical();
        let mut inv = vec![0; sigma.len()];
        for (f, &s) in sigma.iter().enumerate() {
            inv[s] = f;
        }
        let order: Vec<usize> = inv.iter().map(|&c| labeling[c]).collect();
        words.sort();
        Ok(Self {
            decoration: decoration.permuted(&sigma),
            record,
            words,
            planes: order.iter().map(|&f| hull.planes[f]).collect(),
            vertices: hull.vertices.clone(),
            faces: order.iter().map(|&f| hull.faces[f].clone()).collect(),
            tree,
        })
    }

    /// The face other than `f` containing vertices `v` and `w`.
    fn neighbour(&self, f: usize, v: usize, w: usize) -> usize {
        (0..self.faces.len())
            .find(|&g| g != f && self.faces[g].contains(&v) && self.faces[g].contains(&w))
            .expect("every edge has two faces")
    }

    /// Image under an isometry, keeping words and numbering.
    pub fn moved(&self, frame: &Frame, g: &Isometry<f64>) -> Option<Self> {
        let words = self
            .words
            .iter()
            .map(|w| frame.word_for(&minkowski::apply(g, &frame.cell.tile_center(w))))
            .collect::<Option<Vec<_>>>()?;
        let mut sorted = words;
        sorted.sort();
        Some(Self {
            words: sorted,
            planes: self.planes.iter().map(|n| minkowski::apply(g, n)).collect(),
            vertices: self.vertices.iter().map(|v| minkowski::apply(g, v)).collect(),
            ..self.clone()
        })
    }
}

/// Matches a face lattice against the shape templates. Returns the shape and
/// the hull face carrying each convention face number.
pub fn classify_shape<T>(hull: &Hull<T>) -> Result<(ShapeKind, Vec<usize>), ModelError> {
    let sizes: Vec<usize> = hull.faces.iter().map(Vec::len).collect();
    let nf = sizes.len();
    let triangles = sizes.iter().filter(|&&s| s == 3).count();
    let face_with = |skip: usize, v: usize, w: usize| {
        (0..nf).find(|&g| g != skip && hull.faces[g].contains(&v) && hull.faces[g].contains(&w))
    };
    if nf == 4 && triangles == 4 {
        return Ok((ShapeKind::Tetrahedron, (0..4).collect()));
    }
    if triangles == nf - 1 && (5..=8).contains(&nf) {
        let n = nf - 1;
        let base = sizes.iter().position(|&s| s == n).ok_or(ModelError::UnsupportedShape)?;
        let cyc = &hull.faces[base];
        let mut labeling = vec![base];
        for i in 0..n {
            labeling.push(face_with(base, cyc[i], cyc[(i + 1) % n]).ok_or(ModelError::UnsupportedShape)?);
        }
        return Ok((ShapeKind::Pyramid(n as u8), labeling));
    }
    if nf == 5 && triangles == 2 && sizes.iter().filter(|&&s| s == 4).count() == 3 {
        let t: Vec<usize> = (0..5).filter(|&f| sizes[f] == 3).collect();
        if hull.faces[t[0]].iter().any(|v| hull.faces[t[1]].contains(v)) {
            return Err(ModelError::UnsupportedShape);
        }
        let cyc = &hull.faces[t[0]];
        let mut labeling = vec![t[0], t[1]];
        for i in 0..3 {
            labeling.push(face_with(t[0], cyc[i], cyc[(i + 1) % 3]).ok_or(ModelError::UnsupportedShape)?);
        }
        return Ok((ShapeKind::TriangularPrism, labeling));
    }
    Err(ModelError::UnsupportedShape)
}

/// Lorentzian Gram values `-<v_i, v_{i+1}>` around a face.
fn side_profile(p: &Piece, f: usize) -> Vec<f64> {
    let cyc = &p.faces[f];
    let n = cyc.len();
    (0..n)
        .map(|i| -minkowski::dot(&p.vertices[cyc[i]], &p.vertices[cyc[(i + 1) % n]]))
        .collect()
}

/// The `2n` vertex matchings of two `n`-gonal faces.
pub fn matchings(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(2 * n);
    for rev in [true, false] {
        for r in 0..n {
            out.push((0..n).map(|j| if rev { (r + n - j) % n } else { (r + j) % n }).collect());
        }
    }
    out
}

/// Glues `b` onto `a`, face `fb` of `b` against face `fa` of `a`, with right
/// face vertex `j` placed on left face vertex `matching[j]`. The result lives
/// in the frame of `a`.
pub fn glue(frame: &Frame, a: &Piece, fa: usize, b: &Piece, fb: usize, matching: &[usize]) -> Result<Piece, GlueError> {
    let (ca, cb) = (&a.faces[fa], &b.faces[fb]);
    let n = ca.len();
    if cb.len() != n || matching.len() != n {
        return Err(GlueError::NotCongruent);
    }
    // Exact hinge merges first.
    let mut merges = Vec::with_capacity(n);
    for j in 0..n {
        let (v, w) = (cb[j], cb[(j + 1) % n]);
        let (va, wa) = (ca[matching[j]], ca[matching[(j + 1) % n]]);
        let alpha = a.decoration.angle(fa, a.neighbour(fa, va, wa));
        let beta = b.decoration.angle(fb, b.neighbour(fb, v, w));
        merges.push(alpha.merge(beta)?);
    }
    let pa = side_profile(a, fa);
    let pb = side_profile(b, fb);
    for j in 0..n {
        let (x, y) = (matching[j], matching[(j + 1) % n]);
        let ia = if (x + 1) % n == y { x } else { y };
        if (pa[ia] - pb[j]).abs() > 1e-6 * pa[ia].abs().max(1.0) {
            return Err(GlueError::NotCongruent);
        }
    }
    let src = minkowski::from_columns([
        &b.vertices[cb[0]],
        &b.vertices[cb[1]],
        &b.vertices[cb[2]],
        &b.planes[fb],
    ]);
    let dst = minkowski::from_columns([
        &a.vertices[ca[matching[0]]],
        &a.vertices[ca[matching[1]]],
        &a.vertices[ca[matching[2]]],
        &minkowski::neg(&a.planes[fa]),
    ]);
    let g = minkowski::compose(&dst, &minkowski::general_inverse(&src).ok_or(GlueError::NotCongruent)?);
    if minkowski::isometry_defect(&g) > 1e-7 {
        return Err(GlueError::NotCongruent);
    }
    for j in 3..n {
        let image = minkowski::apply(&g, &b.vertices[cb[j]]);
        if minkowski::max_diff(&image, &a.vertices[ca[matching[j]]]) > 1e-6 {
            return Err(GlueError::NotCongruent);
        }
    }
    if !frame.preserves(&g) {
        return Err(GlueError::Incompatible);
    }
    let moved = b.moved(frame, &g).ok_or(GlueError::Incompatible)?;
    let own: HashSet<&Vec<u8>> = a.words.iter().collect();
    if moved.words.iter().any(|w| own.contains(w)) {
        return Err(GlueError::Overlap);
    }
    let mut planes: Vec<Vector<f64>> = Vec::new();
    let kept_a = a.planes.iter().enumerate().filter(|&(i, _)| i != fa);
    let kept_b = moved.planes.iter().enumerate().filter(|&(i, _)| i != fb);
    for (_, p) in kept_a.chain(kept_b) {
        if !planes.iter().any(|q| minkowski::max_diff(q, p) < 1e-6) {
            planes.push(*p);
        }
    }
    let convex = a
        .vertices
        .iter()
        .chain(moved.vertices.iter())
        .all(|v| planes.iter().all(|n| minkowski::dot(v, n) <= PIECE_TOL));
    if !convex {
        return Err(GlueError::NonConvex);
    }
    let hull = hull_from_planes(&planes, PIECE_TOL)?;
    let words: Vec<Vec<u8>> = a.words.iter().cloned().chain(moved.words).collect();
    let tree = Arc::new(GluingTree::Node {
        left: a.tree.clone(),
        right: b.tree.clone(),
        left_face: fa,
        right_face: fb,
        matching: matching.to_vec(),
    });
    let piece = Piece::from_hull(frame, words, &hull, tree)?;
    debug_assert!(merges.iter().all(|m| match m {
        MergeResult::Flat => true,
        MergeResult::Angle(x) => piece.decoration.angles.contains(x),
    }));
    Ok(piece)
}

/// Every admissible gluing of `b` onto `a`, in a fixed order.
pub fn glue_all(frame: &Frame, a: &Piece, b: &Piece) -> Vec<(Piece, usize, usize)> {
    let mut out = Vec::new();
    for fa in 0..a.faces.len() {
        for fb in 0..b.faces.len() {
            let n = a.faces[fa].len();
            if b.faces[fb].len() != n {
                continue;
            }
            for m in matchings(n) {
                if let Ok(p) = glue(frame, a, fa, b, fb, &m) {
                    out.push((p, fa, fb));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fundamental_piece_matches_labels() {
        let t = CoxeterTetrahedron::linear(5, 3, 4);
        let frame = Frame::new(t).unwrap();
        let p = Piece::fundamental(&frame);
        assert_eq!(p.kind(), ShapeKind::Tetrahedron);
        let mut denoms: Vec<u32> = p.decoration.angles.iter().map(|a| a.denom()).collect();
        denoms.sort();
        assert_eq!(denoms, vec![2, 2, 2, 3, 4, 5]);
        assert!(p.decoration.angles.iter().all(|a| a.is_fundamental()));
    }

    #[test]
    fn doubling_along_a_face() {
        let frame = Frame::new(CoxeterTetrahedron::linear(5, 3, 4)).unwrap();
        let p = Piece::fundamental(&frame);
        let glued = glue_all(&frame, &p, &p);
        assert!(!glued.is_empty());
        for (q, _, _) in &glued {
            assert_eq!(q.tiles(), 2);
            assert!(q.words.contains(&Vec::new()));
            assert_eq!(q.tree.leaves(), 2);
        }
        // Reflecting in face i yields the chamber with word [i].
        assert!(glued.iter().any(|(q, _, _)| q.kind() == ShapeKind::Pyramid(4) || q.kind() == ShapeKind::Tetrahedron));
    }
}
