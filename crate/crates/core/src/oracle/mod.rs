//! Independent checks of catalog entries. Tiles are placed by reflections of
//! a freshly realized fundamental tetrahedron and the union is examined
//! directly; nothing here consults the gluing search.

pub mod lattice;
pub mod volume;

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::AngleFraction;
use crate::engine::CatalogEntry;
use crate::kernel::cell::FundamentalCell;
use crate::kernel::hull::{hull_from_planes, Hull};
use crate::kernel::minkowski::{self, Isometry, Vector};
use crate::kernel::tetra::CoxeterTetrahedron;
use crate::kernel::Realization;
use crate::model::{Decoration, ShapeKind};

pub use lattice::{lattice_check, lattice_check_with, SideTiling};
pub use volume::{volume_ratio_check, VolumeEstimate, DEFAULT_SEED};

/// Tolerance on residuals of the structural checks.
pub const CHECK_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// Tiles sharing a face are mirror images across it.
    Mirror,
    /// Tile interiors are pairwise disjoint.
    Disjoint,
    /// Dihedral angles of the union match the record.
    Angles,
    TileCount,
    /// Every tile face is shared or on the boundary, and every tile vertex
    /// lies in the union.
    Incidence,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Check::Mirror => "mirror",
            Check::Disjoint => "disjoint",
            Check::Angles => "angles",
            Check::TileCount => "tile-count",
            Check::Incidence => "incidence",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check: Check,
    pub pass: bool,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub fundamental: usize,
    pub shape: ShapeKind,
    pub record: String,
    pub checks: Vec<CheckResult>,
}

#[derive(Clone, Debug, PartialEq, Error, Serialize, Deserialize)]
#[error("{shape} {record} (fundamental {fundamental}): {check} check failed{}, residual {residual:e}", tiles.map(|(a, b)| format!(" at tiles {a},{b}")).unwrap_or_default())]
pub struct MismatchReport {
    pub fundamental: usize,
    pub shape: ShapeKind,
    pub record: String,
    pub check: Check,
    pub tiles: Option<(usize, usize)>,
    pub residual: f64,
}

/// Tiles placed in the hyperboloid model, with their face incidences.
#[derive(Clone, Debug)]
pub struct UnfoldedTiling {
    /// Isometry carrying the fundamental tile onto each tile.
    pub tiles: Vec<Isometry<f64>>,
    /// `(tile a, face a, tile b, face b)`.
    pub shared_faces: Vec<(usize, usize, usize, usize)>,
    /// `(tile, face, face of the union)`.
    pub boundary_faces: Vec<(usize, usize, usize)>,
    /// Tile faces that are neither shared nor on the boundary.
    pub loose_faces: Vec<(usize, usize)>,
}

fn scale_of(v: &Vector<f64>) -> f64 {
    v.iter().fold(1.0f64, |m, x| m.max(x.abs()))
}

fn rel_diff(a: &Vector<f64>, b: &Vector<f64>) -> f64 {
    minkowski::max_diff(a, b) / scale_of(a).max(scale_of(b))
}

fn matrix_diff(a: &Isometry<f64>, b: &Isometry<f64>) -> f64 {
    let mut worst = 0.0f64;
    let mut size = 1.0f64;
    for i in 0..4 {
        for j in 0..4 {
            worst = worst.max((a[i][j] - b[i][j]).abs());
            size = size.max(a[i][j].abs());
        }
    }
    worst / size
}

/// The fundamental tetrahedron with its faces and vertices, realized
/// afresh from the labels.
#[derive(Clone, Debug)]
pub struct Tile {
    pub tet: CoxeterTetrahedron,
    pub cell: FundamentalCell<f64>,
    pub realization: Realization<f64>,
}

impl Tile {
    pub fn new(tet: CoxeterTetrahedron) -> Result<Self, crate::kernel::KernelError> {
        let realization = tet.realize::<f64>()?;
        Ok(Self {
            tet,
            cell: FundamentalCell::new(&realization),
            realization,
        })
    }

    fn face_vertices(&self, f: usize) -> Vec<usize> {
        (0..self.realization.vertices.len())
            .filter(|&v| self.realization.incidence[v].contains(&f))
            .collect()
    }

    fn placed_vertices(&self, g: &Isometry<f64>) -> Vec<Vector<f64>> {
        self.realization.vertices.iter().map(|v| minkowski::apply(g, v)).collect()
    }

    fn placed_plane(&self, g: &Isometry<f64>, f: usize) -> Vector<f64> {
        minkowski::apply(g, &self.realization.normals[f])
    }

    /// Area of the spherical link triangle at vertex `v`.
    fn link_area(&self, v: usize) -> f64 {
        let fs = &self.realization.incidence[v];
        let l = |a: usize, b: usize| PI / self.tet.label(fs[a], fs[b]) as f64;
        l(0, 1) + l(0, 2) + l(1, 2) - PI
    }
}

/// Places every tile and pairs up their faces. The boundary of the union is
/// the set of unshared tile faces.
pub fn unfold(tile: &Tile, words: &[Vec<u8>]) -> Result<(UnfoldedTiling, Hull<f64>), crate::kernel::KernelError> {
    let tiles: Vec<Isometry<f64>> = words.iter().map(|w| tile.cell.matrix_for(w)).collect();
    let verts: Vec<Vec<Vector<f64>>> = tiles.iter().map(|g| tile.placed_vertices(g)).collect();
    let mut shared = Vec::new();
    let mut open: Vec<(usize, usize)> = Vec::new();
    for a in 0..tiles.len() {
        for fa in 0..4 {
            let pa = tile.placed_plane(&tiles[a], fa);
            let fva: Vec<Vector<f64>> = tile.face_vertices(fa).iter().map(|&v| verts[a][v]).collect();
            let partner = (0..tiles.len()).filter(|&b| b != a).find_map(|b| {
                (0..4).find_map(|fb| {
                    let pb = tile.placed_plane(&tiles[b], fb);
                    let same = rel_diff(&pa, &minkowski::neg(&pb)) < 1e-7;
                    let cover = fva
                        .iter()
                        .all(|x| tile.face_vertices(fb).iter().any(|&v| rel_diff(x, &verts[b][v]) < 1e-7));
                    (same && cover).then_some((b, fb))
                })
            });
            match partner {
                Some((b, fb)) if a < b => shared.push((a, fa, b, fb)),
                Some(_) => {}
                None => open.push((a, fa)),
            }
        }
    }
    let mut planes: Vec<Vector<f64>> = Vec::new();
    for &(a, fa) in &open {
        let p = tile.placed_plane(&tiles[a], fa);
        if !planes.iter().any(|q| rel_diff(q, &p) < 1e-7) {
            planes.push(p);
        }
    }
    let hull = hull_from_planes(&planes, 1e-9)?;
    let mut boundary = Vec::new();
    let mut loose = Vec::new();
    for (a, fa) in open {
        let p = tile.placed_plane(&tiles[a], fa);
        match hull.planes.iter().position(|q| rel_diff(q, &p) < 1e-7) {
            Some(h) => boundary.push((a, fa, h)),
            None => loose.push((a, fa)),
        }
    }
    Ok((
        UnfoldedTiling {
            tiles,
            shared_faces: shared,
            boundary_faces: boundary,
            loose_faces: loose,
        },
        hull,
    ))
}

fn hull_angle(hull: &Hull<f64>, f: usize, g: usize) -> f64 {
    let c = -minkowski::dot(&hull.planes[f], &hull.planes[g]);
    c.clamp(-1.0, 1.0).acos()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out
}

/// Assignments of hull faces to the faces of the shape convention, as
/// `(residual, sigma)` with convention face `c` carried by hull face
/// `sigma[c]`; the residual is the largest angle error over the edges.
/// Empty when the face lattices differ.
pub fn face_matchings(hull: &Hull<f64>, decoration: &Decoration) -> Vec<(f64, Vec<usize>)> {
    let kind = decoration.kind;
    let n = kind.face_count();
    if hull.faces.len() != n || hull.edges.len() != kind.slot_count() {
        return Vec::new();
    }
    let slots = kind.slots();
    permutations(n)
        .into_iter()
        .filter_map(|sigma| {
            let mut worst = 0.0f64;
            for (s, &(a, b)) in slots.iter().enumerate() {
                hull.edge_between(sigma[a], sigma[b])?;
                let want = decoration.angles[s].value::<f64>();
                worst = worst.max((hull_angle(hull, sigma[a], sigma[b]) - want).abs());
            }
            Some((worst, sigma))
        })
        .collect()
}

/// The matching with the smallest residual.
pub fn match_faces(hull: &Hull<f64>, decoration: &Decoration) -> Option<(f64, Vec<usize>)> {
    face_matchings(hull, decoration)
        .into_iter()
        .min_by(|x, y| x.0.total_cmp(&y.0))
}

/// Checks an entry against the definition of a Coxeter decomposition.
pub fn verify_decomposition(entry: &CatalogEntry, tet: &CoxeterTetrahedron) -> Result<VerificationReport, MismatchReport> {
    let fail = |check: Check, tiles: Option<(usize, usize)>, residual: f64| MismatchReport {
        fundamental: entry.fundamental,
        shape: entry.shape,
        record: entry.record.record.clone(),
        check,
        tiles,
        residual,
    };
    let tile = Tile::new(*tet).map_err(|_| fail(Check::Incidence, None, f64::INFINITY))?;
    let words = entry.words();
    let mut checks = Vec::new();

    let k = entry.record.provenance.k;
    if words.len() != k || words.is_empty() {
        return Err(fail(Check::TileCount, None, (words.len() as f64 - k as f64).abs()));
    }
    checks.push(CheckResult {
        check: Check::TileCount,
        pass: true,
        residual: 0.0,
    });

    let (unfolded, hull) = unfold(&tile, &words).map_err(|_| fail(Check::Incidence, None, f64::INFINITY))?;

    let mut mirror = 0.0f64;
    for &(a, fa, b, _) in &unfolded.shared_faces {
        let r = minkowski::reflection(&tile.placed_plane(&unfolded.tiles[a], fa));
        let d = matrix_diff(&minkowski::compose(&r, &unfolded.tiles[a]), &unfolded.tiles[b]);
        if d > CHECK_TOL {
            return Err(fail(Check::Mirror, Some((a, b)), d));
        }
        mirror = mirror.max(d);
    }
    checks.push(CheckResult {
        check: Check::Mirror,
        pass: true,
        residual: mirror,
    });

    let verts: Vec<Vec<Vector<f64>>> = unfolded.tiles.iter().map(|g| tile.placed_vertices(g)).collect();
    for a in 0..verts.len() {
        for b in a + 1..verts.len() {
            let separated = (0..4).any(|f| {
                let n = tile.placed_plane(&unfolded.tiles[a], f);
                verts[b]
                    .iter()
                    .all(|v| minkowski::dot(v, &n) >= -CHECK_TOL * scale_of(v))
            });
            if !separated {
                return Err(fail(Check::Disjoint, Some((a, b)), f64::NAN));
            }
        }
    }
    checks.push(CheckResult {
        check: Check::Disjoint,
        pass: true,
        residual: 0.0,
    });

    let mut outside = 0.0f64;
    for vs in &verts {
        for v in vs {
            for n in &hull.planes {
                outside = outside.max(minkowski::dot(v, n) / scale_of(v));
            }
        }
    }
    if !unfolded.loose_faces.is_empty() || outside > CHECK_TOL {
        let t = unfolded.loose_faces.first().map(|&(a, _)| (a, a));
        return Err(fail(Check::Incidence, t, outside));
    }
    checks.push(CheckResult {
        check: Check::Incidence,
        pass: true,
        residual: outside.max(0.0),
    });

    let decoration =
        Decoration::parse(entry.shape, &entry.record.record).map_err(|_| fail(Check::Angles, None, f64::INFINITY))?;
    match match_faces(&hull, &decoration) {
        Some((r, _)) if r <= CHECK_TOL => checks.push(CheckResult {
            check: Check::Angles,
            pass: true,
            residual: r,
        }),
        Some((r, _)) => return Err(fail(Check::Angles, None, r)),
        None => return Err(fail(Check::Angles, None, f64::INFINITY)),
    }

    Ok(VerificationReport {
        fundamental: entry.fundamental,
        shape: entry.shape,
        record: entry.record.record.clone(),
        checks,
    })
}

/// What the tiles look like around one vertex of the union.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexStar {
    /// Tiles containing the vertex.
    pub tiles: usize,
    /// Dihedral angles of the union along the incident edges.
    pub angles: Vec<AngleFraction>,
    /// Tiles around each incident edge next to the vertex.
    pub edge_tiles: Vec<usize>,
    /// Link areas of the tiles at the vertex.
    pub tile_areas: Vec<f64>,
}

impl VertexStar {
    /// A vertex inside several tiles has a decomposed edge; the link is a
    /// spherical polygon whose area is the sum of the tiles' link areas.
    pub fn is_valid(&self) -> bool {
        let deg = self.angles.len();
        if deg < 3 || self.edge_tiles.len() != deg || self.tile_areas.len() != self.tiles {
            return false;
        }
        if self.angles.iter().zip(&self.edge_tiles).any(|(a, &t)| a.parts() as usize != t) {
            return false;
        }
        if self.tiles > 1 && self.angles.iter().all(|a| a.is_fundamental()) {
            return false;
        }
        let area = self.angles.iter().map(|a| a.value::<f64>()).sum::<f64>() - (deg as f64 - 2.0) * PI;
        area > 0.0 && (area - self.tile_areas.iter().sum::<f64>()).abs() <= 1e-8
    }
}

/// Vertex stars of an entry under each face matching that fits the
/// record's angles, one star per vertex of the union.
pub fn vertex_stars(entry: &CatalogEntry, tet: &CoxeterTetrahedron) -> Option<Vec<Vec<VertexStar>>> {
    let tile = Tile::new(*tet).ok()?;
    let (unfolded, hull) = unfold(&tile, &entry.words()).ok()?;
    let decoration = Decoration::parse(entry.shape, &entry.record.record).ok()?;
    let placed: Vec<Vec<Vector<f64>>> = unfolded.tiles.iter().map(|g| tile.placed_vertices(g)).collect();
    let inside = |g: &Isometry<f64>, x: &Vector<f64>| {
        (0..4).all(|f| minkowski::dot(x, &tile.placed_plane(g, f)) <= 1e-9 * scale_of(x))
    };
    // Geometry first: tiles at each vertex and around each edge near it.
    let mut areas = Vec::new();
    let mut around = Vec::new();
    for (vi, v) in hull.vertices.iter().enumerate() {
        let tile_areas: Vec<f64> = placed
            .iter()
            .filter_map(|vs| vs.iter().position(|w| rel_diff(w, v) < 1e-7).map(|j| tile.link_area(j)))
            .collect();
        let mut edges = Vec::new();
        for &(a, b, f, g) in &hull.edges {
            let other = match (a == vi, b == vi) {
                (true, _) => b,
                (_, true) => a,
                _ => continue,
            };
            let dir = minkowski::sub(&hull.vertices[other], v);
            let x = minkowski::to_hyperboloid(&minkowski::add(v, &minkowski::scale(&dir, 1e-4)))?;
            edges.push((f, g, unfolded.tiles.iter().filter(|t| inside(t, &x)).count()));
        }
        areas.push(tile_areas);
        around.push(edges);
    }
    let mut out = Vec::new();
    for (r, sigma) in face_matchings(&hull, &decoration) {
        if r > CHECK_TOL {
            continue;
        }
        let mut conv = vec![0; sigma.len()];
        for (c, &h) in sigma.iter().enumerate() {
            conv[h] = c;
        }
        let stars = areas
            .iter()
            .zip(&around)
            .map(|(tile_areas, edges)| VertexStar {
                tiles: tile_areas.len(),
                angles: edges
                    .iter()
                    .map(|&(f, g, _)| decoration.angles[decoration.kind.slot_of(conv[f], conv[g]).expect("matched edge")])
                    .collect(),
                edge_tiles: edges.iter().map(|e| e.2).collect(),
                tile_areas: tile_areas.clone(),
            })
            .collect();
        out.push(stars);
    }
    Some(out)
}

/// Under some face matching that fits the record, every vertex of the union
/// passes [`VertexStar::is_valid`].
pub fn link_check(entry: &CatalogEntry, tet: &CoxeterTetrahedron) -> bool {
    vertex_stars(entry, tet).is_some_and(|m| m.iter().any(|s| s.iter().all(VertexStar::is_valid)))
}

/// Outcome of every check on one catalog entry or scheme.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryReport {
    pub fundamental: Option<usize>,
    pub shape: String,
    pub record: String,
    pub structure: Option<VerificationReport>,
    pub mismatch: Option<MismatchReport>,
    pub links: Option<bool>,
    pub lattice: Option<bool>,
    pub volume: Option<VolumeEstimate>,
    pub tiles: usize,
    pub pass: bool,
}

impl EntryReport {
    /// One-line reason for a failure.
    pub fn reason(&self) -> String {
        if let Some(m) = &self.mismatch {
            return m.to_string();
        }
        let what = if self.links == Some(false) {
            "link check failed".to_string()
        } else if self.lattice == Some(false) {
            "lattice check failed".to_string()
        } else if let Some(v) = self.volume {
            format!("volume ratio {:.4} ± {:.4} misses {}", v.estimate, v.half_width, self.tiles)
        } else {
            "volume check could not realize the polyhedron".to_string()
        };
        format!("{} {}: {what}", self.shape, self.record)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogReport {
    pub checksum_ok: bool,
    pub entries: Vec<EntryReport>,
}

impl CatalogReport {
    pub fn pass(&self) -> bool {
        self.checksum_ok && self.entries.iter().all(|e| e.pass)
    }

    pub fn first_failure(&self) -> Option<&EntryReport> {
        self.entries.iter().find(|e| !e.pass)
    }
}

/// Runs every check on every entry and scheme of a catalog.
pub fn verify_catalog(catalog: &crate::catalog::CatalogFile, samples: usize, seed: u64) -> CatalogReport {
    use rayon::prelude::*;
    let entries: Vec<EntryReport> = catalog
        .entries
        .par_iter()
        .map(|e| {
            let k = e.record.provenance.k;
            let mut report = EntryReport {
                fundamental: Some(e.fundamental),
                shape: e.shape.to_string(),
                record: e.record.record.clone(),
                structure: None,
                mismatch: None,
                links: None,
                lattice: None,
                volume: None,
                tiles: k,
                pass: false,
            };
            let Some(info) = catalog.fundamental(e.fundamental) else {
                return report;
            };
            let tet = CoxeterTetrahedron::new(info.labels);
            match verify_decomposition(e, &tet) {
                Ok(r) => report.structure = Some(r),
                Err(m) => {
                    report.mismatch = Some(m);
                    return report;
                }
            }
            report.links = Some(link_check(e, &tet));
            report.volume = volume_ratio_check(e, &tet, samples, seed);
            report.pass = report.links == Some(true) && report.volume.is_some_and(|v| v.contains(k as f64));
            report
        })
        .collect();
    let schemes: Vec<EntryReport> = catalog
        .schemes
        .par_iter()
        .map(|s| {
            let lattice = lattice_check(s);
            let volume = volume::scheme_volume_check(s, samples, seed);
            EntryReport {
                fundamental: None,
                shape: "prism-into-prism".into(),
                record: s.record.clone(),
                structure: None,
                mismatch: None,
                links: None,
                lattice: Some(lattice),
                volume,
                tiles: s.tiles,
                pass: lattice && volume.is_some_and(|v| v.contains(s.tiles as f64)),
            }
        })
        .collect();
    CatalogReport {
        checksum_ok: catalog.checksum_ok(),
        entries: entries.into_iter().chain(schemes).collect(),
    }
}
