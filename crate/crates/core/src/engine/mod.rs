//! Classification searches: fundamental tetrahedra, the gluing closure of
//! tetrahedra, pyramids and prisms over each of them, prism levels and
//! prism-into-prism schemes.

pub mod placement;
pub mod prisms;

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::tetra::{compact_by_minors, CoxeterTetrahedron};
use crate::kernel::KernelError;
use crate::links::vertex_link_ok;
use crate::model::assembly::{glue_all, Frame};
use crate::model::{Component, DecompositionRecord, Piece, Provenance, ShapeKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub max_tiles: usize,
    pub max_level: usize,
    pub label_bound: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_tiles: 64,
            max_level: 8,
            label_bound: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("prism of level {level} exceeds the bound {bound}")]
    LevelBoundExceeded { level: usize, bound: usize },
    #[error("no fundamental tetrahedron with index {0}")]
    UnknownFundamental(usize),
    #[error("invalid search configuration: {0}")]
    Config(&'static str),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// All compact Coxeter tetrahedra with labels `<= label_bound`, one per
/// relabeling class, sorted by canonical label vector.
pub fn enumerate_fundamental_tetrahedra(label_bound: u32) -> Vec<CoxeterTetrahedron> {
    enumerate_with(label_bound, CoxeterTetrahedron::is_compact)
}

/// The same search with compactness decided by leading minors only.
pub fn enumerate_fundamental_tetrahedra_by_minors(label_bound: u32) -> Vec<CoxeterTetrahedron> {
    enumerate_with(label_bound, compact_by_minors)
}

fn enumerate_with(label_bound: u32, compact: impl Fn(&CoxeterTetrahedron) -> bool) -> Vec<CoxeterTetrahedron> {
    let mut seen = HashSet::new();
    let range = 2..=label_bound.max(2);
    for a in range.clone() {
        for b in range.clone() {
            for c in range.clone() {
                // Vertex 3 sees faces 0, 1, 2.
                if !vertex_link_ok([a, b, c]) {
                    continue;
                }
                for d in range.clone() {
                    for e in range.clone() {
                        for f in range.clone() {
                            let t = CoxeterTetrahedron::new([a, b, d, c, e, f]);
                            if (0..4).all(|v| vertex_link_ok(t.vertex_labels(v))) {
                                seen.insert(t.canonical());
                            }
                        }
                    }
                }
            }
        }
    }
    let mut out: Vec<CoxeterTetrahedron> = seen.into_iter().filter(|t| compact(t)).collect();
    out.sort();
    out
}

/// One glued piece found by the closure, before numbering.
#[derive(Clone, Debug)]
pub struct Found {
    pub piece: Piece,
    /// `(left item, right item, left face, right face)`.
    pub parents: Option<(usize, usize, usize, usize)>,
}

/// Convex unions of at most `max_tiles` chambers that are tetrahedra,
/// 4..7-gonal pyramids or triangular prisms, up to decorated congruence.
/// Every piece contains the fundamental chamber.
pub fn closure(frame: &Frame, max_tiles: usize) -> Vec<Found> {
    let seed = Piece::fundamental(frame);
    let mut seen: HashSet<(ShapeKind, String)> = HashSet::from([(seed.kind(), seed.record.clone())]);
    let mut items = vec![Found {
        piece: seed,
        parents: None,
    }];
    let mut i = 0;
    while i < items.len() {
        let found: Vec<(Piece, usize, usize, usize)> = (0..=i)
            .into_par_iter()
            .flat_map_iter(|j| {
                let (a, b) = (&items[i].piece, &items[j].piece);
                if a.tiles() + b.tiles() > max_tiles {
                    return Vec::new();
                }
                glue_all(frame, a, b)
                    .into_iter()
                    .map(|(p, fa, fb)| (p, j, fa, fb))
                    .collect()
            })
            .collect();
        for (piece, j, fa, fb) in found {
            if seen.insert((piece.kind(), piece.record.clone())) {
                items.push(Found {
                    piece,
                    parents: Some((i, j, fa, fb)),
                });
            }
        }
        i += 1;
    }
    items
}

/// A decomposition in the catalog of one fundamental tetrahedron.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    /// Index of the fundamental tetrahedron.
    pub fundamental: usize,
    pub shape: ShapeKind,
    pub record: DecompositionRecord,
    /// Prism level, for prisms.
    pub level: Option<usize>,
    /// Chamber words of the tiles, as digit strings.
    pub tiles: Vec<String>,
}

impl CatalogEntry {
    pub fn words(&self) -> Vec<Vec<u8>> {
        self.tiles
            .iter()
            .map(|w| w.bytes().map(|b| b - b'0').collect())
            .collect()
    }
}

pub fn word_string(w: &[u8]) -> String {
    w.iter().map(|&d| char::from(b'0' + d)).collect()
}

/// Sort key placing entries in table order.
fn group(found: &[Found], idx: usize) -> (u8, u8) {
    let p = &found[idx].piece;
    match p.kind() {
        ShapeKind::Tetrahedron => (0, 0),
        ShapeKind::Pyramid(4) => {
            let from_tetrahedra = found[idx].parents.is_some_and(|(a, b, _, _)| {
                found[a].piece.kind() == ShapeKind::Tetrahedron && found[b].piece.kind() == ShapeKind::Tetrahedron
            });
            (1, if from_tetrahedra { 0 } else { 1 })
        }
        ShapeKind::Pyramid(n) => (1, n),
        ShapeKind::TriangularPrism => (2, 0),
    }
}

/// Everything found for one fundamental tetrahedron.
#[derive(Clone, Debug)]
pub struct FundamentalCatalog {
    pub index: usize,
    pub tet: CoxeterTetrahedron,
    pub frame: Frame,
    pub entries: Vec<CatalogEntry>,
    /// The piece behind each entry, in the same order.
    pub pieces: Vec<Piece>,
}

/// Runs the closure for one fundamental tetrahedron and numbers the result
/// in table order: tetrahedra from 0 (the fundamental one), pyramids and
/// prisms from 1.
pub fn enumerate_fundamental(index: usize, tet: CoxeterTetrahedron, config: &SearchConfig) -> Result<FundamentalCatalog, EngineError> {
    if config.max_tiles == 0 {
        return Err(EngineError::Config("max_tiles must be at least 1"));
    }
    let frame = Frame::new(tet)?;
    let found = closure(&frame, config.max_tiles);
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&x, &y| {
        let (px, py) = (&found[x].piece, &found[y].piece);
        (group(&found, x), px.tiles(), &px.record).cmp(&(group(&found, y), py.tiles(), &py.record))
    });
    let mut serial = HashMap::new();
    let mut counters: HashMap<&'static str, usize> = HashMap::from([("tet", 0), ("pyr", 1), ("pri", 1)]);
    for &idx in &order {
        let tag = found[idx].piece.kind().tag();
        let c = counters.get_mut(tag).expect("known tag");
        serial.insert(idx, *c);
        *c += 1;
    }
    let depth = depths(&found);
    let mut entries = Vec::with_capacity(found.len());
    let mut pieces = Vec::with_capacity(found.len());
    for &idx in &order {
        let f = &found[idx];
        let comp = |j: usize| Component {
            id: serial[&j],
            shape: found[j].piece.kind().tag().to_string(),
        };
        let provenance = Provenance {
            t: serial[&idx],
            k: f.piece.tiles(),
            l: depth[idx],
            m: f.parents.map(|(a, _, _, _)| comp(a)),
            n: f.parents.map(|(_, b, _, _)| comp(b)),
            p: f.parents.map(|(_, _, fa, _)| fa),
            q: f.parents.map(|(_, _, _, fb)| fb),
            star: false,
        };
        entries.push(CatalogEntry {
            fundamental: index,
            shape: f.piece.kind(),
            record: DecompositionRecord {
                record: f.piece.record.clone(),
                provenance,
            },
            level: None,
            tiles: f.piece.words.iter().map(|w| word_string(w)).collect(),
        });
        pieces.push(f.piece.clone());
    }
    let mut cat = FundamentalCatalog {
        index,
        tet,
        frame,
        entries,
        pieces,
    };
    placement::assign_levels(&mut cat, config.max_level)?;
    placement::assign_stars(&mut cat);
    Ok(cat)
}

fn depths(found: &[Found]) -> Vec<usize> {
    let mut d = vec![0; found.len()];
    for i in 0..found.len() {
        if let Some((a, b, _, _)) = found[i].parents {
            d[i] = 1 + d[a].max(d[b]);
        }
    }
    d
}

/// Runs [`enumerate_fundamental`] for the selected fundamental tetrahedra
/// (all when `selection` is `None`).
pub fn enumerate(config: &SearchConfig, selection: Option<usize>) -> Result<Vec<FundamentalCatalog>, EngineError> {
    let funds = enumerate_fundamental_tetrahedra(config.label_bound.max(5));
    let chosen: Vec<usize> = match selection {
        Some(i) if i < funds.len() => vec![i],
        Some(i) => return Err(EngineError::UnknownFundamental(i)),
        None => (0..funds.len()).collect(),
    };
    chosen
        .into_iter()
        .map(|i| enumerate_fundamental(i, funds[i], config))
        .collect()
}
