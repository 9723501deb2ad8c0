//! Copies of catalog pieces inside other pieces: prism levels, minimal
//! structures and superpositions.

use std::collections::{BTreeSet, HashSet, VecDeque};

use super::{EngineError, FundamentalCatalog};
use crate::kernel::minkowski::{self, Isometry};
use crate::model::assembly::Frame;
use crate::model::{Piece, ShapeKind};

type WordSet = BTreeSet<Vec<u8>>;

/// Isometries `h_t σ` carrying the fundamental chamber onto chamber `t`.
fn chamber_maps<'a>(frame: &'a Frame, words: &'a [Vec<u8>]) -> impl Iterator<Item = Isometry<f64>> + 'a {
    words.iter().flat_map(move |t| {
        let h = frame.cell.matrix_for(t);
        frame.symmetries.iter().map(move |s| minkowski::compose(&h, s))
    })
}

fn image(frame: &Frame, g: &Isometry<f64>, words: &[Vec<u8>]) -> Option<WordSet> {
    words
        .iter()
        .map(|w| frame.word_for(&minkowski::apply(g, &frame.cell.tile_center(w))))
        .collect()
}

/// Distinct chamber sets of copies of `small` lying inside `big`.
pub fn placements(frame: &Frame, small: &Piece, big: &Piece) -> Vec<WordSet> {
    if small.tiles() > big.tiles() {
        return Vec::new();
    }
    let inside: HashSet<&Vec<u8>> = big.words.iter().collect();
    let mut out: Vec<WordSet> = Vec::new();
    for g in chamber_maps(frame, &big.words) {
        if let Some(ws) = image(frame, &g, &small.words) {
            if ws.iter().all(|w| inside.contains(w)) && !out.contains(&ws) {
                out.push(ws);
            }
        }
    }
    out
}

/// Whether some copy of a catalog piece of kind `kind` with fewer tiles
/// lies inside `catalog.pieces[idx]`, restricted to pieces accepted by
/// `filter`.
fn contains_smaller(cat: &FundamentalCatalog, idx: usize, filter: impl Fn(usize) -> bool) -> Vec<usize> {
    let big = &cat.pieces[idx];
    (0..cat.pieces.len())
        .filter(|&j| j != idx && filter(j) && cat.pieces[j].tiles() < big.tiles())
        .filter(|&j| !placements(&cat.frame, &cat.pieces[j], big).is_empty())
        .collect()
}

/// Prism levels: 0 when no smaller prism fits inside, otherwise one more
/// than the largest level of a prism inside.
pub fn assign_levels(cat: &mut FundamentalCatalog, max_level: usize) -> Result<(), EngineError> {
    let mut prisms: Vec<usize> = (0..cat.pieces.len())
        .filter(|&i| cat.pieces[i].kind() == ShapeKind::TriangularPrism)
        .collect();
    prisms.sort_by_key(|&i| cat.pieces[i].tiles());
    let mut level = vec![None; cat.pieces.len()];
    for &i in &prisms {
        let inner = contains_smaller(cat, i, |j| cat.pieces[j].kind() == ShapeKind::TriangularPrism);
        let l = inner
            .iter()
            .map(|&j| level[j].expect("smaller prisms come first") + 1)
            .max()
            .unwrap_or(0);
        if l > max_level {
            return Err(EngineError::LevelBoundExceeded { level: l, bound: max_level });
        }
        level[i] = Some(l);
    }
    for (e, l) in cat.entries.iter_mut().zip(level) {
        e.level = l;
    }
    Ok(())
}

/// Pyramids with four base vertices containing no smaller such pyramid.
pub fn minimal_quadrilateral_pyramids(cat: &FundamentalCatalog) -> Vec<usize> {
    let quad = |j: usize| cat.pieces[j].kind() == ShapeKind::Pyramid(4);
    (0..cat.pieces.len())
        .filter(|&i| quad(i) && contains_smaller(cat, i, quad).is_empty())
        .collect()
}

/// Whether `cat.pieces[idx]` splits into exactly `parts` catalog tetrahedra.
pub fn splits_into_tetrahedra(cat: &FundamentalCatalog, idx: usize, parts: usize) -> bool {
    let big = &cat.pieces[idx];
    let all: WordSet = big.words.iter().cloned().collect();
    let mut copies: Vec<WordSet> = Vec::new();
    for p in cat.pieces.iter().filter(|p| p.kind() == ShapeKind::Tetrahedron) {
        for ws in placements(&cat.frame, p, big) {
            if !copies.contains(&ws) {
                copies.push(ws);
            }
        }
    }
    let lookup: HashSet<&WordSet> = copies.iter().collect();
    let rest = |used: &[&WordSet]| -> WordSet {
        all.iter()
            .filter(|w| used.iter().all(|u| !u.contains(*w)))
            .cloned()
            .collect()
    };
    match parts {
        1 => lookup.contains(&all),
        2 => copies.iter().any(|a| lookup.contains(&rest(&[a]))),
        3 => copies.iter().enumerate().any(|(i, a)| {
            copies[i + 1..]
                .iter()
                .any(|b| a.is_disjoint(b) && lookup.contains(&rest(&[a, b])))
        }),
        _ => false,
    }
}

/// Whether the decomposition of `cat.pieces[idx]` refines a Coxeter
/// decomposition by copies of a coarser catalog piece.
pub fn detect_superposition(cat: &FundamentalCatalog, idx: usize) -> bool {
    let big = &cat.pieces[idx];
    let k = big.tiles();
    cat.pieces.iter().any(|t| {
        let kt = t.tiles();
        kt >= 2
            && kt < k
            && k.is_multiple_of(kt)
            && t.decoration.angles.iter().all(|a| a.is_submultiple_of_pi())
            && tiles_by_copies(&cat.frame, t, big)
    })
}

/// Reflection orbit of a copy of `t` through the first chamber of `big`,
/// restricted to `big`: true when the copies tile `big` exactly.
fn tiles_by_copies(frame: &Frame, t: &Piece, big: &Piece) -> bool {
    let inside: HashSet<&Vec<u8>> = big.words.iter().collect();
    let anchor = &big.words[0];
    for g0 in chamber_maps(frame, std::slice::from_ref(anchor)) {
        let Some(first) = image(frame, &g0, &t.words) else {
            continue;
        };
        if !first.iter().all(|w| inside.contains(w)) {
            continue;
        }
        let mut copies: Vec<WordSet> = vec![first];
        let mut queue = VecDeque::from([g0]);
        let mut ok = true;
        'bfs: while let Some(g) = queue.pop_front() {
            for n in &t.planes {
                let r = minkowski::reflection(&minkowski::apply(&g, n));
                let h = minkowski::compose(&r, &g);
                let Some(ws) = image(frame, &h, &t.words) else {
                    ok = false;
                    break 'bfs;
                };
                let hits = ws.iter().filter(|w| inside.contains(w)).count();
                if hits == 0 {
                    continue;
                }
                if hits < ws.len() {
                    ok = false;
                    break 'bfs;
                }
                if !copies.contains(&ws) {
                    copies.push(ws);
                    queue.push_back(h);
                }
            }
        }
        if ok && copies.len() * t.tiles() == big.tiles() {
            let union: HashSet<&Vec<u8>> = copies.iter().flatten().collect();
            if union.len() == big.tiles() {
                return true;
            }
        }
    }
    false
}

pub fn assign_stars(cat: &mut FundamentalCatalog) {
    let stars: Vec<bool> = (0..cat.pieces.len()).map(|i| detect_superposition(cat, i)).collect();
    for (e, s) in cat.entries.iter_mut().zip(stars) {
        e.record.provenance.star = s;
    }
}
