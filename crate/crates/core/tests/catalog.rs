use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use coxdec::catalog::{build, CatalogError, CatalogFile, Selection};
use coxdec::engine::placement::{detect_superposition, placements};
use coxdec::engine::{
    enumerate, enumerate_fundamental, enumerate_fundamental_tetrahedra, enumerate_fundamental_tetrahedra_by_minors,
    EngineError, FundamentalCatalog, SearchConfig,
};
use coxdec::model::{Decoration, ShapeKind};
use coxdec::oracle::DEFAULT_SEED;

fn catalogs() -> &'static [FundamentalCatalog] {
    static CATS: OnceLock<Vec<FundamentalCatalog>> = OnceLock::new();
    CATS.get_or_init(|| enumerate(&SearchConfig::default(), None).expect("enumeration"))
}

fn small_catalog() -> &'static CatalogFile {
    static CAT: OnceLock<CatalogFile> = OnceLock::new();
    CAT.get_or_init(|| build(&SearchConfig::default(), Selection::All, Some(1), DEFAULT_SEED).unwrap())
}

#[test]
fn fundamental_tetrahedra_golden() {
    let five = enumerate_fundamental_tetrahedra(5);
    assert_eq!(five.len(), 9);
    assert_eq!(five, enumerate_fundamental_tetrahedra(10));
    assert_eq!(five, enumerate_fundamental_tetrahedra_by_minors(10));
    for t in &five {
        assert!(t.realize::<f64>().is_ok(), "{:?}", t.labels());
    }
}

#[test]
fn first_entry_is_the_fundamental_tile() {
    for cat in catalogs() {
        let p = &cat.entries[0].record.provenance;
        assert_eq!((cat.entries[0].shape, p.t, p.k, p.l), (ShapeKind::Tetrahedron, 0, 1, 0));
        assert!(p.m.is_none());
    }
}

#[test]
fn two_tile_tetrahedra_double_the_seed() {
    for cat in catalogs() {
        for e in cat.entries.iter().filter(|e| e.shape == ShapeKind::Tetrahedron && e.record.provenance.k == 2) {
            let p = &e.record.provenance;
            for c in [&p.m, &p.n] {
                let c = c.as_ref().unwrap();
                assert_eq!((c.shape.as_str(), c.id), ("tet", 0));
            }
        }
    }
}

fn lookup(cat: &FundamentalCatalog) -> HashMap<(&str, usize), &coxdec::model::Provenance> {
    cat.entries
        .iter()
        .map(|e| ((e.shape.tag(), e.record.provenance.t), &e.record.provenance))
        .collect()
}

#[test]
fn provenance_is_consistent() {
    for cat in catalogs() {
        let by = lookup(cat);
        for e in &cat.entries[1..] {
            let p = &e.record.provenance;
            let (m, n) = (p.m.as_ref().unwrap(), p.n.as_ref().unwrap());
            let (pm, pn) = (by[&(m.shape.as_str(), m.id)], by[&(n.shape.as_str(), n.id)]);
            assert_eq!(p.k, pm.k + pn.k, "{}", e.record.record);
            assert_eq!(p.l, 1 + pm.l.max(pn.l), "{}", e.record.record);
            assert_eq!(e.tiles.len(), p.k);
        }
    }
}

#[test]
fn records_are_unique_and_canonical() {
    for cat in catalogs() {
        let mut seen = HashSet::new();
        for e in &cat.entries {
            assert!(seen.insert((e.shape, e.record.record.clone())));
            let d = Decoration::parse(e.shape, &e.record.record).unwrap();
            assert_eq!(d.canonical_record(), e.record.record);
        }
    }
}

#[test]
fn pyramids_have_a_decomposed_lateral_edge() {
    for cat in catalogs() {
        for e in &cat.entries {
            let ShapeKind::Pyramid(n) = e.shape else { continue };
            let d = Decoration::parse(e.shape, &e.record.record).unwrap();
            let lateral = &d.angles[n as usize..];
            assert!(lateral.iter().any(|a| !a.is_fundamental()), "{}", e.record.record);
        }
    }
}

#[test]
fn counts_by_shape() {
    let count = |k: ShapeKind| catalogs().iter().flat_map(|c| &c.entries).filter(|e| e.shape == k).count();
    assert_eq!(count(ShapeKind::Pyramid(7)), 0);
    assert_eq!(count(ShapeKind::Pyramid(6)), 1);
    let total: usize = catalogs().iter().map(|c| c.entries.len()).sum();
    assert_eq!(total, 151);
    assert_eq!(count(ShapeKind::TriangularPrism), 74);
}

#[test]
fn saturates_below_the_tile_bound() {
    let funds = enumerate_fundamental_tetrahedra(5);
    let wide = SearchConfig {
        max_tiles: 96,
        ..SearchConfig::default()
    };
    for (cat, tet) in catalogs().iter().zip(funds) {
        let more = enumerate_fundamental(cat.index, tet, &wide).unwrap();
        assert_eq!(more.entries, cat.entries);
    }
}

#[test]
fn level_bound_is_enforced() {
    let tight = SearchConfig {
        max_level: 2,
        ..SearchConfig::default()
    };
    assert!(matches!(enumerate(&tight, None), Err(EngineError::LevelBoundExceeded { bound: 2, .. })));
    assert!(matches!(
        enumerate(&SearchConfig::default(), Some(99)),
        Err(EngineError::UnknownFundamental(99))
    ));
}

#[test]
fn small_decompositions_are_never_starred() {
    for cat in catalogs() {
        for e in &cat.entries {
            if e.record.provenance.k <= 2 {
                assert!(!e.record.provenance.star);
            }
        }
    }
    assert!(catalogs().iter().flat_map(|c| &c.entries).any(|e| e.record.provenance.star));
}

#[test]
fn doubling_a_two_tile_piece_is_a_superposition() {
    // A tetrahedron glued from two copies of a 2-tile tetrahedron.
    let mut found = false;
    for cat in catalogs() {
        let by = lookup(cat);
        for (i, e) in cat.entries.iter().enumerate() {
            let p = &e.record.provenance;
            let (Some(m), Some(n)) = (&p.m, &p.n) else { continue };
            if m == n && by[&(m.shape.as_str(), m.id)].k == 2 && e.shape == ShapeKind::Tetrahedron {
                let m_entry = &cat.entries.iter().find(|x| x.shape.tag() == m.shape && x.record.provenance.t == m.id).unwrap();
                let tile = Decoration::parse(m_entry.shape, &m_entry.record.record).unwrap();
                if tile.angles.iter().all(|a| a.is_submultiple_of_pi()) {
                    assert!(detect_superposition(cat, i), "{}", e.record.record);
                    found = true;
                }
            }
        }
    }
    assert!(found);
}

#[test]
fn stars_survive_reordering() {
    for cat in catalogs().iter().take(3) {
        let mut shuffled = cat.clone();
        shuffled.pieces.reverse();
        shuffled.entries.reverse();
        let star = |c: &FundamentalCatalog| -> HashMap<String, bool> {
            (0..c.pieces.len())
                .map(|i| (c.entries[i].record.record.clone(), detect_superposition(c, i)))
                .collect()
        };
        assert_eq!(star(cat), star(&shuffled));
        for e in &cat.entries {
            assert_eq!(star(cat)[&e.record.record], e.record.provenance.star);
        }
    }
}

#[test]
fn only_prisms_carry_levels() {
    for cat in catalogs() {
        for e in &cat.entries {
            assert_eq!(e.level.is_some(), e.shape == ShapeKind::TriangularPrism);
        }
    }
}

#[test]
fn each_level_contains_the_previous_one() {
    for cat in catalogs() {
        let prisms: Vec<usize> = (0..cat.entries.len()).filter(|&i| cat.entries[i].level.is_some()).collect();
        for &i in &prisms {
            let level = cat.entries[i].level.unwrap();
            let inside: Vec<usize> = prisms
                .iter()
                .copied()
                .filter(|&j| j != i && !placements(&cat.frame, &cat.pieces[j], &cat.pieces[i]).is_empty())
                .filter(|&j| cat.pieces[j].tiles() < cat.pieces[i].tiles())
                .collect();
            let deepest = inside.iter().map(|&j| cat.entries[j].level.unwrap()).max();
            assert_eq!(deepest.map_or(0, |d| d + 1), level, "{}", cat.entries[i].record.record);
        }
    }
}

#[test]
fn json_round_trip_is_byte_identical() {
    let c = small_catalog();
    let text = c.to_json();
    let back = CatalogFile::from_json(&text).unwrap();
    assert_eq!(&back, c);
    assert_eq!(back.to_json(), text);
}

#[test]
fn tampering_breaks_the_checksum() {
    let text = small_catalog().to_json().replacen("1/3", "1/4", 1);
    assert!(matches!(CatalogFile::from_json(&text), Err(CatalogError::Checksum { .. })));
    assert!(!CatalogFile::from_json_unchecked(&text).unwrap().checksum_ok());
}

#[test]
fn selections_parse() {
    for s in ["tetra", "pyr4", "pyr7", "prism-into-prism", "prism-into-tetra", "all"] {
        assert_eq!(s.parse::<Selection>().unwrap().to_string(), s);
    }
    assert!("pyr8".parse::<Selection>().is_err());
}

#[test]
fn csv_has_one_row_per_entry() {
    let c = small_catalog();
    let csv = c.to_csv().unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("fundamental,shape,t,k,l,m,n,p,q,star,level,record"));
    assert_eq!(lines.count(), c.entries.len());
}

#[test]
fn table_layout() {
    let c = small_catalog();
    let table = c.to_table();
    assert!(table.contains("fundamental 1"));
    assert!(table.contains("tet ") && table.contains("| pyr") && table.contains("| pri"));
    // Numbering restarts for each fundamental tetrahedron and columns
    // start at 0 for tetrahedra, 1 otherwise.
    let pyr_numbers: Vec<usize> = c
        .entries
        .iter()
        .filter(|e| matches!(e.shape, ShapeKind::Pyramid(_)))
        .map(|e| e.record.provenance.t)
        .collect();
    assert_eq!(pyr_numbers, (1..=pyr_numbers.len()).collect::<Vec<_>>());
    // Pyramid column: glued from two tetrahedra, dotted line, then the rest
    // by base size.
    let shapes: Vec<u8> = c
        .entries
        .iter()
        .filter_map(|e| match e.shape {
            ShapeKind::Pyramid(n) => Some(n),
            _ => None,
        })
        .collect();
    assert!(shapes.windows(2).all(|w| w[0] <= w[1]));
    assert_eq!(table.matches(". . . . . . . .").count(), 1);
    let dotted = table.find(". . . . . . . .").unwrap();
    let pentagon = c.entries.iter().find(|e| e.shape == ShapeKind::Pyramid(5)).unwrap();
    assert!(table.find(&pentagon.record.record).unwrap() > dotted);
    // Prism records carry nine fractions.
    for e in c.entries.iter().filter(|e| e.shape == ShapeKind::TriangularPrism) {
        assert_eq!(e.record.record.split([',', ';']).count(), 9);
        assert!(table.contains(&e.record.record));
    }
    for e in c.entries.iter().filter(|e| e.record.provenance.star) {
        assert!(table.contains(&format!("{}*", e.record.record)));
    }
    assert!(table.contains("prisms into prisms"));
}

#[test]
fn builds_are_deterministic() {
    let again = build(&SearchConfig::default(), Selection::All, Some(1), DEFAULT_SEED).unwrap();
    assert_eq!(again.to_json(), small_catalog().to_json());
}
