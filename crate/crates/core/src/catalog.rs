//! Catalog files: JSON archive with a checksum, CSV export and the
//! three-column table rendering.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::engine::prisms::{enumerate_prisms_into_prisms, PrismScheme, BASE_PATTERN_TILES};
use crate::engine::{self, CatalogEntry, EngineError, SearchConfig};
use crate::model::ShapeKind;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("malformed catalog: {0}")]
    Json(#[from] serde_json::Error),
    #[error("checksum mismatch: file says {stored}, contents hash to {computed}")]
    Checksum { stored: String, computed: String },
    #[error("csv export failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("unknown shape selection {0:?}")]
    Selection(String),
}

/// Which part of the classification a catalog holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Selection {
    Shape(ShapeKind),
    PrismIntoPrism,
    PrismIntoTetra,
    All,
}

impl Selection {
    pub fn keeps(self, shape: ShapeKind) -> bool {
        match self {
            Selection::Shape(s) => s == shape,
            Selection::PrismIntoPrism => false,
            Selection::PrismIntoTetra => shape == ShapeKind::TriangularPrism,
            Selection::All => true,
        }
    }

    pub fn wants_schemes(self) -> bool {
        matches!(self, Selection::PrismIntoPrism | Selection::All)
    }

    pub fn wants_entries(self) -> bool {
        self != Selection::PrismIntoPrism
    }
}

impl std::fmt::Display for Selection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Selection::Shape(s) => write!(f, "{s}"),
            Selection::PrismIntoPrism => f.write_str("prism-into-prism"),
            Selection::PrismIntoTetra => f.write_str("prism-into-tetra"),
            Selection::All => f.write_str("all"),
        }
    }
}

impl FromStr for Selection {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prism-into-prism" => Ok(Selection::PrismIntoPrism),
            "prism-into-tetra" => Ok(Selection::PrismIntoTetra),
            "all" => Ok(Selection::All),
            _ => s
                .parse::<ShapeKind>()
                .map(Selection::Shape)
                .map_err(|_| CatalogError::Selection(s.into())),
        }
    }
}

impl From<Selection> for String {
    fn from(s: Selection) -> Self {
        s.to_string()
    }
}

impl TryFrom<String> for Selection {
    type Error = CatalogError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogHeader {
    pub tool: String,
    pub version: String,
    pub format: u32,
    pub config: SearchConfig,
    pub selection: Selection,
    /// Fundamental tetrahedron index, or all of them.
    pub fundamental: Option<usize>,
    /// Monte Carlo seed used by verification.
    pub seed: u64,
}

impl CatalogHeader {
    pub fn new(config: SearchConfig, selection: Selection, fundamental: Option<usize>, seed: u64) -> Self {
        Self {
            tool: "coxdec".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            format: FORMAT_VERSION,
            config,
            selection,
            fundamental,
            seed,
        }
    }
}

/// A fundamental tetrahedron by its index and six labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FundamentalInfo {
    pub index: usize,
    pub labels: [u32; 6],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Body {
    header: CatalogHeader,
    fundamentals: Vec<FundamentalInfo>,
    entries: Vec<CatalogEntry>,
    schemes: Vec<PrismScheme>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogFile {
    pub header: CatalogHeader,
    pub fundamentals: Vec<FundamentalInfo>,
    pub entries: Vec<CatalogEntry>,
    pub schemes: Vec<PrismScheme>,
    /// SHA-256 of the compact JSON of everything above.
    pub checksum: String,
}

impl CatalogFile {
    pub fn new(header: CatalogHeader, fundamentals: Vec<FundamentalInfo>, entries: Vec<CatalogEntry>, schemes: Vec<PrismScheme>) -> Self {
        let mut c = Self {
            header,
            fundamentals,
            entries,
            schemes,
            checksum: String::new(),
        };
        c.checksum = c.compute_checksum();
        c
    }

    pub fn compute_checksum(&self) -> String {
        let body = Body {
            header: self.header.clone(),
            fundamentals: self.fundamentals.clone(),
            entries: self.entries.clone(),
            schemes: self.schemes.clone(),
        };
        let bytes = serde_json::to_vec(&body).expect("catalog serializes");
        hex::encode(Sha256::digest(&bytes))
    }

    pub fn checksum_ok(&self) -> bool {
        self.checksum == self.compute_checksum()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("catalog serializes");
        s.push('\n');
        s
    }

    /// Parses without checking the checksum.
    pub fn from_json_unchecked(s: &str) -> Result<Self, CatalogError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn from_json(s: &str) -> Result<Self, CatalogError> {
        let c = Self::from_json_unchecked(s)?;
        let computed = c.compute_checksum();
        if c.checksum != computed {
            return Err(CatalogError::Checksum {
                stored: c.checksum,
                computed,
            });
        }
        Ok(c)
    }

    pub fn fundamental(&self, index: usize) -> Option<&FundamentalInfo> {
        self.fundamentals.iter().find(|f| f.index == index)
    }

    pub fn to_csv(&self) -> Result<String, CatalogError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "fundamental", "shape", "t", "k", "l", "m", "n", "p", "q", "star", "level", "record", "tiles",
        ])?;
        for e in &self.entries {
            let p = &e.record.provenance;
            let comp = |c: &Option<crate::model::Component>| c.as_ref().map(|c| format!("{}{}", c.shape, c.id)).unwrap_or_default();
            let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
            w.write_record([
                e.fundamental.to_string(),
                e.shape.to_string(),
                p.t.to_string(),
                p.k.to_string(),
                p.l.to_string(),
                comp(&p.m),
                comp(&p.n),
                opt(p.p),
                opt(p.q),
                if p.star { "*".into() } else { String::new() },
                opt(e.level),
                e.record.record.clone(),
                e.tiles.join(" "),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("utf-8 csv"))
    }

    /// Table rendering: one block per fundamental tetrahedron, columns for
    /// tetrahedra, pyramids and prisms, provenance under each record.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let mut funds: Vec<usize> = self.entries.iter().map(|e| e.fundamental).collect();
        funds.dedup();
        let width = 44;
        let rule = "=".repeat(width * 3 + 4);
        for f in funds {
            let labels = self
                .fundamental(f)
                .map(|i| format!("{:?}", i.labels))
                .unwrap_or_default();
            let _ = writeln!(out, "{rule}");
            let _ = writeln!(out, "fundamental {f} {labels}");
            let _ = writeln!(out, "{:<width$} | {:<width$} | {:<width$}", "tet", "pyr", "pri");
            let _ = writeln!(out, "{}", "-".repeat(width * 3 + 4));
            let mine: Vec<&CatalogEntry> = self.entries.iter().filter(|e| e.fundamental == f).collect();
            let column = |pick: &dyn Fn(&CatalogEntry) -> bool, dotted: bool| -> Vec<String> {
                let mut lines = Vec::new();
                let mut from_tets = None;
                for e in mine.iter().filter(|e| pick(e)) {
                    let glued_from_tets = e.shape == ShapeKind::Pyramid(4)
                        && e.record.provenance.m.as_ref().is_some_and(|c| c.shape == "tet")
                        && e.record.provenance.n.as_ref().is_some_and(|c| c.shape == "tet");
                    if dotted && from_tets == Some(true) && !glued_from_tets {
                        lines.push(". . . . . . . .".into());
                    }
                    from_tets = Some(glued_from_tets);
                    lines.extend(cell(e));
                }
                lines
            };
            let cols = [
                column(&|e| e.shape == ShapeKind::Tetrahedron, false),
                column(&|e| matches!(e.shape, ShapeKind::Pyramid(_)), true),
                column(&|e| e.shape == ShapeKind::TriangularPrism, false),
            ];
            let rows = cols.iter().map(Vec::len).max().unwrap_or(0);
            for r in 0..rows {
                let c = |i: usize| cols[i].get(r).map(String::as_str).unwrap_or("");
                let line = format!("{:<width$} | {:<width$} | {}", c(0), c(1), c(2));
                let _ = writeln!(out, "{}", line.trim_end());
            }
        }
        if !self.schemes.is_empty() {
            let _ = writeln!(out, "{rule}");
            let _ = writeln!(out, "prisms into prisms");
            for (i, s) in self.schemes.iter().enumerate() {
                let side = if s.horizontal { "horizontal mirror" } else { "no horizontal mirror" };
                let _ = writeln!(
                    out,
                    "{:>2}. {} tiles, base pattern {} tiles split {:?}, {side}",
                    i + 1,
                    s.tiles,
                    s.base_tiles,
                    s.edge_splits
                );
                let _ = writeln!(out, "    P {}  F {}", s.record, s.tile);
            }
        }
        out
    }
}

/// Runs the searches behind a selection and assembles the catalog.
pub fn build(config: &SearchConfig, selection: Selection, fundamental: Option<usize>, seed: u64) -> Result<CatalogFile, EngineError> {
    let mut fundamentals = Vec::new();
    let mut entries = Vec::new();
    if selection.wants_entries() {
        for cat in engine::enumerate(config, fundamental)? {
            fundamentals.push(FundamentalInfo {
                index: cat.index,
                labels: cat.tet.labels(),
            });
            entries.extend(cat.entries.into_iter().filter(|e| selection.keeps(e.shape)));
        }
    }
    let schemes = if selection.wants_schemes() {
        enumerate_prisms_into_prisms(BASE_PATTERN_TILES)
    } else {
        Vec::new()
    };
    let header = CatalogHeader::new(config.clone(), selection, fundamental, seed);
    Ok(CatalogFile::new(header, fundamentals, entries, schemes))
}

fn cell(e: &CatalogEntry) -> Vec<String> {
    let p = &e.record.provenance;
    let star = if p.star { "*" } else { "" };
    let head = format!("{}. {}{}", p.t, e.record.record, star);
    let comp = |c: &Option<crate::model::Component>| c.as_ref().map(|c| format!("{}{}", c.shape, c.id)).unwrap_or_else(|| "-".into());
    let face = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_else(|| "-".into());
    let mut tuple = format!("   ({},{},{},{},{},{})", p.k, p.l, comp(&p.m), comp(&p.n), face(p.p), face(p.q));
    if let Some(l) = e.level {
        let _ = write!(tuple, " level {l}");
    }
    vec![head, tuple]
}
