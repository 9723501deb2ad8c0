//! Combinatorial shapes decorated with angle fractions, their records, and
//! the gluing of chamber unions.

pub mod assembly;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::{AngleError, AngleFraction};
use crate::kernel::prism::SLOT_FACES as PRISM_SLOTS;
use crate::kernel::tetra::FACE_PAIRS;

pub use assembly::{classify_shape, glue, GlueError, GluingTree, Piece};

/// Target shapes.
///
/// Face numbering:
/// * tetrahedron: faces `0..4`; angle slots `01,02,03,12,13,23`.
/// * `Pyramid(n)`: base `A1..An` is face 0, lateral face `O Ai Ai+1` is
///   face `i`; slots are the base edges `A1A2,..,AnA1` then the lateral
///   edges `OA1,..,OAn`.
/// * prism: base `A1A2A3` = 0, base `B1B2B3` = 1, side `AiAi+1Bi+1Bi` = `i+1`;
///   slots `A3B3, A1B1, A2B2; A1A2; A2A3, A3A1; B1B2, B2B3, B3B1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ShapeKind {
    Tetrahedron,
    Pyramid(u8),
    TriangularPrism,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("face lattice is not a tetrahedron, a 4..7-gonal pyramid or a triangular prism")]
    UnsupportedShape,
    #[error("{kind} has {expected} angles, got {got}")]
    AngleCount { kind: ShapeKind, expected: usize, got: usize },
    #[error("malformed record {0:?}")]
    Record(String),
    #[error(transparent)]
    Angle(#[from] AngleError),
}

impl ShapeKind {
    pub fn face_count(self) -> usize {
        match self {
            ShapeKind::Tetrahedron => 4,
            ShapeKind::Pyramid(n) => n as usize + 1,
            ShapeKind::TriangularPrism => 5,
        }
    }

    /// Face pairs of the angle slots, in record order.
    pub fn slots(self) -> Vec<(usize, usize)> {
        match self {
            ShapeKind::Tetrahedron => FACE_PAIRS.to_vec(),
            ShapeKind::Pyramid(n) => {
                let n = n as usize;
                let base = (1..=n).map(|i| (0, i));
                let lateral = (1..=n).map(|i| (if i == 1 { n } else { i - 1 }, i));
                base.chain(lateral).collect()
            }
            ShapeKind::TriangularPrism => PRISM_SLOTS.to_vec(),
        }
    }

    pub fn slot_count(self) -> usize {
        match self {
            ShapeKind::Tetrahedron => 6,
            ShapeKind::Pyramid(n) => 2 * n as usize,
            ShapeKind::TriangularPrism => 9,
        }
    }

    pub fn slot_of(self, a: usize, b: usize) -> Option<usize> {
        self.slots()
            .iter()
            .position(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a))
    }

    /// Combinatorial automorphisms as face permutations `σ`, face `f` going
    /// to face `σ[f]`. The identity comes first.
    pub fn symmetries(self) -> Vec<Vec<usize>> {
        match self {
            ShapeKind::Tetrahedron => crate::kernel::tetra::all_permutations4()
                .into_iter()
                .map(|p| p.to_vec())
                .collect(),
            ShapeKind::Pyramid(n) => {
                let n = n as usize;
                let mut out = Vec::with_capacity(2 * n);
                for flip in [false, true] {
                    for r in 0..n {
                        let mut p = vec![0; n + 1];
                        for (i, slot) in p.iter_mut().enumerate().skip(1) {
                            let j = if flip { (2 * n - i - 1) % n } else { i - 1 };
                            *slot = (j + r) % n + 1;
                        }
                        out.push(p);
                    }
                }
                out
            }
            ShapeKind::TriangularPrism => {
                let mut out = Vec::with_capacity(12);
                for swap in [false, true] {
                    for flip in [false, true] {
                        for r in 0..3 {
                            let mut p = vec![0; 5];
                            p[0] = usize::from(swap);
                            p[1] = usize::from(!swap);
                            for s in 0..3 {
                                // Side s+2 joins Ai and Ai+1 with i = s+1.
                                let t = if flip { (4 - s) % 3 } else { s };
                                p[s + 2] = (t + r) % 3 + 2;
                            }
                            out.push(p);
                        }
                    }
                }
                out
            }
        }
    }

    fn label(self) -> &'static str {
        match self {
            ShapeKind::Tetrahedron => "tet",
            ShapeKind::Pyramid(_) => "pyr",
            ShapeKind::TriangularPrism => "pri",
        }
    }

    /// Short provenance tag: `tet`, `pyr` or `pri`.
    pub fn tag(self) -> &'static str {
        self.label()
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeKind::Tetrahedron => write!(f, "tetra"),
            ShapeKind::Pyramid(n) => write!(f, "pyr{n}"),
            ShapeKind::TriangularPrism => write!(f, "prism"),
        }
    }
}

impl FromStr for ShapeKind {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "tetra" => Ok(ShapeKind::Tetrahedron),
            "prism" => Ok(ShapeKind::TriangularPrism),
            _ => s
                .strip_prefix("pyr")
                .and_then(|n| n.parse::<u8>().ok())
                .filter(|n| (4..=7).contains(n))
                .map(ShapeKind::Pyramid)
                .ok_or_else(|| ModelError::Record(s.to_string())),
        }
    }
}

impl From<ShapeKind> for String {
    fn from(k: ShapeKind) -> Self {
        k.to_string()
    }
}

impl TryFrom<String> for ShapeKind {
    type Error = ModelError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

/// A glued component: its number and shape tag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub id: usize,
    pub shape: String,
}

/// Table bookkeeping for one decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Serial number within the fundamental tetrahedron.
    pub t: usize,
    /// Number of fundamental tiles.
    pub k: usize,
    /// Gluing depth.
    pub l: usize,
    pub m: Option<Component>,
    pub n: Option<Component>,
    pub p: Option<usize>,
    pub q: Option<usize>,
    pub star: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    pub record: String,
    pub provenance: Provenance,
}

/// Angle fractions of a shape, indexed by slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decoration {
    pub kind: ShapeKind,
    pub angles: Vec<AngleFraction>,
}

impl Decoration {
    pub fn new(kind: ShapeKind, angles: Vec<AngleFraction>) -> Result<Self, ModelError> {
        if angles.len() != kind.slot_count() {
            return Err(ModelError::AngleCount {
                kind,
                expected: kind.slot_count(),
                got: angles.len(),
            });
        }
        Ok(Self { kind, angles })
    }

    pub fn angle(&self, a: usize, b: usize) -> AngleFraction {
        self.angles[self.kind.slot_of(a, b).expect("faces share an edge")]
    }

    /// The decoration after renumbering face `f` as `sigma[f]`.
    pub fn permuted(&self, sigma: &[usize]) -> Self {
        let slots = self.kind.slots();
        let mut angles = self.angles.clone();
        for (s, &(a, b)) in slots.iter().enumerate() {
            let t = self.kind.slot_of(sigma[a], sigma[b]).expect("automorphism maps edges to edges");
            angles[t] = self.angles[s];
        }
        Self { kind: self.kind, angles }
    }

    /// Record string in slot order.
    pub fn record(&self) -> String {
        let a: Vec<String> = self.angles.iter().map(|x| x.to_string()).collect();
        match self.kind {
            ShapeKind::Tetrahedron => format!("({})", a.join(",")),
            ShapeKind::Pyramid(n) => {
                let n = n as usize;
                format!("({};{})", a[..n].join(","), a[n..].join(","))
            }
            ShapeKind::TriangularPrism => format!(
                "({};{};{};{})",
                a[..3].join(","),
                a[3],
                a[4..6].join(","),
                a[6..].join(",")
            ),
        }
    }

    pub fn parse(kind: ShapeKind, record: &str) -> Result<Self, ModelError> {
        let inner = record
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| ModelError::Record(record.to_string()))?;
        let angles = inner
            .split([',', ';'])
            .map(|x| x.parse::<AngleFraction>())
            .collect::<Result<Vec<_>, _>>()?;
        let d = Self::new(kind, angles)?;
        if d.record() != record {
            return Err(ModelError::Record(record.to_string()));
        }
        Ok(d)
    }

    /// Lexicographically least record over all automorphisms, with the first
    /// automorphism attaining it.
    pub fn canonical(&self) -> (String, Vec<usize>) {
        self.kind
            .symmetries()
            .into_iter()
            .map(|s| (self.permuted(&s).record(), s))
            .min_by(|a, b| a.0.cmp(&b.0))
            .expect("nonempty symmetry group")
    }

    pub fn canonical_record(&self) -> String {
        self.canonical().0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_group(kind: ShapeKind) -> bool {
        let g = kind.symmetries();
        let compose = |a: &Vec<usize>, b: &Vec<usize>| a.iter().map(|&i| b[i]).collect::<Vec<_>>();
        g.iter().all(|a| g.iter().all(|b| g.contains(&compose(a, b))))
    }

    #[test]
    fn group_orders() {
        assert_eq!(ShapeKind::Tetrahedron.symmetries().len(), 24);
        for n in 4..=7 {
            assert_eq!(ShapeKind::Pyramid(n).symmetries().len(), 2 * n as usize);
        }
        assert_eq!(ShapeKind::TriangularPrism.symmetries().len(), 12);
        for k in [ShapeKind::Tetrahedron, ShapeKind::Pyramid(5), ShapeKind::TriangularPrism] {
            assert!(is_group(k));
            let slots = k.slots();
            for s in k.symmetries() {
                for &(a, b) in &slots {
                    assert!(k.slot_of(s[a], s[b]).is_some());
                }
            }
        }
    }

    #[test]
    fn record_round_trip() {
        let f = |p, q| AngleFraction::new(p, q).unwrap();
        let d = Decoration::new(
            ShapeKind::TriangularPrism,
            vec![f(1, 2), f(1, 3), f(1, 4), f(2, 4), f(1, 5), f(1, 6), f(1, 7), f(1, 8), f(3, 9)],
        )
        .unwrap();
        assert_eq!(d.record(), "(1/2,1/3,1/4;2/4;1/5,1/6;1/7,1/8,3/9)");
        assert_eq!(Decoration::parse(ShapeKind::TriangularPrism, &d.record()).unwrap(), d);
        let p = Decoration::new(ShapeKind::Pyramid(4), vec![f(1, 2); 8]).unwrap();
        assert_eq!(p.record(), "(1/2,1/2,1/2,1/2;1/2,1/2,1/2,1/2)");
        assert!(Decoration::parse(ShapeKind::Pyramid(4), "(1/2,1/2;1/2)").is_err());
    }

    #[test]
    fn base_swap_gives_same_record() {
        let f = |p, q| AngleFraction::new(p, q).unwrap();
        let d = Decoration::new(
            ShapeKind::TriangularPrism,
            vec![f(1, 2), f(1, 3), f(1, 4), f(2, 5), f(1, 5), f(1, 6), f(1, 7), f(1, 8), f(3, 9)],
        )
        .unwrap();
        let swap = vec![1, 0, 2, 3, 4];
        assert_eq!(d.permuted(&swap).canonical_record(), d.canonical_record());
        let (rec, sigma) = d.canonical();
        assert_eq!(d.permuted(&sigma).record(), rec);
    }
}
