//! Face tilings of decomposed prisms.

use serde::{Deserialize, Serialize};

use crate::engine::prisms::PrismScheme;
use crate::links::{base_patterns_for_prism, Triangle2D};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    /// Joins the two bases.
    Vertical,
    /// Parallel to the bases.
    Horizontal,
}

/// A mirror trace on a side face, drawn in the unit square with the bases
/// at `y = 0` and `y = 1`. A vertical segment sits at `x = at` and runs over
/// `y ∈ [from, to]`; a horizontal one the other way round.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub axis: Axis,
    pub at: f64,
    pub from: f64,
    pub to: f64,
}

/// Combinatorial tiling of a side face by mirror traces.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SideTiling {
    pub segments: Vec<Segment>,
}

impl SideTiling {
    /// Side of a scheme: `vertical` full-height lines and optionally one
    /// full-width horizontal line.
    pub fn grid(vertical: u32, horizontal: bool) -> Self {
        let mut segments: Vec<Segment> = (1..=vertical)
            .map(|i| Segment {
                axis: Axis::Vertical,
                at: i as f64 / (vertical + 1) as f64,
                from: 0.0,
                to: 1.0,
            })
            .collect();
        if horizontal {
            segments.push(Segment {
                axis: Axis::Horizontal,
                at: 0.5,
                from: 0.0,
                to: 1.0,
            });
        }
        Self { segments }
    }

    fn count(&self, axis: Axis) -> usize {
        self.segments.iter().filter(|s| s.axis == axis).count()
    }

    /// Corners lie in one tile, boundary points in at most two and interior
    /// points in one, two or four: every trace crosses the face from edge to
    /// opposite edge, away from the corners, and no two traces share an
    /// endpoint.
    pub fn is_lattice(&self) -> bool {
        const EPS: f64 = 1e-12;
        let spans = self
            .segments
            .iter()
            .all(|s| s.from.abs() < EPS && (s.to - 1.0).abs() < EPS && s.at > EPS && s.at < 1.0 - EPS);
        let distinct = self.segments.iter().enumerate().all(|(i, s)| {
            self.segments[i + 1..]
                .iter()
                .all(|t| t.axis != s.axis || (t.at - s.at).abs() > EPS)
        });
        spans && distinct
    }

    /// At most one trace of each direction.
    pub fn within_bounds(&self) -> bool {
        self.count(Axis::Vertical) <= 1 && self.count(Axis::Horizontal) <= 1
    }
}

/// Side tilings of a scheme, in side order.
pub fn side_tilings(scheme: &PrismScheme) -> Vec<SideTiling> {
    scheme
        .side_splits
        .iter()
        .map(|&n| SideTiling::grid(n - 1, scheme.horizontal))
        .collect()
}

/// [`lattice_check_with`] on the scheme's own side tilings.
pub fn lattice_check(scheme: &PrismScheme) -> bool {
    lattice_check_with(scheme, &side_tilings(scheme))
}

/// Sides are lattices with at most one trace per direction, and the base
/// pattern is a decomposition of a triangle by the tile's base with no side
/// cut more than twice.
pub fn lattice_check_with(scheme: &PrismScheme, sides: &[SideTiling]) -> bool {
    if sides.len() != 3 || !sides.iter().all(|s| s.is_lattice() && s.within_bounds()) {
        return false;
    }
    let verticals: Vec<u32> = sides
        .iter()
        .map(|s| s.segments.iter().filter(|g| g.axis == Axis::Vertical).count() as u32)
        .collect();
    let splits: Vec<u32> = verticals.iter().map(|v| v + 1).collect();
    if splits != scheme.side_splits {
        return false;
    }
    let [a, b, c] = scheme.triangle;
    let base = Triangle2D::coxeter(a, b, c);
    base_patterns_for_prism(&base, crate::engine::prisms::BASE_PATTERN_TILES)
        .iter()
        .any(|d| d.pattern_type() == scheme.pattern_type() && d.side_types == scheme.side_types)
}
