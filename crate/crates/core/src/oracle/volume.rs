//! Monte Carlo estimate of volume ratios in the projective ball model.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::engine::CatalogEntry;
use crate::kernel::minkowski::{self, Vector};
use crate::kernel::tetra::CoxeterTetrahedron;

use super::{unfold, Tile};

/// Seed used when `COXDEC_SEED` is unset.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Sampling seed: `COXDEC_SEED` when set to an integer, else [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var("COXDEC_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub estimate: f64,
    /// Three standard errors.
    pub half_width: f64,
}

impl VolumeEstimate {
    pub fn low(&self) -> f64 {
        self.estimate - self.half_width
    }

    pub fn high(&self) -> f64 {
        self.estimate + self.half_width
    }

    pub fn contains(&self, x: f64) -> bool {
        self.low() <= x && x <= self.high()
    }
}

/// Volume of `{x : <x,n> <= 0}` with standard error, sampling uniformly in
/// the Klein-model bounding box of `vertices` after moving their centroid
/// to the origin. Volume density is `(1 - |u|^2)^-2`.
pub fn polytope_volume(planes: &[Vector<f64>], vertices: &[Vector<f64>], samples: usize, rng: &mut ChaCha8Rng) -> (f64, f64) {
    let sum = vertices.iter().fold([0.0; 4], |a, v| minkowski::add(&a, v));
    let c = minkowski::to_hyperboloid(&sum).expect("timelike centroid");
    let r = minkowski::recentre(&c);
    let planes: Vec<Vector<f64>> = planes.iter().map(|n| minkowski::apply(&r, n)).collect();
    let pts: Vec<[f64; 3]> = vertices.iter().map(|v| minkowski::klein(&minkowski::apply(&r, v))).collect();
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in &pts {
        for i in 0..3 {
            lo[i] = lo[i].min(p[i]);
            hi[i] = hi[i].max(p[i]);
        }
    }
    let box_volume: f64 = (0..3).map(|i| hi[i] - lo[i]).product();
    let (mut s1, mut s2) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let u: [f64; 3] = std::array::from_fn(|i| rng.gen_range(lo[i]..hi[i]));
        let r2 = u[0] * u[0] + u[1] * u[1] + u[2] * u[2];
        if r2 >= 1.0 {
            continue;
        }
        let x = [u[0], u[1], u[2], 1.0];
        if planes.iter().all(|n| minkowski::dot(&x, n) <= 0.0) {
            let w = 1.0 / ((1.0 - r2) * (1.0 - r2));
            s1 += w;
            s2 += w * w;
        }
    }
    let n = samples as f64;
    let mean = s1 / n;
    let var = (s2 / n - mean * mean).max(0.0) / n;
    (box_volume * mean, box_volume * var.sqrt())
}

/// `vol(P) / vol(Q)` from independent samples, with a three-sigma
/// half-width by the delta method.
pub fn ratio_estimate(p: (&[Vector<f64>], &[Vector<f64>]), q: (&[Vector<f64>], &[Vector<f64>]), samples: usize, seed: u64) -> VolumeEstimate {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (vp, sp) = polytope_volume(p.0, p.1, samples, &mut rng);
    let (vq, sq) = polytope_volume(q.0, q.1, samples, &mut rng);
    let ratio = vp / vq;
    let rel = ((sp / vp).powi(2) + (sq / vq).powi(2)).sqrt();
    VolumeEstimate {
        estimate: ratio,
        half_width: 3.0 * ratio * rel,
    }
}

/// Volume of the union of an entry's tiles over the volume of one tile.
pub fn volume_ratio_check(entry: &CatalogEntry, tet: &CoxeterTetrahedron, samples: usize, seed: u64) -> Option<VolumeEstimate> {
    let tile = Tile::new(*tet).ok()?;
    let (_, hull) = unfold(&tile, &entry.words()).ok()?;
    Some(ratio_estimate(
        (&hull.planes, &hull.vertices),
        (&tile.realization.normals, &tile.realization.vertices),
        samples,
        seed,
    ))
}

/// Volume of the decomposed prism of a scheme over the volume of its tile,
/// both realized from their records.
pub fn scheme_volume_check(scheme: &crate::engine::prisms::PrismScheme, samples: usize, seed: u64) -> Option<VolumeEstimate> {
    use crate::kernel::prism::realize_prism_fractions;
    use crate::model::{Decoration, ShapeKind};
    let realize = |record: &str| {
        let d = Decoration::parse(ShapeKind::TriangularPrism, record).ok()?;
        let angles: [crate::angle::AngleFraction; 9] = d.angles.try_into().ok()?;
        realize_prism_fractions(&angles).ok()
    };
    let p = realize(&scheme.record)?;
    let f = realize(&scheme.tile)?;
    Some(ratio_estimate((&p.normals, &p.vertices), (&f.normals, &f.vertices), samples, seed))
}
