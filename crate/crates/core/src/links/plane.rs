//! Constant-curvature planes in a homogeneous 3-vector model.
//!
//! Points are vectors `x`, lines are covectors `l` with the inside of a line
//! being `l·x <= 0`. With `K = diag(1, 1, κ)`:
//! - spherical (κ = 1): unit vectors of R³;
//! - euclidean (κ = 0): `(x, y, 1)`;
//! - hyperbolic (κ = -1): `xᵀJx = -1`, `x₂ > 0` with `J = diag(1, 1, -1)`.
//!
//! Lines are normalized by `lᵀKl = 1`, reflection in `l` is
//! `x ↦ x - 2(l·x)Kl`, and the interior angle between two outward lines is
//! `acos(-lᵀKl')`.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

pub type P3 = [f64; 3];
pub type M3 = [[f64; 3]; 3];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Geometry {
    Spherical,
    Euclidean,
    Hyperbolic,
}

impl Geometry {
    pub fn kappa(self) -> f64 {
        match self {
            Geometry::Spherical => 1.0,
            Geometry::Euclidean => 0.0,
            Geometry::Hyperbolic => -1.0,
        }
    }

    /// `lᵀKm` for covectors.
    pub fn line_dot(self, l: &P3, m: &P3) -> f64 {
        l[0] * m[0] + l[1] * m[1] + self.kappa() * l[2] * m[2]
    }

    pub fn k_of(self, l: &P3) -> P3 {
        [l[0], l[1], self.kappa() * l[2]]
    }

    pub fn normalize_line(self, l: &P3) -> Option<P3> {
        let q = self.line_dot(l, l);
        (q > 1e-18).then(|| scale(l, 1.0 / q.sqrt()))
    }

    /// Rescales a homogeneous vector to the model's point normalization.
    /// Spherical points keep their direction.
    pub fn normalize_point(self, x: &P3) -> Option<P3> {
        match self {
            Geometry::Spherical => {
                let n = dot(x, x).sqrt();
                (n > 1e-12).then(|| scale(x, 1.0 / n))
            }
            Geometry::Euclidean => (x[2].abs() > 1e-12).then(|| scale(x, 1.0 / x[2])),
            Geometry::Hyperbolic => {
                let q = x[0] * x[0] + x[1] * x[1] - x[2] * x[2];
                if q >= -1e-14 {
                    return None;
                }
                let s = (-q).sqrt() * x[2].signum();
                Some(scale(x, 1.0 / s))
            }
        }
    }

    /// The point at distance `d` from the origin `(0,0,1)` in direction `phi`.
    pub fn polar(self, d: f64, phi: f64) -> P3 {
        let (c, s) = (phi.cos(), phi.sin());
        match self {
            Geometry::Spherical => [d.sin() * c, d.sin() * s, d.cos()],
            Geometry::Euclidean => [d * c, d * s, 1.0],
            Geometry::Hyperbolic => [d.sinh() * c, d.sinh() * s, d.cosh()],
        }
    }

    pub fn reflection(self, l: &P3) -> M3 {
        let kl = self.k_of(l);
        let mut m = identity();
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell -= 2.0 * kl[i] * l[j];
            }
        }
        m
    }

    /// Interior angle between two outward lines through a common point.
    pub fn angle(self, l: &P3, m: &P3) -> f64 {
        (-self.line_dot(l, m)).clamp(-1.0, 1.0).acos()
    }

    /// Line through two points.
    pub fn line_through(self, p: &P3, q: &P3) -> Option<P3> {
        self.normalize_line(&cross(p, q))
    }

    /// Intersection of two lines, normalized; for the sphere the sign is
    /// arbitrary.
    pub fn meet(self, l: &P3, m: &P3) -> Option<P3> {
        self.normalize_point(&cross(l, m))
    }

    /// Whether `g` preserves the model's bilinear structure.
    pub fn isometry_defect(self, g: &M3) -> f64 {
        match self {
            Geometry::Spherical | Geometry::Hyperbolic => {
                let j = [1.0, 1.0, self.kappa()];
                let mut worst: f64 = 0.0;
                for a in 0..3 {
                    for b in 0..3 {
                        let v: f64 = (0..3).map(|k| g[k][a] * j[k] * g[k][b]).sum();
                        let t = if a == b { j[a] } else { 0.0 };
                        worst = worst.max((v - t).abs());
                    }
                }
                worst
            }
            Geometry::Euclidean => {
                let mut worst = g[2][0].abs().max(g[2][1].abs()).max((g[2][2] - 1.0).abs());
                for a in 0..2 {
                    for b in 0..2 {
                        let v = g[0][a] * g[0][b] + g[1][a] * g[1][b];
                        let t = if a == b { 1.0 } else { 0.0 };
                        worst = worst.max((v - t).abs());
                    }
                }
                worst
            }
        }
    }

    /// Distance between two normalized points.
    pub fn distance(self, p: &P3, q: &P3) -> f64 {
        match self {
            Geometry::Spherical => dot(p, q).clamp(-1.0, 1.0).acos(),
            Geometry::Euclidean => ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt(),
            Geometry::Hyperbolic => (p[2] * q[2] - p[0] * q[0] - p[1] * q[1]).max(1.0).acosh(),
        }
    }
}

pub fn dot(a: &P3, b: &P3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn scale(a: &P3, s: f64) -> P3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add(a: &P3, b: &P3) -> P3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn cross(a: &P3, b: &P3) -> P3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Relative tolerance for incidence and coincidence tests.
pub const CLOSE: f64 = 1e-7;

fn norm_inf(a: &P3) -> f64 {
    a.iter().fold(0.0, |m, x| f64::max(m, x.abs()))
}

/// Coincidence up to a tolerance relative to the coordinate size.
pub fn close(a: &P3, b: &P3) -> bool {
    max_diff(a, b) <= CLOSE * (1.0 + norm_inf(a).max(norm_inf(b)))
}

/// `l·x` scaled by the sizes of `l` and `x`.
pub fn rel_side(l: &P3, x: &P3) -> f64 {
    dot(l, x) / (norm_inf(l) * norm_inf(x)).max(1e-300)
}

pub fn incident(l: &P3, x: &P3) -> bool {
    rel_side(l, x).abs() <= CLOSE
}

pub fn max_diff(a: &P3, b: &P3) -> f64 {
    (0..3).fold(0.0, |m, i| f64::max(m, (a[i] - b[i]).abs()))
}

pub fn identity() -> M3 {
    [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
}

pub fn apply(m: &M3, x: &P3) -> P3 {
    [dot(&m[0], x), dot(&m[1], x), dot(&m[2], x)]
}

pub fn compose(a: &M3, b: &M3) -> M3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(a: &M3) -> M3 {
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = a[j][i];
        }
    }
    out
}

pub fn inverse(a: &M3) -> Option<M3> {
    let det = dot(&a[0], &cross(&a[1], &a[2]));
    if det.abs() < 1e-14 {
        return None;
    }
    let cols = [cross(&a[1], &a[2]), cross(&a[2], &a[0]), cross(&a[0], &a[1])];
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = cols[j][i] / det;
        }
    }
    Some(out)
}

/// Image of a line under the point map `g`: `g⁻ᵀ l`.
pub fn map_line(g_inv: &M3, l: &P3) -> P3 {
    apply(&transpose(g_inv), l)
}

/// Triangle with angles `angles[i]·π` at vertex `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Triangle2D {
    pub angles: [Ratio<i64>; 3],
}

/// A realized triangle: vertices `v[i]` and outward sides `s[i]` opposite `v[i]`.
#[derive(Clone, Debug)]
pub struct PlacedTriangle {
    pub geometry: Geometry,
    pub vertices: [P3; 3],
    pub sides: [P3; 3],
}

impl Triangle2D {
    pub fn new(angles: [Ratio<i64>; 3]) -> Self {
        assert!(angles.iter().all(|a| *a > Ratio::from_integer(0) && *a < Ratio::from_integer(1)));
        Self { angles }
    }

    /// Coxeter triangle with angles `π/k, π/l, π/m`.
    pub fn coxeter(k: u32, l: u32, m: u32) -> Self {
        Self::new([k, l, m].map(|q| Ratio::new(1, q as i64)))
    }

    pub fn geometry(&self) -> Geometry {
        let sum: Ratio<i64> = self.angles.iter().sum();
        match sum.cmp(&Ratio::from_integer(1)) {
            std::cmp::Ordering::Greater => Geometry::Spherical,
            std::cmp::Ordering::Equal => Geometry::Euclidean,
            std::cmp::Ordering::Less => Geometry::Hyperbolic,
        }
    }

    pub fn angle_values(&self) -> [f64; 3] {
        self.angles.map(|a| *a.numer() as f64 * PI / *a.denom() as f64)
    }

    /// Realization with `v0` at the origin and `v1` on the positive x-axis.
    pub fn place(&self) -> PlacedTriangle {
        let g = self.geometry();
        let [a0, a1, a2] = self.angle_values();
        let side = |x: f64, y: f64, z: f64| -> f64 {
            let c = (x.cos() + y.cos() * z.cos()) / (y.sin() * z.sin());
            match g {
                Geometry::Spherical => c.clamp(-1.0, 1.0).acos(),
                Geometry::Hyperbolic => c.max(1.0).acosh(),
                Geometry::Euclidean => unreachable!(),
            }
        };
        let (b, c) = match g {
            Geometry::Euclidean => (a1.sin(), a2.sin()),
            _ => (side(a1, a0, a2), side(a2, a0, a1)),
        };
        let vertices = [g.polar(0.0, 0.0), g.polar(c, 0.0), g.polar(b, a0)];
        let inner = add(&add(&vertices[0], &vertices[1]), &vertices[2]);
        let sides = std::array::from_fn(|i| {
            let l = g
                .line_through(&vertices[(i + 1) % 3], &vertices[(i + 2) % 3])
                .expect("distinct vertices");
            if dot(&l, &inner) > 0.0 {
                scale(&l, -1.0)
            } else {
                l
            }
        });
        PlacedTriangle {
            geometry: g,
            vertices,
            sides,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placed_angles_match() {
        for t in [
            Triangle2D::coxeter(2, 3, 5),
            Triangle2D::coxeter(3, 3, 3),
            Triangle2D::coxeter(2, 3, 7),
            Triangle2D::coxeter(2, 4, 4),
            Triangle2D::new([Ratio::new(1, 2), Ratio::new(1, 2), Ratio::new(1, 2)]),
        ] {
            let p = t.place();
            let want = t.angle_values();
            for i in 0..3 {
                let got = p.geometry.angle(&p.sides[(i + 1) % 3], &p.sides[(i + 2) % 3]);
                assert!((got - want[i]).abs() < 1e-12, "{t:?} {i}: {got} vs {}", want[i]);
                for (j, s) in p.sides.iter().enumerate() {
                    let v = dot(s, &p.vertices[i]);
                    if i == j {
                        assert!(v < -1e-6);
                    } else {
                        assert!(v.abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn reflections_are_isometric_involutions() {
        for t in [Triangle2D::coxeter(2, 3, 5), Triangle2D::coxeter(2, 3, 6), Triangle2D::coxeter(2, 3, 7)] {
            let p = t.place();
            for s in &p.sides {
                let r = p.geometry.reflection(s);
                assert!(p.geometry.isometry_defect(&r) < 1e-12);
                let rr = compose(&r, &r);
                assert!(max_diff(&rr[0], &[1.0, 0.0, 0.0]) < 1e-12);
                assert!(max_diff(&rr[2], &[0.0, 0.0, 1.0]) < 1e-12);
            }
        }
    }
}
