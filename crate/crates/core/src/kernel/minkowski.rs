//! Vectors and isometries of R^{3,1} with the form `x0y0 + x1y1 + x2y2 - x3y3`.
//!
//! Points of hyperbolic space are future timelike vectors with `<v,v> = -1`;
//! planes are unit spacelike normals `n`, with the closed half-space
//! `{x : <x,n> <= 0}` on the inside.

use num_traits::Float;

use super::linalg::SquareMatrix;

pub type Vector<T> = [T; 4];
pub type Isometry<T> = [[T; 4]; 4];

pub fn dot<T: Float>(a: &Vector<T>, b: &Vector<T>) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3]
}

pub fn add<T: Float>(a: &Vector<T>, b: &Vector<T>) -> Vector<T> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

pub fn sub<T: Float>(a: &Vector<T>, b: &Vector<T>) -> Vector<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]]
}

pub fn scale<T: Float>(a: &Vector<T>, s: T) -> Vector<T> {
    [a[0] * s, a[1] * s, a[2] * s, a[3] * s]
}

pub fn neg<T: Float>(a: &Vector<T>) -> Vector<T> {
    scale(a, -T::one())
}

/// Largest coordinate difference.
pub fn max_diff<T: Float>(a: &Vector<T>, b: &Vector<T>) -> T {
    (0..4).fold(T::zero(), |m, i| m.max((a[i] - b[i]).abs()))
}

/// `x - 2<x,e>e`, the reflection in the plane with unit normal `e`.
pub fn reflect<T: Float>(x: &Vector<T>, e: &Vector<T>) -> Vector<T> {
    let two = T::one() + T::one();
    sub(x, &scale(e, two * dot(x, e)))
}

/// Matrix of [`reflect`].
pub fn reflection<T: Float>(e: &Vector<T>) -> Isometry<T> {
    let two = T::one() + T::one();
    let je = [e[0], e[1], e[2], -e[3]];
    let mut m = identity();
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = *cell - two * e[i] * je[j];
        }
    }
    m
}

pub fn identity<T: Float>() -> Isometry<T> {
    let mut m = [[T::zero(); 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = T::one();
    }
    m
}

pub fn apply<T: Float>(m: &Isometry<T>, v: &Vector<T>) -> Vector<T> {
    let mut out = [T::zero(); 4];
    for (i, row) in m.iter().enumerate() {
        out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2] + row[3] * v[3];
    }
    out
}

pub fn compose<T: Float>(a: &Isometry<T>, b: &Isometry<T>) -> Isometry<T> {
    let mut out = [[T::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).fold(T::zero(), |acc, k| acc + a[i][k] * b[k][j]);
        }
    }
    out
}

/// Inverse of a Lorentz transformation, `J Mᵀ J`.
pub fn lorentz_inverse<T: Float>(m: &Isometry<T>) -> Isometry<T> {
    let sign = |i: usize| if i == 3 { -T::one() } else { T::one() };
    let mut out = [[T::zero(); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = sign(i) * m[j][i] * sign(j);
        }
    }
    out
}

/// Largest entry of `MᵀJM - J`.
pub fn isometry_defect<T: Float>(m: &Isometry<T>) -> T {
    let mut worst = T::zero();
    for i in 0..4 {
        for j in 0..4 {
            let ci = [m[0][i], m[1][i], m[2][i], m[3][i]];
            let cj = [m[0][j], m[1][j], m[2][j], m[3][j]];
            let target = if i != j {
                T::zero()
            } else if i == 3 {
                -T::one()
            } else {
                T::one()
            };
            worst = worst.max((dot(&ci, &cj) - target).abs());
        }
    }
    worst
}

/// General 4×4 inverse (for change-of-basis matrices that are not yet
/// known to be isometries).
pub fn general_inverse<T: Float>(m: &Isometry<T>) -> Option<Isometry<T>> {
    let sm = SquareMatrix::from_fn(4, |i, j| m[i][j]);
    let mut out = [[T::zero(); 4]; 4];
    for j in 0..4 {
        let mut e = [T::zero(); 4];
        e[j] = T::one();
        let col = sm.solve(&e)?;
        for i in 0..4 {
            out[i][j] = col[i];
        }
    }
    Some(out)
}

/// Matrix whose columns are the given vectors.
pub fn from_columns<T: Float>(cols: [&Vector<T>; 4]) -> Isometry<T> {
    let mut m = [[T::zero(); 4]; 4];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..4 {
            m[i][j] = c[i];
        }
    }
    m
}

fn det3<T: Float>(m: [[T; 3]; 3]) -> T {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// A vector Lorentz-orthogonal to `a`, `b` and `c` (zero if they are
/// linearly dependent).
pub fn orthogonal_complement<T: Float>(a: &Vector<T>, b: &Vector<T>, c: &Vector<T>) -> Vector<T> {
    // Euclidean generalized cross product of Ja, Jb, Jc.
    let rows = [
        [a[0], a[1], a[2], -a[3]],
        [b[0], b[1], b[2], -b[3]],
        [c[0], c[1], c[2], -c[3]],
    ];
    let mut out = [T::zero(); 4];
    for (j, o) in out.iter_mut().enumerate() {
        let mut minor = [[T::zero(); 3]; 3];
        for r in 0..3 {
            let mut cc = 0;
            for col in 0..4 {
                if col != j {
                    minor[r][cc] = rows[r][col];
                    cc += 1;
                }
            }
        }
        let d = det3(minor);
        *o = if j % 2 == 0 { -d } else { d };
    }
    out
}

/// Rescales a timelike vector onto the future sheet of the hyperboloid.
pub fn to_hyperboloid<T: Float>(v: &Vector<T>) -> Option<Vector<T>> {
    let q = dot(v, v);
    if q >= T::zero() {
        return None;
    }
    let s = (-q).sqrt();
    let s = if v[3] < T::zero() { -s } else { s };
    Some(scale(v, T::one() / s))
}

/// Rescales a spacelike vector to unit length.
pub fn unit_spacelike<T: Float>(v: &Vector<T>) -> Option<Vector<T>> {
    let q = dot(v, v);
    if q <= T::zero() {
        return None;
    }
    Some(scale(v, T::one() / q.sqrt()))
}

/// Hyperbolic distance between two points of the hyperboloid.
pub fn distance<T: Float>(a: &Vector<T>, b: &Vector<T>) -> T {
    (-dot(a, b)).max(T::one()).acosh()
}

/// Klein-model coordinates of a point.
pub fn klein<T: Float>(v: &Vector<T>) -> [T; 3] {
    [v[0] / v[3], v[1] / v[3], v[2] / v[3]]
}

/// Isometry exchanging the point `p` and the origin `(0,0,0,1)`.
pub fn recentre<T: Float>(p: &Vector<T>) -> Isometry<T> {
    let o = [T::zero(), T::zero(), T::zero(), T::one()];
    let d = sub(p, &o);
    match unit_spacelike(&d) {
        Some(u) => reflection(&u),
        None => identity(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflection_basics() {
        let e = [1.0f64, 0.0, 0.0, 0.0];
        assert_eq!(reflect(&e, &e), [-1.0, 0.0, 0.0, 0.0]);
        let e = unit_spacelike(&[0.3, 1.2, -0.4, 0.7]).unwrap();
        let x = [0.2, -0.7, 1.1, 2.0];
        let r = reflect(&x, &e);
        assert!(max_diff(&reflect(&r, &e), &x) < 1e-14);
        let m = reflection(&e);
        assert!(max_diff(&apply(&m, &x), &r) < 1e-14);
        assert!(isometry_defect(&m) < 1e-14);
        let inv = lorentz_inverse(&m);
        assert!(max_diff(&apply(&inv, &r), &x) < 1e-13);
    }

    #[test]
    fn complement_is_orthogonal() {
        let a = [1.0, 0.2, 0.0, 0.1];
        let b = [0.0, 1.0, 0.3, -0.2];
        let c = [0.4, 0.0, 1.0, 0.5];
        let x = orthogonal_complement(&a, &b, &c);
        for v in [a, b, c] {
            assert!(dot(&x, &v).abs() < 1e-14);
        }
        assert!(max_diff(&x, &[0.0; 4]) > 1e-3);
    }

    #[test]
    fn recentre_swaps() {
        let p = to_hyperboloid(&[0.3, -0.2, 0.5, 1.0]).unwrap();
        let m = recentre(&p);
        let o = apply(&m, &p);
        assert!(max_diff(&o, &[0.0, 0.0, 0.0, 1.0]) < 1e-13);
    }
}
