//! Compact triangular prisms with prescribed dihedral angles.
//!
//! Faces: 0 = base `A1A2A3`, 1 = base `B1B2B3`, `i+1` = side `AiAi+1Bi+1Bi`.
//! The nine angles are indexed in record order
//! `(A3B3, A1B1, A2B2; A1A2; A2A3, A3A1; B1B2, B2B3, B3B1)`.

use num_rational::Ratio;
use num_traits::{Float, FloatConst};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::SquareMatrix;
use super::minkowski::{self, Vector};
use super::{KernelError, Realization};
use crate::angle::AngleFraction;

/// Face pair of each angle slot.
pub const SLOT_FACES: [(usize, usize); 9] = [
    (3, 4),
    (2, 4),
    (2, 3),
    (0, 2),
    (0, 3),
    (0, 4),
    (1, 2),
    (1, 3),
    (1, 4),
];

/// Faces through `A1, A2, A3, B1, B2, B3`.
pub const VERTEX_FACES: [[usize; 3]; 6] = [
    [0, 2, 4],
    [0, 2, 3],
    [0, 3, 4],
    [1, 2, 4],
    [1, 2, 3],
    [1, 3, 4],
];

/// Slots of the three lateral edges.
pub const LATERAL_SLOTS: [usize; 3] = [0, 1, 2];

/// Number of deterministic Newton starts.
pub const MULTI_STARTS: usize = 8;

pub fn slot_of(a: usize, b: usize) -> Option<usize> {
    let key = if a < b { (a, b) } else { (b, a) };
    SLOT_FACES.iter().position(|&(x, y)| (x.min(y), x.max(y)) == key)
}

/// Necessary conditions for a compact non-obtuse prism: each vertex angle sum
/// exceeds π, the lateral 3-circuit sums to less than π, and the six base
/// angles are not all right.
pub fn andreev_prefilter_prism(angles: &[AngleFraction; 9]) -> bool {
    let half = Ratio::new(1, 2);
    if angles.iter().any(|a| a.ratio() > half) {
        return false;
    }
    let one = Ratio::from_integer(1);
    let vertex_ok = VERTEX_FACES.iter().all(|faces| {
        let sum: Ratio<i64> = [(0, 1), (0, 2), (1, 2)]
            .iter()
            .map(|&(x, y)| angles[slot_of(faces[x], faces[y]).unwrap()].ratio())
            .sum();
        sum > one
    });
    let circuit: Ratio<i64> = LATERAL_SLOTS.iter().map(|&s| angles[s].ratio()).sum();
    let all_base_right = (3..9).all(|s| angles[s].ratio() == half);
    vertex_ok && circuit < one && !all_base_right
}

// Unknown k sets coordinate UNKNOWN_COORD[k].1 of normal UNKNOWN_COORD[k].0.
// Gauge: n0 = e0, n1 in span(e0,e3), n2 in span(e0,e1,e3).
const UNKNOWN_COORD: [(usize, usize); 13] = [
    (1, 0),
    (1, 3),
    (2, 0),
    (2, 1),
    (2, 3),
    (3, 0),
    (3, 1),
    (3, 2),
    (3, 3),
    (4, 0),
    (4, 1),
    (4, 2),
    (4, 3),
];

fn normals_of<T: Float>(u: &[T]) -> [Vector<T>; 5] {
    let mut n = [[T::zero(); 4]; 5];
    n[0][0] = T::one();
    for (k, &(f, c)) in UNKNOWN_COORD.iter().enumerate() {
        n[f][c] = u[k];
    }
    n
}

fn residual<T: Float>(u: &[T], cosines: &[T; 9]) -> Vec<T> {
    let n = normals_of(u);
    let mut r = Vec::with_capacity(13);
    for f in 1..5 {
        r.push(minkowski::dot(&n[f], &n[f]) - T::one());
    }
    for (s, &(a, b)) in SLOT_FACES.iter().enumerate() {
        r.push(minkowski::dot(&n[a], &n[b]) + cosines[s]);
    }
    r
}

fn jacobian<T: Float>(u: &[T]) -> SquareMatrix<T> {
    let n = normals_of(u);
    let eta = |c: usize| if c == 3 { -T::one() } else { T::one() };
    let two = T::one() + T::one();
    let mut jac = SquareMatrix::zeros(13);
    for (k, &(f, c)) in UNKNOWN_COORD.iter().enumerate() {
        for g in 1..5 {
            if g == f {
                jac[(g - 1, k)] = two * eta(c) * n[f][c];
            }
        }
        for (s, &(a, b)) in SLOT_FACES.iter().enumerate() {
            let mut d = T::zero();
            if a == f {
                d = d + eta(c) * n[b][c];
            }
            if b == f {
                d = d + eta(c) * n[a][c];
            }
            jac[(4 + s, k)] = d;
        }
    }
    jac
}

fn norm_inf<T: Float>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

fn newton<T: Float>(mut u: Vec<T>, cosines: &[T; 9], tol: T) -> Option<Vec<T>> {
    let mut r = residual(&u, cosines);
    for _ in 0..200 {
        let err = norm_inf(&r);
        if err <= tol {
            return Some(u);
        }
        let jac = jacobian(&u);
        let rhs: Vec<T> = r.iter().map(|&x| -x).collect();
        let step = jac.solve(&rhs)?;
        let mut lambda = T::one();
        loop {
            let trial: Vec<T> = u.iter().zip(&step).map(|(&a, &d)| a + lambda * d).collect();
            let rt = residual(&trial, cosines);
            if norm_inf(&rt) < err || lambda < T::from(1e-6).unwrap() {
                u = trial;
                r = rt;
                break;
            }
            lambda = lambda / (T::one() + T::one());
        }
    }
    (norm_inf(&r) <= tol).then_some(u)
}

fn seed<T: Float>(rng: &mut ChaCha8Rng, cosines: &[T; 9], pairing: Option<T>) -> Vec<T> {
    let mut u: Vec<T> = (0..13).map(|_| T::from(rng.gen_range(-1.5..1.5)).unwrap()).collect();
    let random = T::from(-1.0 - rng.gen_range(0.1..2.0)).unwrap();
    let p = pairing.unwrap_or(random);
    u[0] = p;
    u[1] = (p * p - T::one()).sqrt();
    // <n0, n_side> is the first coordinate of each side normal.
    u[2] = -cosines[3];
    u[5] = -cosines[4];
    u[9] = -cosines[5];
    u
}

/// Orients the solved configuration and computes its six vertices.
fn assemble<T: Float>(normals: [Vector<T>; 5], tol: T) -> Result<Realization<T>, KernelError> {
    if minkowski::dot(&normals[0], &normals[1]) >= -T::one() - tol {
        return Err(KernelError::NonCompact(0));
    }
    let mut vertices = Vec::with_capacity(6);
    let mut incidence = Vec::with_capacity(6);
    for (vi, faces) in VERTEX_FACES.iter().enumerate() {
        let raw = minkowski::orthogonal_complement(&normals[faces[0]], &normals[faces[1]], &normals[faces[2]]);
        let q = minkowski::dot(&raw, &raw);
        if q >= -tol {
            return Err(KernelError::NonCompact(vi));
        }
        let mut p = minkowski::scale(&raw, T::one() / (-q).sqrt());
        let others: Vec<usize> = (0..5).filter(|f| !faces.contains(f)).collect();
        let signs: Vec<T> = others.iter().map(|&f| minkowski::dot(&p, &normals[f])).collect();
        if signs.iter().all(|&s| s > tol) {
            p = minkowski::neg(&p);
        } else if !signs.iter().all(|&s| s < -tol) {
            return Err(KernelError::NonCompact(vi));
        }
        vertices.push(p);
        incidence.push(faces.to_vec());
    }
    let future = vertices.iter().filter(|p| p[3] > T::zero()).count();
    let mut normals = normals.to_vec();
    if future == 0 {
        normals.iter_mut().for_each(|n| *n = minkowski::neg(n));
        vertices.iter_mut().for_each(|p| *p = minkowski::neg(p));
    } else if future != 6 {
        return Err(KernelError::NonCompact(0));
    }
    Ok(Realization {
        normals,
        vertices,
        incidence,
    })
}

/// Solves for the five unit normals of a compact prism with the given angles
/// by damped Newton iteration from deterministic starts.
pub fn realize_prism<T: Float + FloatConst>(angles: &[T; 9]) -> Result<Realization<T>, KernelError> {
    realize_prism_seeded(angles, 0x70_72_69_73_6d)
}

/// As [`realize_prism`], with an explicit seed for the start schedule.
pub fn realize_prism_seeded<T: Float + FloatConst>(angles: &[T; 9], seed_value: u64) -> Result<Realization<T>, KernelError> {
    let cosines: [T; 9] = std::array::from_fn(|s| angles[s].cos());
    let tol = T::from(1e-12).unwrap().max(T::epsilon() * T::from(100.0).unwrap());
    let geo_tol = T::from(super::ALGEBRAIC_TOL).unwrap().max(tol);
    let mut rng = ChaCha8Rng::seed_from_u64(seed_value);
    let mut last = KernelError::NoConvergence;
    let completions = gram_completions(angles);
    for i in 0..MULTI_STARTS {
        // Half the starts pin the base pairing to a Gram completion.
        let pinned = completions.get(i % 2).filter(|_| i < MULTI_STARTS / 2 || completions.is_empty());
        let start = seed(&mut rng, &cosines, pinned.copied());
        let Some(u) = newton(start, &cosines, tol) else {
            continue;
        };
        match assemble(normals_of(&u), geo_tol) {
            Ok(r) => return Ok(r),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Exact-angle convenience wrapper around [`realize_prism`].
pub fn realize_prism_fractions(angles: &[AngleFraction; 9]) -> Result<Realization<f64>, KernelError> {
    realize_prism(&angles.map(|a| a.value::<f64>()))
}

/// Completes the prism Gram matrix: the values `x = <n0,n1> < -1` making the
/// 5×5 Gram matrix singular (its determinant is quadratic in `x`).
pub fn gram_completions<T: Float + FloatConst>(angles: &[T; 9]) -> Vec<T> {
    let gram_at = |x: T| {
        let mut g = SquareMatrix::identity(5);
        g[(0, 1)] = x;
        g[(1, 0)] = x;
        for (s, &(a, b)) in SLOT_FACES.iter().enumerate() {
            g[(a, b)] = -angles[s].cos();
            g[(b, a)] = -angles[s].cos();
        }
        g
    };
    let two = T::one() + T::one();
    let d0 = gram_at(T::zero()).determinant();
    let dp = gram_at(T::one()).determinant();
    let dm = gram_at(-T::one()).determinant();
    let a = (dp + dm) / two - d0;
    let b = (dp - dm) / two;
    let c = d0;
    let mut roots = Vec::new();
    if a.abs() <= T::epsilon() {
        if b.abs() > T::epsilon() {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - T::from(4.0).unwrap() * a * c;
        if disc >= T::zero() {
            let s = disc.sqrt();
            roots.push((-b - s) / (two * a));
            roots.push((-b + s) / (two * a));
        }
    }
    let mut out: Vec<T> = roots.into_iter().filter(|&x| x < -T::one()).collect();
    out.sort_by(|x, y| x.partial_cmp(y).unwrap());
    out
}
