//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any
//! criterion fails.

use std::time::{Duration, Instant};

use coxdec::angle::{AngleFraction, MergeResult};
use coxdec::catalog::{build, Selection};
use coxdec::engine::placement::{minimal_quadrilateral_pyramids, splits_into_tetrahedra};
use coxdec::engine::prisms::{enumerate_prisms_into_prisms, BASE_PATTERN_TILES};
use coxdec::engine::{enumerate, enumerate_fundamental_tetrahedra, SearchConfig};
use coxdec::kernel::minkowski;
use coxdec::kernel::tetra::CoxeterTetrahedron;
use coxdec::links::tiling::{closure_triangle_keys, orbit_triangle_keys};
use coxdec::links::Tessellation;
use coxdec::model::{Decoration, ShapeKind};
use coxdec::oracle::volume::scheme_volume_check;
use coxdec::oracle::{lattice_check, link_check, verify_decomposition, volume_ratio_check, CHECK_TOL, DEFAULT_SEED};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FUNDAMENTAL_COUNT: usize = 9;
const SCHEME_COUNT: usize = 5;
const MAX_LEVEL_BOUND: usize = 8;
const VOLUME_SAMPLES: usize = 1_000_000;
const VOLUME_TIME_PER_ENTRY: Duration = Duration::from_secs(1);
const PYR7_TIME: Duration = Duration::from_secs(300);
const REFLECT_TOL: f64 = 1e-10;
const RANDOM_CASES: usize = 10_000;

struct Outcome {
    pass: usize,
    fail: usize,
}

impl Outcome {
    fn report(&mut self, n: usize, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        println!("{tag} criterion {n:>2}: {detail}");
        if ok {
            self.pass += 1;
        } else {
            self.fail += 1;
        }
    }
}

fn main() {
    let mut out = Outcome { pass: 0, fail: 0 };
    let config = SearchConfig::default();

    // 1
    let t = Instant::now();
    let at5 = enumerate_fundamental_tetrahedra(5);
    let at10 = enumerate_fundamental_tetrahedra(10);
    let dt = t.elapsed();
    let ok = at5 == at10 && at5.len() == FUNDAMENTAL_COUNT && dt < Duration::from_secs(1);
    out.report(1, ok, format!("{} fundamental tetrahedra at bound 5 and 10, equal: {}, {dt:.2?}", at5.len(), at5 == at10));

    // 2
    let t = Instant::now();
    let pyr7 = build(&config, Selection::Shape(ShapeKind::Pyramid(7)), None, DEFAULT_SEED).expect("enumeration");
    let dt = t.elapsed();
    out.report(2, pyr7.entries.is_empty() && dt < PYR7_TIME, format!("{} heptagonal pyramids, {dt:.2?}", pyr7.entries.len()));

    // 3
    let pyr6 = build(&config, Selection::Shape(ShapeKind::Pyramid(6)), None, DEFAULT_SEED).expect("enumeration");
    out.report(3, pyr6.entries.len() == 1, format!("{} hexagonal pyramid(s)", pyr6.entries.len()));

    let cats = enumerate(&config, None).expect("enumeration");

    // 4
    let mut minimal = 0;
    let mut split = 0;
    for cat in &cats {
        for idx in minimal_quadrilateral_pyramids(cat) {
            minimal += 1;
            split += splits_into_tetrahedra(cat, idx, 2) as usize;
        }
    }
    out.report(4, minimal > 0 && split == minimal, format!("{split}/{minimal} minimal quadrilateral pyramids split into two tetrahedra"));

    // 5
    let prisms: Vec<_> = cats
        .iter()
        .flat_map(|c| c.entries.iter().filter(|e| e.shape == ShapeKind::TriangularPrism))
        .collect();
    let top = prisms.iter().filter_map(|e| e.level).max().unwrap_or(0);
    let non_fundamental = prisms
        .iter()
        .filter(|e| {
            Decoration::parse(ShapeKind::TriangularPrism, &e.record.record)
                .is_ok_and(|d| d.angles.iter().any(|a| !a.is_fundamental()))
        })
        .count();
    let ok = !prisms.is_empty() && top < MAX_LEVEL_BOUND && non_fundamental == prisms.len();
    out.report(5, ok, format!("highest prism level {top} (< {MAX_LEVEL_BOUND}), {non_fundamental}/{} prisms with a non-fundamental angle", prisms.len()));

    // 6
    let mut level0 = 0;
    let mut three = 0;
    for cat in &cats {
        for (idx, e) in cat.entries.iter().enumerate() {
            if e.level == Some(0) {
                level0 += 1;
                three += splits_into_tetrahedra(cat, idx, 3) as usize;
            }
        }
    }
    out.report(6, level0 > 0 && three == level0, format!("{three}/{level0} level-0 prisms split into three tetrahedra"));

    // 7
    let schemes = enumerate_prisms_into_prisms(BASE_PATTERN_TILES);
    let fundamental_bases = schemes.iter().filter(|s| s.base_tiles == 1).count();
    let mut per_pattern = std::collections::BTreeMap::<(usize, [u32; 3]), Vec<bool>>::new();
    for s in schemes.iter().filter(|s| s.base_tiles > 1) {
        per_pattern.entry((s.base_tiles, s.edge_splits)).or_default().push(s.horizontal);
    }
    let two_variants = per_pattern.values().all(|v| v.contains(&true) && v.contains(&false) && v.len() == 2);
    let checked = schemes
        .iter()
        .filter(|s| lattice_check(s) && scheme_volume_check(s, VOLUME_SAMPLES, DEFAULT_SEED).is_some_and(|v| v.contains(s.tiles as f64)))
        .count();
    let ok = schemes.len() == SCHEME_COUNT && fundamental_bases == 1 && per_pattern.len() == 2 && two_variants && checked == schemes.len();
    out.report(
        7,
        ok,
        format!(
            "{} schemes: {fundamental_bases} with fundamental bases, {} base patterns with both side variants, {checked} pass lattice and volume",
            schemes.len(),
            per_pattern.len()
        ),
    );

    // 8
    let mut total = 0;
    let mut structural = 0;
    let mut linked = 0;
    let mut volume = 0;
    let mut worst = 0.0f64;
    let mut slowest = Duration::ZERO;
    for cat in &cats {
        for e in &cat.entries {
            total += 1;
            if let Ok(r) = verify_decomposition(e, &cat.tet) {
                worst = r.checks.iter().map(|c| c.residual).fold(worst, f64::max);
                structural += r.checks.iter().all(|c| c.pass && c.residual <= CHECK_TOL) as usize;
            }
            linked += link_check(e, &cat.tet) as usize;
            let t = Instant::now();
            let v = volume_ratio_check(e, &cat.tet, VOLUME_SAMPLES, DEFAULT_SEED);
            slowest = slowest.max(t.elapsed());
            volume += v.is_some_and(|v| v.contains(e.record.provenance.k as f64)) as usize;
        }
    }
    let ok = total > 0 && structural == total && linked == total && volume == total && slowest < VOLUME_TIME_PER_ENTRY;
    out.report(
        8,
        ok,
        format!("{structural}/{total} structural (worst residual {worst:.1e}), {linked}/{total} links, {volume}/{total} volume intervals contain k, slowest volume {slowest:.2?}"),
    );

    // 9
    let (merge_ok, merge_cases) = merge_laws();
    let canon_ok = canonical_laws();
    let reflect_worst = reflect_laws();
    let tilers_ok = [(2, 3, 7), (2, 3, 8), (2, 4, 5), (3, 3, 4), (2, 3, 5), (2, 4, 4)].iter().all(|&(k, l, m)| {
        let t = Tessellation::coxeter(k, l, m);
        closure_triangle_keys(&t, 12) == orbit_triangle_keys(&t, 12)
    });
    let ok = merge_ok && canon_ok && reflect_worst <= REFLECT_TOL && tilers_ok;
    out.report(
        9,
        ok,
        format!(
            "merge laws over {merge_cases} triples: {merge_ok}; canonical records over {RANDOM_CASES} decorations: {canon_ok}; reflections over {RANDOM_CASES} vectors worst {reflect_worst:.1e}; 2D tilers agree: {tilers_ok}"
        ),
    );

    // 10
    let a = build(&config, Selection::All, None, DEFAULT_SEED).expect("enumeration").to_json();
    let b = build(&config, Selection::All, None, DEFAULT_SEED).expect("enumeration").to_json();
    out.report(10, a == b, format!("two full runs give {} identical bytes: {}", a.len(), a == b));

    println!("{} passed, {} failed", out.pass, out.fail);
    if out.fail > 0 {
        std::process::exit(1);
    }
}

fn fractions() -> Vec<AngleFraction> {
    (2..=12u32)
        .flat_map(|q| (1..q).map(move |p| AngleFraction::new(p, q).expect("valid")))
        .filter(|a| a.parts() <= 11)
        .collect()
}

fn merged(a: AngleFraction, b: AngleFraction) -> Option<MergeResult> {
    a.merge(b).ok()
}

fn merge_laws() -> (bool, usize) {
    let all = fractions();
    let mut cases = 0;
    for &a in &all {
        for &b in all.iter().filter(|b| b.denom() == a.denom()) {
            if merged(a, b) != merged(b, a) {
                return (false, cases);
            }
            for &c in all.iter().filter(|c| c.denom() == a.denom()) {
                cases += 1;
                let left = match merged(a, b) {
                    Some(MergeResult::Angle(ab)) => merged(ab, c),
                    _ => None,
                };
                let right = match merged(b, c) {
                    Some(MergeResult::Angle(bc)) => merged(a, bc),
                    _ => None,
                };
                let total = a.parts() + b.parts() + c.parts();
                if total < a.denom() && left != right {
                    return (false, cases);
                }
            }
        }
    }
    (true, cases)
}

fn canonical_laws() -> bool {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let kinds = [
        ShapeKind::Tetrahedron,
        ShapeKind::Pyramid(4),
        ShapeKind::Pyramid(5),
        ShapeKind::Pyramid(6),
        ShapeKind::Pyramid(7),
        ShapeKind::TriangularPrism,
    ];
    (0..RANDOM_CASES).all(|i| {
        let kind = kinds[i % kinds.len()];
        let angles = (0..kind.slot_count())
            .map(|_| {
                let q = rng.gen_range(2..=12);
                AngleFraction::new(rng.gen_range(1..q), q).expect("valid")
            })
            .collect();
        let d = Decoration::new(kind, angles).expect("slot count");
        let c = d.canonical_record();
        let again = Decoration::parse(kind, &c).expect("parses").canonical_record();
        let syms = kind.symmetries();
        let s = &syms[rng.gen_range(0..syms.len())];
        again == c && d.permuted(s).canonical_record() == c
    })
}

fn reflect_laws() -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED ^ 1);
    let normals: Vec<_> = CoxeterTetrahedron::new([2, 2, 3, 2, 3, 5]).realize::<f64>().expect("compact").normals;
    let mut worst = 0.0f64;
    for i in 0..RANDOM_CASES {
        let e = &normals[i % normals.len()];
        let x: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
        let y: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-3.0..3.0));
        let (rx, ry) = (minkowski::reflect(&x, e), minkowski::reflect(&y, e));
        let scale = 1.0 + minkowski::dot(&x, &x).abs().max(minkowski::dot(&y, &y).abs());
        worst = worst
            .max(minkowski::max_diff(&minkowski::reflect(&rx, e), &x) / scale)
            .max((minkowski::dot(&rx, &ry) - minkowski::dot(&x, &y)).abs() / scale);
    }
    worst
}
