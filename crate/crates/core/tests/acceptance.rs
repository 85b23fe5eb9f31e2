//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::time::Instant;

use num_rational::BigRational;
use num_traits::ToPrimitive;

use pinwheel::aorta::{aorta_chain, box_counting_dimension, dyadic_scales, exact_dimension, verify_ifs_invariance};
use pinwheel::census::{orientation_census, uniformity_report};
use pinwheel::faces::MarkingGraph;
use pinwheel::fixed::{identity_fixed, is_self_similar, origin_configuration, placed_face, reflection_fixed, symmetric_cycles};
use pinwheel::fractile::{catalog, classified_faces, count_classes, kite_domino_triangles, Catalog};
use pinwheel::gallery::gallery;
use pinwheel::marking::mark_patch;
use pinwheel::spectral::{catalog_spectrum, is_left_eigenvector, is_right_eigenvector};
use pinwheel::substitution::{fuse_kite_domino, kite_domino_rule, pinwheel_supertile, supertile, Patch};
use pinwheel::{Isometry, ProtoId, QuadNum, Result};

const AREAS: [(i64, i64); 13] =
    [(1, 1), (1, 1), (1, 1), (6, 5), (9, 5), (1, 1), (9, 5), (6, 5), (9, 5), (6, 5), (7, 5), (7, 5), (13, 5)];

const FREQUENCIES: [(i64, i64); 13] = [
    (12, 85),
    (25, 204),
    (53, 510),
    (1, 10),
    (1, 10),
    (1, 10),
    (43, 510),
    (4, 51),
    (4, 51),
    (3, 85),
    (5, 204),
    (4, 255),
    (4, 255),
];

fn ratio((n, d): (i64, i64)) -> BigRational {
    BigRational::new(n.into(), d.into())
}

type Outcome = Result<(bool, String)>;

fn criterion_1() -> Outcome {
    let mut ok = true;
    for n in 0..=6u32 {
        ok &= pinwheel_supertile(n).len() == 5usize.pow(n);
    }
    for n in 0..=4u32 {
        let p = pinwheel_supertile(n);
        ok &= p.area() == QuadNum::from_int(5i64.pow(n)) * Patch::single(ProtoId::Triangle).area();
        ok &= p.interiors_disjoint();
    }
    Ok((ok, "5^n tiles for n<=6, exact cover for n<=4".into()))
}

fn criterion_2() -> Outcome {
    let mut ok = true;
    for d in 0..=6 {
        ok &= verify_ifs_invariance(d)?;
        let c = aorta_chain(d)?;
        ok &= *c.first() == pinwheel::Point::ratio(-1, 2, 0, 1) && *c.last() == pinwheel::Point::ratio(0, 1, 1, 2);
    }
    Ok((ok, "IFS invariance and endpoints for depth<=6".into()))
}

fn classes_of(cat: &Catalog, protos: &[ProtoId], level: u32) -> Result<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for &p in protos {
        for (_, c) in classified_faces(&kite_domino_triangles(p, level))? {
            match cat.class_of_key(c.achiral_key()) {
                Some(k) => out.insert(k.index),
                None => return Err(pinwheel::Error::Invariant("face outside the catalog".into())),
            };
        }
    }
    Ok(out)
}

fn criterion_3(cat: &Catalog) -> Outcome {
    let all = [ProtoId::Kite, ProtoId::DominoA, ProtoId::DominoB];
    let top = count_classes(&classified_faces(&kite_domino_triangles(ProtoId::Kite, 2))?);
    let early = classes_of(cat, &all, 1)?;
    let late = classes_of(cat, &[ProtoId::Kite], 2)?;
    let missing: Vec<usize> = late.difference(&early).copied().collect();
    let ok = top.achiral == 13 && top.chiral == 18 && missing.len() == 3 && early.is_subset(&late);
    Ok((ok, format!("level 3: {}/{} classes; absent at level 2: {missing:?}", top.achiral, top.chiral)))
}

fn criterion_4(cat: &Catalog) -> Outcome {
    let areas = cat.areas();
    let mut got = areas.clone();
    let mut want: Vec<BigRational> = AREAS.iter().copied().map(ratio).collect();
    let per_index = areas == want;
    got.sort();
    want.sort();
    let mut stable = true;
    for c in 1..=cat.chiral.len() {
        let f = placed_face(cat, c, &Isometry::identity());
        let a0 = f.area_at_depth(0)?;
        for d in 1..=4 {
            stable &= f.area_at_depth(d)? == a0;
        }
    }
    Ok((got == want && per_index && stable, format!("multiset and per-index match: {per_index}; depth-stable areas: {stable}")))
}

fn criterion_5(cat: &Catalog) -> Outcome {
    let s = catalog_spectrum(cat, false)?;
    let close = s
        .frequencies
        .iter()
        .zip(FREQUENCIES)
        .all(|(f, r)| (f - ratio(r).to_f64().unwrap_or(f64::NAN)).abs() < 5e-5);
    let right = is_right_eigenvector(&s.matrix, &s.areas, 5);
    let left = is_left_eigenvector(&s.matrix, &s.areas, 5);
    let ok = (s.perron - 5.0).abs() < 1e-9 && close && right;
    Ok((ok, format!("lambda={:.9}; A*area=5*area: {right}; area^T*A=5*area^T: {left} (row-major convention)", s.perron)))
}

fn criterion_6() -> Outcome {
    let d = exact_dimension();
    let exact = (d - 3f64.ln() / 5f64.sqrt().ln()).abs() < 1e-12 && (d - 1.3652).abs() < 5e-5;
    let bc = box_counting_dimension(&aorta_chain(10)?.to_f64(), &dyadic_scales(3, 8))?;
    let ok = exact && (1.31..=1.42).contains(&bc.dimension);
    Ok((ok, format!("exact {d:.6}, box counting {:.4}", bc.dimension)))
}

fn criterion_7(cat: &Catalog) -> Outcome {
    let fixed: BTreeSet<usize> = identity_fixed(cat).iter().map(|f| f.class).collect();
    let origin = origin_configuration(cat, 4)?;
    let at_origin: BTreeSet<usize> = origin.iter().map(|o| o.class).collect();
    let mut similar = true;
    for o in &origin {
        similar &= is_self_similar(cat, o.chiral_index, &o.classified.placement)?;
    }
    let reflected = reflection_fixed(cat);
    let cycles = symmetric_cycles(4)?;
    let periods: Vec<usize> = cycles.iter().map(|c| c.period()).collect();
    let tilings: usize = periods.iter().sum();
    let ok = similar && fixed == at_origin && reflected == vec![4, 6, 10] && tilings == 6;
    Ok((ok, format!("identity-fixed {fixed:?}, reflection-fixed {reflected:?}, half-turn periods {periods:?}")))
}

fn criterion_8() -> Outcome {
    let mut ok = true;
    let mut seen = Vec::new();
    for n in 2..=6u32 {
        let c = orientation_census(2 * n - 2)?;
        ok &= c.distinct() >= n as usize && c.stray == 0;
        seen.push(c.distinct());
    }
    Ok((ok, format!("distinct orientations at levels 2N-2 for N=2..6: {seen:?}")))
}

fn criterion_9() -> Outcome {
    let r = uniformity_report(&[100, 1000, 10000])?;
    let ok = r.decreasing() && r.discrepancy[2] < 0.05 && r.control[2] > 0.1;
    Ok((ok, format!("D* {:?}, pi/3 control {:?}", r.discrepancy, r.control)))
}

fn criterion_10() -> Outcome {
    let mut ok = true;
    for p in [ProtoId::Kite, ProtoId::DominoA, ProtoId::DominoB] {
        for level in 1..=2 {
            let fused = fuse_kite_domino(&supertile(p, level, kite_domino_rule())?.defuse())?;
            ok &= fused.unpaired.is_empty();
        }
        let marked = mark_patch(&kite_domino_triangles(p, 2))?;
        let graph = MarkingGraph::build(&marked.fragments)?;
        let (kites, dominoes) = marked.paired_centers();
        for (v, point) in graph.nodes.iter().enumerate() {
            let deg = graph.degree(v);
            ok &= (deg == 3) == kites.contains(point);
            ok &= (deg == 4) == dominoes.contains(point);
        }
    }
    Ok((ok, "fusion leaves no triangle unpaired; degree 3 at kite centers, 4 at domino centers".into()))
}

fn criterion_11() -> Outcome {
    let a = gallery(4)?;
    let b = gallery(4)?;
    let same = a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| x.name == y.name && x.svg == y.svg);
    Ok((same && a.len() >= 16, format!("{} figures, byte-identical: {same}", a.len())))
}

fn main() {
    let start = Instant::now();
    let cat = catalog();
    println!("catalog built in {:.1}s", start.elapsed().as_secs_f64());
    let checks: Vec<(u32, Box<dyn Fn() -> Outcome>)> = vec![
        (1, Box::new(criterion_1)),
        (2, Box::new(criterion_2)),
        (3, Box::new(|| criterion_3(cat))),
        (4, Box::new(|| criterion_4(cat))),
        (5, Box::new(|| criterion_5(cat))),
        (6, Box::new(criterion_6)),
        (7, Box::new(|| criterion_7(cat))),
        (8, Box::new(criterion_8)),
        (9, Box::new(criterion_9)),
        (10, Box::new(criterion_10)),
        (11, Box::new(criterion_11)),
    ];
    let mut failed = 0;
    for (n, check) in checks {
        let t = Instant::now();
        let (ok, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        failed += usize::from(!ok);
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {n}: {verdict} ({detail}) [{:.1}s]", t.elapsed().as_secs_f64());
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
