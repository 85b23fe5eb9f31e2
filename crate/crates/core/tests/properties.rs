use std::sync::OnceLock;

use proptest::prelude::*;

use pinwheel::aorta::aorta_chain;
use pinwheel::classify::classify_face;
use pinwheel::faces::Face;
use pinwheel::fractile::{classified_faces, kite_domino_triangles};
use pinwheel::io::{isometry_from, isometry_json, load_patch, save_patch};
use pinwheel::marking::Fragment;
use pinwheel::render::{RenderSpec, Scene, Style};
use pinwheel::substitution::{pinwheel_rule, pinwheel_supertile, substitute_patch, PlacedTile};
use pinwheel::{Isometry, Patch, Point, ProtoId, QuadNum};

fn quad() -> impl Strategy<Value = QuadNum> {
    (-20i64..20, 1i64..7, -5i64..5, 1i64..4)
        .prop_map(|(a, b, c, d)| QuadNum::ratio(a, b) + QuadNum::ratio(c, d) * QuadNum::sqrt5())
}

fn isometry() -> impl Strategy<Value = Isometry> {
    (0u32..8, 0u32..4, any::<bool>(), quad(), quad()).prop_map(|(k, j, flip, x, y)| {
        let mut g = Isometry::identity();
        for _ in 0..k {
            g = Isometry::rot_two_phi().compose(&g);
        }
        for _ in 0..j {
            g = Isometry::rot90().compose(&g);
        }
        if flip {
            g = Isometry::reflect_y().compose(&g);
        }
        Isometry::translation(Point::new(x, y)).compose(&g)
    })
}

fn moved(face: &Face, g: &Isometry) -> Face {
    let mut boundary: Vec<(Fragment, bool)> = face
        .boundary
        .iter()
        .map(|(f, d)| (Fragment::new(g.affine().compose(&f.map), f.half), *d))
        .collect();
    if g.is_reflection() {
        boundary.reverse();
        for b in &mut boundary {
            b.1 = !b.1;
        }
    }
    Face { boundary }
}

fn level_one_faces() -> &'static Vec<Face> {
    static FACES: OnceLock<Vec<Face>> = OnceLock::new();
    FACES.get_or_init(|| {
        classified_faces(&kite_domino_triangles(ProtoId::Kite, 1))
            .expect("level-one kite marking")
            .into_iter()
            .map(|(f, _)| f)
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn supertiles_compose(m in 0u32..3, n in 0u32..3) {
        let mut p = pinwheel_supertile(n);
        for _ in 0..m {
            p = substitute_patch(&p, pinwheel_rule()).unwrap();
        }
        prop_assert!(p.same_tiles(&pinwheel_supertile(m + n)));
    }

    #[test]
    fn substitution_of_a_moved_triangle_covers_it(g in isometry()) {
        let p = Patch::new(vec![PlacedTile::new(ProtoId::Triangle, g)]);
        let q = substitute_patch(&p, pinwheel_rule()).unwrap();
        prop_assert_eq!(q.len(), 5);
        prop_assert_eq!(q.area(), p.area() * QuadNum::from_int(5));
        prop_assert!(q.interiors_disjoint());
    }

    #[test]
    fn aorta_refinement_keeps_old_vertices(d in 0u32..6) {
        let coarse = aorta_chain(d).unwrap();
        let fine = aorta_chain(d + 1).unwrap();
        prop_assert_eq!(fine.points.len(), 3 * coarse.points.len() - 2);
        prop_assert_eq!(fine.first(), coarse.first());
        prop_assert_eq!(fine.last(), coarse.last());
        let mut it = fine.points.iter();
        prop_assert!(coarse.points.iter().all(|p| it.any(|q| q == p)));
    }

    #[test]
    fn classification_ignores_placement(i in 0usize..24, g in isometry()) {
        let faces = level_one_faces();
        let face = &faces[i % faces.len()];
        let a = classify_face(face);
        let b = classify_face(&moved(face, &g));
        prop_assert_eq!(a.achiral_key(), b.achiral_key());
        prop_assert_eq!(&a.area, &b.area);
        if !g.is_reflection() {
            prop_assert_eq!(&a.key, &b.key);
        }
    }

    #[test]
    fn isometries_survive_json(g in isometry()) {
        prop_assert_eq!(isometry_from(&isometry_json(&g)).unwrap(), g);
    }

    #[test]
    fn numbers_survive_text(x in quad()) {
        prop_assert_eq!(x.to_string().parse::<QuadNum>().unwrap(), x);
    }

    #[test]
    fn patches_survive_json(gs in proptest::collection::vec(isometry(), 0..6)) {
        let p = Patch::new(gs.into_iter().map(|g| PlacedTile::new(ProtoId::Kite, g)).collect());
        prop_assert_eq!(load_patch(&save_patch(&p)).unwrap(), p);
    }

    #[test]
    fn render_ignores_insertion_order(
        polys in proptest::collection::vec((0u8..3, -50i32..50, -50i32..50), 1..8)
    ) {
        let build = |items: &[(u8, i32, i32)]| {
            let mut s = Scene::new();
            for &(layer, x, y) in items {
                let (x, y) = (x as f64 / 7.0, y as f64 / 3.0);
                s.polygon(layer, vec![(x, y), (x + 1.0, y), (x, y + 1.0)], Style::fill("#123456"));
            }
            s.render(&RenderSpec::default())
        };
        let mut rev = polys.clone();
        rev.reverse();
        prop_assert_eq!(build(&polys), build(&rev));
    }
}
