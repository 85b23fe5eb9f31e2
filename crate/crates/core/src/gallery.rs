//! The figure set: one SVG per illustration of the construction, from the
//! triangle substitution to boundary fractiles of large supertiles.

use crate::aorta::{aorta_chain, aorta_maps, continuation_chain, continuation_neighbour, ContinuationKind, Half};
use crate::census::{aorta_component_census, boundary_dangle, star_discrepancy};
use crate::error::Result;
use crate::faces::Face;
use crate::fixed::{
    classes_at_germ, grow, origin_configuration, placed_face, substitute_fractiles, symmetric_cycles,
};
use crate::fractile::{catalog, classified_faces, kite_domino_triangles, Catalog};
use crate::geom::Isometry;
use crate::marking::{mark_aorta_continuation, mark_domino, mark_kite, mark_patch, mark_triangle, Fragment};
use crate::render::{
    add_chain, add_faces, add_marking, add_patch, grid, xy, HalfCache, RenderSpec, Scene, Style,
    AORTA_COLOR, CONTINUATION_COLOR,
};
use crate::substitution::{
    fuse_kite_domino, kite_domino_rule, pinwheel_supertile, supertile, Patch, PlacedTile, ProtoId,
};

/// Class index drawn as the ghost.
pub const GHOST_CLASS: usize = 3;

pub struct Figure {
    pub name: &'static str,
    pub title: &'static str,
    pub svg: String,
}

fn triangles_of(p: &Patch) -> Vec<Isometry> {
    p.tiles.iter().flat_map(PlacedTile::triangles).collect()
}

fn aortas(scene: &mut Scene, tris: &[Isometry], cache: &HalfCache, width: f64) {
    for g in tris {
        for h in [Half::Side, Half::Hyp] {
            scene.polyline(2, cache.fragment(&Fragment::new(g.affine().clone(), h), true), Style::line(AORTA_COLOR, width));
        }
    }
}

fn patch_scene(p: &Patch) -> Scene {
    let mut s = Scene::new();
    add_patch(&mut s, p);
    s
}

fn fig01() -> Result<Scene> {
    Ok(grid(vec![(patch_scene(&pinwheel_supertile(0)), None), (patch_scene(&pinwheel_supertile(1)), None)], 2))
}

fn fig02() -> Result<Scene> {
    let kd = kite_domino_rule();
    let mut cells = Vec::new();
    for p in ProtoId::KITE_DOMINO {
        cells.push((patch_scene(&Patch::single(p)), Some(p.name().to_string())));
    }
    for p in ProtoId::KITE_DOMINO {
        cells.push((patch_scene(&supertile(p, 1, kd)?), None));
    }
    Ok(grid(cells, 3))
}

fn fig03(depth: u32) -> Result<Scene> {
    let mut s = patch_scene(&pinwheel_supertile(1));
    let c = aorta_chain(depth)?;
    let colors = ["#1b9e77", "#d95f02", "#7570b3"];
    for (m, col) in aorta_maps().iter().zip(colors) {
        add_chain(&mut s, &c.map(|p| m.affine().apply(p)), col, 0.02);
    }
    for p in [c.first(), c.last()] {
        s.circle(3, xy(p), 0.03, Style::dot("#000000"));
    }
    Ok(s)
}

fn fig04(depth: u32) -> Result<Scene> {
    let mut cells = Vec::new();
    for kind in [ContinuationKind::Main, ContinuationKind::Domino] {
        let tris = vec![Isometry::identity(), continuation_neighbour(kind)];
        let mut s = patch_scene(&Patch::triangles(tris.clone()));
        aortas(&mut s, &tris, &HalfCache::new(depth)?, 0.02);
        add_chain(&mut s, &continuation_chain(kind, depth)?, CONTINUATION_COLOR, 0.03);
        cells.push((s, Some(format!("{kind:?}").to_lowercase())));
    }
    Ok(grid(cells, 2))
}

fn fig05(depth: u32) -> Result<Scene> {
    let cache = HalfCache::new(depth)?;
    let mut cells = Vec::new();
    for n in [1, 3] {
        let p = pinwheel_supertile(n);
        let mut s = patch_scene(&p);
        aortas(&mut s, &triangles_of(&p), &cache, 0.02 * (n as f64 + 1.0));
        cells.push((s, None));
    }
    Ok(grid(cells, 2))
}

fn fig06(depth: u32) -> Result<Scene> {
    let cache = HalfCache::new(depth)?;
    let mut s = patch_scene(&pinwheel_supertile(0));
    for f in mark_triangle(&Isometry::identity(), false) {
        s.polyline(2, cache.fragment(&f, true), Style::line(AORTA_COLOR, 0.015));
    }
    Ok(s)
}

fn fig07(depth: u32) -> Result<Scene> {
    let cache = HalfCache::new(depth)?;
    let mut cells = Vec::new();
    let marks = [mark_kite(), mark_domino(ProtoId::DominoA)?, mark_domino(ProtoId::DominoB)?];
    for (p, m) in ProtoId::KITE_DOMINO.into_iter().zip(marks) {
        let mut s = patch_scene(&Patch::single(p));
        add_marking(&mut s, &m, &cache, 0.015);
        cells.push((s, Some(p.name().to_string())));
    }
    Ok(grid(cells, 3))
}

fn fig08(depth: u32) -> Result<Scene> {
    let cache = HalfCache::new(depth)?;
    let tris = kite_domino_triangles(ProtoId::Kite, 1);
    let fused = fuse_kite_domino(&Patch::triangles(tris.clone()))?;
    let mut s = patch_scene(&fused.patch);
    add_marking(&mut s, &mark_patch(&tris)?, &cache, 0.02);
    Ok(s)
}

/// Face of each class in its own frame, the origin marking the central
/// control point of the standard triangle.
fn class_cell(cat: &Catalog, chiral: usize, cache: &HalfCache) -> Scene {
    let mut s = Scene::new();
    let face = placed_face(cat, chiral, &Isometry::identity());
    add_faces(&mut s, &[(face, cat.chiral[chiral - 1].class)], cache, 0.01);
    s.circle(3, (0.0, 0.0), 0.04, Style::dot("#000000"));
    s
}

fn fig09(cat: &Catalog, depth: u32) -> Result<Scene> {
    let cache = HalfCache::new(depth)?;
    let cells = cat
        .classes
        .iter()
        .map(|c| (class_cell(cat, c.chiral[0], &cache), Some(c.index.to_string())))
        .collect();
    Ok(grid(cells, 5))
}

/// The inflated boundary of a class with its children inside.
fn inflation_cell(cat: &Catalog, chiral: usize, cache: &HalfCache) -> Result<Scene> {
    let mut s = Scene::new();
    let kids = substitute_fractiles(cat, &[(chiral, Isometry::identity())])?;
    let faces: Vec<(Face, usize)> =
        kids.iter().map(|(c, p)| (placed_face(cat, *c, p), cat.chiral[c - 1].class)).collect();
    add_faces(&mut s, &faces, cache, 0.02);
    let outline = Face { boundary: crate::fractile::inflate_boundary(&placed_face(cat, chiral, &Isometry::identity())) };
    let mut st = Style::line("#000000", 0.06);
    st.fill = None;
    s.polygon(4, cache.face(&outline), st);
    Ok(s)
}

fn fig10(cat: &Catalog, depth: u32) -> Result<Scene> {
    let cache = HalfCache::new(depth)?;
    let ghost = cat.classes[GHOST_CLASS - 1].chiral[0];
    let before = class_cell(cat, ghost, &cache);
    Ok(grid(vec![(before, None), (inflation_cell(cat, ghost, &cache)?, None)], 2))
}

fn fig11(cat: &Catalog, depth: u32) -> Result<Scene> {
    let cache = HalfCache::new(depth)?;
    let mut cells = Vec::new();
    for c in &cat.classes {
        cells.push((inflation_cell(cat, c.chiral[0], &cache)?, Some(c.index.to_string())));
    }
    Ok(grid(cells, 5))
}

fn placed_scene(cat: &Catalog, faces: &[(usize, Isometry)], cache: &HalfCache, width: f64) -> Scene {
    let mut s = Scene::new();
    let f: Vec<(Face, usize)> =
        faces.iter().map(|(c, p)| (placed_face(cat, *c, p), cat.chiral[c - 1].class)).collect();
    add_faces(&mut s, &f, cache, width);
    s.circle(3, (0.0, 0.0), 0.05 * width / 0.01, Style::dot("#000000"));
    s
}

/// A configuration and two rounds of its substitution.
fn growth(cat: &Catalog, start: Vec<(usize, Isometry)>, depth: u32) -> Result<Scene> {
    let cache = HalfCache::new(depth)?;
    let mut cells = Vec::new();
    let mut cur = start;
    for k in 0..3 {
        let w = 0.01 * 2.2f64.powi(k);
        cells.push((placed_scene(cat, &cur, &cache, w), None));
        cur = substitute_fractiles(cat, &cur)?;
    }
    Ok(grid(cells, 3))
}

fn fig12(cat: &Catalog, depth: u32) -> Result<Scene> {
    let start = origin_configuration(cat, 4)?
        .into_iter()
        .map(|f| (f.chiral_index, f.classified.placement))
        .collect();
    growth(cat, start, depth)
}

fn fig13(cat: &Catalog, depth: u32) -> Result<Scene> {
    growth(cat, vec![(cat.classes[3].chiral[0], Isometry::identity())], depth)
}

fn cycle_figure(cat: &Catalog, period: usize, depth: u32) -> Result<Scene> {
    let cache = HalfCache::new(depth)?;
    let mut cells = Vec::new();
    for cyc in symmetric_cycles(4)?.into_iter().filter(|c| c.period() == period) {
        for g in &cyc.germs {
            let mut s = patch_scene(&Patch::triangles(grow(g, 0)?));
            let around = classes_at_germ(cat, g, 2 * period as u32)?;
            let faces: Vec<(Face, usize)> = around.into_iter().map(|f| (f.face, f.class)).collect();
            add_faces(&mut s, &faces, &cache, 0.02);
            s.circle(3, (0.0, 0.0), 0.08, Style::dot("#000000"));
            cells.push((s, None));
        }
    }
    Ok(grid(cells, period.max(2)))
}

fn fig16(cat: &Catalog, depth: u32) -> Result<Scene> {
    let cache = HalfCache::new(depth.min(3))?;
    let d = boundary_dangle(cat, GHOST_CLASS, 4)?;
    let mut s = Scene::new();
    let faces: Vec<(Face, usize)> =
        d.faces.iter().map(|f| (placed_face(cat, f.chiral_index, &f.placement), GHOST_CLASS)).collect();
    add_faces(&mut s, &faces, &cache, 0.05);
    let mut st = Style::line("#000000", 0.05);
    st.fill = None;
    s.polygon(4, cache.face(&d.boundary), st);
    Ok(s)
}

/// Discrepancy of the rotation sequence against the count of terms.
fn fig17() -> Result<Scene> {
    let mut s = Scene::new();
    let angle = 2.0 * 0.5f64.atan();
    let ms: Vec<usize> = (0..=30).map(|i| (10f64.powf(1.0 + i as f64 / 10.0)).round() as usize).collect();
    let curve = |theta: f64| -> Vec<(f64, f64)> {
        ms.iter().map(|&m| ((m as f64).log10(), star_discrepancy(theta, m).log10() + 4.0)).collect()
    };
    s.polyline(2, curve(angle), Style::line(AORTA_COLOR, 0.03));
    s.polyline(2, curve(std::f64::consts::FRAC_PI_3), Style::line(CONTINUATION_COLOR, 0.03));
    s.polyline(1, vec![(1.0, 0.0), (4.0, 0.0)], Style::line("#000000", 0.02));
    s.polyline(1, vec![(1.0, 0.0), (1.0, 4.0)], Style::line("#000000", 0.02));
    Ok(s)
}

/// Histogram of aorta component sizes, interior ones dark.
fn fig18() -> Result<Scene> {
    let c = aorta_component_census(5)?;
    let mut s = Scene::new();
    let max = c.all_sizes().values().copied().max().unwrap_or(1) as f64;
    for (i, (size, _)) in c.all_sizes().iter().enumerate() {
        let x = i as f64;
        let inner = *c.interior.get(size).unwrap_or(&0) as f64 / max * 10.0;
        let outer = *c.censored.get(size).unwrap_or(&0) as f64 / max * 10.0;
        s.polygon(1, vec![(x, 0.0), (x + 0.8, 0.0), (x + 0.8, inner), (x, inner)], Style::fill("#333333"));
        s.polygon(1, vec![(x, inner), (x + 0.8, inner), (x + 0.8, inner + outer), (x, inner + outer)], Style::fill("#cccccc"));
        s.text(3, (x + 0.4, -0.6), 0.4, &size.to_string());
    }
    Ok(s)
}

/// Every figure at marking depth `depth`.
pub fn gallery(depth: u32) -> Result<Vec<Figure>> {
    let cat = catalog();
    let spec = RenderSpec { marking_depth: depth, ..RenderSpec::default() };
    let origin = RenderSpec { origin_marker: true, ..spec.clone() };
    let figs: Vec<(&'static str, &'static str, Scene, &RenderSpec)> = vec![
        ("fig01_triangle_substitution", "Triangle substitution", fig01()?, &spec),
        ("fig02_kite_domino", "Kites and dominoes with their substitution", fig02()?, &spec),
        ("fig03_aorta", "The aorta as union of three copies", fig03(depth + 2)?, &origin),
        ("fig04_continuations", "Main and domino continuations", fig04(depth)?, &spec),
        ("fig05_supertile_aortas", "Supertiles with aortas", fig05(depth)?, &spec),
        ("fig06_triangle_marking", "Marking of one triangle", fig06(depth)?, &origin),
        ("fig07_kite_domino_markings", "Kite and domino markings", fig07(depth)?, &spec),
        ("fig08_marked_patch", "Marked kite supertile", fig08(depth)?, &origin),
        ("fig09_fractiles", "The fractile classes", fig09(cat, depth)?, &spec),
        ("fig10_ghost_substitution", "Substitution of the ghost", fig10(cat, depth)?, &spec),
        ("fig11_fractile_substitution", "Substitution of every class", fig11(cat, depth)?, &spec),
        ("fig12_fixed_point", "A self-similar fractile tiling", fig12(cat, depth)?, &spec),
        ("fig13_reflection_fixed", "Fixed under substitution and reflection", fig13(cat, depth)?, &spec),
        ("fig14_period_two", "Half-turn symmetric, period two", cycle_figure(cat, 2, depth)?, &spec),
        ("fig15_period_four", "Half-turn symmetric, period four", cycle_figure(cat, 4, depth)?, &spec),
        ("fig16_ghost_dangle", "Ghosts on a level-4 ghost boundary", fig16(cat, depth)?, &spec),
        ("fig17_discrepancy", "Star discrepancy of the rotation sequence", fig17()?, &spec),
        ("fig18_components", "Aorta component sizes", fig18()?, &spec),
    ];
    Ok(figs
        .into_iter()
        .map(|(name, title, scene, spec)| Figure { name, title, svg: scene.render(spec) })
        .collect())
}

/// Faces of a kite-domino marking coloured by class, for ad hoc renders.
pub fn marked_faces_scene(cat: &Catalog, tris: &[Isometry], depth: u32) -> Result<Scene> {
    let cache = HalfCache::new(depth)?;
    let mut s = Scene::new();
    let mut faces = Vec::new();
    for (f, c) in classified_faces(tris)? {
        if let Some(k) = cat.class_of_key(&c.key) {
            faces.push((f, k.index));
        }
    }
    add_faces(&mut s, &faces, &cache, 0.01);
    Ok(s)
}

/// Continuation marking of a patch drawn over its triangles.
pub fn continuation_scene(tris: &[Isometry], depth: u32) -> Result<Scene> {
    let cache = HalfCache::new(depth)?;
    let mut s = patch_scene(&Patch::triangles(tris.to_vec()));
    add_marking(&mut s, &mark_aorta_continuation(tris)?, &cache, 0.02);
    Ok(s)
}
