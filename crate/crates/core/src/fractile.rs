//! Fractile discovery, the induced fractile substitution and the class
//! catalog.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::classify::{classify_face, BoundaryKey, Classified};
use crate::error::{Error, Result};
use crate::faces::{complete_faces, faces_inside, Face};
use crate::geom::{AffineMap, Isometry};
use crate::marking::{mark_aorta_continuation, mark_patch, Fragment};
use crate::polygon::bbox;
use crate::spectral::{exact_left_eigenvector, SubstitutionMatrix};
use crate::substitution::{halves, pinwheel_rule, substitute, triangle_vertices, ProtoId};

/// Triangles of the `n`-fold pinwheel substitution of a kite, domino or
/// triangle.
pub fn triangle_patch(proto: ProtoId, n: u32) -> Vec<Isometry> {
    let mut tiles: Vec<(ProtoId, Isometry)> = halves(proto).into_iter().map(|g| (ProtoId::Triangle, g)).collect();
    for _ in 0..n {
        tiles = substitute(&tiles, pinwheel_rule()).expect("triangles substitute");
    }
    tiles.into_iter().map(|t| t.1).collect()
}

/// Triangles underlying the level-`n` kite-domino supertile of `proto`.
pub fn kite_domino_triangles(proto: ProtoId, n: u32) -> Vec<Isometry> {
    triangle_patch(proto, 2 * n)
}

pub fn substitute_triangles(tris: &[Isometry]) -> Vec<Isometry> {
    let tiles: Vec<(ProtoId, Isometry)> = tris.iter().map(|g| (ProtoId::Triangle, g.clone())).collect();
    substitute(&tiles, pinwheel_rule()).expect("triangles substitute").into_iter().map(|t| t.1).collect()
}

/// Complete faces of the kite-domino marking of a triangle patch, with
/// their classification.
pub fn classified_faces(tris: &[Isometry]) -> Result<Vec<(Face, Classified)>> {
    let faces = complete_faces(&mark_patch(tris)?)?;
    Ok(faces.into_iter().map(|f| {
        let c = classify_face(&f);
        (f, c)
    }).collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ClassCount {
    pub faces: usize,
    pub chiral: usize,
    pub achiral: usize,
}

/// Number of complete faces and of distinct classes with and without
/// chirality.
pub fn count_classes(faces: &[(Face, Classified)]) -> ClassCount {
    let chiral: BTreeSet<&BoundaryKey> = faces.iter().map(|(_, c)| &c.key).collect();
    let achiral: BTreeSet<&BoundaryKey> = faces.iter().map(|(_, c)| c.achiral_key()).collect();
    ClassCount { faces: faces.len(), chiral: chiral.len(), achiral: achiral.len() }
}

/// A face together with enough of its triangle patch to re-mark its
/// inflation.
#[derive(Clone, Debug)]
pub struct SourceFace {
    pub triangles: Vec<Isometry>,
    pub face: Face,
    pub classified: Classified,
}

const SOURCE_MARGIN: f64 = 2.5;

fn face_box(face: &Face) -> (f64, f64, f64, f64) {
    let poly = face.polygon(3).expect("depth 3 is allowed");
    bbox(&poly)
}

/// Triangles whose bounding box meets the window `(x0, y0, x1, y1)`.
fn within(tris: &[Isometry], (x0, y0, x1, y1): (f64, f64, f64, f64)) -> Vec<Isometry> {
    let tv = triangle_vertices();
    tris.iter()
        .filter(|g| {
            let poly: Vec<_> = tv.iter().map(|p| g.apply(p)).collect();
            let (a, b, c, d) = bbox(&poly);
            a <= x1 && c >= x0 && b <= y1 && d >= y0
        })
        .cloned()
        .collect()
}

fn local_patch(tris: &[Isometry], face: &Face) -> Vec<Isometry> {
    let (x0, y0, x1, y1) = face_box(face);
    let m = SOURCE_MARGIN;
    within(tris, (x0 - m, y0 - m, x1 + m, y1 + m))
}

impl SourceFace {
    pub fn new(tris: &[Isometry], face: Face, classified: Classified) -> Self {
        SourceFace { triangles: local_patch(tris, &face), face, classified }
    }

    /// Placement of the inflated canonical shape onto the inflated face.
    pub fn inflated_placement(&self) -> Isometry {
        self.classified.placement.conjugate(&AffineMap::pinwheel()).expect("M is a similarity")
    }

    /// The faces into which the pinwheel substitution cuts the inflated face.
    pub fn children(&self) -> Result<Vec<(Face, Classified)>> {
        let (x0, y0, x1, y1) = face_box(&self.face);
        let corners = [(x0, y0), (x1, y0), (x0, y1), (x1, y1)].map(|(x, y)| (2.0 * x + y, -x + 2.0 * y));
        let lo = |f: fn(&(f64, f64)) -> f64| corners.iter().map(f).fold(f64::INFINITY, f64::min) - SOURCE_MARGIN;
        let hi = |f: fn(&(f64, f64)) -> f64| corners.iter().map(f).fold(f64::NEG_INFINITY, f64::max) + SOURCE_MARGIN;
        let window = (lo(|c| c.0), lo(|c| c.1), hi(|c| c.0), hi(|c| c.1));
        let sub = within(&substitute_triangles(&self.triangles), window);
        let marked = mark_patch(&sub)?;
        let boundary = inflate_boundary(&self.face);
        let faces = faces_inside(&marked, &boundary)?;
        let kids: Vec<(Face, Classified)> = faces.into_iter().map(|f| {
            let c = classify_face(&f);
            (f, c)
        }).collect();
        let total: BigRational = kids.iter().map(|(_, c)| c.area.clone()).sum();
        if total != &self.classified.area * BigRational::from_integer(5.into()) {
            return Err(Error::Completeness(format!(
                "children of a face of area {} have total area {}",
                self.classified.area, total
            )));
        }
        Ok(kids)
    }
}

/// Counterclockwise boundary of `M·face` in terms of the next-level
/// fragments.
pub fn inflate_boundary(face: &Face) -> Vec<(Fragment, bool)> {
    let mut out = Vec::new();
    for (f, fwd) in &face.boundary {
        let pieces = f.inflate();
        if *fwd {
            out.extend(pieces.into_iter());
        } else {
            out.extend(pieces.into_iter().rev().map(|(p, d)| (p, !d)));
        }
    }
    out
}

/// Up to `per_class` source faces for every chiral class, in order of first
/// appearance.
pub fn discover(tris: &[Isometry], per_class: usize) -> Result<BTreeMap<BoundaryKey, Vec<SourceFace>>> {
    let mut out: BTreeMap<BoundaryKey, Vec<SourceFace>> = BTreeMap::new();
    for (f, c) in classified_faces(tris)? {
        let slot = out.entry(c.key.clone()).or_default();
        if slot.len() < per_class {
            slot.push(SourceFace::new(tris, f, c));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChildPlacement {
    pub class: usize,
    pub placement: Isometry,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChiralClass {
    /// 1-based.
    pub chiral_index: usize,
    /// 1-based index of the class up to reflection.
    pub class: usize,
    /// Chiral index of the mirror image.
    pub mirror: usize,
    pub key: BoundaryKey,
    pub area: BigRational,
    /// Children as chiral classes, placed relative to the inflated shape.
    pub children: Vec<ChildPlacement>,
    pub symmetries: Vec<Isometry>,
    pub sources_checked: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractileClass {
    /// 1-based, by descending frequency.
    pub index: usize,
    pub chiral: Vec<usize>,
    pub key: BoundaryKey,
    pub area: BigRational,
    pub mirror_symmetric: bool,
    pub frequency: BigRational,
    /// Children as classes up to reflection; reflected placements mark
    /// mirror copies.
    pub children: Vec<ChildPlacement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Catalog {
    pub classes: Vec<FractileClass>,
    pub chiral: Vec<ChiralClass>,
}

fn canonical_child(placement: &Isometry, sym: &[Isometry]) -> Isometry {
    sym.iter().map(|s| placement.compose(s)).min().unwrap_or_else(|| placement.clone())
}

struct RawClass {
    key: BoundaryKey,
    mirror_key: BoundaryKey,
    area: BigRational,
    symmetries: Vec<Isometry>,
    /// (child chiral key, relative placement), one list per source.
    rows: Vec<Vec<(BoundaryKey, Isometry)>>,
    achiral_row: Vec<(BoundaryKey, Isometry)>,
}

fn raw_rows(src: &SourceFace) -> Result<(Vec<(BoundaryKey, Isometry)>, Vec<(BoundaryKey, Isometry)>)> {
    let q_inv = src.inflated_placement().inverse();
    let mut chiral = Vec::new();
    let mut achiral = Vec::new();
    for (_, c) in src.children()? {
        chiral.push((c.key.clone(), q_inv.compose(&c.placement)));
        achiral.push((c.achiral_key().clone(), q_inv.compose(&c.achiral_placement())));
    }
    Ok((chiral, achiral))
}

fn rows_agree(
    a: &[(BoundaryKey, Isometry)],
    b: &[(BoundaryKey, Isometry)],
    parent_sym: &[Isometry],
    sym_of: &dyn Fn(&BoundaryKey) -> Vec<Isometry>,
) -> bool {
    let norm = |row: &[(BoundaryKey, Isometry)], s: &Isometry| {
        let t = s.conjugate(&AffineMap::pinwheel()).expect("M is a similarity").inverse();
        let mut v: Vec<(BoundaryKey, Isometry)> = row
            .iter()
            .map(|(k, p)| (k.clone(), canonical_child(&t.compose(p), &sym_of(k))))
            .collect();
        v.sort();
        v
    };
    let target = norm(b, &Isometry::identity());
    parent_sym.iter().any(|s| norm(a, s) == target)
}

/// Builds the full catalog from the marking of a level-2 kite-domino kite
/// supertile, checking the induced substitution against every source face
/// found (up to three per class).
pub fn build_catalog() -> Result<Catalog> {
    let tris = kite_domino_triangles(ProtoId::Kite, 2);
    let found = discover(&tris, 3)?;
    let mut raw: Vec<RawClass> = Vec::new();
    for (key, sources) in &found {
        let first = &sources[0];
        let mut rows = Vec::new();
        let mut achiral_row = Vec::new();
        for (i, s) in sources.iter().enumerate() {
            let (row, arow) = raw_rows(s)?;
            if i == 0 {
                achiral_row = arow;
            }
            rows.push(row);
        }
        raw.push(RawClass {
            key: key.clone(),
            mirror_key: first.classified.mirror_key.clone(),
            area: first.classified.area.clone(),
            symmetries: first.classified.symmetries.clone(),
            rows,
            achiral_row,
        });
    }
    let sym_map: BTreeMap<BoundaryKey, Vec<Isometry>> =
        raw.iter().map(|r| (r.key.clone(), r.symmetries.clone())).collect();
    let sym_of = |k: &BoundaryKey| sym_map.get(k).cloned().unwrap_or_else(|| vec![Isometry::identity()]);
    for r in &raw {
        for row in &r.rows {
            for (k, _) in row {
                if !sym_map.contains_key(k) {
                    return Err(Error::Completeness("a child face matches no discovered class".into()));
                }
            }
        }
        for other in &r.rows[1..] {
            if !rows_agree(&r.rows[0], other, &r.symmetries, &sym_of) {
                return Err(Error::Invariant("induced substitution depends on the source patch".into()));
            }
        }
    }
    assemble(raw)
}

/// Reference area sequence of the catalog, in units of the triangle area.
pub const PUBLISHED_AREA_ORDER: [(i64, i64); 13] =
    [(1, 1), (1, 1), (1, 1), (6, 5), (9, 5), (1, 1), (9, 5), (6, 5), (9, 5), (6, 5), (7, 5), (7, 5), (13, 5)];

/// Frequency alone cannot separate classes of equal frequency. Inside each
/// such run, positions are filled by the first class whose area matches the
/// reference sequence, otherwise by the existing order.
fn order_ties_by_published_areas(order: &mut [usize], freq: &[BigRational], area_of: &dyn Fn(usize) -> BigRational) {
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && freq[order[end]] == freq[order[start]] {
            end += 1;
        }
        let mut pool: Vec<usize> = order[start..end].to_vec();
        for pos in start..end {
            let want = PUBLISHED_AREA_ORDER
                .get(pos)
                .map(|&(n, d)| BigRational::new(n.into(), d.into()));
            let pick = want
                .and_then(|w| pool.iter().position(|&i| area_of(i) == w))
                .unwrap_or(0);
            order[pos] = pool.remove(pick);
        }
        start = end;
    }
}

fn assemble(raw: Vec<RawClass>) -> Result<Catalog> {
    // provisional indices
    let reps: Vec<BoundaryKey> = {
        let mut s: BTreeSet<BoundaryKey> = BTreeSet::new();
        for r in &raw {
            s.insert(r.key.clone().min(r.mirror_key.clone()));
        }
        s.into_iter().collect()
    };
    let rep_index: BTreeMap<&BoundaryKey, usize> = reps.iter().enumerate().map(|(i, k)| (k, i)).collect();
    let by_key: BTreeMap<&BoundaryKey, &RawClass> = raw.iter().map(|r| (&r.key, r)).collect();
    let n = reps.len();
    let mut counts = vec![vec![0u64; n]; n];
    for (i, k) in reps.iter().enumerate() {
        let r = by_key.get(k).ok_or_else(|| Error::Completeness("representative without a source".into()))?;
        for (ck, _) in &r.achiral_row {
            counts[i][rep_index[ck]] += 1;
        }
    }
    let provisional = SubstitutionMatrix::new(counts);
    let freq = exact_left_eigenvector(&provisional, 5)?;
    let area_of = |i: usize| by_key[&reps[i]].area.clone();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        freq[b]
            .cmp(&freq[a])
            .then_with(|| area_of(a).cmp(&area_of(b)))
            .then_with(|| reps[a].cmp(&reps[b]))
    });
    order_ties_by_published_areas(&mut order, &freq, &area_of);
    let final_index: BTreeMap<&BoundaryKey, usize> =
        order.iter().enumerate().map(|(pos, &i)| (&reps[i], pos + 1)).collect();

    let mut chiral_keys: Vec<BoundaryKey> = Vec::new();
    for &i in &order {
        let rep = &reps[i];
        chiral_keys.push(rep.clone());
        let mk = &by_key[rep].mirror_key;
        if mk != rep {
            chiral_keys.push(mk.clone());
        }
    }
    let chiral_index: BTreeMap<&BoundaryKey, usize> =
        chiral_keys.iter().enumerate().map(|(i, k)| (k, i + 1)).collect();

    let mut chiral = Vec::new();
    for k in &chiral_keys {
        let r = by_key
            .get(k)
            .ok_or_else(|| Error::Completeness("a mirror image was never observed".into()))?;
        let rep = k.clone().min(r.mirror_key.clone());
        let mut children: Vec<ChildPlacement> = r.rows[0]
            .iter()
            .map(|(ck, p)| ChildPlacement { class: chiral_index[ck], placement: canonical_child(p, &by_key[ck].symmetries) })
            .collect();
        children.sort_by(|a, b| (a.class, &a.placement).cmp(&(b.class, &b.placement)));
        chiral.push(ChiralClass {
            chiral_index: chiral_index[k],
            class: final_index[&rep],
            mirror: chiral_index[&r.mirror_key],
            key: k.clone(),
            area: r.area.clone(),
            children,
            symmetries: r.symmetries.clone(),
            sources_checked: r.rows.len(),
        });
    }
    let mut classes = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let rep = &reps[i];
        let r = by_key[rep];
        let mut children: Vec<ChildPlacement> = r
            .achiral_row
            .iter()
            .map(|(ck, p)| ChildPlacement { class: final_index[ck], placement: p.clone() })
            .collect();
        children.sort_by(|a, b| (a.class, &a.placement).cmp(&(b.class, &b.placement)));
        let mut ch = vec![chiral_index[rep]];
        if r.mirror_key != *rep {
            ch.push(chiral_index[&r.mirror_key]);
        }
        classes.push(FractileClass {
            index: pos + 1,
            chiral: ch,
            key: rep.clone(),
            area: r.area.clone(),
            mirror_symmetric: r.mirror_key == *rep,
            frequency: freq[i].clone(),
            children,
        });
    }
    Ok(Catalog { classes, chiral })
}

/// Faces of the continuation marking of `tris`, shrunk once by the
/// inverse inflation and counted per catalog class. Fails if a shrunken
/// face is not in the catalog.
pub fn continuation_classes(cat: &Catalog, tris: &[Isometry]) -> Result<BTreeMap<usize, usize>> {
    let shrink = AffineMap::pinwheel().inverse();
    let mut out = BTreeMap::new();
    for face in complete_faces(&mark_aorta_continuation(tris)?)? {
        let small = Face {
            boundary: face.boundary.iter().map(|(f, d)| (Fragment::new(shrink.compose(&f.map), f.half), *d)).collect(),
        };
        let c = classify_face(&small);
        let class = cat
            .class_of_key(c.achiral_key())
            .ok_or_else(|| Error::Completeness("a continuation face matches no class at area ratio 5".into()))?;
        *out.entry(class.index).or_insert(0) += 1;
    }
    Ok(out)
}

/// The catalog, built once per process.
pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| build_catalog().expect("fractile catalog must build"))
}

impl Catalog {
    pub fn class_of_key(&self, key: &BoundaryKey) -> Option<&FractileClass> {
        self.chiral.iter().find(|c| &c.key == key).map(|c| &self.classes[c.class - 1])
    }

    pub fn chiral_of_key(&self, key: &BoundaryKey) -> Option<&ChiralClass> {
        self.chiral.iter().find(|c| &c.key == key)
    }

    /// Class substitution matrix, `A[i][j]` = number of class-`j` children
    /// of class `i`; chiral variant when `chiral` is set.
    pub fn matrix(&self, chiral: bool) -> SubstitutionMatrix {
        let rows: Vec<Vec<u64>> = if chiral {
            let n = self.chiral.len();
            self.chiral
                .iter()
                .map(|c| {
                    let mut row = vec![0; n];
                    for k in &c.children {
                        row[k.class - 1] += 1;
                    }
                    row
                })
                .collect()
        } else {
            let n = self.classes.len();
            self.classes
                .iter()
                .map(|c| {
                    let mut row = vec![0; n];
                    for k in &c.children {
                        row[k.class - 1] += 1;
                    }
                    row
                })
                .collect()
        };
        SubstitutionMatrix::new(rows)
    }

    pub fn areas(&self) -> Vec<BigRational> {
        self.classes.iter().map(|c| c.area.clone()).collect()
    }

    pub fn chiral_areas(&self) -> Vec<BigRational> {
        self.chiral.iter().map(|c| c.area.clone()).collect()
    }

    /// Total frequency is one.
    pub fn frequency_sum(&self) -> BigRational {
        self.classes.iter().fold(BigRational::zero(), |acc, c| acc + &c.frequency)
    }

    pub fn is_normalized(&self) -> bool {
        self.frequency_sum() == BigRational::one()
    }
}
