//! Fixed and periodic points of the fractile substitution.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::classify::Classified;
use crate::error::{Error, Result};
use crate::faces::{Coverage, Face};
use crate::fractile::{classified_faces, Catalog, ChiralClass};
use crate::geom::{AffineMap, Isometry, Mat2, Point};
use crate::quad::QuadNum;
use crate::substitution::{pinwheel_rule, pinwheel_supertile, substitute, triangle_vertices, ProtoId};

/// A class whose substitution contains a translate of itself, with the
/// translation `τ` at which the shape is fixed by `x ↦ Mx` acting on the
/// tiling.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityFixed {
    pub chiral_index: usize,
    pub class: usize,
    pub fixed_translation: Point,
}

fn variants(placement: &Isometry, symmetries: &[Isometry]) -> Vec<Isometry> {
    symmetries.iter().map(|s| placement.compose(s)).collect()
}

/// `τ` with `(M - I)τ = -t`.
fn fixed_translation(t: &Point) -> Point {
    let half = QuadNum::ratio(1, 2);
    let x = (&t.x - &t.y) * &half;
    let y = (&t.x + &t.y) * &half;
    Point::new(-x, -y)
}

pub fn identity_fixed(cat: &Catalog) -> Vec<IdentityFixed> {
    let mut out = Vec::new();
    for c in &cat.chiral {
        let hit = c
            .children
            .iter()
            .filter(|k| k.class == c.chiral_index)
            .flat_map(|k| variants(&k.placement, &c.symmetries))
            .filter(|p| *p.linear() == Mat2::identity())
            .min();
        if let Some(p) = hit {
            out.push(IdentityFixed {
                chiral_index: c.chiral_index,
                class: c.class,
                fixed_translation: fixed_translation(p.translate()),
            });
        }
    }
    out
}

/// Classes (up to reflection) whose substitution contains their own
/// mirror image.
pub fn reflection_fixed(cat: &Catalog) -> Vec<usize> {
    let mut out: BTreeSet<usize> = BTreeSet::new();
    for c in &cat.chiral {
        if c.mirror != c.chiral_index && c.children.iter().any(|k| k.class == c.mirror) {
            out.insert(c.class);
        }
    }
    out.into_iter().collect()
}

/// A face of a marked patch that touches a given point.
#[derive(Clone, Debug)]
pub struct OriginFace {
    pub face: Face,
    pub classified: Classified,
    pub chiral_index: usize,
    pub class: usize,
}

/// Does `p` lie in the closed region of `face`? Nodes count; otherwise a
/// winding test against a fine polygon.
fn touches(face: &Face, p: &Point) -> Result<bool> {
    if face.nodes().contains(p) {
        return Ok(true);
    }
    let (px, py) = p.to_f64();
    let coarse: Vec<Point> = face.polygon(2)?;
    let (x0, y0, x1, y1) = crate::polygon::bbox(&coarse);
    let pad = 0.25;
    if px < x0 - pad || px > x1 + pad || py < y0 - pad || py > y1 + pad {
        return Ok(false);
    }
    let poly: Vec<(f64, f64)> = face.polygon(6)?.iter().map(Point::to_f64).collect();
    let mut wn = 0i32;
    for i in 0..poly.len() {
        let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
        let side = (b.0 - a.0) * (py - a.1) - (px - a.0) * (b.1 - a.1);
        if a.1 <= py && b.1 > py && side > 0.0 {
            wn += 1;
        } else if a.1 > py && b.1 <= py && side < 0.0 {
            wn -= 1;
        }
    }
    Ok(wn != 0)
}

fn lookup<'a>(cat: &'a Catalog, c: &Classified) -> Result<&'a ChiralClass> {
    cat.chiral_of_key(&c.key)
        .ok_or_else(|| Error::Completeness("a face matches no catalog class".into()))
}

/// Complete faces of the kite-domino marking of `tris` that touch `p`.
pub fn faces_at(cat: &Catalog, tris: &[Isometry], p: &Point) -> Result<Vec<OriginFace>> {
    let mut out = Vec::new();
    for (face, classified) in classified_faces(tris)? {
        if touches(&face, p)? {
            let c = lookup(cat, &classified)?;
            out.push(OriginFace { face, chiral_index: c.chiral_index, class: c.class, classified });
        }
    }
    out.sort_by(|a, b| (a.chiral_index, &a.classified.placement).cmp(&(b.chiral_index, &b.classified.placement)));
    Ok(out)
}

fn near(tris: &[Isometry], p: &Point, radius: f64) -> Vec<Isometry> {
    let (px, py) = p.to_f64();
    let tv = triangle_vertices();
    tris.iter()
        .filter(|g| {
            tv.iter().any(|v| {
                let (x, y) = g.apply(v).to_f64();
                (x - px).hypot(y - py) < radius
            })
        })
        .cloned()
        .collect()
}

/// The faces around the origin of the self-similar tiling generated by the
/// standard triangle, read off a level-`level` supertile.
pub fn origin_configuration(cat: &Catalog, level: u32) -> Result<Vec<OriginFace>> {
    let tris: Vec<Isometry> = pinwheel_supertile(level).tiles.into_iter().map(|t| t.placement).collect();
    let local = near(&tris, &Point::origin(), 6.0);
    faces_at(cat, &local, &Point::origin())
}

/// Does the substitution carry the face placed at `placement` onto itself?
pub fn is_self_similar(cat: &Catalog, chiral_index: usize, placement: &Isometry) -> Result<bool> {
    let c = &cat.chiral[chiral_index - 1];
    let inflated = placement.conjugate(&AffineMap::pinwheel())?;
    let want = inflated.inverse().compose(placement);
    let targets = variants(&want, &c.symmetries);
    Ok(c.children
        .iter()
        .filter(|k| k.class == chiral_index)
        .any(|k| variants(&k.placement, &c.symmetries).iter().any(|p| targets.contains(p))))
}

/// Triangles around a point, translated so the point is the origin and
/// rotated into a canonical frame.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Germ(pub Vec<Isometry>);

impl Germ {
    pub fn new(star: &[Isometry], center: &Point) -> Germ {
        let back = Isometry::translation(center.neg());
        let moved: Vec<Isometry> = star.iter().map(|g| back.compose(g)).collect();
        let frames = moved.iter().map(|g| {
            let inv = g.linear().inverse().expect("isometries are invertible");
            if g.is_reflection() {
                Mat2::int(-1, 0, 0, 1).mul(&inv)
            } else {
                inv
            }
        });
        frames
            .map(|q| {
                let r = Isometry::new(q, Point::origin()).expect("rotation");
                let mut v: Vec<Isometry> = moved.iter().map(|g| r.compose(g)).collect();
                v.sort();
                v
            })
            .min()
            .map(Germ)
            .unwrap_or(Germ(Vec::new()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_reflection_symmetric(&self) -> bool {
        [Isometry::reflect_y(), Isometry::new(Mat2::int(1, 0, 0, -1), Point::origin()).expect("reflection")]
            .iter()
            .any(|r| {
                let mirrored: Vec<Isometry> = self.0.iter().map(|g| r.compose(g)).collect();
                Germ::new(&mirrored, &Point::origin()) == *self
            })
    }

    /// The germ at the origin of the substituted star.
    pub fn substitute(&self) -> Result<Germ> {
        let tris: Vec<(ProtoId, Isometry)> = self.0.iter().map(|g| (ProtoId::Triangle, g.clone())).collect();
        let kids: Vec<Isometry> = substitute(&tris, pinwheel_rule())?.into_iter().map(|t| t.1).collect();
        let star = star_of(&kids, &Point::origin());
        Ok(Germ::new(&star, &Point::origin()))
    }
}

fn in_closed_triangle(g: &Isometry, p: &Point) -> bool {
    let v = triangle_vertices().map(|q| g.apply(&q));
    let o = |a: &Point, b: &Point| crate::geom::orient(a, b, p);
    let s = [o(&v[0], &v[1]), o(&v[1], &v[2]), o(&v[2], &v[0])];
    s.iter().all(|&x| x >= 0) || s.iter().all(|&x| x <= 0)
}

fn star_of(tris: &[Isometry], p: &Point) -> Vec<Isometry> {
    let (px, py) = p.to_f64();
    tris.iter()
        .filter(|g| {
            let (x, y) = g.translate().to_f64();
            (x - px).hypot(y - py) < 3.0 && in_closed_triangle(g, p)
        })
        .cloned()
        .collect()
}

fn rot_pi_about(p: &Point, g: &Isometry) -> Isometry {
    let turn = Isometry::new(Mat2::int(-1, 0, 0, -1), p.add(p)).expect("half turn");
    turn.compose(g)
}

/// Germs of all interior points of `tris` about which the patch is locally
/// symmetric under the half turn.
pub fn symmetric_germs(tris: &[Isometry]) -> Vec<(Point, Germ)> {
    let cover = Coverage::new(tris);
    let present: BTreeSet<&Isometry> = tris.iter().collect();
    let mut by_linear: HashMap<&Mat2, Vec<&Isometry>> = HashMap::new();
    for g in tris {
        by_linear.entry(g.linear()).or_default().push(g);
    }
    let two = QuadNum::from_int(2).checked_inv().expect("2 is invertible");
    let mut centers: BTreeSet<Point> = BTreeSet::new();
    for g in tris {
        let neg = g.linear().scale(&QuadNum::from_int(-1));
        for h in by_linear.get(&neg).into_iter().flatten() {
            centers.insert(g.translate().add(h.translate()).scale(&two));
        }
    }
    let mut out = Vec::new();
    for p in centers {
        if !cover.is_interior(&p) {
            continue;
        }
        let star = star_of(tris, &p);
        if star.iter().all(|g| present.contains(&rot_pi_about(&p, g))) {
            out.push((p.clone(), Germ::new(&star, &p)));
        }
    }
    out
}

/// A cycle of the germ map, listed from its least member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GermCycle {
    pub germs: Vec<Germ>,
    pub reflection_symmetric: bool,
}

impl GermCycle {
    pub fn period(&self) -> usize {
        self.germs.len()
    }
}

/// Periodic cycles reached from the given germs, up to `max_period`.
pub fn germ_cycles(start: &[Germ], max_period: usize) -> Result<Vec<GermCycle>> {
    let mut next: BTreeMap<Germ, Germ> = BTreeMap::new();
    let mut step = |g: &Germ| -> Result<Germ> {
        if let Some(n) = next.get(g) {
            return Ok(n.clone());
        }
        let n = g.substitute()?;
        next.insert(g.clone(), n.clone());
        Ok(n)
    };
    let mut cycles: BTreeSet<Vec<Germ>> = BTreeSet::new();
    for g0 in start {
        let mut seen: Vec<Germ> = vec![g0.clone()];
        let mut cur = g0.clone();
        loop {
            cur = step(&cur)?;
            if let Some(pos) = seen.iter().position(|x| *x == cur) {
                let mut cyc = seen[pos..].to_vec();
                let least = (0..cyc.len()).min_by_key(|&i| &cyc[i]).unwrap_or(0);
                cyc.rotate_left(least);
                if cyc.len() > max_period {
                    return Err(Error::Invariant(format!("germ cycle of period {} exceeds {max_period}", cyc.len())));
                }
                cycles.insert(cyc);
                break;
            }
            seen.push(cur.clone());
            if seen.len() > 64 {
                return Err(Error::NoConvergence(64));
            }
        }
    }
    Ok(cycles
        .into_iter()
        .map(|germs| {
            let reflection_symmetric = germs.iter().all(Germ::is_reflection_symmetric);
            GermCycle { germs, reflection_symmetric }
        })
        .collect())
}

/// The π-symmetric periodic configurations found in a level-`level`
/// triangle supertile.
pub fn symmetric_cycles(level: u32) -> Result<Vec<GermCycle>> {
    let tris: Vec<Isometry> = pinwheel_supertile(level).tiles.into_iter().map(|t| t.placement).collect();
    let germs: BTreeSet<Germ> = symmetric_germs(&tris).into_iter().map(|(_, g)| g).collect();
    let start: Vec<Germ> = germs.into_iter().collect();
    germ_cycles(&start, 4)
}

/// Triangles within `radius` of the origin in the tiling grown from a
/// germ by `n` substitutions (a multiple of the period keeps the germ at
/// the origin).
pub fn grow_near(germ: &Germ, n: u32, radius: f64) -> Result<Vec<Isometry>> {
    let mut tris: Vec<Isometry> = germ.0.clone();
    for _ in 0..n {
        let tagged: Vec<(ProtoId, Isometry)> = tris.into_iter().map(|g| (ProtoId::Triangle, g)).collect();
        let kids: Vec<Isometry> = substitute(&tagged, pinwheel_rule())?.into_iter().map(|t| t.1).collect();
        tris = near(&kids, &Point::origin(), radius);
    }
    Ok(tris)
}

pub fn grow(germ: &Germ, n: u32) -> Result<Vec<Isometry>> {
    grow_near(germ, n, f64::INFINITY)
}

/// Fractile classes touching the origin of the tiling grown from `germ`.
pub fn classes_at_germ(cat: &Catalog, germ: &Germ, n: u32) -> Result<Vec<OriginFace>> {
    faces_at(cat, &grow_near(germ, n, 6.0)?, &Point::origin())
}

/// One step of the fractile substitution on placed chiral classes.
pub fn substitute_fractiles(cat: &Catalog, faces: &[(usize, Isometry)]) -> Result<Vec<(usize, Isometry)>> {
    let m = AffineMap::pinwheel();
    let mut out = Vec::new();
    for (c, p) in faces {
        let q = p.conjugate(&m)?;
        let class = cat
            .chiral
            .get(c.wrapping_sub(1))
            .ok_or_else(|| Error::UnknownPrototile(format!("chiral class {c}")))?;
        out.extend(class.children.iter().map(|k| (k.class, q.compose(&k.placement))));
    }
    Ok(out)
}

/// The face of chiral class `c` at `placement`.
pub fn placed_face(cat: &Catalog, c: usize, placement: &Isometry) -> Face {
    let shape = cat.chiral[c - 1].key.shape();
    Face {
        boundary: shape
            .boundary
            .into_iter()
            .map(|(f, d)| (crate::marking::Fragment::new(placement.affine().compose(&f.map), f.half), d))
            .collect(),
    }
}
