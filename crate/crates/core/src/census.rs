//! Orientation census, equidistribution, boundary dangling and aorta
//! components.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::aorta::aorta_map_roles;
use crate::error::{Error, Result};
use crate::faces::{Coverage, Face};
use crate::fractile::{inflate_boundary, Catalog};
use crate::geom::{AffineMap, Isometry, Mat2, Point};
use crate::substitution::{pinwheel_rule, pinwheel_supertile, side_point, hypotenuse_point};

pub const MAX_CENSUS_LEVEL: u32 = 10;

/// Placements of the triangles of the level-`n` supertile whose aortas make
/// up the aorta of the supertile.
pub fn aorta_triangles(n: u32) -> Result<Vec<Isometry>> {
    if n > MAX_CENSUS_LEVEL {
        return Err(Error::DepthOverflow { depth: n, max: MAX_CENSUS_LEVEL });
    }
    let rule = pinwheel_rule();
    let roles: Vec<Isometry> = aorta_map_roles().iter().map(|r| r.placement()).collect();
    let mut cur = vec![Isometry::identity()];
    for _ in 0..n {
        cur = cur
            .iter()
            .flat_map(|g| roles.iter().map(move |c| rule.child_placement(g, c)))
            .collect();
    }
    Ok(cur)
}

/// Rotation part of a linear map, with reflections turned back by `R_y`
/// and the half turn factored out.
pub fn normalized_rotation(l: &Mat2) -> Mat2 {
    let r = if l.det().signum() < 0 { l.mul(&Mat2::int(-1, 0, 0, 1)) } else { l.clone() };
    let neg = r.scale(&crate::quad::QuadNum::from_int(-1));
    r.min(neg)
}

/// `k` with `rotation == ±rot(2φ)^k`, searched in `|k| ≤ bound`.
pub fn two_phi_exponent(rotation: &Mat2, bound: i32) -> Option<i32> {
    let step = Isometry::rot_two_phi().linear().clone();
    let back = step.inverse().expect("rotations are invertible");
    let target = normalized_rotation(rotation);
    let (mut fwd, mut bwd) = (Mat2::identity(), Mat2::identity());
    for k in 0..=bound {
        if normalized_rotation(&fwd) == target {
            return Some(k);
        }
        if normalized_rotation(&bwd) == target {
            return Some(-k);
        }
        fwd = step.mul(&fwd);
        bwd = back.mul(&bwd);
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct OrientationCensus {
    pub level: u32,
    pub triangles: usize,
    /// Exponents `k` of the distinct orientations `±rot(2φ)^k`.
    pub exponents: Vec<i32>,
    /// Orientations that are not a power of `rot(2φ)`.
    pub stray: usize,
}

impl OrientationCensus {
    pub fn distinct(&self) -> usize {
        self.exponents.len() + self.stray
    }
}

pub fn orientation_census(n: u32) -> Result<OrientationCensus> {
    let tris = aorta_triangles(n)?;
    let rots: BTreeSet<Mat2> = tris.iter().map(|g| normalized_rotation(g.linear())).collect();
    let mut exponents = Vec::new();
    let mut stray = 0;
    for r in &rots {
        match two_phi_exponent(r, 4 * n as i32 + 4) {
            Some(k) => exponents.push(k),
            None => stray += 1,
        }
    }
    exponents.sort();
    Ok(OrientationCensus { level: n, triangles: tris.len(), exponents, stray })
}

/// Star discrepancy of `{k·θ / 2π mod 1 : k < m}`.
pub fn star_discrepancy(theta: f64, m: usize) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut xs: Vec<f64> = (0..m).map(|k| ((k as f64 * theta) / tau).rem_euclid(1.0)).collect();
    xs.sort_by(f64::total_cmp);
    let m_f = m as f64;
    let worst = xs
        .iter()
        .enumerate()
        .map(|(i, x)| (x - (2 * i + 1) as f64 / (2.0 * m_f)).abs())
        .fold(0.0, f64::max);
    1.0 / (2.0 * m_f) + worst
}

#[derive(Clone, Debug, Serialize)]
pub struct UniformityReport {
    pub angle: f64,
    pub counts: Vec<usize>,
    pub discrepancy: Vec<f64>,
    /// The same statistic for the finite orbit of `π/3`.
    pub control: Vec<f64>,
}

impl UniformityReport {
    pub fn decreasing(&self) -> bool {
        self.discrepancy.windows(2).all(|w| w[1] < w[0])
    }
}

pub fn uniformity_report(counts: &[usize]) -> Result<UniformityReport> {
    if counts.iter().any(|&m| m < 10) {
        return Err(Error::Invariant("uniformity needs at least 10 points".into()));
    }
    let angle = 2.0 * 0.5f64.atan();
    Ok(UniformityReport {
        angle,
        counts: counts.to_vec(),
        discrepancy: counts.iter().map(|&m| star_discrepancy(angle, m)).collect(),
        control: counts.iter().map(|&m| star_discrepancy(std::f64::consts::FRAC_PI_3, m)).collect(),
    })
}

/// One level-0 fractile on the boundary of a level-`N` supertile fractile.
#[derive(Clone, Debug)]
pub struct Dangler {
    pub chiral_index: usize,
    pub placement: Isometry,
}

#[derive(Clone, Debug)]
pub struct Dangle {
    pub class: usize,
    pub level: u32,
    /// Boundary of the supertile in level-0 fragments.
    pub boundary: Face,
    pub faces: Vec<Dangler>,
    /// Distinct orientations, up to the symmetries of the class and the
    /// half turn.
    pub orientations: usize,
}

pub const MAX_DANGLE_LEVEL: u32 = 5;

fn node_set(face: &Face, map: &AffineMap) -> BTreeSet<Point> {
    face.nodes().iter().map(|p| map.apply(p)).collect()
}

/// Fractiles of class `class` (either chirality) among the level-`n`
/// descendants of a class-`class` fractile that touch its boundary.
pub fn boundary_dangle(cat: &Catalog, class: usize, n: u32) -> Result<Dangle> {
    if n > MAX_DANGLE_LEVEL {
        return Err(Error::DepthOverflow { depth: n, max: MAX_DANGLE_LEVEL });
    }
    let top = cat
        .classes
        .get(class.wrapping_sub(1))
        .ok_or_else(|| Error::UnknownPrototile(format!("class {class}")))?;
    let root = top.chiral[0];
    let shape = cat.chiral[root - 1].key.shape();
    let m = AffineMap::pinwheel();
    let mi = m.inverse();

    let mut rings = vec![shape.boundary.clone()];
    for _ in 0..n {
        let next = inflate_boundary(&Face { boundary: rings.last().expect("nonempty").clone() });
        rings.push(next);
    }
    // nodes of the supertile boundary drawn with level-d fragments
    let mut scale = AffineMap::identity();
    let mut levels: Vec<BTreeSet<Point>> = Vec::new();
    for d in 0..=n {
        let ring = Face { boundary: rings[(n - d) as usize].clone() };
        levels.push(node_set(&ring, &scale));
        scale = m.compose(&scale);
    }

    let shapes: HashMap<usize, Face> = cat.chiral.iter().map(|c| (c.chiral_index, c.key.shape())).collect();
    let mut frontier: Vec<(usize, AffineMap)> = vec![(root, (0..n).fold(AffineMap::identity(), |a, _| m.compose(&a)))];
    for d in (0..n).rev() {
        let mut next = Vec::new();
        for (c, a) in &frontier {
            for k in &cat.chiral[c - 1].children {
                let b = a.compose(&mi).compose(k.placement.affine());
                if node_set(&shapes[&k.class], &b).iter().any(|p| levels[d as usize].contains(p)) {
                    next.push((k.class, b));
                }
            }
        }
        frontier = next;
    }
    let wanted: BTreeSet<usize> = top.chiral.iter().copied().collect();
    let mut faces = Vec::new();
    let mut orients: BTreeSet<Mat2> = BTreeSet::new();
    for (c, a) in frontier {
        if !wanted.contains(&c) {
            continue;
        }
        let p = Isometry::from_affine(a)?;
        let sym = &cat.chiral[c - 1].symmetries;
        let canon = sym.iter().map(|s| p.compose(s)).min().unwrap_or(p.clone());
        orients.insert(normalized_rotation(canon.linear()));
        faces.push(Dangler { chiral_index: c, placement: canon });
    }
    faces.sort_by(|x, y| (x.chiral_index, &x.placement).cmp(&(y.chiral_index, &y.placement)));
    Ok(Dangle {
        class,
        level: n,
        boundary: Face { boundary: rings[n as usize].clone() },
        faces,
        orientations: orients.len(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentCensus {
    pub level: u32,
    /// Size → number of components lying inside the supertile.
    pub interior: BTreeMap<usize, usize>,
    /// Size → number of components reaching the supertile boundary.
    pub censored: BTreeMap<usize, usize>,
}

impl ComponentCensus {
    pub fn all_sizes(&self) -> BTreeMap<usize, usize> {
        let mut out = self.interior.clone();
        for (s, c) in &self.censored {
            *out.entry(*s).or_default() += c;
        }
        out
    }

    pub fn interior_sizes_odd(&self) -> bool {
        self.interior.keys().all(|s| s % 2 == 1)
    }
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

pub const MAX_COMPONENT_LEVEL: u32 = 8;

/// Connected unions of triangle aortas, joined where their endpoints meet.
pub fn aorta_component_census(n: u32) -> Result<ComponentCensus> {
    if n > MAX_COMPONENT_LEVEL {
        return Err(Error::DepthOverflow { depth: n, max: MAX_COMPONENT_LEVEL });
    }
    let tris: Vec<Isometry> = pinwheel_supertile(n).tiles.into_iter().map(|t| t.placement).collect();
    let ends: Vec<[Point; 2]> = tris.iter().map(|g| [g.apply(&side_point()), g.apply(&hypotenuse_point())]).collect();
    let mut parent: Vec<usize> = (0..tris.len()).collect();
    let mut first: HashMap<&Point, usize> = HashMap::new();
    for (i, e) in ends.iter().enumerate() {
        for p in e {
            match first.get(p) {
                Some(&j) => {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                    parent[a] = b;
                }
                None => {
                    first.insert(p, i);
                }
            }
        }
    }
    let cover = Coverage::new(&tris);
    let mut size: HashMap<usize, usize> = HashMap::new();
    let mut open: BTreeSet<usize> = BTreeSet::new();
    for (i, e) in ends.iter().enumerate() {
        let r = find(&mut parent, i);
        *size.entry(r).or_default() += 1;
        if e.iter().any(|p| !cover.is_interior(p)) {
            open.insert(r);
        }
    }
    let mut interior = BTreeMap::new();
    let mut censored = BTreeMap::new();
    for (r, s) in size {
        let bin = if open.contains(&r) { &mut censored } else { &mut interior };
        *bin.entry(s).or_default() += 1;
    }
    Ok(ComponentCensus { level: n, interior, censored })
}
