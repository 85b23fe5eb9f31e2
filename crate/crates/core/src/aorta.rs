//! The aorta: attractor of a three-map IFS threading the three control
//! points of the standard triangle, plus its halves and continuations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{AffineMap, Isometry, Mat2, Point};
use crate::polygon::signed_area;
use crate::quad::QuadNum;
use crate::substitution::{central_point, hypotenuse_point, side_point, triangle_vertices, ChildRole};

pub const DEFAULT_MAX_DEPTH: u32 = 12;

/// A contracting similarity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IfsMap(AffineMap);

impl IfsMap {
    pub fn new(map: AffineMap) -> Result<Self> {
        let l = &map.linear;
        let gram = l.transpose().mul(l);
        let c = gram.0[0].clone();
        if gram != Mat2::identity().scale(&c) {
            return Err(Error::Invariant("IFS map is not a similarity".into()));
        }
        if c >= QuadNum::one() {
            return Err(Error::Invariant("IFS map does not contract".into()));
        }
        Ok(IfsMap(map))
    }

    pub fn affine(&self) -> &AffineMap {
        &self.0
    }

    pub fn apply(&self, p: &Point) -> Point {
        self.0.apply(p)
    }

    /// Contraction ratio as a float.
    pub fn ratio(&self) -> f64 {
        self.0.det().abs().to_f64().sqrt()
    }
}

/// `f1 = M⁻¹R_y + (-2/5, -1/5)`, `f2 = M⁻¹`, `f3 = R_π M⁻¹ + (-1/5, 2/5)`.
pub fn aorta_maps() -> [IfsMap; 3] {
    let mi = AffineMap::pinwheel().inverse();
    let f1 = mi.compose(&AffineMap::linear(Mat2::int(-1, 0, 0, 1)).unwrap());
    let f1 = AffineMap::new(f1.linear, Point::ratio(-2, 5, -1, 5)).unwrap();
    let f3 = AffineMap::linear(Mat2::int(-1, 0, 0, -1)).unwrap().compose(&mi);
    let f3 = AffineMap::new(f3.linear, Point::ratio(-1, 5, 2, 5)).unwrap();
    [f1, mi, f3].map(|m| IfsMap::new(m).expect("aorta maps contract"))
}

/// Each `f_k` is `M⁻¹` composed with a child placement.
pub fn aorta_map_roles() -> [ChildRole; 3] {
    [ChildRole::Side, ChildRole::Central, ChildRole::Opposite]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub points: Vec<Point>,
    pub depth: u32,
}

impl Chain {
    pub fn segments(&self) -> usize {
        self.points.len().saturating_sub(1)
    }

    pub fn first(&self) -> &Point {
        &self.points[0]
    }

    pub fn last(&self) -> &Point {
        self.points.last().expect("chains are nonempty")
    }

    pub fn map(&self, f: impl Fn(&Point) -> Point) -> Chain {
        Chain { points: self.points.iter().map(f).collect(), depth: self.depth }
    }

    pub fn reversed(&self) -> Chain {
        Chain { points: self.points.iter().rev().cloned().collect(), depth: self.depth }
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(Point::to_f64).collect()
    }
}

fn check_depth(depth: u32) -> Result<()> {
    if depth > DEFAULT_MAX_DEPTH {
        Err(Error::DepthOverflow { depth, max: DEFAULT_MAX_DEPTH })
    } else {
        Ok(())
    }
}

/// One refinement step with arbitrary maps:
/// `rev(g1·c) ++ g2·c ++ rev(g3·c)`, junction duplicates merged.
pub fn refine_with(chain: &Chain, maps: &[IfsMap; 3]) -> Chain {
    let mut pts: Vec<Point> = chain.points.iter().rev().map(|p| maps[0].apply(p)).collect();
    let mid: Vec<Point> = chain.points.iter().map(|p| maps[1].apply(p)).collect();
    let end: Vec<Point> = chain.points.iter().rev().map(|p| maps[2].apply(p)).collect();
    for piece in [mid, end] {
        if pts.last() == piece.first() {
            pts.extend(piece.into_iter().skip(1));
        } else {
            pts.extend(piece);
        }
    }
    Chain { points: pts, depth: chain.depth + 1 }
}

pub fn aorta_chain(depth: u32) -> Result<Chain> {
    check_depth(depth)?;
    let maps = aorta_maps();
    let mut c = Chain { points: vec![side_point(), central_point(), hypotenuse_point()], depth: 0 };
    for _ in 0..depth {
        c = refine_with(&c, &maps);
    }
    Ok(c)
}

/// The two halves of the aorta, split at the central control point.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Half {
    /// From the side control point to the center.
    Side,
    /// From the center to the hypotenuse control point.
    Hyp,
}

impl Half {
    pub fn start(self) -> Point {
        match self {
            Half::Side => side_point(),
            Half::Hyp => central_point(),
        }
    }

    pub fn end(self) -> Point {
        match self {
            Half::Side => central_point(),
            Half::Hyp => hypotenuse_point(),
        }
    }

    /// Self-similar decomposition: each half is three mapped halves,
    /// given as `(map index into aorta_maps, half, reversed)`.
    pub fn decomposition(self) -> [(usize, Half, bool); 3] {
        match self {
            Half::Side => [(0, Half::Hyp, true), (0, Half::Side, true), (1, Half::Side, false)],
            Half::Hyp => [(1, Half::Hyp, false), (2, Half::Hyp, true), (2, Half::Side, true)],
        }
    }
}

pub fn half_chain(half: Half, depth: u32) -> Result<Chain> {
    let c = aorta_chain(depth)?;
    let n = c.points.len() / 2;
    let points = match half {
        Half::Side => c.points[..=n].to_vec(),
        Half::Hyp => c.points[n..].to_vec(),
    };
    Ok(Chain { points, depth })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContinuationKind {
    Main,
    Domino,
}

impl std::str::FromStr for ContinuationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "main" => Ok(ContinuationKind::Main),
            "domino" => Ok(ContinuationKind::Domino),
            _ => Err(Error::UnknownContinuation(s.to_string())),
        }
    }
}

/// Placement of a continuation relative to the dangling triangle:
/// a copy of the side half, mirrored and shifted so it leaves the side
/// control point and ends at the center of the neighbouring triangle.
pub fn continuation_map() -> Isometry {
    Isometry::new(Mat2::int(-1, 0, 0, 1), Point::ratio(-1, 1, 0, 1)).unwrap()
}

/// Placement, relative to the dangling triangle, of the triangle whose
/// central control point the continuation reaches.
pub fn continuation_neighbour(kind: ContinuationKind) -> Isometry {
    match kind {
        ContinuationKind::Main => ChildRole::ShortLeg.placement().inverse(),
        ContinuationKind::Domino => {
            let flip = Isometry::new(Mat2::int(-1, 0, 0, -1), Point::ratio(1, 1, 2, 1)).unwrap();
            ChildRole::LongLeg.placement().inverse().compose(&flip)
        }
    }
}

/// The continuation in the frame of the standard triangle taken as the
/// dangling one. Both kinds trace the same curve; they differ in which
/// neighbouring triangle owns its far end.
pub fn continuation_chain(kind: ContinuationKind, depth: u32) -> Result<Chain> {
    let _ = kind;
    let g = continuation_map();
    Ok(half_chain(Half::Side, depth)?.map(|p| g.apply(p)))
}

pub fn verify_ifs_invariance(depth: u32) -> Result<bool> {
    verify_ifs_invariance_with(depth, &aorta_maps())
}

/// The depth-`depth` aorta assembled from its `3^depth` pieces
/// `f_{a_1}∘…∘f_{a_depth}`, each drawn as a copy of the depth-0 chain.
pub fn aorta_chain_by_pieces(depth: u32, maps: &[IfsMap; 3]) -> Result<Chain> {
    check_depth(depth)?;
    let mut pieces: Vec<(AffineMap, bool)> = vec![(AffineMap::identity(), false)];
    for _ in 0..depth {
        let mut next = Vec::with_capacity(pieces.len() * 3);
        for (w, rev) in &pieces {
            let mut kids: Vec<(AffineMap, bool)> = maps
                .iter()
                .zip([true, false, true])
                .map(|(f, flip)| (w.compose(f.affine()), rev ^ flip))
                .collect();
            if *rev {
                kids.reverse();
            }
            next.extend(kids);
        }
        pieces = next;
    }
    let base = [side_point(), central_point(), hypotenuse_point()];
    let mut points: Vec<Point> = Vec::new();
    for (w, rev) in pieces {
        let mut seg: Vec<Point> = base.iter().map(|p| w.apply(p)).collect();
        if rev {
            seg.reverse();
        }
        let skip = usize::from(points.last() == seg.first());
        points.extend(seg.into_iter().skip(skip));
    }
    Ok(Chain { points, depth })
}

/// Checks that refining the depth-`depth` aorta once with `maps` gives the
/// depth-`depth + 1` aorta assembled piece by piece.
pub fn verify_ifs_invariance_with(depth: u32, maps: &[IfsMap; 3]) -> Result<bool> {
    let next = aorta_chain_by_pieces(depth + 1, maps)?;
    let cur = aorta_chain_by_pieces(depth, maps)?;
    Ok(refine_with(&cur, maps).points == next.points && aorta_chain(depth + 1)?.points == next.points)
}

/// The region between the aorta and the right-angle-free corner.
pub fn upper_region_area(chain: &Chain) -> QuadNum {
    let mut poly = chain.points.clone();
    poly.push(triangle_vertices()[2].clone());
    signed_area(&poly).abs()
}

/// `ln n / ln(1/r)` for `n` maps of ratio `r`.
pub fn similarity_dimension(n: usize, ratio: f64) -> f64 {
    if n <= 1 {
        return 0.0;
    }
    (n as f64).ln() / (1.0 / ratio).ln()
}

/// `ln 3 / ln √5`.
pub fn exact_dimension() -> f64 {
    3f64.ln() / 5f64.sqrt().ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoxCount {
    pub dimension: f64,
    pub residual: f64,
}

/// Least-squares slope of `log N(ε)` against `log(1/ε)`, counting grid
/// boxes that contain a chain vertex.
pub fn box_counting_dimension(points: &[(f64, f64)], scales: &[f64]) -> Result<BoxCount> {
    if scales.len() < 3 {
        return Err(Error::TooFewScales { need: 3, got: scales.len() });
    }
    let samples: Vec<(f64, f64)> = scales
        .iter()
        .map(|&eps| {
            let mut boxes: Vec<(i64, i64)> =
                points.iter().map(|&(x, y)| ((x / eps).floor() as i64, (y / eps).floor() as i64)).collect();
            boxes.sort_unstable();
            boxes.dedup();
            ((1.0 / eps).ln(), (boxes.len() as f64).ln())
        })
        .collect();
    let n = samples.len() as f64;
    let mx = samples.iter().map(|s| s.0).sum::<f64>() / n;
    let my = samples.iter().map(|s| s.1).sum::<f64>() / n;
    let sxy: f64 = samples.iter().map(|s| (s.0 - mx) * (s.1 - my)).sum();
    let sxx: f64 = samples.iter().map(|s| (s.0 - mx).powi(2)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let residual = (samples.iter().map(|s| (s.1 - my - slope * (s.0 - mx)).powi(2)).sum::<f64>() / n).sqrt();
    Ok(BoxCount { dimension: slope, residual })
}

/// Dyadic scales `2^-lo ..= 2^-hi`.
pub fn dyadic_scales(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| 2f64.powi(-k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariance_holds_and_detects_bad_maps() {
        for d in 0..5 {
            assert!(verify_ifs_invariance(d).unwrap());
        }
        let [a, b, c] = aorta_maps();
        assert!(!verify_ifs_invariance_with(2, &[c, b, a]).unwrap());
    }

    #[test]
    fn aorta_halves_the_triangle_at_every_depth() {
        let tri: Vec<Point> = triangle_vertices().to_vec();
        let half = signed_area(&tri).abs() * QuadNum::ratio(1, 2);
        for d in 0..=6 {
            assert_eq!(upper_region_area(&aorta_chain(d).unwrap()), half, "depth {d}");
        }
    }

    #[test]
    fn map_values() {
        let [f1, f2, f3] = aorta_maps();
        assert_eq!(f2.apply(&Point::origin()), Point::origin());
        assert_eq!(f1.apply(&hypotenuse_point()), side_point());
        assert_eq!(f3.apply(&side_point()), hypotenuse_point());
        assert_eq!(f2.apply(&central_point()), central_point());
    }

    #[test]
    fn maps_are_child_placements_shrunk() {
        let mi = AffineMap::pinwheel().inverse();
        for (f, role) in aorta_maps().iter().zip(aorta_map_roles()) {
            assert_eq!(*f.affine(), mi.compose(role.placement().affine()));
        }
    }

    #[test]
    fn depth_one_junctions() {
        let c = aorta_chain(1).unwrap();
        assert_eq!(c.segments(), 6);
        assert_eq!(c.points[2], Point::ratio(-1, 5, -1, 10));
        assert_eq!(c.points[4], Point::ratio(-1, 10, 1, 5));
        assert_eq!(c.points[3], Point::origin());
    }

    #[test]
    fn segment_counts_and_endpoints() {
        for d in 0..6 {
            let c = aorta_chain(d).unwrap();
            assert_eq!(c.segments(), 2 * 3usize.pow(d));
            assert_eq!(*c.first(), side_point());
            assert_eq!(*c.last(), hypotenuse_point());
            assert_eq!(c.points[c.points.len() / 2], Point::origin());
        }
    }

    #[test]
    fn depth_guard() {
        assert_eq!(aorta_chain(13).unwrap_err(), Error::DepthOverflow { depth: 13, max: 12 });
    }

    #[test]
    fn halves_decompose() {
        let maps = aorta_maps();
        for half in [Half::Side, Half::Hyp] {
            let want = half_chain(half, 3).unwrap();
            let mut got: Vec<Point> = Vec::new();
            for (k, h, rev) in half.decomposition() {
                let mut piece = half_chain(h, 2).unwrap().map(|p| maps[k].apply(p));
                if rev {
                    piece = piece.reversed();
                }
                let skip = usize::from(!got.is_empty());
                got.extend(piece.points.into_iter().skip(skip));
            }
            assert_eq!(got, want.points);
        }
    }

    #[test]
    fn continuation_reaches_the_neighbour_center() {
        for kind in [ContinuationKind::Main, ContinuationKind::Domino] {
            let c = continuation_chain(kind, 2).unwrap();
            assert_eq!(*c.first(), side_point());
            assert_eq!(*c.last(), continuation_neighbour(kind).apply(&central_point()));
            assert_eq!(c.segments(), 9);
        }
    }

    #[test]
    fn dimension_values() {
        assert!((exact_dimension() - 1.3652).abs() < 1e-4);
        assert!((similarity_dimension(9, 0.2) - exact_dimension()).abs() < 1e-12);
        assert_eq!(similarity_dimension(1, 0.5), 0.0);
    }

    #[test]
    fn box_counting_controls() {
        let line: Vec<(f64, f64)> = (0..100_000).map(|i| (i as f64 / 100_000.0, 0.3)).collect();
        let b = box_counting_dimension(&line, &dyadic_scales(2, 9)).unwrap();
        assert!((b.dimension - 1.0).abs() < 0.02);
        let dot = box_counting_dimension(&[(0.1, 0.1)], &dyadic_scales(2, 9)).unwrap();
        assert_eq!(dot.dimension, 0.0);
        assert!(box_counting_dimension(&line, &[0.5, 0.25]).is_err());
    }
}
