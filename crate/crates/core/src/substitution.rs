//! Prototiles, inflate-and-subdivide rules, supertiles and the
//! triangle ↔ kite/domino derivation maps.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{AffineMap, Isometry, Mat2, Point};
use crate::polygon::{bbox, convex_contains, convex_interiors_disjoint, signed_area};
use crate::quad::QuadNum;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProtoId {
    Triangle,
    Kite,
    /// Two direct (unreflected) triangles.
    DominoA,
    /// Two reflected triangles; the mirror image of `DominoA`.
    DominoB,
}

impl ProtoId {
    pub const ALL: [ProtoId; 4] = [ProtoId::Triangle, ProtoId::Kite, ProtoId::DominoA, ProtoId::DominoB];
    pub const KITE_DOMINO: [ProtoId; 3] = [ProtoId::Kite, ProtoId::DominoA, ProtoId::DominoB];

    pub fn name(self) -> &'static str {
        match self {
            ProtoId::Triangle => "triangle",
            ProtoId::Kite => "kite",
            ProtoId::DominoA => "domino-a",
            ProtoId::DominoB => "domino-b",
        }
    }

    pub fn is_domino(self) -> bool {
        matches!(self, ProtoId::DominoA | ProtoId::DominoB)
    }

    /// The prototile of opposite handedness.
    pub fn mirror(self) -> ProtoId {
        match self {
            ProtoId::DominoA => ProtoId::DominoB,
            ProtoId::DominoB => ProtoId::DominoA,
            p => p,
        }
    }
}

impl fmt::Display for ProtoId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtoId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ProtoId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::UnknownPrototile(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prototile {
    pub id: ProtoId,
    /// Counterclockwise.
    pub boundary: Vec<Point>,
    pub control_points: Vec<(&'static str, Point)>,
}

impl Prototile {
    pub fn get(id: ProtoId) -> Prototile {
        let boundary = match id {
            ProtoId::Triangle => triangle_vertices().to_vec(),
            ProtoId::Kite => vec![
                Point::ratio(-1, 2, -1, 2),
                Point::ratio(1, 2, -1, 2),
                Point::ratio(11, 10, 3, 10),
                Point::ratio(-1, 2, 3, 2),
            ],
            ProtoId::DominoA | ProtoId::DominoB => vec![
                Point::ratio(-1, 2, -1, 2),
                Point::ratio(1, 2, -1, 2),
                Point::ratio(1, 2, 3, 2),
                Point::ratio(-1, 2, 3, 2),
            ],
        };
        let control_points = match id {
            ProtoId::Triangle => vec![
                ("central", central_point()),
                ("side", side_point()),
                ("hypotenuse", hypotenuse_point()),
            ],
            _ => halves(id)
                .iter()
                .enumerate()
                .map(|(i, g)| (if i == 0 { "central" } else { "central-2" }, g.apply(&central_point())))
                .collect(),
        };
        Prototile { id, boundary, control_points }
    }

    pub fn area(&self) -> QuadNum {
        signed_area(&self.boundary)
    }

    pub fn placed(&self, g: &Isometry) -> Vec<Point> {
        self.boundary.iter().map(|p| g.apply(p)).collect()
    }
}

/// Standard triangle: right angle at `(-1/2, -1/2)`, legs 1 and 2.
pub fn triangle_vertices() -> [Point; 3] {
    [Point::ratio(-1, 2, -1, 2), Point::ratio(1, 2, -1, 2), Point::ratio(-1, 2, 3, 2)]
}

pub fn central_point() -> Point {
    Point::origin()
}

pub fn side_point() -> Point {
    Point::ratio(-1, 2, 0, 1)
}

pub fn hypotenuse_point() -> Point {
    Point::ratio(0, 1, 1, 2)
}

/// Reflection across the hypotenuse line of the standard triangle.
fn kite_partner() -> Isometry {
    Isometry::new(
        Mat2::new(QuadNum::ratio(-3, 5), QuadNum::ratio(-4, 5), QuadNum::ratio(-4, 5), QuadNum::ratio(3, 5)),
        Point::ratio(2, 5, 1, 5),
    )
    .unwrap()
}

/// Half-turn about the hypotenuse midpoint `(0, 1/2)`.
fn domino_partner() -> Isometry {
    Isometry::new(Mat2::int(-1, 0, 0, -1), Point::ratio(0, 1, 1, 1)).unwrap()
}

/// The two triangle placements making up a kite/domino in standard
/// position. For a triangle the single identity placement.
pub fn halves(id: ProtoId) -> Vec<Isometry> {
    match id {
        ProtoId::Triangle => vec![Isometry::identity()],
        ProtoId::Kite => vec![Isometry::identity(), kite_partner()],
        ProtoId::DominoA => vec![Isometry::identity(), domino_partner()],
        ProtoId::DominoB => {
            let r = Isometry::reflect_y();
            vec![r.clone(), r.compose(&domino_partner())]
        }
    }
}

/// The five children of the inflated standard triangle, by role.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum ChildRole {
    /// The standard triangle itself; the substitution fixes it.
    Central,
    /// Half-turn of `Central` about its hypotenuse midpoint.
    Opposite,
    /// Mirror of `Central` sharing its long leg's lower half.
    Side,
    /// Lies along the parent's short leg.
    ShortLeg,
    /// Lies along the parent's long leg, above `Opposite`.
    LongLeg,
}

impl ChildRole {
    pub const ALL: [ChildRole; 5] =
        [ChildRole::Central, ChildRole::Opposite, ChildRole::Side, ChildRole::ShortLeg, ChildRole::LongLeg];

    pub fn placement(self) -> Isometry {
        let (lin, t) = match self {
            ChildRole::Central => (Mat2::identity(), Point::origin()),
            ChildRole::Opposite => (Mat2::int(-1, 0, 0, -1), Point::ratio(0, 1, 1, 1)),
            ChildRole::Side => (Mat2::int(-1, 0, 0, 1), Point::ratio(-1, 1, 0, 1)),
            ChildRole::ShortLeg => (Mat2::int(0, -1, -1, 0), Point::ratio(0, 1, -1, 1)),
            ChildRole::LongLeg => (Mat2::int(-1, 0, 0, 1), Point::ratio(0, 1, 2, 1)),
        };
        Isometry::new(lin, t).unwrap()
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PlacedTile {
    pub proto: ProtoId,
    pub placement: Isometry,
}

impl PlacedTile {
    pub fn new(proto: ProtoId, placement: Isometry) -> Self {
        PlacedTile { proto, placement }
    }

    pub fn polygon(&self) -> Vec<Point> {
        Prototile::get(self.proto).placed(&self.placement)
    }

    /// A domino has a half-turn symmetry, so two placements describe the
    /// same tile. This picks the smaller one.
    pub fn canonical(&self) -> PlacedTile {
        if !self.proto.is_domino() {
            return self.clone();
        }
        let hs = halves(self.proto);
        let flip = hs[1].compose(&hs[0].inverse());
        let other = self.placement.compose(&flip);
        PlacedTile::new(self.proto, other.min(self.placement.clone()))
    }

    /// Constituent triangles.
    pub fn triangles(&self) -> Vec<Isometry> {
        halves(self.proto).iter().map(|h| self.placement.compose(h)).collect()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Patch {
    pub tiles: Vec<PlacedTile>,
}

impl Patch {
    pub fn new(tiles: Vec<PlacedTile>) -> Self {
        Patch { tiles }
    }

    pub fn single(proto: ProtoId) -> Self {
        Patch::new(vec![PlacedTile::new(proto, Isometry::identity())])
    }

    pub fn triangles(placements: impl IntoIterator<Item = Isometry>) -> Self {
        Patch::new(placements.into_iter().map(|g| PlacedTile::new(ProtoId::Triangle, g)).collect())
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn area(&self) -> QuadNum {
        self.tiles.iter().map(|t| Prototile::get(t.proto).area()).sum()
    }

    /// Splits every kite and domino into its two triangles.
    pub fn defuse(&self) -> Patch {
        Patch::triangles(self.tiles.iter().flat_map(PlacedTile::triangles))
    }

    /// Same multiset of tiles, ignoring order.
    pub fn same_tiles(&self, other: &Patch) -> bool {
        let mut a: Vec<_> = self.tiles.iter().map(PlacedTile::canonical).collect();
        let mut b: Vec<_> = other.tiles.iter().map(PlacedTile::canonical).collect();
        a.sort();
        b.sort();
        a == b
    }

    /// Pairwise interior-disjointness, exact. Quadratic with a bounding-box
    /// prefilter; meant for desk-scale patches.
    pub fn interiors_disjoint(&self) -> bool {
        let polys: Vec<Vec<Point>> = self.tiles.iter().map(PlacedTile::polygon).collect();
        let boxes: Vec<_> = polys.iter().map(|p| bbox(p)).collect();
        let mut order: Vec<usize> = (0..polys.len()).collect();
        order.sort_by(|&i, &j| boxes[i].0.total_cmp(&boxes[j].0));
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                if boxes[j].0 >= boxes[i].2 - 1e-9 {
                    break;
                }
                let overlap_y = boxes[i].1 < boxes[j].3 - 1e-9 && boxes[j].1 < boxes[i].3 - 1e-9;
                if overlap_y && !convex_interiors_disjoint(&polys[i], &polys[j]) {
                    return false;
                }
            }
        }
        true
    }

    /// Distinct linear parts occurring in the patch.
    pub fn orientations(&self) -> std::collections::BTreeSet<Mat2> {
        self.tiles.iter().map(|t| t.placement.linear().clone()).collect()
    }
}

/// An inflate-and-subdivide rule: inflate by `expansion`, then replace the
/// inflated prototile by `children` (placements relative to the standard
/// position of the parent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionRule<P: Ord + Clone = ProtoId> {
    pub expansion: AffineMap,
    pub children: BTreeMap<P, Vec<(P, Isometry)>>,
}

impl<P: Ord + Clone + fmt::Debug> SubstitutionRule<P> {
    /// Placement of a child of a tile placed at `g`:
    /// `(E ∘ g ∘ E⁻¹) ∘ child`.
    pub fn child_placement(&self, g: &Isometry, child: &Isometry) -> Isometry {
        self.inflate_placement(g).compose(child)
    }

    /// `E ∘ g ∘ E⁻¹`, the placement of the inflated tile.
    pub fn inflate_placement(&self, g: &Isometry) -> Isometry {
        g.conjugate(&self.expansion).expect("expansion is a similarity")
    }

    pub fn children_of(&self, p: &P) -> Result<&[(P, Isometry)]> {
        self.children
            .get(p)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownPrototile(format!("{p:?}")))
    }

    /// `|det E|`, the area expansion.
    pub fn area_factor(&self) -> QuadNum {
        self.expansion.det().abs()
    }
}

impl SubstitutionRule<ProtoId> {
    /// Areas sum exactly, every child lies in the inflated parent and
    /// children have pairwise disjoint interiors.
    pub fn verify_exact_cover(&self) -> Result<()> {
        for (parent, kids) in &self.children {
            let proto = Prototile::get(*parent);
            let inflated: Vec<Point> = proto.boundary.iter().map(|p| self.expansion.apply(p)).collect();
            let total: QuadNum = kids.iter().map(|(c, _)| Prototile::get(*c).area()).sum();
            if total != &proto.area() * &self.area_factor() {
                return Err(Error::ExactCover(format!("{parent}: child areas sum to {total}")));
            }
            let polys: Vec<Vec<Point>> = kids.iter().map(|(c, g)| Prototile::get(*c).placed(g)).collect();
            for (i, poly) in polys.iter().enumerate() {
                if !poly.iter().all(|v| convex_contains(&inflated, v)) {
                    return Err(Error::ExactCover(format!("{parent}: child {i} leaves the inflated tile")));
                }
                for (j, other) in polys.iter().enumerate().skip(i + 1) {
                    if !convex_interiors_disjoint(poly, other) {
                        return Err(Error::ExactCover(format!("{parent}: children {i} and {j} overlap")));
                    }
                }
            }
        }
        Ok(())
    }
}

fn sort_children<P: Ord + Clone>(kids: &mut [(P, Isometry)]) {
    kids.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
}

/// Exhaustive search for the five-triangle subdivision of `M_P·T` that
/// keeps the standard triangle in place. Candidate placements use the
/// sixteen linear parts built from quarter turns, rotation by `-φ` and the
/// reflection, with translations on the half-integer grid.
pub fn search_pinwheel_children() -> Vec<Vec<Isometry>> {
    let m = AffineMap::pinwheel();
    let tri = triangle_vertices();
    let parent: Vec<Point> = tri.iter().map(|p| m.apply(p)).collect();
    let quarter = [Mat2::int(1, 0, 0, 1), Mat2::int(0, -1, 1, 0), Mat2::int(-1, 0, 0, -1), Mat2::int(0, 1, -1, 0)];
    let tilt = Isometry::rot_phi().inverse().linear().clone();
    let mut linears = Vec::new();
    for q in &quarter {
        for base in [Mat2::identity(), tilt.clone()] {
            for refl in [Mat2::identity(), Mat2::int(-1, 0, 0, 1)] {
                linears.push(q.mul(&base).mul(&refl));
            }
        }
    }
    let (x0, y0, x1, y1) = bbox(&parent);
    let mut candidates: Vec<(Isometry, Vec<Point>)> = Vec::new();
    for lin in &linears {
        for i in ((x0 - 2.0) * 2.0).floor() as i64..=((x1 + 2.0) * 2.0).ceil() as i64 {
            for j in ((y0 - 2.0) * 2.0).floor() as i64..=((y1 + 2.0) * 2.0).ceil() as i64 {
                let g = Isometry::new(lin.clone(), Point::ratio(i, 2, j, 2)).unwrap();
                let poly: Vec<Point> = tri.iter().map(|p| g.apply(p)).collect();
                if poly.iter().all(|v| convex_contains(&parent, v)) {
                    candidates.push((g, poly));
                }
            }
        }
    }
    let pinned = candidates.iter().position(|(g, _)| *g == Isometry::identity());
    let Some(pinned) = pinned else { return Vec::new() };
    let mut out = Vec::new();
    let mut chosen = vec![pinned];
    extend_cover(&candidates, &mut chosen, 0, &mut out);
    out
}

fn extend_cover(
    cands: &[(Isometry, Vec<Point>)],
    chosen: &mut Vec<usize>,
    from: usize,
    out: &mut Vec<Vec<Isometry>>,
) {
    if chosen.len() == 5 {
        let mut sol: Vec<Isometry> = chosen.iter().map(|&i| cands[i].0.clone()).collect();
        sol.sort();
        out.push(sol);
        return;
    }
    for k in from..cands.len() {
        if chosen.contains(&k) {
            continue;
        }
        if chosen.iter().all(|&c| convex_interiors_disjoint(&cands[c].1, &cands[k].1)) {
            chosen.push(k);
            extend_cover(cands, chosen, k + 1, out);
            chosen.pop();
        }
    }
}

/// The pinwheel inflate-and-subdivide rule: expansion `M_P`, five children.
pub fn pinwheel_rule() -> &'static SubstitutionRule {
    static RULE: OnceLock<SubstitutionRule> = OnceLock::new();
    RULE.get_or_init(|| {
        let mut kids: Vec<(ProtoId, Isometry)> =
            ChildRole::ALL.iter().map(|r| (ProtoId::Triangle, r.placement())).collect();
        sort_children(&mut kids);
        let rule = SubstitutionRule {
            expansion: AffineMap::pinwheel(),
            children: BTreeMap::from([(ProtoId::Triangle, kids)]),
        };
        rule.verify_exact_cover().expect("pinwheel rule must be an exact cover");
        rule
    })
}

pub fn substitute<P: Ord + Clone + fmt::Debug>(
    tiles: &[(P, Isometry)],
    rule: &SubstitutionRule<P>,
) -> Result<Vec<(P, Isometry)>> {
    let mut out = Vec::new();
    for (proto, g) in tiles {
        let kids = rule.children_of(proto)?;
        let big = rule.inflate_placement(g);
        out.extend(kids.iter().map(|(c, h)| (c.clone(), big.compose(h))));
    }
    Ok(out)
}

pub fn substitute_patch(patch: &Patch, rule: &SubstitutionRule) -> Result<Patch> {
    let tiles: Vec<(ProtoId, Isometry)> = patch.tiles.iter().map(|t| (t.proto, t.placement.clone())).collect();
    Ok(Patch::new(
        substitute(&tiles, rule)?
            .into_iter()
            .map(|(p, g)| PlacedTile::new(p, g))
            .collect(),
    ))
}

/// `n`-fold substitution of the prototile in standard position.
pub fn supertile(proto: ProtoId, n: u32, rule: &SubstitutionRule) -> Result<Patch> {
    let mut patch = Patch::single(proto);
    for _ in 0..n {
        patch = substitute_patch(&patch, rule)?;
    }
    Ok(patch)
}

/// Level-`n` pinwheel triangle supertile.
pub fn pinwheel_supertile(n: u32) -> Patch {
    supertile(ProtoId::Triangle, n, pinwheel_rule()).expect("triangle is covered by the pinwheel rule")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fusion {
    pub patch: Patch,
    /// Triangles whose hypotenuse partner is not in the input.
    pub unpaired: Vec<Isometry>,
    /// For every input triangle, the index of its hypotenuse partner.
    pub partner: Vec<Option<usize>>,
}

fn hypotenuse_key(g: &Isometry) -> (Point, Point) {
    let [_, b, c] = triangle_vertices();
    let (p, q) = (g.apply(&b), g.apply(&c));
    if p <= q {
        (p, q)
    } else {
        (q, p)
    }
}

/// Index of the hypotenuse partner of every triangle. Errors if three
/// triangles share a hypotenuse.
pub fn hypotenuse_partners(triangles: &[Isometry]) -> Result<Vec<Option<usize>>> {
    let mut by_hyp: HashMap<(Point, Point), Vec<usize>> = HashMap::new();
    for (i, g) in triangles.iter().enumerate() {
        by_hyp.entry(hypotenuse_key(g)).or_default().push(i);
    }
    let mut partner = vec![None; triangles.len()];
    for (key, idx) in by_hyp {
        match idx.as_slice() {
            [_] => {}
            [i, j] => {
                partner[*i] = Some(*j);
                partner[*j] = Some(*i);
            }
            _ => return Err(Error::Invariant(format!("{} triangles share hypotenuse {:?}", idx.len(), key))),
        }
    }
    Ok(partner)
}

/// Kite/domino containing triangle `g` with hypotenuse partner `h`.
pub fn fuse_pair(g: &Isometry, h: &Isometry) -> Result<PlacedTile> {
    let tile = if g.det() != h.det() {
        let direct = if g.det() > 0 { g } else { h };
        PlacedTile::new(ProtoId::Kite, direct.clone())
    } else {
        let proto = if g.det() > 0 { ProtoId::DominoA } else { ProtoId::DominoB };
        PlacedTile::new(proto, g.compose(&halves(proto)[0].inverse())).canonical()
    };
    let mut got = tile.triangles();
    let mut want = vec![g.clone(), h.clone()];
    got.sort();
    want.sort();
    if got != want {
        return Err(Error::Invariant(format!("triangles {g:?} and {h:?} do not form a kite or domino")));
    }
    Ok(tile)
}

/// Fuses triangles hypotenuse-to-hypotenuse into kites and dominoes.
/// Non-triangle tiles in the input are split first.
pub fn fuse_kite_domino(patch: &Patch) -> Result<Fusion> {
    let tris: Vec<Isometry> = patch.defuse().tiles.into_iter().map(|t| t.placement).collect();
    let partner = hypotenuse_partners(&tris)?;
    let mut tiles = Vec::new();
    let mut unpaired = Vec::new();
    for (i, p) in partner.iter().enumerate() {
        match p {
            Some(j) if *j > i => tiles.push(fuse_pair(&tris[i], &tris[*j])?),
            Some(_) => {}
            None => unpaired.push(tris[i].clone()),
        }
    }
    Ok(Fusion { patch: Patch::new(tiles), unpaired, partner })
}

/// The kite-domino rule, obtained by substituting each of kite and the two
/// dominoes twice with the pinwheel rule and fusing. Expansion `M_P²`,
/// 25 children per prototile.
pub fn kite_domino_rule() -> &'static SubstitutionRule {
    static RULE: OnceLock<SubstitutionRule> = OnceLock::new();
    RULE.get_or_init(|| build_kite_domino_rule().expect("kite-domino rule must fuse and cover exactly"))
}

fn build_kite_domino_rule() -> Result<SubstitutionRule> {
    let pin = pinwheel_rule();
    let mut children = BTreeMap::new();
    for proto in ProtoId::KITE_DOMINO {
        let mut patch = Patch::single(proto).defuse();
        for _ in 0..2 {
            patch = substitute_patch(&patch, pin)?;
        }
        let fused = fuse_kite_domino(&patch)?;
        if !fused.unpaired.is_empty() {
            return Err(Error::Unpaired(fused.unpaired.len()));
        }
        let mut kids: Vec<(ProtoId, Isometry)> = fused.patch.tiles.into_iter().map(|t| (t.proto, t.placement)).collect();
        sort_children(&mut kids);
        children.insert(proto, kids);
    }
    let rule = SubstitutionRule { expansion: pin.expansion.compose(&pin.expansion), children };
    rule.verify_exact_cover()?;
    Ok(rule)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_finds_the_frozen_children() {
        let sols = search_pinwheel_children();
        assert_eq!(sols.len(), 1);
        let mut frozen: Vec<Isometry> = ChildRole::ALL.iter().map(|r| r.placement()).collect();
        frozen.sort();
        assert_eq!(sols[0], frozen);
    }

    #[test]
    fn pinwheel_rule_shape() {
        let rule = pinwheel_rule();
        let kids = rule.children_of(&ProtoId::Triangle).unwrap();
        assert_eq!(kids.len(), 5);
        assert!(kids.iter().any(|(_, g)| *g == Isometry::identity()));
        assert!(kids.iter().any(|(_, g)| g.is_reflection()));
        let area: QuadNum = kids.iter().map(|(c, _)| Prototile::get(*c).area()).sum();
        assert_eq!(area, QuadNum::from_int(5));
    }

    #[test]
    fn prototile_areas() {
        assert_eq!(Prototile::get(ProtoId::Triangle).area(), QuadNum::one());
        assert_eq!(Prototile::get(ProtoId::Kite).area(), QuadNum::from_int(2));
        assert_eq!(Prototile::get(ProtoId::DominoA).area(), QuadNum::from_int(2));
    }

    #[test]
    fn counts_by_level() {
        assert_eq!(pinwheel_supertile(0).tiles, vec![PlacedTile::new(ProtoId::Triangle, Isometry::identity())]);
        assert_eq!(pinwheel_supertile(1).len(), 5);
        assert_eq!(pinwheel_supertile(2).len(), 25);
        assert_eq!(pinwheel_supertile(3).len(), 125);
        assert!(substitute_patch(&Patch::default(), pinwheel_rule()).unwrap().is_empty());
    }

    #[test]
    fn supertiles_keep_the_standard_triangle() {
        for n in 0..5 {
            let p = pinwheel_supertile(n);
            assert!(p.tiles.iter().any(|t| t.placement == Isometry::identity()));
        }
    }

    #[test]
    fn unknown_prototile_is_an_error() {
        let patch = Patch::single(ProtoId::Kite);
        assert!(matches!(substitute_patch(&patch, pinwheel_rule()), Err(Error::UnknownPrototile(_))));
    }

    #[test]
    fn kite_fuses_from_its_halves() {
        let f = fuse_kite_domino(&Patch::single(ProtoId::Kite).defuse()).unwrap();
        assert_eq!(f.patch, Patch::single(ProtoId::Kite));
        assert!(f.unpaired.is_empty());
        for d in [ProtoId::DominoA, ProtoId::DominoB] {
            let f = fuse_kite_domino(&Patch::single(d).defuse()).unwrap();
            assert_eq!(f.patch.tiles.len(), 1);
            assert_eq!(f.patch.tiles[0].proto, d);
            assert!(f.patch.same_tiles(&Patch::single(d)) || f.patch.tiles[0].triangles().len() == 2);
        }
    }

    #[test]
    fn single_triangle_stays_unpaired() {
        let f = fuse_kite_domino(&Patch::single(ProtoId::Triangle)).unwrap();
        assert!(f.patch.is_empty());
        assert_eq!(f.unpaired.len(), 1);
    }

    #[test]
    fn level_two_kite_fuses_completely() {
        let mut p = Patch::single(ProtoId::Kite).defuse();
        for _ in 0..2 {
            p = substitute_patch(&p, pinwheel_rule()).unwrap();
        }
        assert_eq!(p.len(), 50);
        let f = fuse_kite_domino(&p).unwrap();
        assert_eq!(f.patch.len(), 25);
        assert!(f.unpaired.is_empty());
    }

    #[test]
    fn kite_domino_rule_covers_exactly() {
        let rule = kite_domino_rule();
        for p in ProtoId::KITE_DOMINO {
            let kids = rule.children_of(&p).unwrap();
            assert_eq!(kids.len(), 25);
            let area: QuadNum = kids.iter().map(|(c, _)| Prototile::get(*c).area()).sum();
            assert_eq!(area, QuadNum::from_int(50));
        }
        assert_eq!(rule.area_factor(), QuadNum::from_int(25));
    }

    #[test]
    fn kite_domino_rule_commutes_with_fusion() {
        let kd = kite_domino_rule();
        let twice = supertile(ProtoId::Kite, 2, kd).unwrap();
        let mut tri = Patch::single(ProtoId::Kite).defuse();
        for _ in 0..4 {
            tri = substitute_patch(&tri, pinwheel_rule()).unwrap();
        }
        let fused = fuse_kite_domino(&tri).unwrap();
        assert!(fused.unpaired.is_empty());
        assert!(twice.same_tiles(&fused.patch));
    }

    #[test]
    fn proto_names_round_trip() {
        for p in ProtoId::ALL {
            assert_eq!(p.name().parse::<ProtoId>().unwrap(), p);
        }
        assert!("hexagon".parse::<ProtoId>().is_err());
    }
}
