//! Fractal markings of triangle patches: sub-aortas with connectors (the
//! kite-domino method) and full aortas with continuations.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::aorta::{continuation_map, continuation_neighbour, half_chain, Chain, ContinuationKind, Half};
use crate::error::{Error, Result};
use crate::geom::{AffineMap, Isometry, Mat2, Point};
use crate::substitution::{central_point, halves, hypotenuse_partners, side_point, ChildRole, ProtoId};

/// One half of an aorta placed by a similarity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Fragment {
    pub map: AffineMap,
    pub half: Half,
}

impl Fragment {
    pub fn new(map: AffineMap, half: Half) -> Self {
        Fragment { map, half }
    }

    pub fn start(&self) -> Point {
        self.map.apply(&self.half.start())
    }

    pub fn end(&self) -> Point {
        self.map.apply(&self.half.end())
    }

    pub fn chain(&self, depth: u32) -> Result<Chain> {
        Ok(half_chain(self.half, depth)?.map(|p| self.map.apply(p)))
    }

    /// The three fragments of the inflated copy `M∘self`, in order along
    /// the fragment, each with its direction relative to it.
    pub fn inflate(&self) -> [(Fragment, bool); 3] {
        let maps = crate::aorta::aorta_maps();
        let big = AffineMap::pinwheel().compose(&self.map);
        self.half
            .decomposition()
            .map(|(k, h, rev)| (Fragment::new(big.compose(maps[k].affine()), h), !rev))
    }
}

fn shrink() -> AffineMap {
    AffineMap::pinwheel().inverse()
}

fn in_frame(g: &Isometry, local: &AffineMap) -> AffineMap {
    g.affine().compose(local)
}

/// Sub-aorta fragments of the triangle at `g`: both halves of the aorta of
/// each of its five shrunken children.
pub fn sub_aortas(g: &Isometry) -> Vec<Fragment> {
    let mi = shrink();
    let mut out = Vec::with_capacity(10);
    for role in ChildRole::ALL {
        let m = in_frame(g, &mi.compose(role.placement().affine()));
        out.push(Fragment::new(m.clone(), Half::Side));
        out.push(Fragment::new(m, Half::Hyp));
    }
    out
}

/// Connector completing the main continuation inside the triangle.
pub fn connector(g: &Isometry) -> Fragment {
    Fragment::new(in_frame(g, &shrink().compose(Isometry::rot90().affine())), Half::Side)
}

/// Extra fragment joining the central control point to the hypotenuse
/// sub-aorta when the hypotenuse partner has the same handedness.
pub fn domino_link(g: &Isometry) -> Fragment {
    Fragment::new(in_frame(g, &shrink().compose(Isometry::rot_pi().affine())), Half::Side)
}

/// Fragments of one triangle; `domino` selects whether it sits in a domino.
pub fn mark_triangle(g: &Isometry, domino: bool) -> Vec<Fragment> {
    let mut out = sub_aortas(g);
    out.push(connector(g));
    if domino {
        out.push(domino_link(g));
    }
    out
}

/// The standard-position marking as whole chains: five sub-aortas plus
/// the connector.
pub fn mark_triangle_chains(depth: u32) -> Result<Vec<Chain>> {
    let frags = mark_triangle(&Isometry::identity(), false);
    let mut out = Vec::new();
    for pair in frags[..10].chunks(2) {
        let mut c = pair[0].chain(depth)?;
        c.points.extend(pair[1].chain(depth)?.points.into_iter().skip(1));
        out.push(c);
    }
    out.push(frags[10].chain(depth)?);
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarkingMethod {
    KiteDomino,
    Continuation,
}

/// A triangle patch together with its marking fragments.
#[derive(Clone, Debug)]
pub struct MarkedPatch {
    pub method: MarkingMethod,
    pub triangles: Vec<Isometry>,
    pub partner: Vec<Option<usize>>,
    pub fragments: Vec<Fragment>,
    /// Index of the triangle each fragment belongs to.
    pub owner: Vec<usize>,
    /// Dangling ends that could not be resolved because the neighbouring
    /// triangle lies outside the patch.
    pub unresolved: Vec<Point>,
}

impl MarkedPatch {
    fn assemble(
        method: MarkingMethod,
        triangles: Vec<Isometry>,
        partner: Vec<Option<usize>>,
        per_triangle: Vec<Vec<Fragment>>,
        unresolved: Vec<Point>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut fragments = Vec::new();
        let mut owner = Vec::new();
        for (i, frags) in per_triangle.into_iter().enumerate() {
            for f in frags {
                if !seen.insert(f.clone()) {
                    return Err(Error::NonManifold(format!("fragment {:?} placed twice", f.start())));
                }
                fragments.push(f);
                owner.push(i);
            }
        }
        Ok(MarkedPatch { method, triangles, partner, fragments, owner, unresolved })
    }

    /// Centers of triangles with a hypotenuse partner, split into kite and
    /// domino centers.
    pub fn paired_centers(&self) -> (BTreeSet<Point>, BTreeSet<Point>) {
        let mut kite = BTreeSet::new();
        let mut domino = BTreeSet::new();
        for (i, p) in self.partner.iter().enumerate() {
            if let Some(j) = p {
                let c = self.triangles[i].apply(&central_point());
                if self.triangles[i].det() == self.triangles[*j].det() {
                    domino.insert(c);
                } else {
                    kite.insert(c);
                }
            }
        }
        (kite, domino)
    }

    pub fn unpaired_centers(&self) -> BTreeSet<Point> {
        self.partner
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_none())
            .map(|(i, _)| self.triangles[i].apply(&central_point()))
            .collect()
    }
}

/// Kite-domino marking of an arbitrary triangle patch.
pub fn mark_patch(triangles: &[Isometry]) -> Result<MarkedPatch> {
    let partner = hypotenuse_partners(triangles)?;
    let per: Vec<Vec<Fragment>> = triangles
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let dom = partner[i].is_some_and(|j| triangles[j].det() == g.det());
            mark_triangle(g, dom)
        })
        .collect();
    MarkedPatch::assemble(MarkingMethod::KiteDomino, triangles.to_vec(), partner, per, Vec::new())
}

/// Marking of a kite or domino in standard position.
pub fn mark_prototile(proto: ProtoId) -> Result<MarkedPatch> {
    mark_patch(&halves(proto))
}

pub fn mark_kite() -> MarkedPatch {
    mark_prototile(ProtoId::Kite).expect("the kite marks cleanly")
}

pub fn mark_domino(proto: ProtoId) -> Result<MarkedPatch> {
    if !proto.is_domino() {
        return Err(Error::UnknownPrototile(proto.to_string()));
    }
    mark_prototile(proto)
}

/// Which continuation resolves a dangling side control point of the
/// triangle at `g`, if the neighbouring triangle is present.
pub fn continuation_kind(g: &Isometry, present: &HashMap<Isometry, usize>) -> Option<ContinuationKind> {
    [ContinuationKind::Main, ContinuationKind::Domino]
        .into_iter()
        .find(|k| present.contains_key(&g.compose(&continuation_neighbour(*k))))
}

/// Aorta of every triangle, plus a continuation wherever an aorta ends at
/// a side control point that no other aorta reaches.
pub fn mark_aorta_continuation(triangles: &[Isometry]) -> Result<MarkedPatch> {
    let partner = hypotenuse_partners(triangles)?;
    let present: HashMap<Isometry, usize> = triangles.iter().cloned().enumerate().map(|(i, g)| (g, i)).collect();
    let mut endpoint_count: HashMap<Point, usize> = HashMap::new();
    for g in triangles {
        for p in [side_point(), crate::substitution::hypotenuse_point()] {
            *endpoint_count.entry(g.apply(&p)).or_default() += 1;
        }
    }
    let cont = continuation_map();
    let mut per = Vec::with_capacity(triangles.len());
    let mut unresolved = Vec::new();
    for g in triangles {
        let a = g.affine().clone();
        let mut frags = vec![Fragment::new(a.clone(), Half::Side), Fragment::new(a, Half::Hyp)];
        let s = g.apply(&side_point());
        if endpoint_count[&s] == 1 {
            if continuation_kind(g, &present).is_some() {
                frags.push(Fragment::new(g.compose(&cont).into_affine(), Half::Side));
            } else {
                unresolved.push(s);
            }
        }
        per.push(frags);
    }
    MarkedPatch::assemble(MarkingMethod::Continuation, triangles.to_vec(), partner, per, unresolved)
}

/// Linear parts of the children, for reference in tests and renders.
pub fn child_linear_parts() -> Vec<Mat2> {
    ChildRole::ALL.iter().map(|r| r.placement().linear().clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::substitution::hypotenuse_point;

    fn control_points_of_children() -> BTreeSet<Point> {
        let mi = shrink();
        let mut s = BTreeSet::new();
        for role in ChildRole::ALL {
            let m = mi.compose(role.placement().affine());
            for p in [side_point(), central_point(), hypotenuse_point()] {
                s.insert(m.apply(&p));
            }
        }
        s
    }

    #[test]
    fn triangle_marking_shape() {
        let chains = mark_triangle_chains(1).unwrap();
        assert_eq!(chains.len(), 6);
        let cps = control_points_of_children();
        for c in &chains {
            assert!(cps.contains(c.first()) && cps.contains(c.last()));
        }
    }

    #[test]
    fn connector_joins_two_child_control_points() {
        let c = connector(&Isometry::identity());
        assert_eq!(c.end(), central_point());
        assert_eq!(c.start(), Point::ratio(1, 10, -1, 5));
        assert!(control_points_of_children().contains(&c.start()));
    }

    #[test]
    fn kite_marking_is_mirror_symmetric() {
        let k = mark_kite();
        let refl = halves(ProtoId::Kite)[1].clone();
        let set: BTreeSet<_> = k.fragments.iter().cloned().collect();
        for f in &k.fragments {
            let img = Fragment::new(refl.affine().compose(&f.map), f.half);
            assert!(set.contains(&img));
        }
    }

    #[test]
    fn domino_marking_has_half_turn_symmetry() {
        for d in [ProtoId::DominoA, ProtoId::DominoB] {
            let m = mark_domino(d).unwrap();
            let turn = Isometry::new(Mat2::int(-1, 0, 0, -1), Point::ratio(0, 1, 1, 1)).unwrap();
            let set: BTreeSet<_> = m.fragments.iter().cloned().collect();
            for f in &m.fragments {
                assert!(set.contains(&Fragment::new(turn.affine().compose(&f.map), f.half)));
            }
        }
        assert!(mark_domino(ProtoId::Kite).is_err());
    }

    #[test]
    fn center_degrees() {
        let count = |m: &MarkedPatch, p: &Point| {
            m.fragments.iter().filter(|f| f.start() == *p || f.end() == *p).count()
        };
        let k = mark_kite();
        assert_eq!(count(&k, &central_point()), 3);
        let d = mark_domino(ProtoId::DominoA).unwrap();
        assert_eq!(count(&d, &central_point()), 4);
    }

    #[test]
    fn inflation_refines_fragments() {
        let f = &sub_aortas(&Isometry::identity())[3];
        let pieces = f.inflate();
        let big = AffineMap::pinwheel();
        let (first, fwd) = &pieces[0];
        let start = if *fwd { first.start() } else { first.end() };
        assert_eq!(start, big.apply(&f.start()));
        let (last, fwd) = &pieces[2];
        let end = if *fwd { last.end() } else { last.start() };
        assert_eq!(end, big.apply(&f.end()));
    }
}
