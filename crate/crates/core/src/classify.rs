//! Congruence classification of faces by their symbolic boundary.
//!
//! A face boundary is a cyclic sequence of aorta halves, each placed by a
//! similarity `m_i`. The relative maps `m_i⁻¹∘m_{i+1}` do not change when
//! the face is moved, so the cyclic sequence of relative maps (with the
//! half and direction of each fragment) describes the face up to direct
//! congruence. The canonical key is its least rotation among those that
//! start at an unreflected fragment.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use num_rational::BigRational;

use crate::aorta::Half;
use crate::faces::Face;
use crate::geom::{AffineMap, Isometry, Mat2};

/// `(relative map to the next fragment, half, forward)`.
pub type KeyItem = (AffineMap, Half, bool);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct BoundaryKey(pub Vec<KeyItem>);

impl BoundaryKey {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Absolute fragment maps, starting from the identity.
    pub fn maps(&self) -> Vec<AffineMap> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut cur = AffineMap::identity();
        for (rel, _, _) in &self.0 {
            out.push(cur.clone());
            cur = cur.compose(rel);
        }
        out
    }

    /// The canonical shape: the face moved so that its first fragment is
    /// the side or hypotenuse half of the aorta of the central child of
    /// the standard triangle.
    pub fn shape(&self) -> Face {
        let shrink = AffineMap::pinwheel().inverse();
        Face {
            boundary: self
                .maps()
                .into_iter()
                .zip(&self.0)
                .map(|(m, (_, h, fwd))| (crate::marking::Fragment::new(shrink.compose(&m), *h), *fwd))
                .collect(),
        }
    }
}

pub fn items(face: &Face) -> Vec<KeyItem> {
    face.boundary.iter().map(|(f, fwd)| (f.map.clone(), f.half, *fwd)).collect()
}

/// Boundary of the mirror image across the y-axis, still counterclockwise.
pub fn reflect_items(items: &[KeyItem]) -> Vec<KeyItem> {
    let ry = AffineMap::linear(Mat2::int(-1, 0, 0, 1)).unwrap();
    items.iter().rev().map(|(m, h, fwd)| (ry.compose(m), *h, !fwd)).collect()
}

fn fingerprint(item: &KeyItem) -> u64 {
    let mut h = DefaultHasher::new();
    item.hash(&mut h);
    h.finish()
}

fn relative(items: &[KeyItem]) -> Vec<KeyItem> {
    let n = items.len();
    (0..n)
        .map(|i| {
            let (m, h, fwd) = &items[i];
            (m.inverse().compose(&items[(i + 1) % n].0), *h, *fwd)
        })
        .collect()
}

/// Canonical key together with the starting positions that achieve it.
pub fn canonical(items: &[KeyItem]) -> (BoundaryKey, Vec<usize>) {
    let rel = relative(items);
    let n = rel.len();
    let tags: Vec<u64> = rel.iter().map(fingerprint).collect();
    let cmp_from = |s: usize, t: usize| {
        (0..n)
            .map(|i| {
                let (a, b) = ((s + i) % n, (t + i) % n);
                tags[a].cmp(&tags[b]).then_with(|| rel[a].cmp(&rel[b]))
            })
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    };
    let mut starts: Vec<usize> = Vec::new();
    for s in (0..n).filter(|&s| items[s].0.det().signum() > 0) {
        match starts.first().map(|&b| cmp_from(s, b)) {
            None | Some(std::cmp::Ordering::Less) => starts = vec![s],
            Some(std::cmp::Ordering::Equal) => starts.push(s),
            Some(std::cmp::Ordering::Greater) => {}
        }
    }
    let key = match starts.first() {
        Some(&s) => (0..n).map(|i| rel[(s + i) % n].clone()).collect(),
        None => Vec::new(),
    };
    (BoundaryKey(key), starts)
}

/// Placement of the canonical shape onto the face when starting at `s`.
fn placement_at(items: &[KeyItem], s: usize) -> Isometry {
    Isometry::from_affine(items[s].0.compose(&AffineMap::pinwheel()))
        .expect("fragments of one face share a scale of 1/√5")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classified {
    pub key: BoundaryKey,
    /// Smallest of the placements taking `key.shape()` onto the face.
    pub placement: Isometry,
    /// Rotations of the shape onto itself, in its own frame.
    pub symmetries: Vec<Isometry>,
    pub mirror_key: BoundaryKey,
    /// Placement of `mirror_key.shape()` onto the reflected face.
    pub mirror_placement: Isometry,
    pub area: BigRational,
}

impl Classified {
    pub fn achiral_key(&self) -> &BoundaryKey {
        (&self.key).min(&self.mirror_key)
    }

    /// Placement of the achiral representative onto the face; a
    /// reflection when the face is the mirror copy.
    pub fn achiral_placement(&self) -> Isometry {
        if self.key <= self.mirror_key {
            self.placement.clone()
        } else {
            Isometry::reflect_y().compose(&self.mirror_placement)
        }
    }

    pub fn is_mirror_symmetric(&self) -> bool {
        self.key == self.mirror_key
    }
}

fn placements(items: &[KeyItem], starts: &[usize]) -> (Isometry, Vec<Isometry>) {
    let all: Vec<Isometry> = starts.iter().map(|&s| placement_at(items, s)).collect();
    let best = all.iter().min().expect("a bounded face has a direct fragment").clone();
    let inv = best.inverse();
    let mut sym: Vec<Isometry> = all.iter().map(|p| inv.compose(p)).collect();
    sym.sort();
    (best, sym)
}

pub fn classify_face(face: &Face) -> Classified {
    let it = items(face);
    let (key, starts) = canonical(&it);
    let (placement, symmetries) = placements(&it, &starts);
    let rit = reflect_items(&it);
    let (mirror_key, mstarts) = canonical(&rit);
    let (mirror_placement, _) = placements(&rit, &mstarts);
    let area = face.area().as_rational().expect("face areas are rational").clone();
    Classified { key, placement, symmetries, mirror_key, mirror_placement, area }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::faces::complete_faces;
    use crate::marking::mark_patch;
    use crate::substitution::{halves, pinwheel_rule, substitute, ProtoId};

    fn sample_faces() -> Vec<Face> {
        let mut tris: Vec<(ProtoId, Isometry)> =
            halves(ProtoId::Kite).into_iter().map(|g| (ProtoId::Triangle, g)).collect();
        for _ in 0..2 {
            tris = substitute(&tris, pinwheel_rule()).unwrap();
        }
        let g: Vec<Isometry> = tris.into_iter().map(|t| t.1).collect();
        complete_faces(&mark_patch(&g).unwrap()).unwrap()
    }

    #[test]
    fn placement_maps_shape_onto_face() {
        for f in sample_faces() {
            let c = classify_face(&f);
            let shape = c.key.shape();
            let moved: Vec<_> = shape
                .boundary
                .iter()
                .map(|(fr, d)| (c.placement.affine().compose(&fr.map), fr.half, *d))
                .collect();
            let mut want = items(&f);
            let mut got = moved;
            want.sort();
            got.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn classification_is_idempotent() {
        for f in sample_faces() {
            let c = classify_face(&f);
            let again = classify_face(&c.key.shape());
            assert_eq!(again.key, c.key);
            assert!(again.symmetries.iter().any(|s| again.placement.compose(s) == Isometry::identity()));
            assert_eq!(again.area, c.area);
        }
    }

    #[test]
    fn invariant_under_motion() {
        let motion = Isometry::new(Mat2::int(0, -1, 1, 0), crate::geom::Point::ratio(7, 2, -3, 1)).unwrap();
        for f in sample_faces().into_iter().take(5) {
            let moved = Face {
                boundary: f
                    .boundary
                    .iter()
                    .map(|(fr, d)| (crate::marking::Fragment::new(motion.affine().compose(&fr.map), fr.half), *d))
                    .collect(),
            };
            assert_eq!(classify_face(&moved).key, classify_face(&f).key);
            let mirrored = Face {
                boundary: reflect_items(&items(&f))
                    .into_iter()
                    .map(|(m, h, d)| (crate::marking::Fragment::new(m, h), d))
                    .collect(),
            };
            let a = classify_face(&f);
            let b = classify_face(&mirrored);
            assert_eq!(b.key, a.mirror_key);
            assert_eq!(b.achiral_key(), a.achiral_key());
        }
    }
}
