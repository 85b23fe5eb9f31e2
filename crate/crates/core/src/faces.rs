//! Planar graph of a marking and extraction of its bounded faces.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

use crate::aorta::{half_chain, Half};
use crate::error::{Error, Result};
use crate::geom::{orient, Isometry, Point};
use crate::marking::{Fragment, MarkedPatch};
use crate::polygon::signed_area;
use crate::quad::QuadNum;
use crate::substitution::triangle_vertices;

/// Half-edge: fragment index and whether it is traversed from start to end.
pub type HalfEdge = (usize, bool);

#[derive(Clone, Debug)]
pub struct MarkingGraph {
    pub nodes: Vec<Point>,
    pub index: HashMap<Point, usize>,
    pub fragments: Vec<Fragment>,
    /// `(start node, end node)` per fragment.
    pub ends: Vec<(usize, usize)>,
    /// Half-edges leaving each node, counterclockwise.
    pub rotation: Vec<Vec<HalfEdge>>,
    position: HashMap<HalfEdge, usize>,
}

fn half_plane(d: &Point) -> u8 {
    let ys = d.y.signum();
    if ys > 0 || (ys == 0 && d.x.signum() > 0) {
        0
    } else {
        1
    }
}

/// Counterclockwise order of direction vectors starting at angle 0.
pub fn angular_cmp(a: &Point, b: &Point) -> Ordering {
    half_plane(a).cmp(&half_plane(b)).then_with(|| 0.cmp(&a.cross(b).signum()))
}

impl MarkingGraph {
    /// Cyclic order at a node uses the chord to the far endpoint; the
    /// self-similar spiralling of the aorta halves keeps this order
    /// consistent with the limiting curves.
    pub fn build(fragments: &[Fragment]) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        let mut node = |p: Point, nodes: &mut Vec<Point>| -> usize {
            *index.entry(p.clone()).or_insert_with(|| {
                nodes.push(p);
                nodes.len() - 1
            })
        };
        let mut ends = Vec::with_capacity(fragments.len());
        for f in fragments {
            let a = node(f.start(), &mut nodes);
            let b = node(f.end(), &mut nodes);
            ends.push((a, b));
        }
        let mut rotation: Vec<Vec<HalfEdge>> = vec![Vec::new(); nodes.len()];
        for (e, &(a, b)) in ends.iter().enumerate() {
            rotation[a].push((e, true));
            rotation[b].push((e, false));
        }
        for (v, list) in rotation.iter_mut().enumerate() {
            let dir = |he: &HalfEdge| {
                let (a, b) = ends[he.0];
                let w = if he.1 { b } else { a };
                nodes[w].sub(&nodes[v])
            };
            list.sort_by(|x, y| angular_cmp(&dir(x), &dir(y)));
            for pair in list.windows(2) {
                if angular_cmp(&dir(&pair[0]), &dir(&pair[1])) == Ordering::Equal {
                    return Err(Error::NonManifold(format!("{:?}", nodes[v])));
                }
            }
        }
        let position = rotation
            .iter()
            .flat_map(|list| list.iter().enumerate().map(|(i, he)| (*he, i)))
            .collect();
        let index = nodes.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        Ok(MarkingGraph { nodes, index, fragments: fragments.to_vec(), ends, rotation, position })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn origin(&self, he: HalfEdge) -> usize {
        let (a, b) = self.ends[he.0];
        if he.1 {
            a
        } else {
            b
        }
    }

    pub fn target(&self, he: HalfEdge) -> usize {
        self.origin((he.0, !he.1))
    }

    /// Next half-edge along the face to the left of `he`.
    pub fn next(&self, he: HalfEdge) -> HalfEdge {
        let w = self.target(he);
        let list = &self.rotation[w];
        let i = self.position[&(he.0, !he.1)];
        list[(i + list.len() - 1) % list.len()]
    }

    /// The face cycle to the left of `he`.
    pub fn trace(&self, he: HalfEdge) -> Vec<HalfEdge> {
        let mut out = vec![he];
        let mut cur = self.next(he);
        while cur != he {
            out.push(cur);
            cur = self.next(cur);
        }
        out
    }

    pub fn half_edge(&self, f: &Fragment, forward: bool) -> Option<HalfEdge> {
        let a = self.index.get(&f.start())?;
        let list = &self.rotation[*a];
        list.iter()
            .find(|he| self.fragments[he.0] == *f)
            .map(|he| (he.0, forward))
    }

    /// All face cycles, each half-edge used once.
    pub fn all_cycles(&self) -> Vec<Vec<HalfEdge>> {
        let mut seen = vec![[false; 2]; self.fragments.len()];
        let mut out = Vec::new();
        for e in 0..self.fragments.len() {
            for fwd in [true, false] {
                if seen[e][usize::from(fwd)] {
                    continue;
                }
                let cyc = self.trace((e, fwd));
                for he in &cyc {
                    seen[he.0][usize::from(he.1)] = true;
                }
                out.push(cyc);
            }
        }
        out
    }
}

/// Angle measured in right angles and multiples of `arctan(1/2)`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Debug)]
struct Angle {
    quarters: i32,
    alphas: i32,
}

impl Angle {
    fn add(self, o: Angle) -> Angle {
        Angle { quarters: self.quarters + o.quarters, alphas: self.alphas + o.alphas }
    }
}

/// Exact test for whether a point is surrounded by triangles of a patch.
#[derive(Clone, Debug)]
pub struct Coverage {
    triangles: Vec<[Point; 3]>,
    boxes: Vec<(f64, f64, f64, f64)>,
    grid: HashMap<(i64, i64), Vec<usize>>,
}

impl Coverage {
    pub fn new(triangles: &[Isometry]) -> Self {
        let tv = triangle_vertices();
        let mut grid: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        let mut tris = Vec::with_capacity(triangles.len());
        let mut boxes = Vec::with_capacity(triangles.len());
        for (i, g) in triangles.iter().enumerate() {
            let mut v = tv.clone().map(|p| g.apply(&p));
            if g.det() < 0 {
                v.swap(1, 2);
            }
            let (x0, y0, x1, y1) = crate::polygon::bbox(&v);
            for cx in x0.floor() as i64..=x1.floor() as i64 {
                for cy in y0.floor() as i64..=y1.floor() as i64 {
                    grid.entry((cx, cy)).or_default().push(i);
                }
            }
            tris.push(v);
            boxes.push((x0, y0, x1, y1));
        }
        Coverage { triangles: tris, boxes, grid }
    }

    fn angle_at(&self, t: usize, p: &Point) -> Angle {
        let v = &self.triangles[t];
        let signs: Vec<i32> = (0..3).map(|i| orient(&v[i], &v[(i + 1) % 3], p)).collect();
        if signs.iter().any(|&s| s < 0) {
            return Angle::default();
        }
        match signs.iter().filter(|&&s| s == 0).count() {
            0 => Angle { quarters: 4, alphas: 0 },
            1 => Angle { quarters: 2, alphas: 0 },
            _ => {
                let k = v.iter().position(|q| q == p).expect("on two edges means a vertex");
                let big = {
                    let [a, b, c] = v;
                    // the acute vertex on the short leg has angle arctan 2
                    let ab = b.sub(a).dot(&b.sub(a));
                    let ac = c.sub(a).dot(&c.sub(a));
                    if ab < ac {
                        1
                    } else {
                        2
                    }
                };
                match k {
                    0 => Angle { quarters: 1, alphas: 0 },
                    k if k == big => Angle { quarters: 1, alphas: -1 },
                    _ => Angle { quarters: 0, alphas: 1 },
                }
            }
        }
    }

    /// True when the triangles around `p` fill a full turn.
    pub fn is_interior(&self, p: &Point) -> bool {
        let (x, y) = p.to_f64();
        let cell = (x.floor() as i64, y.floor() as i64);
        let mut total = Angle::default();
        let near = |t: f64| (t - t.round()).abs() < 1e-9;
        let mut cells = vec![cell];
        if near(x) || near(y) {
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if (dx, dy) != (0, 0) {
                        cells.push((cell.0 + dx, cell.1 + dy));
                    }
                }
            }
        }
        let mut seen = BTreeSet::new();
        for c in cells {
            for &t in self.grid.get(&c).map(Vec::as_slice).unwrap_or(&[]) {
                let (x0, y0, x1, y1) = self.boxes[t];
                let eps = 1e-9;
                let outside = x < x0 - eps || x > x1 + eps || y < y0 - eps || y > y1 + eps;
                if !outside && seen.insert(t) {
                    total = total.add(self.angle_at(t, p));
                }
            }
        }
        total == Angle { quarters: 4, alphas: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Counterclockwise boundary.
    pub boundary: Vec<(Fragment, bool)>,
}

impl Face {
    pub fn nodes(&self) -> Vec<Point> {
        self.boundary.iter().map(|(f, fwd)| if *fwd { f.start() } else { f.end() }).collect()
    }

    /// Closed polyline through the boundary at aorta depth `depth`, last
    /// point omitted.
    pub fn polygon(&self, depth: u32) -> Result<Vec<Point>> {
        let side = half_chain(Half::Side, depth)?;
        let hyp = half_chain(Half::Hyp, depth)?;
        let mut out = Vec::new();
        for (f, fwd) in &self.boundary {
            let base = if f.half == Half::Side { &side } else { &hyp };
            let mut pts: Vec<Point> = base.points.iter().map(|p| f.map.apply(p)).collect();
            if !fwd {
                pts.reverse();
            }
            pts.pop();
            out.extend(pts);
        }
        Ok(out)
    }

    pub fn area_at_depth(&self, depth: u32) -> Result<QuadNum> {
        Ok(signed_area(&self.polygon(depth)?))
    }

    /// Exact enclosed area; the aorta halves are area-balanced, so the
    /// chord polygon already has the limiting area.
    pub fn area(&self) -> QuadNum {
        self.area_at_depth(0).expect("depth 0 is always allowed")
    }
}

#[derive(Clone, Debug)]
pub struct ExtractedFace {
    pub face: Face,
    pub complete: bool,
}

/// Whether each node is safe to lie on a complete face.
pub fn good_nodes(graph: &MarkingGraph, marked: &MarkedPatch) -> Vec<bool> {
    let cov = Coverage::new(&marked.triangles);
    let unpaired = marked.unpaired_centers();
    let unresolved: BTreeSet<Point> = marked.unresolved.iter().cloned().collect();
    graph
        .nodes
        .iter()
        .enumerate()
        .map(|(v, p)| {
            graph.degree(v) > 1 && !unpaired.contains(p) && !unresolved.contains(p) && cov.is_interior(p)
        })
        .collect()
}

fn to_face(graph: &MarkingGraph, cyc: &[HalfEdge]) -> Face {
    Face { boundary: cyc.iter().map(|he| (graph.fragments[he.0].clone(), he.1)).collect() }
}

fn cycle_is_complete(graph: &MarkingGraph, good: &[bool], cyc: &[HalfEdge]) -> bool {
    let mut edges: Vec<usize> = cyc.iter().map(|he| he.0).collect();
    edges.sort_unstable();
    let simple = edges.windows(2).all(|w| w[0] != w[1]);
    simple && cyc.iter().all(|he| good[graph.origin(*he)])
}

/// Bounded faces of the marking. Faces touching the patch boundary,
/// an unpaired triangle or an unresolved dangling end are flagged
/// incomplete.
pub fn extract_faces(marked: &MarkedPatch) -> Result<Vec<ExtractedFace>> {
    let graph = MarkingGraph::build(&marked.fragments)?;
    let good = good_nodes(&graph, marked);
    let mut out = Vec::new();
    for cyc in graph.all_cycles() {
        let face = to_face(&graph, &cyc);
        if face.area().signum() <= 0 {
            continue;
        }
        let complete = cycle_is_complete(&graph, &good, &cyc);
        out.push(ExtractedFace { face, complete });
    }
    Ok(out)
}

pub fn complete_faces(marked: &MarkedPatch) -> Result<Vec<Face>> {
    Ok(extract_faces(marked)?.into_iter().filter(|f| f.complete).map(|f| f.face).collect())
}

/// Faces of `marked` that lie inside the closed curve given by `boundary`
/// (counterclockwise half-edges), found by flooding from the boundary.
pub fn faces_inside(marked: &MarkedPatch, boundary: &[(Fragment, bool)]) -> Result<Vec<Face>> {
    let graph = MarkingGraph::build(&marked.fragments)?;
    let cov = Coverage::new(&marked.triangles);
    let unpaired = marked.unpaired_centers();
    let mut memo: HashMap<usize, bool> = HashMap::new();
    let mut good = |v: usize| -> bool {
        *memo.entry(v).or_insert_with(|| {
            let p = &graph.nodes[v];
            graph.degree(v) > 1 && !unpaired.contains(p) && cov.is_interior(p)
        })
    };
    let mut wall = BTreeSet::new();
    let mut queue = Vec::new();
    for (f, fwd) in boundary {
        let he = graph
            .half_edge(f, *fwd)
            .ok_or_else(|| Error::Completeness("boundary fragment missing from the marking".into()))?;
        wall.insert(he.0);
        queue.push(he);
    }
    let mut done: BTreeSet<HalfEdge> = BTreeSet::new();
    let mut out = Vec::new();
    while let Some(he) = queue.pop() {
        if done.contains(&he) {
            continue;
        }
        let cyc = graph.trace(he);
        done.extend(cyc.iter().copied());
        let mut edges: Vec<usize> = cyc.iter().map(|h| h.0).collect();
        edges.sort_unstable();
        let simple = edges.windows(2).all(|w| w[0] != w[1]);
        if !simple || !cyc.iter().all(|h| good(graph.origin(*h))) {
            return Err(Error::Completeness("a face inside the inflated boundary is incomplete".into()));
        }
        for h in &cyc {
            if !wall.contains(&h.0) {
                queue.push((h.0, !h.1));
            }
        }
        out.push(to_face(&graph, &cyc));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marking::{mark_kite, mark_patch};
    use crate::substitution::{halves, ProtoId};

    #[test]
    fn angular_order() {
        let dirs = [
            Point::ratio(1, 1, 0, 1),
            Point::ratio(1, 1, 1, 1),
            Point::ratio(-1, 1, 1, 1),
            Point::ratio(-1, 1, 0, 1),
            Point::ratio(-1, 1, -1, 1),
            Point::ratio(1, 1, -1, 1),
        ];
        for i in 0..dirs.len() {
            for j in 0..dirs.len() {
                assert_eq!(angular_cmp(&dirs[i], &dirs[j]), i.cmp(&j));
            }
        }
    }

    #[test]
    fn coverage_of_a_single_triangle() {
        let cov = Coverage::new(&[Isometry::identity()]);
        assert!(cov.is_interior(&Point::origin()));
        assert!(!cov.is_interior(&Point::ratio(1, 2, -1, 2)));
        assert!(!cov.is_interior(&Point::ratio(-1, 2, 0, 1)));
        let kite = Coverage::new(&halves(ProtoId::Kite));
        assert!(kite.is_interior(&Point::ratio(0, 1, 1, 2)));
        assert!(!kite.is_interior(&Point::ratio(1, 2, -1, 2)));
    }

    #[test]
    fn coverage_around_a_vertex() {
        // a level-3 supertile surrounds the corner of its central triangle
        let p = crate::substitution::pinwheel_supertile(3);
        let tris: Vec<Isometry> = p.tiles.iter().map(|t| t.placement.clone()).collect();
        let cov = Coverage::new(&tris);
        assert!(cov.is_interior(&Point::ratio(1, 2, -1, 2)));
        assert!(cov.is_interior(&Point::origin()));
        assert!(!cov.is_interior(&Point::ratio(1000, 1, 0, 1)));
    }

    #[test]
    fn bare_kite_has_no_complete_faces() {
        assert!(complete_faces(&mark_kite()).unwrap().is_empty());
    }

    #[test]
    fn face_areas_are_depth_invariant() {
        let mut tris = halves(ProtoId::Kite);
        for _ in 0..2 {
            tris = crate::substitution::substitute(
                &tris.into_iter().map(|g| (ProtoId::Triangle, g)).collect::<Vec<_>>(),
                crate::substitution::pinwheel_rule(),
            )
            .unwrap()
            .into_iter()
            .map(|(_, g)| g)
            .collect();
        }
        let faces = complete_faces(&mark_patch(&tris).unwrap()).unwrap();
        assert!(!faces.is_empty());
        for f in faces.iter().take(6) {
            let a = f.area();
            for d in 1..3 {
                assert_eq!(f.area_at_depth(d).unwrap(), a);
            }
        }
    }
}
