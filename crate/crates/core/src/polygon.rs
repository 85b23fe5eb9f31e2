//! Exact predicates on small convex polygons.

use crate::geom::{orient, Point};
use crate::quad::QuadNum;

/// Signed shoelace area; positive for counterclockwise vertex order.
pub fn signed_area(poly: &[Point]) -> QuadNum {
    let n = poly.len();
    let mut twice = QuadNum::zero();
    for i in 0..n {
        twice += &poly[i].cross(&poly[(i + 1) % n]);
    }
    &twice * &QuadNum::ratio(1, 2)
}

fn ccw(poly: &[Point]) -> Vec<Point> {
    if signed_area(poly).signum() < 0 {
        poly.iter().rev().cloned().collect()
    } else {
        poly.to_vec()
    }
}

/// Closed containment of `p` in a convex polygon of either orientation.
pub fn convex_contains(poly: &[Point], p: &Point) -> bool {
    let poly = ccw(poly);
    let n = poly.len();
    (0..n).all(|i| orient(&poly[i], &poly[(i + 1) % n], p) >= 0)
}

/// True when two convex polygons have disjoint interiors (separating axis
/// test over the edge normals of both, exact).
pub fn convex_interiors_disjoint(a: &[Point], b: &[Point]) -> bool {
    let a = ccw(a);
    let b = ccw(b);
    separated_by_edge_of(&a, &b) || separated_by_edge_of(&b, &a)
}

fn separated_by_edge_of(a: &[Point], b: &[Point]) -> bool {
    let n = a.len();
    (0..n).any(|i| {
        let (p, q) = (&a[i], &a[(i + 1) % n]);
        // every vertex of b on or to the right of the directed edge pq
        b.iter().all(|v| orient(p, q, v) <= 0)
    })
}

/// Floating bounding box `(min_x, min_y, max_x, max_y)`.
pub fn bbox(poly: &[Point]) -> (f64, f64, f64, f64) {
    poly.iter().map(Point::to_f64).fold(
        (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), (x, y)| (a.min(x), b.min(y), c.max(x), d.max(y)),
    )
}
