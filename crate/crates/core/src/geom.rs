//! Points, 2×2 matrices, affine maps and isometries over Q(√5).

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::QuadNum;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: QuadNum,
    pub y: QuadNum,
}

impl Point {
    pub fn new(x: QuadNum, y: QuadNum) -> Self {
        Point { x, y }
    }

    pub fn ratio(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point::new(QuadNum::ratio(xn, xd), QuadNum::ratio(yn, yd))
    }

    pub fn origin() -> Self {
        Point::new(QuadNum::zero(), QuadNum::zero())
    }

    pub fn add(&self, o: &Point) -> Point {
        Point::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Point) -> Point {
        Point::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn neg(&self) -> Point {
        Point::new(-&self.x, -&self.y)
    }

    pub fn scale(&self, k: &QuadNum) -> Point {
        Point::new(&self.x * k, &self.y * k)
    }

    pub fn dot(&self, o: &Point) -> QuadNum {
        &self.x * &o.x + &self.y * &o.y
    }

    /// z-component of the cross product.
    pub fn cross(&self, o: &Point) -> QuadNum {
        &self.x * &o.y - &self.y * &o.x
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Sign of the turn `a -> b -> c`: positive for counterclockwise.
pub fn orient(a: &Point, b: &Point, c: &Point) -> i32 {
    b.sub(a).cross(&c.sub(a)).signum()
}

/// Row-major 2×2 matrix `[[m0, m1], [m2, m3]]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2(pub [QuadNum; 4]);

impl Mat2 {
    pub fn new(a: QuadNum, b: QuadNum, c: QuadNum, d: QuadNum) -> Self {
        Mat2([a, b, c, d])
    }

    pub fn int(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2::int(1, 0, 0, 1)
    }

    pub fn det(&self) -> QuadNum {
        let [a, b, c, d] = &self.0;
        a * d - b * c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        let [a, b, c, d] = &self.0;
        let [e, f, g, h] = &o.0;
        Mat2::new(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)
    }

    pub fn apply(&self, p: &Point) -> Point {
        let [a, b, c, d] = &self.0;
        Point::new(a * &p.x + b * &p.y, c * &p.x + d * &p.y)
    }

    pub fn transpose(&self) -> Mat2 {
        let [a, b, c, d] = &self.0;
        Mat2::new(a.clone(), c.clone(), b.clone(), d.clone())
    }

    pub fn scale(&self, k: &QuadNum) -> Mat2 {
        Mat2(self.0.clone().map(|x| &x * k))
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        let inv = det.checked_inv().map_err(|_| Error::Singular)?;
        let [a, b, c, d] = &self.0;
        Ok(Mat2::new(d * &inv, -(b * &inv), -(c * &inv), a * &inv))
    }

    pub fn is_orthogonal(&self) -> bool {
        self.transpose().mul(self) == Mat2::identity()
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.0;
        write!(f, "[[{a}, {b}], [{c}, {d}]]")
    }
}

/// The pinwheel expansion `[[2, 1], [-1, 2]]`.
pub fn pinwheel_matrix() -> Mat2 {
    Mat2::int(2, 1, -1, 2)
}

/// `p ↦ linear·p + translate`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct AffineMap {
    pub linear: Mat2,
    pub translate: Point,
}

impl AffineMap {
    pub fn new(linear: Mat2, translate: Point) -> Result<Self> {
        if linear.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(AffineMap { linear, translate })
    }

    pub fn linear(linear: Mat2) -> Result<Self> {
        AffineMap::new(linear, Point::origin())
    }

    pub fn identity() -> Self {
        AffineMap {
            linear: Mat2::identity(),
            translate: Point::origin(),
        }
    }

    /// The expansion `M_P` as an affine map fixing the origin.
    pub fn pinwheel() -> Self {
        AffineMap {
            linear: pinwheel_matrix(),
            translate: Point::origin(),
        }
    }

    pub fn apply(&self, p: &Point) -> Point {
        self.linear.apply(p).add(&self.translate)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            linear: self.linear.mul(&other.linear),
            translate: self.apply(&other.translate),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        // invertibility is a construction invariant
        let li = self.linear.inverse().expect("affine map is invertible");
        let t = li.apply(&self.translate).neg();
        AffineMap {
            linear: li,
            translate: t,
        }
    }

    pub fn det(&self) -> QuadNum {
        self.linear.det()
    }

    pub fn then_translate(&self, t: &Point) -> AffineMap {
        AffineMap {
            linear: self.linear.clone(),
            translate: self.translate.add(t),
        }
    }
}

/// A rigid motion: orthogonal linear part with determinant ±1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Isometry(AffineMap);

impl Isometry {
    pub fn new(linear: Mat2, translate: Point) -> Result<Self> {
        if !linear.is_orthogonal() {
            return Err(Error::NotOrthogonal);
        }
        Ok(Isometry(AffineMap { linear, translate }))
    }

    pub fn from_affine(m: AffineMap) -> Result<Self> {
        Isometry::new(m.linear, m.translate)
    }

    pub fn identity() -> Self {
        Isometry(AffineMap::identity())
    }

    pub fn translation(t: Point) -> Self {
        Isometry(AffineMap {
            linear: Mat2::identity(),
            translate: t,
        })
    }

    /// Rotation about the origin with the given exact cosine and sine.
    pub fn rotation(cos: QuadNum, sin: QuadNum) -> Result<Self> {
        let lin = Mat2::new(cos.clone(), -&sin, sin, cos);
        Isometry::new(lin, Point::origin())
    }

    pub fn rot90() -> Self {
        Isometry::new(Mat2::int(0, -1, 1, 0), Point::origin()).unwrap()
    }

    pub fn rot_pi() -> Self {
        Isometry::new(Mat2::int(-1, 0, 0, -1), Point::origin()).unwrap()
    }

    /// Reflection across the y-axis, `(x, y) ↦ (-x, y)`.
    pub fn reflect_y() -> Self {
        Isometry::new(Mat2::int(-1, 0, 0, 1), Point::origin()).unwrap()
    }

    /// Rotation by `2φ`, `φ = arctan(1/2)`: cos 3/5, sin 4/5.
    pub fn rot_two_phi() -> Self {
        Isometry::rotation(QuadNum::ratio(3, 5), QuadNum::ratio(4, 5)).unwrap()
    }

    /// Rotation by `φ`: cos 2/√5, sin 1/√5.
    pub fn rot_phi() -> Self {
        let s5 = QuadNum::sqrt5();
        Isometry::rotation(&QuadNum::from_int(2) / &s5, &QuadNum::one() / &s5).unwrap()
    }

    pub fn affine(&self) -> &AffineMap {
        &self.0
    }

    pub fn into_affine(self) -> AffineMap {
        self.0
    }

    pub fn linear(&self) -> &Mat2 {
        &self.0.linear
    }

    pub fn translate(&self) -> &Point {
        &self.0.translate
    }

    pub fn apply(&self, p: &Point) -> Point {
        self.0.apply(p)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        Isometry(self.0.compose(&other.0))
    }

    pub fn inverse(&self) -> Isometry {
        let lt = self.0.linear.transpose();
        let t = lt.apply(&self.0.translate).neg();
        Isometry(AffineMap {
            linear: lt,
            translate: t,
        })
    }

    pub fn det(&self) -> i32 {
        self.0.det().signum()
    }

    pub fn is_reflection(&self) -> bool {
        self.det() < 0
    }

    /// Conjugate by an invertible linear map: `m ∘ self ∘ m⁻¹`. The
    /// result is an isometry whenever `m` is a similarity.
    pub fn conjugate(&self, m: &AffineMap) -> Result<Isometry> {
        Isometry::from_affine(m.compose(&self.0).compose(&m.inverse()))
    }

    /// Rotation angle in `[0, 2π)`. Floating point, for reporting only.
    pub fn angle_of(&self) -> Result<f64> {
        if self.is_reflection() {
            return Err(Error::NotARotation);
        }
        let [c, _, s, _] = &self.0.linear.0;
        let a = s.to_f64().atan2(c.to_f64());
        Ok(if a < 0.0 { a + std::f64::consts::TAU } else { a })
    }
}

impl From<Isometry> for AffineMap {
    fn from(i: Isometry) -> Self {
        i.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn double_rotation_by_two_phi() {
        let r = Isometry::rot_two_phi();
        let rr = r.compose(&r);
        let expect = Isometry::rotation(QuadNum::ratio(-7, 25), QuadNum::ratio(24, 25)).unwrap();
        assert_eq!(rr, expect);
    }

    #[test]
    fn identity_and_involutions() {
        let f = Isometry::rot_two_phi().compose(&Isometry::translation(Point::ratio(1, 2, -3, 1)));
        assert_eq!(f.compose(&Isometry::identity()), f);
        let ry = Isometry::reflect_y();
        assert_eq!(ry.compose(&ry), Isometry::identity());
        assert_eq!(f.compose(&f.inverse()), Isometry::identity());
    }

    #[test]
    fn pinwheel_matrix_images() {
        let m = AffineMap::pinwheel();
        assert_eq!(m.apply(&Point::ratio(1, 1, 0, 1)), Point::ratio(2, 1, -1, 1));
        assert_eq!(m.apply(&Point::ratio(-1, 2, 3, 2)), Point::ratio(1, 2, 7, 2));
        let id = AffineMap::identity();
        assert_eq!(id.apply(&Point::ratio(-1, 2, 0, 1)), Point::ratio(-1, 2, 0, 1));
    }

    #[test]
    fn pinwheel_matrix_is_scaled_rotation() {
        let m = pinwheel_matrix();
        assert_eq!(m.mul(&m.transpose()), Mat2::identity().scale(&QuadNum::from_int(5)));
        // M_P = √5 · rot(-φ)
        let rot = Isometry::rot_phi().inverse();
        assert_eq!(rot.linear().scale(&QuadNum::sqrt5()), m);
    }

    #[test]
    fn angles() {
        assert_eq!(Isometry::identity().angle_of().unwrap(), 0.0);
        assert_abs_diff_eq!(Isometry::rot_two_phi().angle_of().unwrap(), (4.0f64 / 3.0).atan(), epsilon = 1e-12);
        assert_abs_diff_eq!(Isometry::rot_pi().angle_of().unwrap(), std::f64::consts::PI, epsilon = 1e-12);
        assert_eq!(Isometry::reflect_y().angle_of(), Err(Error::NotARotation));
    }

    #[test]
    fn rejects_non_orthogonal() {
        assert_eq!(Isometry::new(pinwheel_matrix(), Point::origin()), Err(Error::NotOrthogonal));
    }

    fn arb_iso() -> impl Strategy<Value = Isometry> {
        (0u32..6, any::<bool>(), -4i64..4, 1i64..4, -4i64..4)
            .prop_map(|(k, refl, tx, d, ty)| {
                let mut g = Isometry::identity();
                for _ in 0..k {
                    g = g.compose(&Isometry::rot_two_phi());
                }
                if refl {
                    g = g.compose(&Isometry::reflect_y());
                }
                Isometry::translation(Point::ratio(tx, d, ty, d)).compose(&g)
            })
    }

    proptest! {
        #[test]
        fn composition_preserves_orthogonality(f in arb_iso(), g in arb_iso()) {
            let h = f.compose(&g);
            prop_assert!(h.linear().is_orthogonal());
            prop_assert_eq!(h.det(), f.det() * g.det());
            let p = Point::ratio(3, 7, -2, 5);
            prop_assert_eq!(h.apply(&p), f.apply(&g.apply(&p)));
        }
    }
}
