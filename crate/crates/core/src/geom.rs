//! Small planar primitives shared by every module.

use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the plane. Serialized as `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self - other).norm()
    }

    pub fn dot(self, other: Point) -> f64 {
        self.x * other.x + self.y * other.y
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.dot(ab);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let u = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * u)
}

/// Axis-aligned rectangle. Serialized as `[xmin, ymin, xmax, ymax]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Rect {
    pub xmin: f64,
    pub ymin: f64,
    pub xmax: f64,
    pub ymax: f64,
}

impl From<[f64; 4]> for Rect {
    fn from(a: [f64; 4]) -> Self {
        Rect::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Rect> for [f64; 4] {
    fn from(r: Rect) -> Self {
        [r.xmin, r.ymin, r.xmax, r.ymax]
    }
}

impl Rect {
    pub const fn new(xmin: f64, ymin: f64, xmax: f64, ymax: f64) -> Self {
        Rect {
            xmin,
            ymin,
            xmax,
            ymax,
        }
    }

    /// The square `[-h, h]²`.
    pub const fn square(h: f64) -> Self {
        Rect::new(-h, -h, h, h)
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn diameter(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    pub fn contains_open(&self, p: Point) -> bool {
        p.x > self.xmin && p.x < self.xmax && p.y > self.ymin && p.y < self.ymax
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.xmin, self.ymin),
            Point::new(self.xmax, self.ymin),
            Point::new(self.xmax, self.ymax),
            Point::new(self.xmin, self.ymax),
        ]
    }

    pub fn bounding(points: impl IntoIterator<Item = Point>) -> Option<Rect> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut r = Rect::new(first.x, first.y, first.x, first.y);
        for p in it {
            r.xmin = r.xmin.min(p.x);
            r.xmax = r.xmax.max(p.x);
            r.ymin = r.ymin.min(p.y);
            r.ymax = r.ymax.max(p.y);
        }
        Some(r)
    }

    pub fn expand(&self, margin: f64) -> Rect {
        Rect::new(
            self.xmin - margin,
            self.ymin - margin,
            self.xmax + margin,
            self.ymax + margin,
        )
    }

    pub fn intersects(&self, o: &Rect) -> bool {
        self.xmin <= o.xmax && o.xmin <= self.xmax && self.ymin <= o.ymax && o.ymin <= self.ymax
    }

    /// Pull `p` onto the rectangle.
    pub fn clamp(&self, p: Point) -> Point {
        Point::new(p.x.clamp(self.xmin, self.xmax), p.y.clamp(self.ymin, self.ymax))
    }
}

/// Row-major 2×2 matrix `[[a1, a2], [a3, a4]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Mat2 {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

impl From<[f64; 4]> for Mat2 {
    fn from(a: [f64; 4]) -> Self {
        Mat2::new(a[0], a[1], a[2], a[3])
    }
}

impl From<Mat2> for [f64; 4] {
    fn from(m: Mat2) -> Self {
        [m.a1, m.a2, m.a3, m.a4]
    }
}

pub const SINGULAR_TOL: f64 = 1e-12;

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a1: f64, a2: f64, a3: f64, a4: f64) -> Self {
        Mat2 { a1, a2, a3, a4 }
    }

    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Mat2::new(c, -s, s, c)
    }

    pub fn det(&self) -> f64 {
        self.a1 * self.a4 - self.a2 * self.a3
    }

    pub fn is_identity(&self) -> bool {
        *self == Mat2::IDENTITY
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let d = self.det();
        if d.abs() <= SINGULAR_TOL {
            return Err(Error::SingularMatrix(d));
        }
        Ok(Mat2::new(self.a4 / d, -self.a2 / d, -self.a3 / d, self.a1 / d))
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.a1 * p.x + self.a2 * p.y,
            self.a3 * p.x + self.a4 * p.y,
        )
    }

    pub fn compose(&self, inner: &Mat2) -> Mat2 {
        Mat2::new(
            self.a1 * inner.a1 + self.a2 * inner.a3,
            self.a1 * inner.a2 + self.a2 * inner.a4,
            self.a3 * inner.a1 + self.a4 * inner.a3,
            self.a3 * inner.a2 + self.a4 * inner.a4,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let m = Mat2::new(2.0, 1.0, -1.0, 3.0);
        let p = Point::new(0.3, -1.7);
        let q = m.inverse().unwrap().apply(m.apply(p));
        assert!(q.dist(p) < 1e-15);
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(
            Mat2::new(1.0, 2.0, 2.0, 4.0).inverse(),
            Err(Error::SingularMatrix(_))
        ));
    }

    #[test]
    fn segment_distance_clamps() {
        let a = Point::new(0.0, 0.0);
        let b = Point::new(1.0, 0.0);
        assert_eq!(segment_distance(Point::new(0.5, 2.0), a, b), 2.0);
        assert_eq!(segment_distance(Point::new(4.0, 4.0), a, b), 5.0);
    }
}
