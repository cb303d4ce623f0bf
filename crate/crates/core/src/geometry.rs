//! Exact integer predicates for straight-line segments.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(i64, i64)", into = "(i64, i64)")]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub const fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }

    pub fn scaled(self, factor: i64) -> Point {
        Point::new(self.x * factor, self.y * factor)
    }
}

impl From<(i64, i64)> for Point {
    fn from((x, y): (i64, i64)) -> Self {
        Point { x, y }
    }
}

impl From<Point> for (i64, i64) {
    fn from(p: Point) -> Self {
        (p.x, p.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

fn sub(a: Point, b: Point) -> (i128, i128) {
    (a.x as i128 - b.x as i128, a.y as i128 - b.y as i128)
}

fn cross(a: (i128, i128), b: (i128, i128)) -> i128 {
    a.0 * b.1 - a.1 * b.0
}

fn dot(a: (i128, i128), b: (i128, i128)) -> i128 {
    a.0 * b.0 + a.1 * b.1
}

/// Sign of the turn `a -> b -> c`: positive for counter-clockwise.
pub fn orientation(a: Point, b: Point, c: Point) -> i128 {
    cross(sub(b, a), sub(c, a)).signum()
}

/// True iff `p` lies on the segment `ab` strictly between its endpoints.
pub fn on_open_segment(p: Point, a: Point, b: Point) -> bool {
    orientation(a, b, p) == 0 && dot(sub(p, a), sub(b, a)) > 0 && dot(sub(p, b), sub(a, b)) > 0
}

/// A point with rational coordinates `x_num / den`, `y_num / den`, in lowest
/// terms with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RationalPoint {
    pub x_num: i128,
    pub y_num: i128,
    pub den: i128,
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RationalPoint {
    pub fn new(x_num: i128, y_num: i128, den: i128) -> Self {
        assert!(den != 0);
        let sign = den.signum();
        let g = gcd(gcd(x_num, y_num), den).max(1);
        RationalPoint { x_num: sign * x_num / g, y_num: sign * y_num / g, den: sign * den / g }
    }

    pub fn to_f64(self) -> (f64, f64) {
        (self.x_num as f64 / self.den as f64, self.y_num as f64 / self.den as f64)
    }

    pub fn is_integral(self) -> bool {
        self.den == 1
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "({}, {})", self.x_num, self.y_num)
        } else {
            write!(f, "({}/{}, {}/{})", self.x_num, self.den, self.y_num, self.den)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SegmentCrossing {
    pub point: RationalPoint,
    pub perpendicular: bool,
}

/// Two collinear segments share more than one point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
#[error("collinear segments overlap")]
pub struct Overlap;

/// Crossing of the open segments `p1p2` and `q1q2`.
///
/// Returns `Ok(Some(_))` iff the segments meet in exactly one point interior
/// to both. Endpoint contact, including an endpoint resting on the other
/// segment, is not a crossing. Collinear segments that share more than a
/// point give `Err(Overlap)`.
pub fn segments_properly_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> Result<Option<SegmentCrossing>, Overlap> {
    debug_assert!(p1 != p2 && q1 != q2);
    let d1 = orientation(q1, q2, p1);
    let d2 = orientation(q1, q2, p2);
    if d1 == 0 && d2 == 0 {
        // collinear: compare the projections on a non-degenerate axis
        let (a0, a1, b0, b1) = if p1.x != p2.x {
            (p1.x.min(p2.x), p1.x.max(p2.x), q1.x.min(q2.x), q1.x.max(q2.x))
        } else {
            (p1.y.min(p2.y), p1.y.max(p2.y), q1.y.min(q2.y), q1.y.max(q2.y))
        };
        return if a1.min(b1) > a0.max(b0) { Err(Overlap) } else { Ok(None) };
    }
    let d3 = orientation(p1, p2, q1);
    let d4 = orientation(p1, p2, q2);
    if d1 * d2 >= 0 || d3 * d4 >= 0 {
        return Ok(None);
    }
    let r = sub(p2, p1);
    let s = sub(q2, q1);
    let den = cross(r, s);
    let t_num = cross(sub(q1, p1), s);
    let x_num = p1.x as i128 * den + r.0 * t_num;
    let y_num = p1.y as i128 * den + r.1 * t_num;
    Ok(Some(SegmentCrossing { point: RationalPoint::new(x_num, y_num, den), perpendicular: dot(r, s) == 0 }))
}
