//! Rotated rectangles, convex quadrilaterals, and the polygon clipping that
//! backs area overlap.
//!
//! Conventions used throughout the crate:
//!
//! - coordinates are continuous pixel positions, `f64`;
//! - angles are degrees counterclockwise from the x-axis, stored canonically
//!   in `[0, 180)` (a rectangle is symmetric under a half turn);
//! - corner lists are counterclockwise, meaning positive shoelace signed
//!   area.
//!
//! Intersection of two boxes is computed by clipping one corner quad against
//! the other's edges (Sutherland–Hodgman). Half-planes are inclusive: a
//! point exactly on a clip edge is kept, so two boxes sharing only an edge
//! intersect with area zero rather than producing jitter-dependent slivers.

use thiserror::Error;

/// Polygon area (px²) at or below which a shape is treated as empty.
///
/// Distinguishes true emptiness from the slivers floating-point clipping can
/// leave behind; also the cutoff below which four corners no longer count as
/// a usable quadrilateral.
pub const DEGENERATE_AREA: f64 = 1e-9;

/// Relative deviation above which a quad stops counting as rectangular:
/// opposite edge lengths differing by more than this fraction, or a corner
/// cosine exceeding it (edges more than ~0.6° from perpendicular).
pub const RECT_TOLERANCE: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    /// Box dimensions must be strictly positive.
    #[error("invalid box dimensions w={w}, h={h}: both must be positive")]
    InvalidDimensions { w: f64, h: f64 },
    /// Every coordinate and angle must be finite.
    #[error("non-finite coordinate in geometric input")]
    NonFinite,
    /// Four corners that do not bound a convex quadrilateral.
    #[error("corners do not form a convex quadrilateral")]
    NonConvex,
    /// Four corners whose quadrilateral has (near-)zero area.
    #[error(
        "quadrilateral is degenerate: |area| = {area:e} px² is at or below {DEGENERATE_AREA:e}"
    )]
    Degenerate { area: f64 },
}

/// A 2-D point (or vector; the distinction is contextual).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// z-component of `(b - a) × (c - a)`; positive when `a b c` turns
/// counterclockwise.
#[inline]
fn cross(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Signed shoelace area of a closed polygon, positive for counterclockwise
/// order.
fn signed_area(points: &[Point]) -> f64 {
    let n = points.len();
    if n < 3 {
        return 0.0;
    }
    let mut sum = 0.0;
    for i in 0..n {
        let p = points[i];
        let q = points[(i + 1) % n];
        sum += p.x * q.y - q.x * p.y;
    }
    sum / 2.0
}

/// Degeneracy cutoff, inclusive with one part in 10¹² of slack so areas that
/// equal [`DEGENERATE_AREA`] up to evaluation rounding still count.
#[inline]
fn is_degenerate_area(area: f64) -> bool {
    area <= DEGENERATE_AREA * (1.0 + 1e-12)
}

/// A rectangle with arbitrary orientation: center, side lengths, and angle.
///
/// `theta` is degrees counterclockwise from the x-axis and is canonicalized
/// to `[0, 180)` at construction; `w` extends along the `theta` direction
/// and `h` perpendicular to it. Construction never swaps `w` and `h`, even
/// at exactly 90°, so a caller's box comes back out field-for-field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotatedBox {
    cx: f64,
    cy: f64,
    w: f64,
    h: f64,
    theta: f64,
}

impl RotatedBox {
    /// Builds a box from center, dimensions, and angle in degrees.
    ///
    /// Rejects non-finite fields and non-positive dimensions. The angle may
    /// be any finite value; it is reduced modulo 180°.
    pub fn new(cx: f64, cy: f64, w: f64, h: f64, theta: f64) -> Result<Self, GeometryError> {
        if !(cx.is_finite() && cy.is_finite() && theta.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if !(w.is_finite() && h.is_finite() && w > 0.0 && h > 0.0) {
            return Err(GeometryError::InvalidDimensions { w, h });
        }
        let mut t = theta.rem_euclid(180.0);
        // rem_euclid of a tiny negative rounds up to exactly 180.0.
        if t >= 180.0 {
            t -= 180.0;
        }
        // Normalize -0.0 so equal boxes compare equal.
        t += 0.0;
        Ok(RotatedBox { cx, cy, w, h, theta: t })
    }

    /// Builds an axis-aligned box from its left-top corner and size, the
    /// convention of four-number region lines.
    pub fn from_left_top(x: f64, y: f64, w: f64, h: f64) -> Result<Self, GeometryError> {
        RotatedBox::new(x + w / 2.0, y + h / 2.0, w, h, 0.0)
    }

    pub fn cx(&self) -> f64 {
        self.cx
    }

    pub fn cy(&self) -> f64 {
        self.cy
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Orientation in degrees, always in `[0, 180)`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn center(&self) -> Point {
        Point::new(self.cx, self.cy)
    }

    pub fn area(&self) -> f64 {
        self.w * self.h
    }

    /// Corner quad, counterclockwise, starting at the corner that sits at
    /// `(-w/2, -h/2)` in the box's own frame.
    pub fn to_quad(&self) -> ConvexQuad {
        let (s, c) = self.theta.to_radians().sin_cos();
        // Half-extents along the width and height axes.
        let (ux, uy) = (c * self.w / 2.0, s * self.w / 2.0);
        let (vx, vy) = (-s * self.h / 2.0, c * self.h / 2.0);
        ConvexQuad {
            corners: [
                Point::new(self.cx - ux - vx, self.cy - uy - vy),
                Point::new(self.cx + ux - vx, self.cy + uy - vy),
                Point::new(self.cx + ux + vx, self.cy + uy + vy),
                Point::new(self.cx - ux + vx, self.cy - uy + vy),
            ],
        }
    }
}

/// Four corners in counterclockwise order bounding a convex quadrilateral
/// of positive area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexQuad {
    corners: [Point; 4],
}

impl ConvexQuad {
    /// Validates four corners as a convex quadrilateral.
    ///
    /// Clockwise input is accepted and reversed in place (the first corner
    /// stays first). Returns [`GeometryError::Degenerate`] when the area is
    /// at or below [`DEGENERATE_AREA`], [`GeometryError::NonConvex`] when
    /// consecutive edges turn in different directions (which also covers
    /// self-intersecting orderings).
    pub fn from_points(points: [Point; 4]) -> Result<Self, GeometryError> {
        if points.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
            return Err(GeometryError::NonFinite);
        }
        let area = signed_area(&points);
        if is_degenerate_area(area.abs()) {
            return Err(GeometryError::Degenerate { area: area.abs() });
        }
        let corners =
            if area > 0.0 { points } else { [points[0], points[3], points[2], points[1]] };
        for i in 0..4 {
            let a = corners[i];
            let b = corners[(i + 1) % 4];
            let c = corners[(i + 2) % 4];
            if cross(a, b, c) < 0.0 {
                return Err(GeometryError::NonConvex);
            }
        }
        Ok(ConvexQuad { corners })
    }

    pub fn corners(&self) -> &[Point; 4] {
        &self.corners
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.corners)
    }
}

/// A convex polygon with zero (empty) or at least three counterclockwise
/// corners; the shape of a box-box intersection, which has at most eight.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    corners: Vec<Point>,
}

impl ConvexPolygon {
    pub fn empty() -> Self {
        ConvexPolygon { corners: Vec::new() }
    }

    pub fn is_empty(&self) -> bool {
        self.corners.is_empty()
    }

    pub fn corners(&self) -> &[Point] {
        &self.corners
    }

    pub fn area(&self) -> f64 {
        if self.corners.is_empty() {
            0.0
        } else {
            signed_area(&self.corners)
        }
    }
}

/// The result of fitting a [`RotatedBox`] to a corner quad.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxFit {
    pub rect: RotatedBox,
    /// True when the quad deviates from a rectangle by more than
    /// [`RECT_TOLERANCE`]: opposite edges of unequal length or corners away
    /// from 90°. The fitted box is still usable; the flag is advisory.
    pub not_rectangular: bool,
}

/// Fits a rotated box to a convex quad.
///
/// The center is the corner centroid; `w` averages the first and third edge
/// lengths, `h` the second and fourth; `theta` is the direction of the
/// first edge reduced to `[0, 180)`. A quad produced by
/// [`RotatedBox::to_quad`] round-trips to the original box within 1e-6,
/// modulo one ambiguity: when the first edge points exactly along 90°, the
/// box could equally be written with `w` and `h` swapped at 0°, and the
/// representation with `theta` in `[0, 90)` is chosen.
pub fn box_from_quad(quad: &ConvexQuad) -> BoxFit {
    let c = quad.corners;
    let cx = (c[0].x + c[1].x + c[2].x + c[3].x) / 4.0;
    let cy = (c[0].y + c[1].y + c[2].y + c[3].y) / 4.0;
    let e: Vec<f64> = (0..4).map(|i| c[i].distance(&c[(i + 1) % 4])).collect();
    let mut w = (e[0] + e[2]) / 2.0;
    let mut h = (e[1] + e[3]) / 2.0;
    let raw = (c[1].y - c[0].y).atan2(c[1].x - c[0].x).to_degrees();
    let mut theta = raw.rem_euclid(180.0);
    if theta >= 180.0 {
        theta -= 180.0;
    }
    if theta == 90.0 {
        std::mem::swap(&mut w, &mut h);
        theta = 0.0;
    }

    let opposite_mismatch = |a: f64, b: f64| (a - b).abs() > RECT_TOLERANCE * a.max(b);
    let mut not_rectangular = opposite_mismatch(e[0], e[2]) || opposite_mismatch(e[1], e[3]);
    for i in 0..4 {
        let u = c[(i + 1) % 4];
        let dx1 = u.x - c[i].x;
        let dy1 = u.y - c[i].y;
        let v = c[(i + 2) % 4];
        let dx2 = v.x - u.x;
        let dy2 = v.y - u.y;
        let cos = (dx1 * dx2 + dy1 * dy2) / (e[i] * e[(i + 1) % 4]);
        if cos.abs() > RECT_TOLERANCE {
            not_rectangular = true;
        }
    }

    let rect = RotatedBox::new(cx, cy, w, h, theta)
        .expect("a validated convex quad always fits a positive-area box");
    BoxFit { rect, not_rectangular }
}

/// Keeps the part of `polygon` on the inner side of the directed edge
/// `a -> b` (inclusive: points on the line survive).
fn clip_against_edge(polygon: &[Point], a: Point, b: Point) -> Vec<Point> {
    let mut out = Vec::with_capacity(polygon.len() + 1);
    if polygon.is_empty() {
        return out;
    }
    let inside = |p: Point| cross(a, b, p) >= 0.0;
    let mut prev = polygon[polygon.len() - 1];
    let mut prev_in = inside(prev);
    for &curr in polygon {
        let curr_in = inside(curr);
        if curr_in != prev_in {
            // The edge prev -> curr crosses the clip line; interpolate the
            // crossing point from the two signed distances.
            let dp = cross(a, b, prev);
            let dc = cross(a, b, curr);
            let t = dp / (dp - dc);
            out.push(Point::new(prev.x + t * (curr.x - prev.x), prev.y + t * (curr.y - prev.y)));
        }
        if curr_in {
            out.push(curr);
        }
        prev = curr;
        prev_in = curr_in;
    }
    out
}

/// Intersection of two corner quads as a convex polygon.
///
/// Results whose area is at or below [`DEGENERATE_AREA`] collapse to the
/// empty polygon, so edge-touching boxes intersect emptily instead of in a
/// floating-point sliver.
pub fn intersect(a: &ConvexQuad, b: &ConvexQuad) -> ConvexPolygon {
    let mut poly: Vec<Point> = a.corners.to_vec();
    for i in 0..4 {
        if poly.is_empty() {
            break;
        }
        poly = clip_against_edge(&poly, b.corners[i], b.corners[(i + 1) % 4]);
    }
    if poly.len() < 3 || is_degenerate_area(signed_area(&poly)) {
        return ConvexPolygon::empty();
    }
    debug_assert!(poly.len() <= 8, "two quads intersect in at most 8 corners");
    ConvexPolygon { corners: poly }
}

/// Intersection-over-union of two rotated boxes, in `[0, 1]`.
///
/// Symmetric in its arguments; 1 for identical boxes, 0 for disjoint or
/// merely edge-touching ones.
pub fn iou(a: &RotatedBox, b: &RotatedBox) -> f64 {
    let qa = a.to_quad();
    let qb = b.to_quad();
    let inter = intersect(&qa, &qb).area();
    if inter <= 0.0 {
        return 0.0;
    }
    let union = qa.area() + qb.area() - inter;
    (inter / union).clamp(0.0, 1.0)
}
