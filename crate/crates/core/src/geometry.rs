//! Planar primitives: angles, directed lines, half-planes, convex polygons,
//! and tolerance-aware segment intersection.
//!
//! Everything downstream (region construction, certification, intersection
//! detection) reduces to the predicates in this module, so the conventions
//! here are load-bearing:
//!
//! * The angle ∠(a, b, c) is the argument of (c - b)/(a - b), normalized to
//!   (-π, π]. It is the angle you turn through at b when looking from a
//!   towards c; positive means c lies to the left of the ray b→a.
//! * A directed line L(a, b) runs from a through b. Its *left* side is the
//!   open half-plane V⁺(a, b) = { z : 0 < ∠(b, a, z) < π }.
//! * Convex polygons are strictly convex with every interior angle
//!   ∠(v_{n-1}, v_n, v_n+1) in (0, π): the vertex cycle runs clockwise and
//!   the interior sits on the *right* of each directed edge, equivalently in
//!   the closed left half-plane of each reversed edge V̄⁺(v_{n+1}, v_n). All
//!   region vertex data in this crate is stated in that order (the curves
//!   dive below the real axis), so the builder validates the orientation
//!   rather than silently reversing it. A counterclockwise list is rejected,
//!   not repaired.
//! * Side-of-line tests use the signed twice-area (cross product), never
//!   `arg`, and compare against a tolerance relative to the local scale of
//!   the operands.

use num_complex::Complex64;
use thiserror::Error;

/// A point in the plane. The real part is x, the imaginary part is y.
pub type Point = Complex64;

/// Default relative tolerance for all geometric predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Convenience constructor for [`Point`].
#[inline]
pub fn point(re: f64, im: f64) -> Point {
    Complex64::new(re, im)
}

/// Cross product (signed twice-area) of u and v.
#[inline]
pub fn cross(u: Point, v: Point) -> f64 {
    u.re * v.im - u.im * v.re
}

/// Dot product of u and v.
#[inline]
pub fn dot(u: Point, v: Point) -> f64 {
    u.re * v.re + u.im * v.im
}

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("coordinates must be finite")]
    NonFinite,
    #[error("angle is undefined: vertex coincides with an endpoint")]
    DegenerateAngle,
    #[error("segment endpoints coincide")]
    DegenerateSegment,
    #[error("directed line endpoints coincide")]
    DegenerateLine,
    #[error("lines are parallel, no unique intersection")]
    ParallelLines,
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("polygon vertices {0} and {1} coincide within tolerance")]
    DuplicateVertex(usize, usize),
    #[error("polygon vertices around index {0} are collinear within tolerance")]
    CollinearVertices(usize),
    #[error("polygon turns left at vertex {0}; vertices must run clockwise (interior on the right)")]
    NotClockwise(usize),
    #[error("vertex chain winds around more than once")]
    NotSimple,
}

/// Classification of a point against a half-plane or line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Inside,
    Boundary,
    Outside,
}

/// The angle ∠(a, b, c) = arg((c - b)/(a - b)), normalized to (-π, π].
///
/// The boundary value π is returned exactly (not -π, and never a value that
/// rounds past π) when b lies between a and c on a straight line: the cross
/// product is within tolerance of zero and the dot product is negative.
///
/// Errors with [`GeometryError::DegenerateAngle`] when a or c coincides with
/// b within tolerance.
pub fn angle(a: Point, b: Point, c: Point) -> Result<f64, GeometryError> {
    for z in [a, b, c] {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(GeometryError::NonFinite);
        }
    }
    let u = a - b;
    let v = c - b;
    let (lu, lv) = (u.norm(), v.norm());
    let scale = a.norm().max(b.norm()).max(c.norm()).max(1.0);
    if lu <= DEFAULT_TOL * scale || lv <= DEFAULT_TOL * scale {
        return Err(GeometryError::DegenerateAngle);
    }
    let x = cross(u, v);
    let d = dot(u, v);
    if x.abs() <= DEFAULT_TOL * lu * lv && d < 0.0 {
        return Ok(std::f64::consts::PI);
    }
    let theta = x.atan2(d);
    // atan2 may yield -π for exactly antiparallel operands; fold onto +π.
    if theta == -std::f64::consts::PI {
        return Ok(std::f64::consts::PI);
    }
    Ok(theta)
}

/// A directed line through `a` towards `b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DirectedLine {
    pub a: Point,
    pub b: Point,
}

impl DirectedLine {
    pub fn new(a: Point, b: Point) -> Result<Self, GeometryError> {
        if ![a, b].iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if a == b {
            return Err(GeometryError::DegenerateLine);
        }
        Ok(DirectedLine { a, b })
    }

    /// Signed perpendicular distance of z from the line; positive on the left.
    #[inline]
    pub fn signed_dist(&self, z: Point) -> f64 {
        let d = self.b - self.a;
        cross(d, z - self.a) / d.norm()
    }
}

/// Unsigned distance from z to the (infinite) line.
#[inline]
pub fn dist_point_line(z: Point, line: &DirectedLine) -> f64 {
    line.signed_dist(z).abs()
}

/// Intersection point of two infinite lines. Only exactly parallel
/// directions (cross product at rounding-noise level) are rejected; callers
/// intersecting lines at a shallow angle get the ill-conditioned point they
/// asked for.
pub fn line_intersection(l1: &DirectedLine, l2: &DirectedLine) -> Result<Point, GeometryError> {
    let d1 = l1.b - l1.a;
    let d2 = l2.b - l2.a;
    let den = cross(d1, d2);
    if den.abs() <= f64::EPSILON * d1.norm() * d2.norm() {
        return Err(GeometryError::ParallelLines);
    }
    let t = cross(l2.a - l1.a, d2) / den;
    Ok(l1.a + t * d1)
}

/// One side of a directed line. `left: true` is V⁺ (the open left side),
/// `closed: true` includes the boundary line itself.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlane {
    pub line: DirectedLine,
    pub left: bool,
    pub closed: bool,
}

impl HalfPlane {
    pub fn left_of(a: Point, b: Point) -> Result<Self, GeometryError> {
        Ok(HalfPlane { line: DirectedLine::new(a, b)?, left: true, closed: false })
    }

    pub fn closed_left_of(a: Point, b: Point) -> Result<Self, GeometryError> {
        Ok(HalfPlane { line: DirectedLine::new(a, b)?, left: true, closed: true })
    }

    /// Membership honoring `closed`: boundary points (at tolerance) belong
    /// iff the half-plane is closed.
    pub fn contains(&self, z: Point, tol: f64) -> bool {
        match side(self, z, tol) {
            Side::Inside => true,
            Side::Boundary => self.closed,
            Side::Outside => false,
        }
    }
}

/// Classify z against a half-plane: strictly inside, within tolerance of the
/// boundary line, or strictly outside.
///
/// The tolerance is a distance relative to the local scale
/// max(|b - a|, |z - a|), so the classification is invariant under scaling
/// of the whole configuration.
pub fn side(hp: &HalfPlane, z: Point, tol: f64) -> Side {
    let d = hp.line.b - hp.line.a;
    let ld = d.norm();
    let w = z - hp.line.a;
    let dist = cross(d, w) / ld; // signed, positive left
    let scale = ld.max(w.norm());
    if dist.abs() <= tol * scale {
        return Side::Boundary;
    }
    let inside = if hp.left { dist > 0.0 } else { dist < 0.0 };
    if inside {
        Side::Inside
    } else {
        Side::Outside
    }
}

/// A closed segment between two distinct points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeometryError> {
        if ![a, b].iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        if a == b {
            return Err(GeometryError::DegenerateSegment);
        }
        Ok(Segment { a, b })
    }

    #[inline]
    pub fn len(&self) -> f64 {
        (self.b - self.a).norm()
    }
}

/// Result of intersecting two segments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegIntersection {
    Empty,
    /// A single contact point (transversal crossing or endpoint touch).
    Point(Point),
    /// Collinear segments sharing more than a point.
    Overlap(Segment),
}

/// Intersect two closed segments with a symmetric, tolerance-aware predicate.
///
/// Endpoint touches within `tol` (relative to the longer segment) count as
/// intersections and are reported as `Point`; collinear segments sharing more
/// than a point are reported as `Overlap`. The result is independent of the
/// argument order and of the orientation of either segment, up to reversal
/// of the reported overlap segment.
pub fn segment_intersection(s: &Segment, t: &Segment, tol: f64) -> SegIntersection {
    let r = s.b - s.a;
    let q = t.b - t.a;
    let (lr, lq) = (r.norm(), q.norm());
    let eps = tol * lr.max(lq); // absolute distance band

    // Signed perpendicular distances of each endpoint from the other line.
    let d1 = cross(r, t.a - s.a) / lr;
    let d2 = cross(r, t.b - s.a) / lr;
    let d3 = cross(q, s.a - t.a) / lq;
    let d4 = cross(q, s.b - t.a) / lq;

    let near = |d: f64| d.abs() <= eps;
    if near(d1) && near(d2) && near(d3) && near(d4) {
        // Collinear within the band: compare parameter intervals along s.
        let l2 = lr * lr;
        let u0 = dot(r, t.a - s.a) / l2;
        let u1 = dot(r, t.b - s.a) / l2;
        let (lo, hi) = if u0 <= u1 { (u0, u1) } else { (u1, u0) };
        let pe = eps / lr; // parameter-space band
        let a = lo.max(0.0);
        let b = hi.min(1.0);
        if a > b + pe {
            return SegIntersection::Empty;
        }
        if b - a <= pe {
            let m = (0.5 * (a + b)).clamp(0.0, 1.0);
            return SegIntersection::Point(s.a + m * r);
        }
        return SegIntersection::Overlap(Segment { a: s.a + a * r, b: s.a + b * r });
    }

    // Strict same-side separation on either axis means no contact.
    if (d1 > eps && d2 > eps) || (d1 < -eps && d2 < -eps) {
        return SegIntersection::Empty;
    }
    if (d3 > eps && d4 > eps) || (d3 < -eps && d4 < -eps) {
        return SegIntersection::Empty;
    }

    // Endpoint touch: an endpoint lying within the band of the other LINE
    // makes contact exactly when its projection lands inside the other
    // SEGMENT (again within the band). Resolving these by projection —
    // rather than solving the line–line system — matters for nearly
    // parallel segments: there the solve divides by a cross product that is
    // pure cancellation noise, and two segments sharing a line but
    // separated along it can come out as a bogus interior intersection.
    let touch_on = |seg: &Segment, dir: Point, len: f64, z: Point| -> Option<Point> {
        let u = dot(dir, z - seg.a) / dir.norm_sqr();
        let pe = eps / len;
        (-pe..=1.0 + pe).contains(&u).then(|| seg.a + u.clamp(0.0, 1.0) * dir)
    };
    for (d, seg, dir, len, z) in [
        (d1, s, r, lr, t.a),
        (d2, s, r, lr, t.b),
        (d3, t, q, lq, s.a),
        (d4, t, q, lq, s.b),
    ] {
        if near(d) {
            if let Some(pt) = touch_on(seg, dir, len, z) {
                return SegIntersection::Point(pt);
            }
        }
    }

    // Proper crossing: each segment's endpoints strictly straddle the other
    // line. The crossing parameter along t follows from the two signed
    // distances and stays well-conditioned however small the angle between
    // the segments is.
    let straddle_t = (d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps);
    let straddle_s = (d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps);
    if straddle_t && straddle_s {
        let u = d1 / (d1 - d2);
        return SegIntersection::Point(t.a + u * q);
    }
    SegIntersection::Empty
}

/// Distance from a point to a closed segment.
pub fn dist_point_segment(z: Point, s: &Segment) -> f64 {
    let d = s.b - s.a;
    let t = (dot(d, z - s.a) / (d.norm_sqr())).clamp(0.0, 1.0);
    (z - (s.a + t * d)).norm()
}

/// Distance between two closed segments (zero if they intersect).
pub fn dist_segment_segment(s: &Segment, t: &Segment) -> f64 {
    if !matches!(segment_intersection(s, t, 0.0), SegIntersection::Empty) {
        return 0.0;
    }
    dist_point_segment(s.a, t)
        .min(dist_point_segment(s.b, t))
        .min(dist_point_segment(t.a, s))
        .min(dist_point_segment(t.b, s))
}

/// A strictly convex polygon, stored as its clockwise vertex cycle.
///
/// Equivalently the intersection of the closed left half-planes of its
/// reversed edges, ⋂ V̄⁺(v_{n+1}, v_n); [`ConvexPolygon::contains`]
/// evaluates exactly that.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    verts: Vec<Point>,
}

impl ConvexPolygon {
    /// Validate and build. Rejects chains with fewer than three vertices,
    /// coincident or collinear neighbors, any left (counterclockwise) turn,
    /// and vertex cycles that wind around more than once.
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        Self::build(vertices)
    }

    /// Like [`ConvexPolygon::new`], but first merges runs of consecutive
    /// vertices closer than `tol` times the polygon diameter. The number of
    /// merged-away vertices is returned so callers can tell a degenerate
    /// input was repaired rather than silently accepting it.
    pub fn new_collapsing(vertices: Vec<Point>, tol: f64) -> Result<(Self, usize), GeometryError> {
        let n_in = vertices.len();
        let diam = max_pairwise_dist(&vertices);
        let mut kept: Vec<Point> = Vec::with_capacity(n_in);
        for v in vertices {
            match kept.last() {
                Some(&w) if (v - w).norm() <= tol * diam => {}
                _ => kept.push(v),
            }
        }
        while kept.len() > 1 && (kept[0] - *kept.last().unwrap()).norm() <= tol * diam {
            kept.pop();
        }
        let merged = n_in - kept.len();
        Self::build(kept).map(|p| (p, merged))
    }

    fn build(verts: Vec<Point>) -> Result<Self, GeometryError> {
        let n = verts.len();
        if n < 3 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if !verts.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(GeometryError::NonFinite);
        }
        let diam = max_pairwise_dist(&verts);
        let tol = DEFAULT_TOL;
        let mut turn_sum = 0.0;
        for i in 0..n {
            let p = verts[(i + n - 1) % n];
            let v = verts[i];
            let q = verts[(i + 1) % n];
            let e0 = v - p;
            let e1 = q - v;
            if e1.norm() <= tol * diam {
                return Err(GeometryError::DuplicateVertex(i, (i + 1) % n));
            }
            let x = cross(e0, e1);
            if x.abs() <= tol * e0.norm() * e1.norm() {
                return Err(GeometryError::CollinearVertices(i));
            }
            if x > 0.0 {
                return Err(GeometryError::NotClockwise(i));
            }
            turn_sum += x.atan2(dot(e0, e1));
        }
        // All turns are right turns, so the chain winds clockwise a whole
        // number of times; exactly once means a simple convex cycle.
        if (turn_sum + 2.0 * std::f64::consts::PI).abs() > 1e-6 {
            return Err(GeometryError::NotSimple);
        }
        Ok(ConvexPolygon { verts })
    }

    #[inline]
    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.verts.len();
        (0..n).map(move |i| Segment { a: self.verts[i], b: self.verts[(i + 1) % n] })
    }

    /// Closed membership: z lies in every closed left half-plane of the
    /// reversed edges; boundary points within tolerance count as inside.
    pub fn contains(&self, z: Point, tol: f64) -> bool {
        let n = self.verts.len();
        (0..n).all(|i| {
            let hp = HalfPlane {
                line: DirectedLine { a: self.verts[(i + 1) % n], b: self.verts[i] },
                left: true,
                closed: true,
            };
            hp.contains(z, tol)
        })
    }

    /// Signed distance to the boundary: positive inside (distance to the
    /// nearest edge), negative outside (minus the distance to the polygon,
    /// exact also beyond corners).
    pub fn signed_distance(&self, z: Point) -> f64 {
        let n = self.verts.len();
        let inward = (0..n)
            .map(|i| {
                let line = DirectedLine { a: self.verts[(i + 1) % n], b: self.verts[i] };
                line.signed_dist(z)
            })
            .fold(f64::INFINITY, f64::min);
        if inward >= 0.0 {
            return inward;
        }
        -self.edges().map(|e| dist_point_segment(z, &e)).fold(f64::INFINITY, f64::min)
    }

    /// Apply z ↦ c·z + d to every vertex. Any nonzero c preserves
    /// orientation, so the image is again clockwise convex.
    pub fn map_linear(&self, c: Point, d: Point) -> ConvexPolygon {
        ConvexPolygon { verts: self.verts.iter().map(|&v| c * v + d).collect() }
    }

    /// Apply z ↦ c·z̄ + d to every vertex. Conjugation mirrors the plane, so
    /// the vertex cycle is reversed to restore clockwise orientation.
    pub fn map_conjugate(&self, c: Point, d: Point) -> ConvexPolygon {
        ConvexPolygon { verts: self.verts.iter().rev().map(|&v| c * v.conj() + d).collect() }
    }

    /// Interior angles at each vertex, in vertex order.
    pub fn interior_angles(&self) -> Vec<f64> {
        let n = self.verts.len();
        (0..n)
            .map(|i| {
                angle(self.verts[(i + n - 1) % n], self.verts[i], self.verts[(i + 1) % n])
                    .expect("validated polygon has no degenerate corner")
            })
            .collect()
    }

    pub fn diameter(&self) -> f64 {
        max_pairwise_dist(&self.verts)
    }

    /// Vertex centroid and a radius bounding the polygon around it; a cheap
    /// prefilter for pairwise distance queries.
    pub fn bounding_circle(&self) -> (Point, f64) {
        let n = self.verts.len() as f64;
        let c = self.verts.iter().sum::<Point>() / n;
        let r = self.verts.iter().map(|v| (v - c).norm()).fold(0.0, f64::max);
        (c, r)
    }
}

fn max_pairwise_dist(verts: &[Point]) -> f64 {
    let mut d = 0.0_f64;
    for (i, a) in verts.iter().enumerate() {
        for b in &verts[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// Build a convex polygon from a clockwise vertex list.
pub fn make_polygon(vertices: Vec<Point>) -> Result<ConvexPolygon, GeometryError> {
    ConvexPolygon::new(vertices)
}

/// Closed membership test against a convex polygon.
pub fn contains_point(poly: &ConvexPolygon, z: Point, tol: f64) -> bool {
    poly.contains(z, tol)
}

/// True iff every vertex of `inner` lies in `outer` (sufficient for convex
/// containment).
pub fn contains_polygon(outer: &ConvexPolygon, inner: &ConvexPolygon, tol: f64) -> bool {
    inner.vertices().iter().all(|&v| outer.contains(v, tol))
}

/// Distance between two convex polygons: zero if they overlap, otherwise the
/// minimum distance between their boundaries.
pub fn dist_polygon_polygon(p: &ConvexPolygon, q: &ConvexPolygon) -> f64 {
    if p.contains(q.vertices()[0], 0.0) || q.contains(p.vertices()[0], 0.0) {
        return 0.0;
    }
    let mut best = f64::INFINITY;
    for ep in p.edges() {
        for eq in q.edges() {
            best = best.min(dist_segment_segment(&ep, &eq));
            if best == 0.0 {
                return 0.0;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn p(re: f64, im: f64) -> Point {
        point(re, im)
    }

    #[test]
    fn angle_right_turns() {
        // arg((c-b)/(a-b)) = arg(i) = +π/2: c is a quarter turn left of a.
        let a = p(1.0, 0.0);
        let b = p(0.0, 0.0);
        let c = p(0.0, 1.0);
        assert!((angle(a, b, c).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((angle(c, b, a).unwrap() + FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn angle_straight_line_is_exactly_pi() {
        let a = p(-1.0, 0.0);
        let b = p(0.0, 0.0);
        let c = p(2.0, 0.0);
        assert_eq!(angle(a, b, c).unwrap(), PI);
        // Slightly perturbed but within the tolerance band still snaps to π.
        let c2 = p(2.0, 1e-12);
        assert_eq!(angle(a, b, c2).unwrap(), PI);
    }

    #[test]
    fn angle_degenerate_rejected() {
        let z = p(0.3, 0.4);
        assert_eq!(angle(z, z, p(1.0, 0.0)).unwrap_err(), GeometryError::DegenerateAngle);
        assert_eq!(angle(p(1.0, 0.0), z, z).unwrap_err(), GeometryError::DegenerateAngle);
    }

    #[test]
    fn angle_antisymmetry() {
        let a = p(0.8, -0.1);
        let b = p(0.2, 0.5);
        let c = p(-0.4, 0.9);
        let lhs = angle(a, b, c).unwrap();
        let rhs = angle(c, b, a).unwrap();
        assert!((lhs + rhs).abs() < 1e-12, "{lhs} vs {rhs}");
    }

    #[test]
    fn side_classifies_with_tolerance() {
        let hp = HalfPlane::left_of(p(0.0, 0.0), p(1.0, 0.0)).unwrap();
        assert_eq!(side(&hp, p(0.5, 0.3), 1e-9), Side::Inside);
        assert_eq!(side(&hp, p(0.5, -0.3), 1e-9), Side::Outside);
        assert_eq!(side(&hp, p(0.5, 1e-12), 1e-9), Side::Boundary);
        // Tolerance is relative to scale: the same offset far out is boundary too.
        assert_eq!(side(&hp, p(1e6, 1e-4), 1e-9), Side::Boundary);
    }

    #[test]
    fn polygon_rejects_counterclockwise_and_collinear() {
        let square_ccw = vec![p(0.0, 0.0), p(1.0, 0.0), p(1.0, 1.0), p(0.0, 1.0)];
        assert!(matches!(
            ConvexPolygon::new(square_ccw),
            Err(GeometryError::NotClockwise(_))
        ));
        let collinear = vec![p(0.0, 0.0), p(1.0, 0.0), p(2.0, 0.0)];
        assert!(matches!(
            ConvexPolygon::new(collinear),
            Err(GeometryError::CollinearVertices(_))
        ));
        let reflex = vec![p(0.0, 0.0), p(2.0, 0.0), p(1.0, -0.5), p(2.0, -2.0)];
        assert!(matches!(ConvexPolygon::new(reflex), Err(GeometryError::NotClockwise(_))));
    }

    #[test]
    fn polygon_rejects_multiple_winding() {
        // A pentagram in star order makes only right turns but winds twice.
        let star: Vec<Point> = (0..5)
            .map(|k| Point::from_polar(1.0, -2.0 * PI * (2 * k) as f64 / 5.0))
            .collect();
        assert_eq!(ConvexPolygon::new(star).unwrap_err(), GeometryError::NotSimple);
    }

    #[test]
    fn polygon_membership_and_signed_distance() {
        let sq =
            ConvexPolygon::new(vec![p(0.0, 0.0), p(0.0, 1.0), p(1.0, 1.0), p(1.0, 0.0)]).unwrap();
        assert!(sq.contains(p(0.5, 0.5), 1e-9));
        assert!(sq.contains(p(0.0, 0.5), 1e-9)); // boundary is inside
        assert!(!sq.contains(p(1.2, 0.5), 1e-9));
        assert!((sq.signed_distance(p(0.5, 0.5)) - 0.5).abs() < 1e-15);
        assert!((sq.signed_distance(p(0.5, 0.25)) - 0.25).abs() < 1e-15);
        assert!((sq.signed_distance(p(1.5, 0.5)) + 0.5).abs() < 1e-15);
        // Outside past a corner the distance is to the vertex, not a line.
        assert!((sq.signed_distance(p(2.0, 2.0)) + 2.0_f64.sqrt()).abs() < 1e-15);
        assert_eq!(sq.signed_distance(p(0.0, 0.0)), 0.0);
    }

    #[test]
    fn line_intersection_meets_and_rejects_parallel() {
        let l1 = DirectedLine::new(p(0.0, 0.0), p(2.0, 2.0)).unwrap();
        let l2 = DirectedLine::new(p(0.0, 1.0), p(1.0, 1.0)).unwrap();
        let z = line_intersection(&l1, &l2).unwrap();
        assert!((z - p(1.0, 1.0)).norm() < 1e-15);
        let l3 = DirectedLine::new(p(5.0, -3.0), p(6.0, -2.0)).unwrap();
        assert_eq!(line_intersection(&l1, &l3).unwrap_err(), GeometryError::ParallelLines);
    }

    #[test]
    fn conjugate_map_restores_orientation() {
        let sq =
            ConvexPolygon::new(vec![p(0.0, 0.0), p(0.0, 1.0), p(1.0, 1.0), p(1.0, 0.0)]).unwrap();
        let mirrored = sq.map_conjugate(p(1.0, 0.0), p(0.0, 0.0));
        // Mirroring across the real axis flips the square below it; the
        // vertex cycle must still validate as clockwise.
        assert!(ConvexPolygon::new(mirrored.vertices().to_vec()).is_ok());
        assert!(mirrored.contains(p(0.5, -0.5), 1e-9));
    }

    #[test]
    fn polygon_interior_angles_in_vertex_order() {
        // A region corner: quadrilateral from curve data at the right-angle
        // parameter, listed clockwise; angles are (π/4, π/2, π/2, 3π/4).
        let quad = ConvexPolygon::new(vec![
            p(2.0 / 3.0, -2.0 / 3.0),
            p(0.0, -2.0 / 3.0),
            p(0.0, -1.0 / 6.0),
            p(1.0 / 6.0, -1.0 / 6.0),
        ])
        .unwrap();
        let want = [FRAC_PI_2 / 2.0, FRAC_PI_2, FRAC_PI_2, 1.5 * FRAC_PI_2];
        for (got, want) in quad.interior_angles().iter().zip(want) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        // The reversed list is counterclockwise and must be rejected.
        let mut rev = quad.vertices().to_vec();
        rev.reverse();
        assert!(matches!(ConvexPolygon::new(rev), Err(GeometryError::NotClockwise(_))));
    }

    #[test]
    fn polygon_collapse_merges_near_duplicates() {
        let verts = vec![p(0.0, 0.0), p(0.0, 1.0), p(1.0, 1.0), p(1.0, 1e-12), p(1.0, 0.0)];
        assert!(ConvexPolygon::new(verts.clone()).is_err());
        let (poly, merged) = ConvexPolygon::new_collapsing(verts, 1e-9).unwrap();
        assert_eq!(merged, 1);
        assert_eq!(poly.vertices().len(), 4);
    }

    #[test]
    fn containment_is_reflexive_and_nests() {
        let outer =
            ConvexPolygon::new(vec![p(0.0, 0.0), p(0.0, 2.0), p(2.0, 2.0), p(2.0, 0.0)]).unwrap();
        let inner =
            ConvexPolygon::new(vec![p(0.5, 0.5), p(0.5, 1.5), p(1.5, 1.5), p(1.5, 0.5)]).unwrap();
        assert!(contains_polygon(&outer, &outer, 1e-9));
        assert!(contains_polygon(&outer, &inner, 1e-9));
        assert!(!contains_polygon(&inner, &outer, 1e-9));
    }

    #[test]
    fn segment_intersection_cases() {
        let s = Segment::new(p(0.0, 0.0), p(1.0, 0.0)).unwrap();
        // Transversal crossing at the midpoint.
        let t = Segment::new(p(0.5, -1.0), p(0.5, 1.0)).unwrap();
        match segment_intersection(&s, &t, 1e-9) {
            SegIntersection::Point(z) => assert!((z - p(0.5, 0.0)).norm() < 1e-12),
            other => panic!("expected point, got {other:?}"),
        }
        // Endpoint touch.
        let t = Segment::new(p(1.0, 0.0), p(2.0, 1.0)).unwrap();
        match segment_intersection(&s, &t, 1e-9) {
            SegIntersection::Point(z) => assert!((z - p(1.0, 0.0)).norm() < 1e-12),
            other => panic!("expected endpoint touch, got {other:?}"),
        }
        // Near-touch within tolerance counts; outside tolerance does not.
        let t = Segment::new(p(0.5, 1e-12), p(0.5, 1.0)).unwrap();
        assert!(matches!(segment_intersection(&s, &t, 1e-9), SegIntersection::Point(_)));
        let t = Segment::new(p(0.5, 1e-3), p(0.5, 1.0)).unwrap();
        assert!(matches!(segment_intersection(&s, &t, 1e-9), SegIntersection::Empty));
        // Collinear overlap.
        let t = Segment::new(p(0.5, 0.0), p(2.0, 0.0)).unwrap();
        match segment_intersection(&s, &t, 1e-9) {
            SegIntersection::Overlap(o) => {
                assert!((o.a - p(0.5, 0.0)).norm() < 1e-12);
                assert!((o.b - p(1.0, 0.0)).norm() < 1e-12);
            }
            other => panic!("expected overlap, got {other:?}"),
        }
        // Collinear but disjoint.
        let t = Segment::new(p(1.5, 0.0), p(2.0, 0.0)).unwrap();
        assert!(matches!(segment_intersection(&s, &t, 1e-9), SegIntersection::Empty));
        // Collinear sharing exactly one endpoint.
        let t = Segment::new(p(1.0, 0.0), p(2.0, 0.0)).unwrap();
        match segment_intersection(&s, &t, 1e-9) {
            SegIntersection::Point(z) => assert!((z - p(1.0, 0.0)).norm() < 1e-12),
            other => panic!("expected single shared point, got {other:?}"),
        }
        // Parallel, separated.
        let t = Segment::new(p(0.0, 0.5), p(1.0, 0.5)).unwrap();
        assert!(matches!(segment_intersection(&s, &t, 1e-9), SegIntersection::Empty));
    }

    #[test]
    fn segment_intersection_is_symmetric() {
        let s = Segment::new(p(0.1, -0.2), p(0.9, 0.7)).unwrap();
        let t = Segment::new(p(0.0, 0.6), p(1.0, -0.3)).unwrap();
        let st = segment_intersection(&s, &t, 1e-9);
        let ts = segment_intersection(&t, &s, 1e-9);
        match (st, ts) {
            (SegIntersection::Point(u), SegIntersection::Point(v)) => {
                assert!((u - v).norm() < 1e-12);
            }
            other => panic!("expected points, got {other:?}"),
        }
    }

    #[test]
    fn same_line_disjoint_segments_do_not_intersect() {
        // Two segments on one slanted line, separated along it, with the
        // rounding quirk that one endpoint sits *exactly* on the other
        // segment's line (signed distance +0.0) while the rest sit ~1e-17
        // off. The zero-tolerance predicate must stay Empty: a line–line
        // solve here divides cancellation noise by cancellation noise and
        // once reported a fake interior intersection.
        let s = Segment::new(
            p(0.4627376836840641, -0.2006104227445871),
            p(0.4855925751951546, -0.3371858689895455),
        )
        .unwrap();
        let t = Segment::new(
            p(0.5159917569584671, -0.518844216078672),
            p(0.5061831914560272, -0.46023053988298407),
        )
        .unwrap();
        assert_eq!(segment_intersection(&s, &t, 0.0), SegIntersection::Empty);
        let d = dist_segment_segment(&s, &t);
        assert!(d > 0.12, "true gap is ~0.125, got {d}");
        // A small positive tolerance lands these in the collinear branch,
        // which must also see them as separated along the line.
        assert_eq!(segment_intersection(&s, &t, 1e-9), SegIntersection::Empty);
    }

    #[test]
    fn segment_distances() {
        let s = Segment::new(p(0.0, 0.0), p(1.0, 0.0)).unwrap();
        assert!((dist_point_segment(p(0.5, 0.4), &s) - 0.4).abs() < 1e-15);
        assert!((dist_point_segment(p(2.0, 0.0), &s) - 1.0).abs() < 1e-15);
        let t = Segment::new(p(0.0, 0.3), p(1.0, 0.3)).unwrap();
        assert!((dist_segment_segment(&s, &t) - 0.3).abs() < 1e-15);
        let u = Segment::new(p(0.5, -1.0), p(0.5, 1.0)).unwrap();
        assert_eq!(dist_segment_segment(&s, &u), 0.0);
    }

    #[test]
    fn polygon_polygon_distance() {
        let a = ConvexPolygon::new(vec![p(0.0, 0.0), p(0.0, 1.0), p(1.0, 1.0), p(1.0, 0.0)])
            .unwrap();
        let b = ConvexPolygon::new(vec![p(2.0, 0.0), p(2.0, 1.0), p(3.0, 1.0), p(3.0, 0.0)])
            .unwrap();
        assert!((dist_polygon_polygon(&a, &b) - 1.0).abs() < 1e-15);
        let c = ConvexPolygon::new(vec![p(0.5, 0.5), p(0.5, 1.5), p(1.5, 1.5), p(1.5, 0.5)])
            .unwrap();
        assert_eq!(dist_polygon_polygon(&a, &c), 0.0);
        // One polygon strictly inside the other also has distance zero.
        let inner = ConvexPolygon::new(vec![p(0.4, 0.4), p(0.5, 0.6), p(0.6, 0.4)]).unwrap();
        assert_eq!(dist_polygon_polygon(&a, &inner), 0.0);
    }
}
