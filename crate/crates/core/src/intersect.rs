//! Self-intersection detection for broken lines.
//!
//! A polyline is *self-intersective* when two of its segments touch
//! anywhere except the one vertex that consecutive segments legitimately
//! share. Meeting exactly at a crease vertex counts: the classification
//! distinguishes a transversal [`ContactKind::Crossing`] from a
//! [`ContactKind::TouchAtVertex`] (either two creases kissing, or a crease
//! landing on another segment's interior) and from collinear
//! [`ContactKind::Overlap`].
//!
//! Two detectors are provided. [`brute_force`] tests every pair and is the
//! oracle; [`sweep`] sorts segments along x and only tests pairs whose
//! x-ranges overlap (expanded by the tolerance band), which is what makes
//! order-20 curves with a million segments tractable. Both share the exact
//! same contact predicate, so their event lists agree identically — the
//! sweep prunes only pairs that cannot touch.
//!
//! Exactness caveat: contacts are judged within `tol` relative to segment
//! length, because the angles at which creases meet exactly are
//! measure-zero in ξ and unreachable in floats. Every event therefore
//! carries the measured `gap` between the two segments (0 for a true
//! crossing, positive for a near-touch accepted by the band) so callers can
//! tell the two apart.

use crate::geometry::{
    dist_segment_segment, segment_intersection, Point, SegIntersection, Segment,
};
use crate::ifs::{curve, IfsError, ModelParams, Polyline};
use serde::Serialize;
use thiserror::Error;

/// The brute-force oracle refuses inputs past this many segments.
pub const MAX_BRUTE_SEGMENTS: usize = 8192;

#[derive(Debug, Error)]
pub enum IntersectError {
    #[error("brute force is capped at {max} segments, got {got}")]
    TooLarge { got: usize, max: usize },
    #[error(transparent)]
    Ifs(#[from] IfsError),
}

/// How two segments touch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactKind {
    /// Interiors cross transversally.
    Crossing,
    /// The contact point is a vertex of at least one of the two segments.
    TouchAtVertex,
    /// Collinear segments share more than a point.
    Overlap,
}

/// One detected contact between segments `seg_i < seg_j`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IntersectionEvent {
    pub seg_i: usize,
    pub seg_j: usize,
    pub x: f64,
    pub y: f64,
    pub kind: ContactKind,
    /// True minimal distance between the two segments: 0 for a genuine
    /// crossing, positive for a near-touch admitted by the tolerance band.
    pub gap: f64,
}

impl IntersectionEvent {
    pub fn location(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Detection result (`schema` is 1). `order` and `xi` are filled when the
/// polyline is a known dragon curve instance.
#[derive(Debug, Clone, Serialize)]
pub struct IntersectionReport {
    pub schema: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    pub n_segments: usize,
    pub self_intersective: bool,
    pub events: Vec<IntersectionEvent>,
}

impl IntersectionReport {
    fn new(n_segments: usize, events: Vec<IntersectionEvent>) -> Self {
        IntersectionReport {
            schema: 1,
            order: None,
            xi: None,
            n_segments,
            self_intersective: !events.is_empty(),
            events,
        }
    }

    /// Tag the report with the curve instance it came from.
    pub fn with_curve_info(mut self, order: u32, xi: f64) -> Self {
        self.order = Some(order);
        self.xi = Some(xi);
        self
    }
}

fn segments_of(poly: &Polyline) -> Vec<Segment> {
    (0..poly.segment_count())
        .map(|i| {
            let (a, b) = poly.segment(i);
            Segment { a, b }
        })
        .collect()
}

/// The shared pair predicate: decide whether segments i and j make an
/// event, and classify it. Consecutive segments are exempt *only at their
/// shared vertex* — a fold-back overlap or a contact elsewhere still
/// counts.
fn pair_event(
    segs: &[Segment],
    i: usize,
    j: usize,
    tol: f64,
) -> Option<IntersectionEvent> {
    let (s, t) = (&segs[i], &segs[j]);
    let eps = tol * s.len().max(t.len());
    let adjacent = j == i + 1;
    match segment_intersection(s, t, tol) {
        SegIntersection::Empty => None,
        SegIntersection::Point(pt) => {
            if adjacent && (pt - s.b).norm() <= eps {
                return None; // the legitimately shared vertex
            }
            let at_vertex = [s.a, s.b, t.a, t.b].iter().any(|&v| (pt - v).norm() <= eps);
            let kind = if at_vertex { ContactKind::TouchAtVertex } else { ContactKind::Crossing };
            Some(IntersectionEvent {
                seg_i: i,
                seg_j: j,
                x: pt.re,
                y: pt.im,
                kind,
                gap: dist_segment_segment(s, t),
            })
        }
        SegIntersection::Overlap(seg) => {
            let mid = 0.5 * (seg.a + seg.b);
            Some(IntersectionEvent {
                seg_i: i,
                seg_j: j,
                x: mid.re,
                y: mid.im,
                kind: ContactKind::Overlap,
                gap: 0.0,
            })
        }
    }
}

/// Test every segment pair. Quadratic and honest; capped at
/// [`MAX_BRUTE_SEGMENTS`].
pub fn brute_force(poly: &Polyline, tol: f64) -> Result<IntersectionReport, IntersectError> {
    let segs = segments_of(poly);
    let n = segs.len();
    if n > MAX_BRUTE_SEGMENTS {
        return Err(IntersectError::TooLarge { got: n, max: MAX_BRUTE_SEGMENTS });
    }
    let mut events = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if let Some(ev) = pair_event(&segs, i, j, tol) {
                events.push(ev);
            }
        }
    }
    Ok(IntersectionReport::new(n, events))
}

/// Interval sweep along x: segments enter in order of their left end and
/// retire once the sweep passes their right end (both expanded by the
/// tolerance band), so only x-overlapping pairs reach the pair predicate.
/// Ties in the entry order are broken by segment index — a deterministic
/// stand-in for the usual symbolic perturbation, and immaterial to the
/// output since the event list is re-sorted by (i, j).
pub fn sweep(poly: &Polyline, tol: f64) -> IntersectionReport {
    let segs = segments_of(poly);
    let n = segs.len();
    let band: f64 = segs.iter().map(Segment::len).fold(0.0, f64::max) * tol;
    let lo = |s: &Segment| s.a.re.min(s.b.re) - band;
    let hi = |s: &Segment| s.a.re.max(s.b.re) + band;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| lo(&segs[a]).total_cmp(&lo(&segs[b])).then(a.cmp(&b)));

    let mut active: Vec<usize> = Vec::new();
    let mut events = Vec::new();
    for &idx in &order {
        let enter = lo(&segs[idx]);
        active.retain(|&other| hi(&segs[other]) >= enter);
        for &other in &active {
            let (i, j) = if other < idx { (other, idx) } else { (idx, other) };
            if let Some(ev) = pair_event(&segs, i, j, tol) {
                events.push(ev);
            }
        }
        active.push(idx);
    }
    events.sort_by_key(|e| (e.seg_i, e.seg_j));
    IntersectionReport::new(n, events)
}

/// Smallest order k ≤ `k_max` whose curve at this parameter is
/// self-intersective, with its report; `None` if every order is clean.
pub fn first_bad_order(
    p: &ModelParams,
    k_max: u32,
    tol: f64,
) -> Result<Option<IntersectionReport>, IntersectError> {
    for k in 1..=k_max {
        let poly = curve(p, k)?;
        let rep = sweep(&poly, tol);
        if rep.self_intersective {
            return Ok(Some(rep.with_curve_info(k, p.xi)));
        }
    }
    Ok(None)
}
