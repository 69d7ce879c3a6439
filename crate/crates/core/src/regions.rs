//! The convex certificate regions, their anchor points, and finite
//! truncations of the infinite cover.
//!
//! For 0 < ξ < π/4 the curve family admits an infinite polygonal cover: a
//! chain of similar quadrilaterals A₁, A₂ = f₁(A₁), A₃ = f₁₁(A₁), …
//! spiraling into 0, a pentagonal bridge B next to A₁, and the mirror chain
//! f₂(A₁), f₂(A₂), … spiraling into 1. Every region hangs off the point
//!
//! ```text
//!     z₀ = α / (1 - |α|⁴),
//! ```
//!
//! the fixed point of f_{2211} and the common corner of A₁, B, and the
//! wedges below. The certifier ([`crate::certify`]) never touches the
//! infinite union: it works with the truncation C_k = A₁ ∪ … ∪ A_{k-1} ∪ B
//! ∪ f₂(A₁) ∪ … ∪ f₂(A_{k-2}) ([`build_ck`]) plus tail balls around 0
//! and 1.
//!
//! Supporting the invariance argument are wedge-shaped envelopes of the
//! A-chain and two outer hulls:
//!
//! * W = 𝒫(0, z₀, q), the isoceles wedge over [0, z₀];
//! * S = 𝒫(z₀, p₁, p₂, p₃), a rhombus-like hull of ⋃ Aₙ, trimmed to
//!   S′ = 𝒫(z₀, f₁(z₀), f₁₁(z₀), p₂, p₃) and further to S″ (which uses the
//!   reflection R across the line through 0 and α), so S″ ⊂ S′ ⊂ S;
//! * T = 𝒫(p₁, p₂, τ(p₃), τ(z₀)) and T′ = 𝒫(p₁, p₂, ψ(p₂), ψ(p₃)), hulls
//!   of S ∪ τ(S) and S ∪ ψ(S) with the whole cover inside T′ ⊂ T.
//!
//! The anchors p₁, p₂, p₃, q all have closed forms *and* independent
//! constructions (line meets, isoceles angle conditions); [`anchors`]
//! computes both and refuses to hand out points the two routes disagree on.
//!
//! Vertices keep symbolic labels ("f112(z0)", "psi(p2)", …) so failure
//! reports and the JSON/SVG exports can name points instead of dumping raw
//! coordinates.

use crate::geometry::{
    angle, line_intersection, ConvexPolygon, DirectedLine, GeometryError, Point,
};
use crate::ifs::{named_map, ModelParams, NamedMap, Similarity};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RegionsError {
    #[error("region construction needs 0 < ξ ≤ π/4, got {0}")]
    XiOutOfRange(f64),
    #[error("region {name} is not a valid convex polygon: {source}")]
    BadRegion { name: String, source: GeometryError },
    #[error("anchor {name}: closed form and construction disagree by {delta:.3e}")]
    AnchorMismatch { name: &'static str, delta: f64 },
    #[error("anchor {0} construction failed: {1}")]
    AnchorConstruction(&'static str, GeometryError),
    #[error("truncation depth must be at least 2, got {0}")]
    DepthTooSmall(u32),
}

fn check_range(p: &ModelParams) -> Result<(), RegionsError> {
    // The closed upper end is included: at ξ = π/4 every region is still a
    // valid clockwise polygon (the A-chain corners become right angles).
    if !(p.xi > 0.0 && p.xi <= std::f64::consts::FRAC_PI_4) {
        return Err(RegionsError::XiOutOfRange(p.xi));
    }
    Ok(())
}

/// The corner points of the wedge regions. All four are real multiples of
/// α or ᾱ scaled through z₀, which is what makes the S/W wedges isoceles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnchorPoints {
    /// Meet of the lines through [f₁(z₀), z₀] and [f₁₁₁(z₀), f₁₁(z₀)];
    /// equals (α - ᾱ|α|²) z₀ = z₀ - |α|²/(1 - |α|²).
    pub p1: Point,
    /// Meet of the line through [f₁₁₁(z₀), f₁₁(z₀)] with the line through
    /// z₀ and 0; equals -|α|² z₀ = f₁₁(q).
    pub p2: Point,
    /// Mirror of p₁ across the line through 0 and α; closes the isoceles
    /// wedge ∠(z₀, p₂, p₃) = ∠(p₃, z₀, p₂) = ξ over [p₂, z₀].
    pub p3: Point,
    /// Closes the isoceles wedge of half-angle ξ over [0, z₀]; equals
    /// -(ᾱ/α) z₀ = z₀ - 1/(1 - |α|⁴).
    pub q: Point,
}

fn ensure_point(
    name: &'static str,
    a: Point,
    b: Point,
    tol: f64,
) -> Result<(), RegionsError> {
    let delta = (a - b).norm();
    if delta > tol {
        return Err(RegionsError::AnchorMismatch { name, delta });
    }
    Ok(())
}

fn ensure_angle(name: &'static str, got: f64, want: f64, tol: f64) -> Result<(), RegionsError> {
    let delta = (got - want).abs();
    if delta > tol {
        return Err(RegionsError::AnchorMismatch { name, delta });
    }
    Ok(())
}

/// Compute p₁, p₂, p₃, q from their closed forms and verify each against an
/// independent construction (line meets for p₁ and p₂, isoceles angle
/// conditions at ξ for p₃ and q, and the reflection identity R(p₁) = p₃).
///
/// A disagreement beyond 1e-10 of the configuration scale means the algebra
/// and the geometry have drifted apart and is reported as an error rather
/// than papering over it.
pub fn anchors(p: &ModelParams) -> Result<AnchorPoints, RegionsError> {
    check_range(p)?;
    let a = p.alpha;
    let a2 = a.norm_sqr();
    let z0 = p.z0();

    let q = -(a.conj() / a) * z0;
    let p1 = (a - a.conj() * a2) * z0;
    let p2 = -a2 * z0;
    let p3 = (a.conj() - a * a2) * z0;

    // Second algebraic route for each point.
    let s = z0.norm().max(1.0);
    ensure_point("q", q, z0 - 1.0 / (1.0 - a2 * a2), 1e-12 * s)?;
    ensure_point("p1", p1, z0 - a2 / (1.0 - a2), 1e-12 * s)?;
    ensure_point("p2", p2, p.fw(&[1, 1]).apply(q), 1e-12 * s)?;
    ensure_point("p3", p3, p2 + a2 / (1.0 - a2), 1e-12 * s)?;

    // Constructive route: p1 and p2 are meets of the lines carrying the
    // first chords of the curve through z₀.
    let pt = |w: &[u8]| p.fw(w).apply(z0);
    let line = |name, a, b| {
        DirectedLine::new(a, b).map_err(|e| RegionsError::AnchorConstruction(name, e))
    };
    let meet = |name, l1: &DirectedLine, l2: &DirectedLine| {
        line_intersection(l1, l2).map_err(|e| RegionsError::AnchorConstruction(name, e))
    };
    let top = line("p1", pt(&[1]), z0)?;
    let mid = line("p1", pt(&[1, 1, 1]), pt(&[1, 1]))?;
    let low = line("p2", z0, Complex64::ZERO)?;
    ensure_point("p1", p1, meet("p1", &top, &mid)?, 1e-10 * s)?;
    ensure_point("p2", p2, meet("p2", &mid, &low)?, 1e-10 * s)?;

    // Constructive route for p3 and q: both isoceles angle conditions.
    let ang = |name, a, b, c| {
        angle(a, b, c).map_err(|e| RegionsError::AnchorConstruction(name, e))
    };
    let xi = p.xi;
    ensure_angle("angle(z0,p2,p3)", ang("p3", z0, p2, p3)?, xi, 1e-10)?;
    ensure_angle("angle(p3,z0,p2)", ang("p3", p3, z0, p2)?, xi, 1e-10)?;
    ensure_angle("angle(0,z0,q)", ang("q", Complex64::ZERO, z0, q)?, xi, 1e-10)?;
    ensure_angle("angle(z0,q,0)", ang("q", z0, q, Complex64::ZERO)?, xi, 1e-10)?;

    // The reflection across the line through 0 and α swaps p1 and p3.
    let refl = named_map(p, NamedMap::ReflectR);
    ensure_point("R(p1)", refl.apply(p1), p3, 1e-12 * s)?;

    Ok(AnchorPoints { p1, p2, p3, q })
}

/// A certificate region: a convex polygon whose vertices keep symbolic
/// names, so reports can say `f112(z0)` instead of a bare coordinate.
#[derive(Debug, Clone)]
pub struct LabeledPolygon {
    name: String,
    labels: Vec<String>,
    poly: ConvexPolygon,
}

impl LabeledPolygon {
    /// Build and validate from (label, point) pairs in clockwise order.
    pub fn new<S: Into<String>>(
        name: impl Into<String>,
        pairs: impl IntoIterator<Item = (S, Point)>,
    ) -> Result<Self, RegionsError> {
        let name = name.into();
        let (labels, verts): (Vec<String>, Vec<Point>) =
            pairs.into_iter().map(|(l, v)| (l.into(), v)).unzip();
        let poly = ConvexPolygon::new(verts)
            .map_err(|source| RegionsError::BadRegion { name: name.clone(), source })?;
        Ok(LabeledPolygon { name, labels, poly })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Vertex labels, aligned with [`ConvexPolygon::vertices`].
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn poly(&self) -> &ConvexPolygon {
        &self.poly
    }

    /// Look up a vertex by its label.
    pub fn vertex(&self, label: &str) -> Option<Point> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.poly.vertices()[i])
    }

    /// Image under a similarity, with each label rewritten. No revalidation:
    /// a similarity preserves strict convexity exactly, and re-checking in
    /// floats would spuriously reject deep pieces (diameter ~1e−15) that a
    /// translation parks next to 1, where coordinate cancellation swamps
    /// the cross products.
    pub(crate) fn mapped(
        &self,
        name: impl Into<String>,
        map: &Similarity,
        wrap: impl Fn(&str) -> String,
    ) -> Self {
        LabeledPolygon {
            name: name.into(),
            labels: self.labels.iter().map(|l| wrap(l)).collect(),
            poly: self.poly.map_linear(map.c, map.d),
        }
    }
}

/// The nine named regions at one parameter value.
#[derive(Debug, Clone)]
pub struct RegionSet {
    pub params: ModelParams,
    pub z0: Point,
    pub anchors: AnchorPoints,
    /// A₁ = 𝒫(z₀, f₁(z₀), f₁₁₂(z₀), f₁₂(z₀)).
    pub a1: LabeledPolygon,
    /// Ã₁ = 𝒫(0, z₀, f₁(z₀)), the triangle A₁ sits in.
    pub a1_tilde: LabeledPolygon,
    /// B = 𝒫(z₀, f₁₂(z₀), f₂(z₀), f₂₁₂(z₀), f₂₂₁(z₀)).
    pub b: LabeledPolygon,
    /// W = 𝒫(0, z₀, q).
    pub w: LabeledPolygon,
    /// S = 𝒫(z₀, p₁, p₂, p₃).
    pub s: LabeledPolygon,
    /// S′ = 𝒫(z₀, f₁(z₀), f₁₁(z₀), p₂, p₃).
    pub sp: LabeledPolygon,
    /// S″ = 𝒫(z₀, f₁(z₀), f₁₁(z₀), p₂, R(f₁₁(z₀)), R(f₁(z₀))).
    pub spp: LabeledPolygon,
    /// T = 𝒫(p₁, p₂, τ(p₃), τ(z₀)).
    pub t: LabeledPolygon,
    /// T′ = 𝒫(p₁, p₂, ψ(p₂), ψ(p₃)).
    pub tp: LabeledPolygon,
}

fn base_a1(p: &ModelParams) -> Result<LabeledPolygon, RegionsError> {
    let z0 = p.z0();
    let pt = |w: &[u8]| p.fw(w).apply(z0);
    LabeledPolygon::new(
        "A1",
        [
            ("z0", z0),
            ("f1(z0)", pt(&[1])),
            ("f112(z0)", pt(&[1, 1, 2])),
            ("f12(z0)", pt(&[1, 2])),
        ],
    )
}

fn base_a1_tilde(p: &ModelParams) -> Result<LabeledPolygon, RegionsError> {
    let z0 = p.z0();
    LabeledPolygon::new(
        "A~1",
        [
            ("0", Complex64::ZERO),
            ("z0", z0),
            ("f1(z0)", p.f1().apply(z0)),
        ],
    )
}

fn base_b(p: &ModelParams) -> Result<LabeledPolygon, RegionsError> {
    let z0 = p.z0();
    let pt = |w: &[u8]| p.fw(w).apply(z0);
    LabeledPolygon::new(
        "B",
        [
            ("z0", z0),
            ("f12(z0)", pt(&[1, 2])),
            ("f2(z0)", pt(&[2])),
            ("f212(z0)", pt(&[2, 1, 2])),
            ("f221(z0)", pt(&[2, 2, 1])),
        ],
    )
}

/// Construct all nine regions. Fails if any vertex list is not strictly
/// convex clockwise, or if an anchor cross-check fails; both indicate a bug
/// rather than a certification outcome, so there is no tolerance knob here.
pub fn build_regions(p: &ModelParams) -> Result<RegionSet, RegionsError> {
    let anchors = anchors(p)?;
    let z0 = p.z0();
    let pt = |w: &[u8]| p.fw(w).apply(z0);
    let f1z0 = pt(&[1]);
    let f11z0 = pt(&[1, 1]);
    let psi = named_map(p, NamedMap::Psi);
    let tau = named_map(p, NamedMap::Tau);
    let refl = named_map(p, NamedMap::ReflectR);

    let a1 = base_a1(p)?;
    let a1_tilde = base_a1_tilde(p)?;
    let b = base_b(p)?;
    let w = LabeledPolygon::new(
        "W",
        [("0", Complex64::ZERO), ("z0", z0), ("q", anchors.q)],
    )?;
    let s = LabeledPolygon::new(
        "S",
        [
            ("z0", z0),
            ("p1", anchors.p1),
            ("p2", anchors.p2),
            ("p3", anchors.p3),
        ],
    )?;
    let sp = LabeledPolygon::new(
        "S'",
        [
            ("z0", z0),
            ("f1(z0)", f1z0),
            ("f11(z0)", f11z0),
            ("p2", anchors.p2),
            ("p3", anchors.p3),
        ],
    )?;
    let spp = LabeledPolygon::new(
        "S''",
        [
            ("z0", z0),
            ("f1(z0)", f1z0),
            ("f11(z0)", f11z0),
            ("p2", anchors.p2),
            ("R(f11(z0))", refl.apply(f11z0)),
            ("R(f1(z0))", refl.apply(f1z0)),
        ],
    )?;
    let t = LabeledPolygon::new(
        "T",
        [
            ("p1", anchors.p1),
            ("p2", anchors.p2),
            ("tau(p3)", tau.apply(anchors.p3)),
            ("tau(z0)", tau.apply(z0)),
        ],
    )?;
    let tp = LabeledPolygon::new(
        "T'",
        [
            ("p1", anchors.p1),
            ("p2", anchors.p2),
            ("psi(p2)", psi.apply(anchors.p2)),
            ("psi(p3)", psi.apply(anchors.p3)),
        ],
    )?;

    Ok(RegionSet {
        params: *p,
        z0,
        anchors,
        a1,
        a1_tilde,
        b,
        w,
        s,
        sp,
        spp,
        t,
        tp,
    })
}

fn powered(
    p: &ModelParams,
    base: LabeledPolygon,
    m: i32,
    name: String,
) -> Result<LabeledPolygon, RegionsError> {
    let n = m - 1;
    if n == 0 {
        return Ok(base);
    }
    let map = Similarity { c: p.alpha.powi(n), d: Complex64::ZERO };
    let wrap = |l: &str| {
        if n == 1 {
            format!("f1({l})")
        } else {
            format!("f1^{n}({l})")
        }
    };
    Ok(base.mapped(name, &map, wrap))
}

/// A_m = f_{(1)^{m-1}}(A₁) for any integer m; negative powers of f₁ are the
/// (expanding) inverse iterates, so A₀ and A₋₁ grow instead of shrink.
pub fn region_a(p: &ModelParams, m: i32) -> Result<LabeledPolygon, RegionsError> {
    check_range(p)?;
    powered(p, base_a1(p)?, m, format!("A{m}"))
}

/// Ã_m = f_{(1)^{m-1}}(Ã₁), the triangle envelope of A_m.
pub fn region_a_tilde(p: &ModelParams, m: i32) -> Result<LabeledPolygon, RegionsError> {
    check_range(p)?;
    powered(p, base_a1_tilde(p)?, m, format!("A~{m}"))
}

/// The truncation C_k: pieces A₁ … A_{k-1}, B, f₂(A₁) … f₂(A_{k-2}),
/// nameable by index.
#[derive(Debug, Clone)]
pub struct TruncatedC {
    pub params: ModelParams,
    pub k: u32,
    pieces: Vec<LabeledPolygon>,
}

/// Build C_k for k ≥ 2 (C₂ = A₁ ∪ B has the empty mirrored chain).
pub fn build_ck(p: &ModelParams, k: u32) -> Result<TruncatedC, RegionsError> {
    check_range(p)?;
    if k < 2 {
        return Err(RegionsError::DepthTooSmall(k));
    }
    let a1 = base_a1(p)?;
    let mut pieces: Vec<LabeledPolygon> = Vec::with_capacity(2 * k as usize - 2);
    for n in 1..k {
        pieces.push(powered(p, a1.clone(), n as i32, format!("A{n}"))?);
    }
    pieces.push(base_b(p)?);
    let f2 = p.f2();
    for n in 1..k - 1 {
        let an = &pieces[(n - 1) as usize];
        pieces.push(an.mapped(format!("f2(A{n})"), &f2, |l| format!("f2({l})")));
    }
    Ok(TruncatedC { params: *p, k, pieces })
}

impl TruncatedC {
    /// Pieces in order A₁ … A_{k-1}, B, f₂(A₁) … f₂(A_{k-2}).
    pub fn pieces(&self) -> &[LabeledPolygon] {
        &self.pieces
    }

    /// Look up one piece by name, e.g. `"A3"`, `"B"`, `"f2(A1)"`.
    pub fn piece(&self, name: &str) -> Option<&LabeledPolygon> {
        self.pieces.iter().find(|lp| lp.name() == name)
    }

    /// Closed membership in the union of pieces.
    pub fn contains_point(&self, z: Point, tol: f64) -> bool {
        self.pieces.iter().any(|lp| lp.poly().contains(z, tol))
    }

    /// Signed distance to the union: the best (largest) per-piece signed
    /// distance, so ≥ 0 means some piece contains the point.
    pub fn signed_distance(&self, z: Point) -> f64 {
        self.pieces
            .iter()
            .map(|lp| lp.poly().signed_distance(z))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Free-function form of [`TruncatedC::contains_point`].
pub fn contains_point_union(c: &TruncatedC, z: Point, tol: f64) -> bool {
    c.contains_point(z, tol)
}

/// One labeled vertex in the JSON export.
#[derive(Debug, Clone, Serialize)]
pub struct VertexDto {
    pub label: String,
    pub x: f64,
    pub y: f64,
}

fn vertex_dto(label: &str, z: Point) -> VertexDto {
    VertexDto { label: label.to_string(), x: z.re, y: z.im }
}

/// One region in the JSON export: name plus labeled vertices in clockwise
/// order.
#[derive(Debug, Clone, Serialize)]
pub struct RegionDto {
    pub name: String,
    pub vertices: Vec<VertexDto>,
}

impl From<&LabeledPolygon> for RegionDto {
    fn from(lp: &LabeledPolygon) -> Self {
        RegionDto {
            name: lp.name.clone(),
            vertices: lp
                .labels
                .iter()
                .zip(lp.poly.vertices())
                .map(|(l, &v)| vertex_dto(l, v))
                .collect(),
        }
    }
}

/// JSON layout of a full region set (`schema` is 1).
#[derive(Debug, Clone, Serialize)]
pub struct RegionSetDoc {
    pub schema: u32,
    pub xi: f64,
    pub theta_deg: f64,
    pub points: Vec<VertexDto>,
    pub regions: Vec<RegionDto>,
}

impl RegionSet {
    pub fn to_doc(&self) -> RegionSetDoc {
        RegionSetDoc {
            schema: 1,
            xi: self.params.xi,
            theta_deg: self.params.theta_deg(),
            points: vec![
                vertex_dto("z0", self.z0),
                vertex_dto("alpha", self.params.alpha),
                vertex_dto("q", self.anchors.q),
                vertex_dto("p1", self.anchors.p1),
                vertex_dto("p2", self.anchors.p2),
                vertex_dto("p3", self.anchors.p3),
            ],
            regions: [
                &self.a1,
                &self.a1_tilde,
                &self.b,
                &self.w,
                &self.s,
                &self.sp,
                &self.spp,
                &self.t,
                &self.tp,
            ]
            .into_iter()
            .map(RegionDto::from)
            .collect(),
        }
    }
}

/// JSON layout of a truncation (`schema` is 1).
#[derive(Debug, Clone, Serialize)]
pub struct TruncationDoc {
    pub schema: u32,
    pub xi: f64,
    pub theta_deg: f64,
    pub k: u32,
    pub pieces: Vec<RegionDto>,
}

impl TruncatedC {
    pub fn to_doc(&self) -> TruncationDoc {
        TruncationDoc {
            schema: 1,
            xi: self.params.xi,
            theta_deg: self.params.theta_deg(),
            k: self.k,
            pieces: self.pieces.iter().map(RegionDto::from).collect(),
        }
    }
}
