//! The two-map iterated function system behind every unfolding-angle dragon,
//! and the broken lines it generates.
//!
//! Fix ξ ∈ [0, π/3) and put x = 2 cos ξ, α = e^{-iξ}/x. The system is
//!
//! ```text
//!     f1(z) = α z,              f2(z) = -ᾱ z + 1.
//! ```
//!
//! Both maps shrink by |α| = 1/x and their attractor interpolates between
//! the segment [0, 1] (ξ = 0) and badly overlapping sets as ξ grows. The
//! order-k broken line D_k visits f1's copy of D_{k-1} from 0 to α and then
//! f2's copy backwards from α to 1, giving 2^k equal segments of length
//! x^{-k} with turn angles ±2ξ.
//!
//! Compositions are addressed by words over {1, 2}, most significant map
//! first: `f_{a1 a2 … ak} = f_{a1} ∘ f_{a2} ∘ … ∘ f_{ak}`. Words may carry a
//! periodic tail, e.g. `12(1)` for the address 12111…, whose limit point is
//! the image under f_{12} of the fixed point of f_1.
//!
//! A handful of auxiliary maps recur in the region construction and get
//! names here: the swap ψ (conjugating f1 into f2), the shift τ, the
//! spiral g = f_{12} ∘ f_1 ∘ f_{12}⁻¹ fixing α, the reflection R across the
//! line through 0 and α, and integer powers of f_1 (negative powers are the
//! inverse iterates).

use crate::geometry::Point;
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Largest curve order generated without an explicit opt-in; D_k has
/// 2^k + 1 vertices, so 24 tops out around 16M points.
pub const MAX_ORDER_DEFAULT: u32 = 24;

#[derive(Debug, Error, PartialEq)]
pub enum IfsError {
    #[error("xi must lie in [0, π/3), got {0}")]
    XiOutOfRange(f64),
    #[error("theta must lie in (60°, 180°] degrees, got {0}")]
    ThetaOutOfRange(f64),
    #[error("word letters must be 1 or 2, got {0:?}")]
    BadLetter(char),
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("operation needs a finite word, but the word has a periodic tail")]
    UnexpectedTail,
    #[error("operation needs a periodic tail, but the word is finite")]
    MissingTail,
    #[error("word is empty")]
    EmptyWord,
    #[error("map is not a contraction (|ratio| = {0}), no attracting fixed point")]
    NotContracting(f64),
    #[error("curve order {k} exceeds the configured maximum {max}")]
    OrderTooLarge { k: u32, max: u32 },
    #[error("a polyline needs at least 2 distinct, finite vertices")]
    BadPolyline,
}

/// Model parameters derived from the half-complement angle ξ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    /// Half-complement of the unfolding angle, in [0, π/3).
    pub xi: f64,
    /// x = 2 cos ξ ∈ (1, 2].
    pub x: f64,
    /// α = e^{-iξ}/x; note α + ᾱ = 1.
    pub alpha: Complex64,
}

impl ModelParams {
    pub fn from_xi(xi: f64) -> Result<Self, IfsError> {
        if !xi.is_finite() || xi < 0.0 || xi >= std::f64::consts::FRAC_PI_3 {
            return Err(IfsError::XiOutOfRange(xi));
        }
        let x = 2.0 * xi.cos();
        let alpha = Complex64::from_polar(1.0 / x, -xi);
        Ok(ModelParams { xi, x, alpha })
    }

    /// From the unfolding angle θ in degrees: ξ = (π - θ)/2.
    pub fn from_theta_deg(theta_deg: f64) -> Result<Self, IfsError> {
        if !theta_deg.is_finite() || theta_deg <= 60.0 || theta_deg > 180.0 {
            return Err(IfsError::ThetaOutOfRange(theta_deg));
        }
        let xi = (std::f64::consts::PI - theta_deg.to_radians()) / 2.0;
        // Guard against rounding pushing θ = 180° to a tiny negative ξ.
        Self::from_xi(xi.max(0.0))
    }

    pub fn theta_rad(&self) -> f64 {
        std::f64::consts::PI - 2.0 * self.xi
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta_rad().to_degrees()
    }

    pub fn f1(&self) -> Similarity {
        Similarity { c: self.alpha, d: Complex64::ZERO }
    }

    pub fn f2(&self) -> Similarity {
        Similarity { c: -self.alpha.conj(), d: Complex64::ONE }
    }

    /// The common fixed point z₀ = α / (1 - |α|⁴) of f_{2211}, the corner
    /// shared by all the certificate regions.
    pub fn z0(&self) -> Point {
        let a2 = self.alpha.norm_sqr();
        self.alpha / (1.0 - a2 * a2)
    }

    /// Compose `f_{letters}` left-to-right; letters must be 1 or 2.
    /// Internal shorthand for fixed addresses known to be valid.
    pub(crate) fn fw(&self, letters: &[u8]) -> Similarity {
        let mut acc = Similarity::identity();
        for &l in letters {
            debug_assert!(l == 1 || l == 2);
            let f = if l == 1 { self.f1() } else { self.f2() };
            acc = acc.compose(&f);
        }
        acc
    }
}

/// An orientation-preserving similarity z ↦ c·z + d with c ≠ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity {
    pub c: Complex64,
    pub d: Complex64,
}

impl Similarity {
    pub fn identity() -> Self {
        Similarity { c: Complex64::ONE, d: Complex64::ZERO }
    }

    /// The similarity with given ratio fixing `fp`: z ↦ c (z - fp) + fp.
    pub fn with_fixed_point(c: Complex64, fp: Point) -> Self {
        Similarity { c, d: fp - c * fp }
    }

    #[inline]
    pub fn apply(&self, z: Point) -> Point {
        self.c * z + self.d
    }

    /// self ∘ other (apply `other` first).
    pub fn compose(&self, other: &Similarity) -> Similarity {
        Similarity { c: self.c * other.c, d: self.c * other.d + self.d }
    }

    pub fn inverse(&self) -> Similarity {
        Similarity { c: 1.0 / self.c, d: -self.d / self.c }
    }

    /// Attracting fixed point d/(1 - c); requires |c| < 1.
    pub fn fixed_point(&self) -> Result<Point, IfsError> {
        let r = self.c.norm();
        if r >= 1.0 {
            return Err(IfsError::NotContracting(r));
        }
        Ok(self.d / (Complex64::ONE - self.c))
    }
}

/// A plane map that is either a similarity or a conjugate-linear similarity
/// z ↦ c·z̄ + d (a reflection composed with scaling). Keeping the two cases
/// distinct preserves exact composition rules instead of forcing everything
/// through matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlaneMap {
    Linear(Similarity),
    /// z ↦ c·conj(z) + d.
    Conjugate { c: Complex64, d: Complex64 },
}

impl PlaneMap {
    pub fn apply(&self, z: Point) -> Point {
        match *self {
            PlaneMap::Linear(s) => s.apply(z),
            PlaneMap::Conjugate { c, d } => c * z.conj() + d,
        }
    }

    /// self ∘ other. Two conjugations cancel back to a similarity.
    pub fn compose(&self, other: &PlaneMap) -> PlaneMap {
        match (*self, *other) {
            (PlaneMap::Linear(a), PlaneMap::Linear(b)) => PlaneMap::Linear(a.compose(&b)),
            (PlaneMap::Linear(a), PlaneMap::Conjugate { c, d }) => {
                PlaneMap::Conjugate { c: a.c * c, d: a.c * d + a.d }
            }
            (PlaneMap::Conjugate { c, d }, PlaneMap::Linear(b)) => {
                PlaneMap::Conjugate { c: c * b.c.conj(), d: c * b.d.conj() + d }
            }
            (PlaneMap::Conjugate { c: c1, d: d1 }, PlaneMap::Conjugate { c: c2, d: d2 }) => {
                PlaneMap::Linear(Similarity { c: c1 * c2.conj(), d: c1 * d2.conj() + d1 })
            }
        }
    }
}

/// The named auxiliary maps of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedMap {
    /// ψ(z) = -(ᾱ/α)(z - α) + α = -(ᾱ/α) z + 1; swaps the roles of the two
    /// maps: f2 = ψ ∘ f1 and f2 ∘ τ = f1 ∘ ψ.
    Psi,
    /// τ(z) = z + 1.
    Tau,
    /// g(z) = α (z - α) + α, the spiral contraction fixing α; conjugate to
    /// f1 by f_{12} and also by f_{22}.
    G,
    /// R(z) = (α/ᾱ) z̄, reflection across the line through 0 and α.
    ReflectR,
    /// f_{(1)^m} = z ↦ α^m z for any integer m; m < 0 iterates the inverse.
    F1Pow(i32),
}

/// Realize a named map at the given parameters.
pub fn named_map(p: &ModelParams, name: NamedMap) -> PlaneMap {
    let a = p.alpha;
    match name {
        NamedMap::Psi => {
            PlaneMap::Linear(Similarity { c: -a.conj() / a, d: Complex64::ONE })
        }
        NamedMap::Tau => PlaneMap::Linear(Similarity { c: Complex64::ONE, d: Complex64::ONE }),
        NamedMap::G => PlaneMap::Linear(Similarity { c: a, d: Complex64::from(a.norm_sqr()) }),
        NamedMap::ReflectR => PlaneMap::Conjugate { c: a / a.conj(), d: Complex64::ZERO },
        NamedMap::F1Pow(m) => PlaneMap::Linear(Similarity { c: a.powi(m), d: Complex64::ZERO }),
    }
}

/// g^m as a similarity (the m-fold spiral step about α).
pub(crate) fn g_pow(p: &ModelParams, m: i32) -> Similarity {
    Similarity::with_fixed_point(p.alpha.powi(m), p.alpha)
}

/// A symbolic address: a finite word over {1, 2}, optionally followed by an
/// infinitely repeated block. `12(1)` is the address 1 2 1 1 1 ….
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    prefix: Vec<u8>,
    cycle: Vec<u8>,
}

impl Word {
    pub fn finite(letters: &[u8]) -> Result<Self, IfsError> {
        Self::check(letters)?;
        if letters.is_empty() {
            return Err(IfsError::EmptyWord);
        }
        Ok(Word { prefix: letters.to_vec(), cycle: Vec::new() })
    }

    pub fn preperiodic(prefix: &[u8], cycle: &[u8]) -> Result<Self, IfsError> {
        Self::check(prefix)?;
        Self::check(cycle)?;
        if cycle.is_empty() {
            return Err(IfsError::MissingTail);
        }
        Ok(Word { prefix: prefix.to_vec(), cycle: cycle.to_vec() })
    }

    fn check(letters: &[u8]) -> Result<(), IfsError> {
        match letters.iter().find(|&&l| l != 1 && l != 2) {
            Some(&l) => Err(IfsError::BadLetter((b'0' + l.min(9)) as char)),
            None => Ok(()),
        }
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u8] {
        &self.cycle
    }

    pub fn has_tail(&self) -> bool {
        !self.cycle.is_empty()
    }
}

impl FromStr for Word {
    type Err = IfsError;

    /// Parse `"1121"` or `"12(1)"`. Digits other than 1 and 2 are rejected.
    fn from_str(s: &str) -> Result<Self, IfsError> {
        let s = s.trim();
        let (head, tail) = match s.find('(') {
            None => (s, None),
            Some(i) => {
                let rest = &s[i + 1..];
                let Some(j) = rest.find(')') else {
                    return Err(IfsError::MalformedWord(s.to_string()));
                };
                if !rest[j + 1..].is_empty() {
                    return Err(IfsError::MalformedWord(s.to_string()));
                }
                (&s[..i], Some(&rest[..j]))
            }
        };
        let digits = |t: &str| -> Result<Vec<u8>, IfsError> {
            t.chars()
                .map(|ch| match ch {
                    '1' => Ok(1),
                    '2' => Ok(2),
                    other => Err(IfsError::BadLetter(other)),
                })
                .collect()
        };
        match tail {
            None => Word::finite(&digits(head)?),
            Some(t) => Word::preperiodic(&digits(head)?, &digits(t)?),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.prefix {
            write!(f, "{l}")?;
        }
        if !self.cycle.is_empty() {
            write!(f, "(")?;
            for l in &self.cycle {
                write!(f, "{l}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// The composed similarity f_w for a finite word w (most significant first).
pub fn map_of_word(p: &ModelParams, w: &Word) -> Result<Similarity, IfsError> {
    if w.has_tail() {
        return Err(IfsError::UnexpectedTail);
    }
    Ok(p.fw(w.prefix()))
}

/// The fixed point of f_w for a finite word w, i.e. the limit point of the
/// purely periodic address (w)^∞. Equals f_w(0) / (1 - ∏ ratios).
pub fn fixed_point(p: &ModelParams, w: &Word) -> Result<Point, IfsError> {
    if w.has_tail() {
        return Err(IfsError::UnexpectedTail);
    }
    p.fw(w.prefix()).fixed_point()
}

/// The limit point of a preperiodic address: the prefix map applied to the
/// fixed point of the repeating block.
pub fn limit_point(p: &ModelParams, w: &Word) -> Result<Point, IfsError> {
    if !w.has_tail() {
        return Err(IfsError::MissingTail);
    }
    let fp = p.fw(w.cycle()).fixed_point()?;
    Ok(p.fw(w.prefix()).apply(fp))
}

/// An open polygonal chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    verts: Vec<Point>,
}

impl Polyline {
    pub fn new(verts: Vec<Point>) -> Result<Self, IfsError> {
        if verts.len() < 2
            || !verts.iter().all(|z| z.re.is_finite() && z.im.is_finite())
            || verts.windows(2).any(|w| w[0] == w[1])
        {
            return Err(IfsError::BadPolyline);
        }
        Ok(Polyline { verts })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.verts
    }

    pub fn segment_count(&self) -> usize {
        self.verts.len() - 1
    }

    /// Endpoints of segment i, i.e. vertices i and i+1.
    #[inline]
    pub fn segment(&self, i: usize) -> (Point, Point) {
        (self.verts[i], self.verts[i + 1])
    }
}

/// The order-k broken line D_k from 0 to 1: f1's image of D_{k-1} followed
/// by f2's image traversed backwards, sharing the middle vertex α.
///
/// D_k has exactly 2^k + 1 vertices; all segments have length x^{-k} and
/// consecutive segments turn by ±2ξ.
pub fn curve(p: &ModelParams, k: u32) -> Result<Polyline, IfsError> {
    curve_with_limit(p, k, MAX_ORDER_DEFAULT)
}

/// [`curve`] with an explicit order cap for callers that really want huge
/// instances.
pub fn curve_with_limit(p: &ModelParams, k: u32, max: u32) -> Result<Polyline, IfsError> {
    if k > max {
        return Err(IfsError::OrderTooLarge { k, max });
    }
    let f1 = p.f1();
    let f2 = p.f2();
    let mut v: Vec<Point> = vec![Complex64::ZERO, Complex64::ONE];
    for _ in 0..k {
        let mut next = Vec::with_capacity(2 * v.len() - 1);
        next.extend(v.iter().map(|&z| f1.apply(z)));
        next.extend(v.iter().rev().skip(1).map(|&z| f2.apply(z)));
        v = next;
    }
    Polyline::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::point;
    use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

    const RIGHT_ANGLE: f64 = FRAC_PI_4; // ξ for θ = 90°

    fn close(a: Point, b: Point, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn params_validate_range() {
        assert!(ModelParams::from_xi(0.0).is_ok());
        assert!(ModelParams::from_xi(FRAC_PI_3 - 1e-9).is_ok());
        assert!(ModelParams::from_xi(FRAC_PI_3).is_err());
        assert!(ModelParams::from_xi(-0.1).is_err());
        assert!(ModelParams::from_theta_deg(180.0).is_ok());
        assert!(ModelParams::from_theta_deg(60.0).is_err());
        assert!(ModelParams::from_theta_deg(90.0).is_ok());
    }

    #[test]
    fn alpha_has_unit_real_sum() {
        // α + ᾱ = 2 Re α = 1 for every ξ, since Re α = cos ξ / (2 cos ξ).
        for i in 0..100 {
            let xi = 1e-4 + (FRAC_PI_3 - 2e-4) * i as f64 / 99.0;
            let p = ModelParams::from_xi(xi).unwrap();
            assert!((p.alpha + p.alpha.conj() - Complex64::ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn right_angle_values_are_exact() {
        let p = ModelParams::from_xi(RIGHT_ANGLE).unwrap();
        assert!(close(p.alpha, point(0.5, -0.5), 1e-15));
        assert!(close(p.z0(), point(2.0 / 3.0, -2.0 / 3.0), 1e-14));
        assert!((p.theta_deg() - 90.0).abs() < 1e-12);
    }

    #[test]
    fn word_parsing_roundtrips() {
        let w: Word = "2211".parse().unwrap();
        assert_eq!(w.prefix(), &[2, 2, 1, 1]);
        assert!(!w.has_tail());
        assert_eq!(w.to_string(), "2211");
        let w: Word = "12(1)".parse().unwrap();
        assert_eq!(w.prefix(), &[1, 2]);
        assert_eq!(w.cycle(), &[1]);
        assert_eq!(w.to_string(), "12(1)");
        assert!("13".parse::<Word>().is_err());
        assert!("12(".parse::<Word>().is_err());
        assert!("12(1)2".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
    }

    #[test]
    fn composition_is_most_significant_first() {
        let p = ModelParams::from_xi(0.5).unwrap();
        let w: Word = "12".parse().unwrap();
        let f12 = map_of_word(&p, &w).unwrap();
        let z = point(0.3, 0.7);
        // f_{12} = f1 ∘ f2: apply f2 first.
        assert!(close(f12.apply(z), p.f1().apply(p.f2().apply(z)), 1e-15));
    }

    #[test]
    fn fixed_points_match_closed_forms() {
        let p = ModelParams::from_xi(RIGHT_ANGLE).unwrap();
        let z = fixed_point(&p, &"2211".parse().unwrap()).unwrap();
        assert!(close(z, p.z0(), 1e-14));
        // The two generator fixed points.
        assert!(close(fixed_point(&p, &"1".parse().unwrap()).unwrap(), Complex64::ZERO, 1e-15));
        let f2fix = fixed_point(&p, &"2".parse().unwrap()).unwrap();
        assert!(close(p.f2().apply(f2fix), f2fix, 1e-15));
        // Every fixed point satisfies its own equation.
        for xi in [0.1, 0.35, 0.6, 0.8] {
            let p = ModelParams::from_xi(xi).unwrap();
            for word in ["12", "221", "1122", "21212"] {
                let w: Word = word.parse().unwrap();
                let f = map_of_word(&p, &w).unwrap();
                let z = fixed_point(&p, &w).unwrap();
                assert!(close(f.apply(z), z, 1e-13), "xi={xi} w={word}");
            }
        }
    }

    #[test]
    fn limit_points_evaluate_prefix_then_cycle() {
        let p = ModelParams::from_xi(0.4).unwrap();
        // 12(1): prefix f_{12} applied to the fixed point 0 of f_1 gives
        // f_{12}(0) = f_1(1) = α.
        let z = limit_point(&p, &"12(1)".parse().unwrap()).unwrap();
        assert!(close(z, p.alpha, 1e-15));
        // (2211) with empty prefix is just the fixed point z₀.
        let z = limit_point(&p, &"(2211)".parse().unwrap()).unwrap();
        assert!(close(z, p.z0(), 1e-14));
        assert!(limit_point(&p, &"12".parse().unwrap()).is_err());
    }

    #[test]
    fn named_maps_satisfy_exchange_identities() {
        for xi in [0.05, 0.3, RIGHT_ANGLE, 0.7, 1.0] {
            let p = ModelParams::from_xi(xi).unwrap();
            let psi = named_map(&p, NamedMap::Psi);
            let tau = named_map(&p, NamedMap::Tau);
            let g = named_map(&p, NamedMap::G);
            let f1 = PlaneMap::Linear(p.f1());
            let f2 = PlaneMap::Linear(p.f2());
            let z = point(0.37, -0.21);
            // f2 = ψ ∘ f1
            assert!(close(psi.compose(&f1).apply(z), f2.apply(z), 1e-14));
            // f2 ∘ τ = f1 ∘ ψ
            assert!(close(f2.compose(&tau).apply(z), f1.compose(&psi).apply(z), 1e-14));
            // g fixes α and is conjugate to f1 by f_{12} and by f_{22}
            assert!(close(g.apply(p.alpha), p.alpha, 1e-14));
            for conj in [&[1u8, 2u8][..], &[2, 2][..]] {
                let h = p.fw(conj);
                let lhs = PlaneMap::Linear(h.compose(&p.f1()).compose(&h.inverse()));
                assert!(close(lhs.apply(z), g.apply(z), 1e-13));
            }
        }
    }

    #[test]
    fn reflection_is_an_involution_fixing_its_axis() {
        let p = ModelParams::from_xi(0.52).unwrap();
        let r = named_map(&p, NamedMap::ReflectR);
        let z = point(-0.4, 0.9);
        assert!(close(r.compose(&r).apply(z), z, 1e-14));
        // Points on the line through 0 and α stay put.
        assert!(close(r.apply(p.alpha * 0.73), p.alpha * 0.73, 1e-15));
        assert!(close(r.apply(Complex64::ZERO), Complex64::ZERO, 1e-15));
    }

    #[test]
    fn f1_powers_include_inverses() {
        let p = ModelParams::from_xi(0.3).unwrap();
        let fwd = named_map(&p, NamedMap::F1Pow(3));
        let back = named_map(&p, NamedMap::F1Pow(-3));
        let z = point(0.2, 0.1);
        assert!(close(back.apply(fwd.apply(z)), z, 1e-14));
        assert!(close(fwd.apply(z), p.fw(&[1, 1, 1]).apply(z), 1e-15));
    }

    #[test]
    fn curve_small_orders_exact() {
        let p = ModelParams::from_xi(RIGHT_ANGLE).unwrap();
        let d1 = curve(&p, 1).unwrap();
        assert_eq!(d1.vertices().len(), 3);
        for (a, b) in d1.vertices().iter().zip([point(0.0, 0.0), point(0.5, -0.5), point(1.0, 0.0)])
        {
            assert!(close(*a, b, 1e-15));
        }
        let d2 = curve(&p, 2).unwrap();
        let expect = [
            point(0.0, 0.0),
            point(0.0, -0.5),
            point(0.5, -0.5),
            point(0.5, 0.0),
            point(1.0, 0.0),
        ];
        assert_eq!(d2.vertices().len(), 5);
        for (a, b) in d2.vertices().iter().zip(expect) {
            assert!(close(*a, b, 1e-15));
        }
    }

    #[test]
    fn curve_invariants_hold_across_xi() {
        for xi in [0.0, 0.1, 0.45, RIGHT_ANGLE, 0.9, FRAC_PI_3 - 1e-3] {
            let p = ModelParams::from_xi(xi).unwrap();
            for k in [0u32, 1, 3, 6] {
                let d = curve(&p, k).unwrap();
                assert_eq!(d.vertices().len(), (1usize << k) + 1);
                assert!(close(d.vertices()[0], Complex64::ZERO, 0.0));
                assert!(close(*d.vertices().last().unwrap(), Complex64::ONE, 1e-12));
                let want = p.x.powi(-(k as i32));
                for i in 0..d.segment_count() {
                    let (a, b) = d.segment(i);
                    assert!(((b - a).norm() - want).abs() < 1e-12 * want);
                }
                if xi > 0.0 {
                    for i in 1..d.segment_count() {
                        let (a, b) = d.segment(i - 1);
                        let (_, c) = d.segment(i);
                        let turn = crate::geometry::angle(a, b, c).unwrap().abs();
                        assert!((turn - (PI - 2.0 * xi)).abs() < 1e-9, "xi={xi} k={k} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn curve_refines_previous_order() {
        // The segments of D_k are exactly the f1- and f2-images of the
        // segments of D_{k-1}.
        let p = ModelParams::from_xi(0.62).unwrap();
        let prev = curve(&p, 5).unwrap();
        let next = curve(&p, 6).unwrap();
        let mut images: Vec<(Point, Point)> = Vec::new();
        for i in 0..prev.segment_count() {
            let (a, b) = prev.segment(i);
            images.push((p.f1().apply(a), p.f1().apply(b)));
            images.push((p.f2().apply(a), p.f2().apply(b)));
        }
        let key = |(a, b): (Point, Point)| {
            let (a, b) = if (a.re, a.im) <= (b.re, b.im) { (a, b) } else { (b, a) };
            [a.re, a.im, b.re, b.im].map(|v| (v / 1e-12).round() as i64)
        };
        let mut got: Vec<_> = (0..next.segment_count())
            .map(|i| key(next.segment(i)))
            .collect();
        let mut want: Vec<_> = images.into_iter().map(key).collect();
        got.sort_unstable();
        want.sort_unstable();
        assert_eq!(got, want);
    }

    #[test]
    fn curve_respects_order_cap() {
        let p = ModelParams::from_xi(0.2).unwrap();
        assert!(matches!(
            curve(&p, MAX_ORDER_DEFAULT + 1),
            Err(IfsError::OrderTooLarge { .. })
        ));
        assert!(curve_with_limit(&p, 3, 3).is_ok());
    }
}
