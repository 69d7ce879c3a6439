//! Dragon curves of arbitrary unfolding angle.
//!
//! A dragon curve is what you get by repeatedly folding a strip of paper and
//! opening every crease to the same angle θ. This crate works with the
//! renormalized order-k broken lines (2^k + 1 vertices, endpoints pinned at
//! 0 and 1) produced by the two-map iterated function system
//!
//! ```text
//!     f1(z) = α z,          f2(z) = -ᾱ z + 1,        α = e^{-iξ} / (2 cos ξ),
//! ```
//!
//! where ξ = (π - θ)/2 is the half-complement of the unfolding angle.
//!
//! The crate answers two kinds of question about these curves:
//!
//! * **Detection** ([`intersect`]): does the order-k broken line touch or
//!   cross itself? Both a quadratic-time oracle and a sweep are provided and
//!   are required to agree event-for-event.
//! * **Certification** ([`certify`]): for ξ below the critical value
//!   ξ₀ ≈ 0.7038577 (θ above θ₀ ≈ 99.3438°), a finite family of convex
//!   polygons ([`regions`]) witnesses that the two halves of the curve can
//!   meet only at the midpoint α, so *no* order ever self-intersects. The
//!   certifier checks the witness numerically at any given ξ.
//!
//! The critical value itself is the root of a sextic polynomial; see
//! [`roots`].
//!
//! Conventions used throughout:
//!
//! * points are [`num_complex::Complex64`] values (re = x, im = y);
//! * angles are in radians, normalized to (-π, π];
//! * polygons are strictly convex with clockwise vertex cycles (interior on
//!   the right of each directed edge — the curves live below the real axis);
//! * tolerances are relative to the local scale of the quantities involved,
//!   with default [`geometry::DEFAULT_TOL`].

pub mod certify;
pub mod geometry;
pub mod ifs;
pub mod intersect;
pub mod regions;
pub mod roots;

pub use geometry::Point;
pub use ifs::ModelParams;
