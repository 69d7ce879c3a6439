//! The critical unfolding angle.
//!
//! The certification frontier sits where the sign quantity of the N = 3 band
//! (see [`crate::certify::n3_sign`]) vanishes, which happens at the unique
//! root of
//!
//! ```text
//!     P(x) = x⁶ - 3x⁴ + 2x² - 1
//! ```
//!
//! in the interval (√2, (1+√5)/2), where P is strictly increasing. With
//! x₀ that root, the critical parameters are ξ₀ = arccos(x₀/2) and
//! θ₀ = π - 2ξ₀ ≈ 99.34°: curves with θ > θ₀ never self-intersect, while
//! every θ < θ₀ eventually does.

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RootsError {
    #[error("tolerance must be positive and finite, got {0}")]
    BadTolerance(f64),
}

/// Evaluate P(x) = x⁶ - 3x⁴ + 2x² - 1 (Horner in x²).
#[inline]
pub fn poly_p(x: f64) -> f64 {
    let y = x * x;
    ((y - 3.0) * y + 2.0) * y - 1.0
}

/// P'(x) = 6x⁵ - 12x³ + 4x.
#[inline]
fn poly_p_deriv(x: f64) -> f64 {
    ((6.0 * x * x - 12.0) * x * x + 4.0) * x
}

/// The solved critical constants, with the residual |P(x₀)| as a quality
/// witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalConstants {
    /// Root of P in (√2, (1+√5)/2).
    pub x0: f64,
    /// ξ₀ = arccos(x₀ / 2).
    pub xi0: f64,
    /// θ₀ = π - 2ξ₀, radians.
    pub theta0_rad: f64,
    /// θ₀ in degrees.
    pub theta0_deg: f64,
    /// |P(x₀)| after polishing.
    pub residual: f64,
}

/// Solve for the critical constants: bisection on (√2, (1+√5)/2) down to a
/// bracket of width `tol`, then two Newton polish steps.
///
/// The bracket is guaranteed: P(√2) = -1 and P((1+√5)/2) = (1+√5)/2 > 0,
/// and P is strictly increasing between them.
pub fn solve_constants(tol: f64) -> Result<CriticalConstants, RootsError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(RootsError::BadTolerance(tol));
    }
    let mut lo = std::f64::consts::SQRT_2;
    let mut hi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    debug_assert!(poly_p(lo) < 0.0 && poly_p(hi) > 0.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // bracket narrower than one ulp
        }
        if poly_p(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x0 = 0.5 * (lo + hi);
    for _ in 0..2 {
        x0 -= poly_p(x0) / poly_p_deriv(x0);
    }
    let xi0 = (x0 / 2.0).acos();
    let theta0_rad = std::f64::consts::PI - 2.0 * xi0;
    Ok(CriticalConstants {
        x0,
        xi0,
        theta0_rad,
        theta0_deg: theta0_rad.to_degrees(),
        residual: poly_p(x0).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_endpoint_values() {
        // Exact rational/golden-ratio values at the bracket ends.
        assert!((poly_p(std::f64::consts::SQRT_2) + 1.0).abs() < 1e-12);
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        assert!((poly_p(phi) - phi).abs() < 1e-12);
    }

    #[test]
    fn single_sign_change_on_bracket() {
        let lo = std::f64::consts::SQRT_2;
        let hi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        let n = 10_000;
        let mut changes = 0;
        let mut prev = poly_p(lo);
        for i in 1..=n {
            let x = lo + (hi - lo) * i as f64 / n as f64;
            let cur = poly_p(x);
            if prev.signum() != cur.signum() {
                changes += 1;
            }
            prev = cur;
        }
        assert_eq!(changes, 1);
    }

    #[test]
    fn solved_constants_match_reference() {
        // Reference values from an independent double-precision bisection.
        let c = solve_constants(1e-14).unwrap();
        assert!((c.x0 - 1.524_702_579_929_852).abs() < 1e-13, "x0 = {}", c.x0);
        assert!((c.xi0 - 0.703_857_721_301_477).abs() < 1e-13, "xi0 = {}", c.xi0);
        assert!((c.theta0_rad - 1.733_877_210_986_84).abs() < 1e-13);
        assert!((c.theta0_deg - 99.343_846_383_460_1).abs() < 1e-10);
        assert!(c.residual <= 1e-12);
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(solve_constants(0.0).is_err());
        assert!(solve_constants(f64::NAN).is_err());
        assert!(solve_constants(-1e-9).is_err());
    }
}
