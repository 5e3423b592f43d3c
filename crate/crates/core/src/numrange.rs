//! Membership of 0 in the numerical range `W(C) = {⟨Cy, y⟩ : ‖y‖ = 1}`.
//!
//! `W(C)` is convex, so `0 ∉ W(C)` exactly when some rotated half-plane
//! separates them: `m(θ) = λ_min(Re(e^{iθ}C)) > 0` for some θ. The support
//! gap `max_θ m(θ)` equals the distance from 0 to `W(C)` when positive.

use std::f64::consts::PI;

use crate::eigen::{hermitian_eig, max_eigenvalue_unchecked, rotated_hermitian_part};
use crate::error::Result;
use crate::line::golden_min;
use crate::matrix::{Field, Matrix};

pub const SCAN_POINTS: usize = 720;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericalRangeCheck {
    pub contains_zero: bool,
    /// Best separating angle found.
    pub theta: f64,
    /// `m(θ)` at `theta`; positive means `Re(e^{iθ}⟨Cy,y⟩) ≥ support` for all unit `y`.
    pub support: f64,
}

fn min_eig_rotated(c: &Matrix, theta: f64) -> f64 {
    let h = rotated_hermitian_part(c, theta);
    -max_eigenvalue_unchecked(&h.scale(num_complex::Complex64::new(-1.0, 0.0)))
}

/// Decides `0 ∈ W(C)` up to `tol`: reports `false` only with a separating
/// angle whose support exceeds `tol`.
///
/// For the real field the quadratic form only sees the symmetric part, and
/// `W` restricted to real `y` is the interval `[λ_min, λ_max]`.
pub fn zero_in_numerical_range(c: &Matrix, tol: f64) -> Result<NumericalRangeCheck> {
    c.ensure_square()?;
    if c.field() == Field::Real {
        let sym = crate::eigen::hermitian_part(c);
        let eig = hermitian_eig(&sym)?;
        let lo = eig.values[0];
        let hi = *eig.values.last().expect("non-empty");
        let (theta, support) = if lo >= -hi { (0.0, lo) } else { (PI, -hi) };
        return Ok(NumericalRangeCheck {
            contains_zero: support <= tol,
            theta,
            support,
        });
    }

    let step = 2.0 * PI / SCAN_POINTS as f64;
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 0..SCAN_POINTS {
        let theta = k as f64 * step;
        let m = min_eig_rotated(c, theta);
        if m > best.1 {
            best = (theta, m);
        }
    }
    let (t_ref, neg_m) = golden_min(
        |t| Some(-min_eig_rotated(c, t)),
        best.0 - step,
        best.0 + step,
        1e-12,
    );
    if -neg_m > best.1 {
        best = (t_ref.rem_euclid(2.0 * PI), -neg_m);
    }
    Ok(NumericalRangeCheck {
        contains_zero: best.1 <= tol,
        theta: best.0,
        support: best.1,
    })
}
