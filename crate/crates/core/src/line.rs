//! Minimization over the scalar λ.
//!
//! Two levels: the vector problem `inf_λ ‖u + λv‖`, which has a closed form,
//! and the operator problem `inf_λ ‖A + λB‖`, which is convex in
//! `(Re λ, Im λ)` and is solved by derivative-free golden-section search.

use std::cell::Cell;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{c64, inner, norm, norm_sqr, Field, Matrix, Scalar, Vector};
use crate::spectral::operator_norm;

pub const DEFAULT_LINE_TOL: f64 = 1e-7;
pub const DEFAULT_MAX_EVALS: usize = 100_000;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Debug, PartialEq)]
pub struct LineMinResult {
    pub value: f64,
    pub lambda_star: Scalar,
    pub evaluations: usize,
    /// The evaluation cap was hit before the tolerance was reached.
    pub budget_limited: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct LineOpts {
    /// Absolute tolerance on the returned value.
    pub tol: f64,
    pub max_evals: usize,
}

impl Default for LineOpts {
    fn default() -> Self {
        LineOpts {
            tol: DEFAULT_LINE_TOL,
            max_evals: DEFAULT_MAX_EVALS,
        }
    }
}

/// Closed-form minimizer of `‖u + λv‖²` for raw slices: returns `(value, λ*)`.
pub(crate) fn inner_inf_raw(u: &[Complex64], v: &[Complex64], field: Field) -> (f64, Complex64) {
    let vv = norm_sqr(v);
    if vv == 0.0 {
        return (norm(u), c64(0.0, 0.0));
    }
    let ip = inner(u, v);
    let lambda = match field {
        Field::Complex => -ip / vv,
        Field::Real => c64(-ip.re / vv, 0.0),
    };
    // residual evaluated directly; the expanded form loses digits near colinearity
    let resid: Vec<Complex64> = u.iter().zip(v).map(|(a, b)| a + lambda * b).collect();
    (norm(&resid).min(norm(u)), lambda)
}

/// `inf_{λ∈𝕂} ‖u + λv‖` with its minimizer. `v = 0` gives `(‖u‖, 0)`.
pub fn inner_inf(u: &Vector, v: &Vector, field: Field) -> Result<LineMinResult> {
    if u.dim() != v.dim() {
        return Err(Error::InvalidInput(format!(
            "dimension mismatch: {} vs {}",
            u.dim(),
            v.dim()
        )));
    }
    let (value, lambda) = inner_inf_raw(&u.data, &v.data, field);
    Ok(LineMinResult {
        value,
        lambda_star: Scalar {
            field,
            value: lambda,
        },
        evaluations: 1,
        budget_limited: false,
    })
}

/// Golden-section search for a unimodal `f` on `[lo, hi]`. Stops once the
/// bracket is narrower than `xtol` or `f` refuses to evaluate (returns `None`).
/// Returns the best point seen.
pub(crate) fn golden_min<F>(mut f: F, mut lo: f64, mut hi: f64, xtol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> Option<f64>,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let Some(mut f1) = f(x1) else {
        return (x1, f64::INFINITY);
    };
    let Some(mut f2) = f(x2) else {
        return (x1, f1);
    };
    let mut best = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    while hi - lo > xtol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            match f(x1) {
                Some(v) => f1 = v,
                None => break,
            }
            if f1 < best.1 {
                best = (x1, f1);
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            match f(x2) {
                Some(v) => f2 = v,
                None => break,
            }
            if f2 < best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

/// `‖A + λB‖`.
pub fn pencil_norm(a: &Matrix, b: &Matrix, lambda: Complex64) -> f64 {
    let data: Vec<Complex64> = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| x + lambda * y)
        .collect();
    let m = Matrix::new(a.rows(), a.cols(), Field::Complex, data)
        .expect("finite inputs give finite pencil");
    operator_norm(&m)
}

/// Approximates `inf_{λ∈𝕂} ‖A + λB‖`.
///
/// The minimizer lies in the disk `|λ| ≤ 2‖A‖/‖B‖`: outside it
/// `‖A+λB‖ ≥ |λ|‖B‖ − ‖A‖ > ‖A‖`. For the complex field the box
/// `[−R, R]²` is searched by nested golden sections (outer over `Re λ`,
/// inner over `Im λ`); the partial minimum over `Im λ` of a convex function
/// is convex in `Re λ`, so the nesting is sound. The real field uses a single
/// golden section on `[−R, R]`.
pub fn global_inf_lambda(a: &Matrix, b: &Matrix, opts: &LineOpts) -> Result<LineMinResult> {
    a.ensure_same_shape(b)?;
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidInput("line tolerance must be positive".into()));
    }
    let field = a.field().join(b.field());
    let norm_a = operator_norm(a);
    let norm_b = operator_norm(b);

    let evals = Cell::new(0usize);
    let limited = Cell::new(false);
    let best = Cell::new((c64(0.0, 0.0), norm_a));
    evals.set(1);

    if norm_b == 0.0 || norm_a == 0.0 {
        return Ok(LineMinResult {
            value: norm_a,
            lambda_star: Scalar::zero(field),
            evaluations: 1,
            budget_limited: false,
        });
    }

    let radius = 2.0 * norm_a / norm_b;
    let xtol = (0.1 * opts.tol / norm_b).max(4.0 * f64::EPSILON * radius);

    let eval = |lambda: Complex64| -> Option<f64> {
        if evals.get() >= opts.max_evals {
            limited.set(true);
            return None;
        }
        evals.set(evals.get() + 1);
        let v = pencil_norm(a, b, lambda);
        if v < best.get().1 {
            best.set((lambda, v));
        }
        Some(v)
    };

    match field {
        Field::Real => {
            golden_min(|re| eval(c64(re, 0.0)), -radius, radius, xtol);
        }
        Field::Complex => {
            golden_min(
                |re| {
                    if limited.get() {
                        return None;
                    }
                    let (_, v) = golden_min(|im| eval(c64(re, im)), -radius, radius, xtol);
                    if v.is_finite() {
                        Some(v)
                    } else {
                        None
                    }
                },
                -radius,
                radius,
                xtol,
            );
        }
    }

    let (lambda, value) = best.get();
    Ok(LineMinResult {
        value,
        lambda_star: Scalar {
            field,
            value: lambda,
        },
        evaluations: evals.get(),
        budget_limited: limited.get(),
    })
}

/// Decades `1, 10⁻¹, …, 10⁻⁸` probed by [`limit_lemma_check`].
pub const LEMMA_DECADES: [f64; 9] = [1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8];

/// Tests `0 ≤ |λ|²b² + 2·Re(λ̄L)` on a fixed sample of λ.
///
/// The sample is `t·d` for `t` in [`LEMMA_DECADES`] and directions `d`
/// consisting of `±1, ±i` plus `samples` equally spaced unit directions
/// (only `±1` for a real `L`). If the inequality held for every λ then
/// `L = 0`; a `true` here bounds `|Re L|, |Im L| ≤ 10⁻⁸·b²/2`.
pub fn limit_lemma_check(l: Scalar, b: f64, samples: usize) -> bool {
    let samples = samples.max(4);
    let mut dirs = vec![c64(1.0, 0.0), c64(-1.0, 0.0)];
    if l.field == Field::Complex {
        dirs.push(c64(0.0, 1.0));
        dirs.push(c64(0.0, -1.0));
        dirs.extend((0..samples).map(|k| {
            Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / samples as f64)
        }));
    }
    let b2 = b * b;
    LEMMA_DECADES.iter().all(|&t| {
        dirs.iter().all(|d| {
            let lambda = d * t;
            lambda.norm_sqr() * b2 + 2.0 * (lambda.conj() * l.value).re >= 0.0
        })
    })
}
