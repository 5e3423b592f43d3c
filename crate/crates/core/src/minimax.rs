//! Both sides of the minimax equality
//! `sup_{‖x‖=1} inf_λ ‖Ax + λBx‖ = inf_λ sup_{‖x‖=1} ‖Ax + λBx‖`.
//!
//! The two sides are computed by unrelated routes: the left by multi-start
//! ascent over the sphere (every evaluated point is feasible, so the value
//! is a lower bound), the right by convex minimization of `‖A + λB‖` (the
//! returned λ is feasible, so the value is an upper bound). Any positive gap
//! is optimizer shortfall on the left.

use serde::Serialize;

use crate::ascent::{AscentOpts, Problem};
use crate::error::{Error, Result};
use crate::line::{global_inf_lambda, LineOpts};
use crate::matrix::{Field, Matrix, Scalar, Vector};
use crate::spectral::operator_norm;

pub const DEFAULT_RESTARTS: usize = 50;
pub const DEFAULT_GAP_TOL: f64 = 1e-4;
/// Allowed slack in `lhs ≤ rhs`.
pub const WEAK_DUALITY_SLACK: f64 = 1e-9;

#[derive(Clone, Copy, Debug)]
pub struct MinimaxOpts {
    pub restarts: usize,
    pub seed: u64,
    /// Relative to `max(rhs, 1)`.
    pub gap_tol: f64,
    /// Each doubling doubles the restart count; 2 doublings reach 4×.
    pub max_doublings: u32,
    pub line: LineOpts,
    pub ascent: AscentOpts,
}

impl Default for MinimaxOpts {
    fn default() -> Self {
        MinimaxOpts {
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            gap_tol: DEFAULT_GAP_TOL,
            max_doublings: 2,
            line: LineOpts::default(),
            ascent: AscentOpts::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MinimaxReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub argmin_lambda: Scalar,
    pub argmax_x: Vector,
    pub restarts_used: usize,
    pub field: Field,
    /// The gap stayed above `gap_tol` after all restart doublings.
    pub restart_starved: bool,
}

impl MinimaxReport {
    pub fn relative_gap(&self) -> f64 {
        self.gap / self.rhs.max(1.0)
    }
}

fn validate(a: &Matrix, b: &Matrix) -> Result<()> {
    a.ensure_square()?;
    a.ensure_same_shape(b)?;
    if a.rows() < 2 {
        return Err(Error::Unsupported {
            dim: a.rows(),
            min: 2,
        });
    }
    Ok(())
}

fn problem<'a>(a: &'a Matrix, b: &'a Matrix) -> Problem<'a> {
    Problem {
        a,
        b,
        field: a.field().join(b.field()),
        norm_a: operator_norm(a),
        norm_b: operator_norm(b),
    }
}

fn lhs_range(
    a: &Matrix,
    b: &Matrix,
    range: std::ops::Range<usize>,
    opts: &MinimaxOpts,
) -> (f64, Vector) {
    let p = problem(a, b);
    let (_, best) = p
        .multistart(range, opts.seed, &opts.ascent, &|_, _| false)
        .expect("non-empty restart range");
    (
        best.value,
        Vector {
            field: p.field,
            data: best.x,
        },
    )
}

/// `sup_{‖x‖=1} inf_λ ‖Ax + λBx‖` by multi-start projected ascent.
/// The value is always attained at the returned `x`.
pub fn lhs_sup_inf(a: &Matrix, b: &Matrix, opts: &MinimaxOpts) -> Result<(f64, Vector)> {
    validate(a, b)?;
    Ok(lhs_range(a, b, 0..opts.restarts.max(1), opts))
}

/// `inf_λ sup_{‖x‖=1} ‖Ax + λBx‖ = inf_λ ‖A + λB‖`.
pub fn rhs_inf_sup(a: &Matrix, b: &Matrix, opts: &MinimaxOpts) -> Result<(f64, Scalar)> {
    validate(a, b)?;
    let r = global_inf_lambda(a, b, &opts.line)?;
    Ok((r.value, r.lambda_star))
}

/// Both sides with the gap. When the relative gap exceeds `gap_tol`, the
/// restart budget is doubled (continuing the same seed schedule) up to
/// `max_doublings` times before the report is flagged `restart_starved`.
pub fn minimax_report(a: &Matrix, b: &Matrix, opts: &MinimaxOpts) -> Result<MinimaxReport> {
    validate(a, b)?;
    let (rhs, argmin_lambda) = rhs_inf_sup(a, b, opts)?;
    let base = opts.restarts.max(1);
    let (mut lhs, mut argmax_x) = lhs_range(a, b, 0..base, opts);
    let mut used = base;
    let starved = |lhs: f64| (rhs - lhs) > opts.gap_tol * rhs.max(1.0);
    for _ in 0..opts.max_doublings {
        if !starved(lhs) {
            break;
        }
        let (v, x) = lhs_range(a, b, used..2 * used, opts);
        if v > lhs {
            lhs = v;
            argmax_x = x;
        }
        used *= 2;
    }
    if lhs > rhs + WEAK_DUALITY_SLACK {
        return Err(Error::WeakDualityViolated { lhs, rhs });
    }
    Ok(MinimaxReport {
        lhs,
        rhs,
        gap: rhs - lhs,
        argmin_lambda,
        argmax_x,
        restarts_used: used,
        field: a.field().join(b.field()),
        restart_starved: starved(lhs),
    })
}
