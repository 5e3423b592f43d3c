//! Witness vectors for `A ⊥ B`.
//!
//! In finite dimensions `A ⊥ B` holds exactly when some unit `x` has
//! `‖Ax‖ = ‖A‖` and `⟨Ax, Bx⟩ = 0`. Such `x` live in the top right singular
//! subspace `M` of `A`; writing `x = Σ yᵢmᵢ` in an orthonormal basis of `M`,
//! `⟨Ax, Bx⟩ = ⟨Cy, y⟩` with the compression `Cᵢⱼ = ⟨B*A mⱼ, mᵢ⟩`. So a
//! witness exists iff `0 ∈ W(C)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::ascent::{AscentOpts, Problem};
use crate::decision::{Method, Status, Verdict};
use crate::ensemble::{random_unit, stream};
use crate::error::{Error, Result};
use crate::line::{golden_min, pencil_norm};
use crate::matrix::{c64, inner, norm, normalize, Field, Matrix, Scalar, Vector};
use crate::numrange::zero_in_numerical_range;
use crate::spectral::{operator_norm, top_singular_subspace, DEFAULT_RANK_TOL};

pub const DEFAULT_WITNESS_EPS: f64 = 1e-9;
pub const DEFAULT_WITNESS_RESTARTS: usize = 32;

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub x: Vector,
    /// `‖A‖ − ‖Ax‖`, clamped at 0.
    pub norm_residual: f64,
    /// `|⟨Ax, Bx⟩|`.
    pub ip_residual: f64,
    pub epsilon: f64,
}

impl Witness {
    /// Recomputes both residuals for `x` from scratch.
    pub fn evaluate(a: &Matrix, b: &Matrix, x: Vector) -> Witness {
        let norm_a = operator_norm(a);
        let ax = a.mul_vec(&x.data);
        let bx = b.mul_vec(&x.data);
        let norm_residual = (norm_a - norm(&ax)).max(0.0);
        let ip_residual = inner(&ax, &bx).norm();
        Witness {
            x,
            norm_residual,
            ip_residual,
            epsilon: norm_residual.max(ip_residual),
        }
    }

    /// Checks the stored residuals against a fresh recomputation.
    pub fn validate(&self, a: &Matrix, b: &Matrix) -> bool {
        let fresh = Witness::evaluate(a, b, self.x.clone());
        let close = |p: f64, q: f64| (p - q).abs() <= 1e-12 * (1.0 + p.abs().max(q.abs()));
        (self.x.norm() - 1.0).abs() <= 1e-10
            && close(fresh.norm_residual, self.norm_residual)
            && close(fresh.ip_residual, self.ip_residual)
            && self.norm_residual <= self.epsilon
            && self.ip_residual <= self.epsilon
    }
}

#[derive(Clone, Copy, Debug)]
pub struct WitnessOpts {
    /// Absolute target for `|⟨Ax, Bx⟩|`.
    pub eps: f64,
    pub rank_tol: f64,
    pub restarts: usize,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for WitnessOpts {
    fn default() -> Self {
        WitnessOpts {
            eps: DEFAULT_WITNESS_EPS,
            rank_tol: DEFAULT_RANK_TOL,
            restarts: DEFAULT_WITNESS_RESTARTS,
            seed: 0,
            max_iter: 2_000,
        }
    }
}

#[derive(Clone, Debug)]
pub enum WitnessOutcome {
    Found(Witness),
    NotOrthogonal(Verdict),
}

/// Compression of `B*A` to the span of `basis`: `Cᵢⱼ = ⟨B*A mⱼ, mᵢ⟩`.
pub fn compression(a: &Matrix, b: &Matrix, basis: &[Vector], field: Field) -> Matrix {
    let k = basis.len();
    let images: Vec<Vec<Complex64>> = basis
        .iter()
        .map(|m| b.adjoint_mul_vec(&a.mul_vec(&m.data)))
        .collect();
    let mut c = Matrix::zeros(k, k, field);
    for i in 0..k {
        for (j, img) in images.iter().enumerate() {
            let v = inner(img, &basis[i].data);
            let v = if field == Field::Real { c64(v.re, 0.0) } else { v };
            c.set(i, j, v);
        }
    }
    c
}

fn quad_form(c: &Matrix, y: &[Complex64]) -> Complex64 {
    inner(&c.mul_vec(y), y)
}

/// Projected gradient descent on `|⟨Cy, y⟩|²` over the unit sphere.
fn minimize_form(c: &Matrix, y0: Vec<Complex64>, target: f64, max_iter: usize) -> (Vec<Complex64>, f64) {
    let field = c.field();
    let mut y = y0;
    normalize(&mut y);
    let mut p = quad_form(c, &y);
    let mut step = 0.0f64;
    for _ in 0..max_iter {
        if p.norm() <= target {
            break;
        }
        let cy = c.mul_vec(&y);
        let chy = c.adjoint_mul_vec(&y);
        let g: Vec<Complex64> = cy
            .iter()
            .zip(&chy)
            .map(|(u, w)| p.conj() * u + p * w)
            .map(|z| if field == Field::Real { c64(z.re, 0.0) } else { z })
            .collect();
        let radial = y.iter().zip(&g).fold(0.0, |acc, (yi, gi)| acc + (yi.conj() * gi).re);
        let gt: Vec<Complex64> = g.iter().zip(&y).map(|(gi, yi)| gi - yi * radial).collect();
        let gnorm = norm(&gt);
        if gnorm == 0.0 {
            break;
        }
        if step == 0.0 {
            step = 0.1 / gnorm;
        }
        let f0 = p.norm_sqr();
        let mut accepted = false;
        while step * gnorm > 1e-17 {
            let mut trial: Vec<Complex64> = y.iter().zip(&gt).map(|(yi, gi)| yi - gi * step).collect();
            normalize(&mut trial);
            let pt = quad_form(c, &trial);
            if pt.norm_sqr() <= f0 - 1e-4 * step * gnorm * gnorm && pt.norm_sqr() < f0 {
                y = trial;
                p = pt;
                step *= 2.0;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let r = p.norm();
    (y, r)
}

/// Best `‖A + λB‖` along `λ = −t·e^{−iθ}`, `t ∈ [0, 2‖A‖/‖B‖]`.
fn margin_along(a: &Matrix, b: &Matrix, theta: f64, field: Field) -> (f64, Scalar) {
    let norm_a = operator_norm(a);
    let norm_b = operator_norm(b);
    let dir = match field {
        Field::Complex => -Complex64::from_polar(1.0, -theta),
        Field::Real => c64(-theta.cos().signum(), 0.0),
    };
    if norm_b == 0.0 || norm_a == 0.0 {
        return (0.0, Scalar::zero(field));
    }
    let radius = 2.0 * norm_a / norm_b;
    let (t, v) = golden_min(
        |t| Some(pencil_norm(a, b, dir * t)),
        0.0,
        radius,
        1e-10 * radius,
    );
    if v < norm_a {
        (v - norm_a, Scalar { field, value: dir * t })
    } else {
        (0.0, Scalar::zero(field))
    }
}

/// Searches for `x` with `‖Ax‖ = ‖A‖` and `⟨Ax, Bx⟩ ≈ 0`.
///
/// When `0 ∉ W(C)` the pair is not orthogonal and the separating angle is
/// returned inside the verdict, together with the margin reached along the
/// descent direction it certifies.
pub fn find_witness(a: &Matrix, b: &Matrix, opts: &WitnessOpts) -> Result<WitnessOutcome> {
    a.ensure_square()?;
    a.ensure_same_shape(b)?;
    let field = a.field().join(b.field());
    let spec = top_singular_subspace(a, opts.rank_tol)?;
    let basis = &spec.top_subspace;
    let c = compression(a, b, basis, field);
    let nr = zero_in_numerical_range(&c, 0.5 * opts.eps)?;

    if !nr.contains_zero {
        let (margin, lambda_star) = margin_along(a, b, nr.theta, field);
        return Ok(WitnessOutcome::NotOrthogonal(Verdict {
            status: Status::NotOrthogonal,
            margin,
            method: Method::Witness,
            tol: opts.eps,
            lambda_star,
            certificate_theta: Some(nr.theta),
        }));
    }

    let k = basis.len();
    let lift = |y: &[Complex64]| -> Vector {
        let mut x = vec![c64(0.0, 0.0); a.cols()];
        for (yi, m) in y.iter().zip(basis) {
            for (xj, mj) in x.iter_mut().zip(&m.data) {
                *xj += yi * mj;
            }
        }
        normalize(&mut x);
        Vector { field, data: x }
    };
    let accept = |y: &[Complex64]| -> Option<Witness> {
        let w = Witness::evaluate(a, b, lift(y));
        (w.ip_residual <= opts.eps).then_some(w)
    };

    // basis vectors first: covers A = 0, B = 0 and diagonal compressions
    for i in 0..k {
        let mut e = vec![c64(0.0, 0.0); k];
        e[i] = c64(1.0, 0.0);
        if quad_form(&c, &e).norm() <= 0.5 * opts.eps {
            if let Some(w) = accept(&e) {
                return Ok(WitnessOutcome::Found(w));
            }
        }
    }

    let mut best_residual = f64::INFINITY;
    for r in 0..opts.restarts.max(1) {
        let mut rng = stream(&[0x317E, opts.seed, r as u64]);
        let y0 = if r == 0 {
            let mut e = vec![c64(0.0, 0.0); k];
            e[0] = c64(1.0, 0.0);
            e
        } else {
            random_unit(&mut rng, k, field)
        };
        let (y, _) = minimize_form(&c, y0, 0.25 * opts.eps, opts.max_iter);
        let w = Witness::evaluate(a, b, lift(&y));
        if w.ip_residual <= opts.eps {
            return Ok(WitnessOutcome::Found(w));
        }
        best_residual = best_residual.min(w.ip_residual);
    }
    Err(Error::WitnessSearchFailed {
        best_residual,
        target: opts.eps,
    })
}

#[derive(Clone, Debug)]
pub enum EpsilonOutcome {
    Found(Witness),
    /// No unit `x` reached `inf_λ ‖Ax + λBx‖ > ‖A‖ − eps`.
    NotFound { best_value: f64, target: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct EpsilonOpts {
    pub restarts: usize,
    pub seed: u64,
    pub ascent: AscentOpts,
}

impl Default for EpsilonOpts {
    fn default() -> Self {
        EpsilonOpts {
            restarts: 50,
            seed: 0,
            ascent: AscentOpts {
                max_iter: 20_000,
                ..AscentOpts::default()
            },
        }
    }
}

/// Finite stand-in for a witness sequence: a unit `x` with
/// `inf_λ ‖Ax + λBx‖ > ‖A‖ − eps`, found by multi-start ascent.
///
/// Meeting that bound already forces `‖Ax‖ > ‖A‖ − eps`; the ascent keeps
/// going until `|⟨Ax, Bx⟩| ≤ eps` as well, or until it stalls.
pub fn epsilon_witness(a: &Matrix, b: &Matrix, eps: f64, opts: &EpsilonOpts) -> Result<EpsilonOutcome> {
    a.ensure_square()?;
    a.ensure_same_shape(b)?;
    let norm_a = operator_norm(a);
    if norm_a == 0.0 {
        return Err(Error::InvalidInput("epsilon_witness needs A ≠ 0".into()));
    }
    if !(eps > 0.0 && eps < norm_a) {
        return Err(Error::InvalidInput(format!(
            "eps must lie in (0, ‖A‖ = {norm_a}), got {eps}"
        )));
    }
    let field = a.field().join(b.field());
    let problem = Problem {
        a,
        b,
        field,
        norm_a,
        norm_b: operator_norm(b),
    };
    let target = norm_a - eps;
    let done = |h: f64, x: &[Complex64]| {
        if h <= target {
            return false;
        }
        let ax = a.mul_vec(x);
        inner(&ax, &b.mul_vec(x)).norm() <= eps && norm_a - norm(&ax) <= eps
    };
    let best = problem.multistart(0..opts.restarts.max(1), opts.seed, &opts.ascent, &done);
    let (_, best) = best.expect("at least one restart");
    if best.value > target {
        let w = Witness::evaluate(a, b, Vector { field, data: best.x });
        Ok(EpsilonOutcome::Found(w))
    } else {
        Ok(EpsilonOutcome::NotFound {
            best_value: best.value,
            target,
        })
    }
}
