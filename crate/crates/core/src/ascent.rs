//! Projected ascent of `h(x) = inf_λ ‖Ax + λBx‖` over the unit sphere.
//!
//! Shared by the sup-inf side of the minimax report and the ε-witness search.
//! Where `Bx ≠ 0`,
//! `h(x)² = ‖Ax‖² − |⟨Ax,Bx⟩|²/‖Bx‖²` is smooth and its Wirtinger gradient
//! `∂/∂x̄` is available in closed form.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use crate::ensemble::{random_unit, stream};
use crate::line::inner_inf_raw;
use crate::matrix::{c64, inner, norm, norm_sqr, normalize, Field, Matrix};

#[derive(Clone, Copy, Debug)]
pub struct AscentOpts {
    pub max_iter: usize,
    /// Relative gradient norm below which a restart is considered stationary.
    pub grad_tol: f64,
    /// Random perturbations allowed per restart when stuck near `Bx = 0`.
    pub perturbations: usize,
}

impl Default for AscentOpts {
    fn default() -> Self {
        AscentOpts {
            max_iter: 2_000,
            grad_tol: 1e-13,
            perturbations: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct AscentResult {
    pub x: Vec<Complex64>,
    pub value: f64,
    pub stopped_early: bool,
}

pub(crate) struct Problem<'a> {
    pub a: &'a Matrix,
    pub b: &'a Matrix,
    pub field: Field,
    pub norm_a: f64,
    pub norm_b: f64,
}

impl Problem<'_> {
    pub fn h(&self, x: &[Complex64]) -> f64 {
        inner_inf_raw(&self.a.mul_vec(x), &self.b.mul_vec(x), self.field).0
    }

    /// Wirtinger gradient of `h²`, and whether `Bx` is numerically zero.
    fn gradient(&self, x: &[Complex64]) -> (Vec<Complex64>, bool) {
        let ax = self.a.mul_vec(x);
        let bx = self.b.mul_vec(x);
        let q = norm_sqr(&bx);
        let a_h_ax = self.a.adjoint_mul_vec(&ax);
        let degenerate = q <= (1e-12 * self.norm_b).powi(2) || self.norm_b == 0.0;
        if degenerate {
            return (a_h_ax, true);
        }
        let p = match self.field {
            Field::Complex => inner(&ax, &bx),
            Field::Real => c64(inner(&ax, &bx).re, 0.0),
        };
        let b_h_ax = self.b.adjoint_mul_vec(&ax);
        let a_h_bx = self.a.adjoint_mul_vec(&bx);
        let b_h_bx = self.b.adjoint_mul_vec(&bx);
        let pp = p.norm_sqr();
        let g = (0..x.len())
            .map(|i| {
                a_h_ax[i] - (p.conj() * b_h_ax[i] + p * a_h_bx[i]) / q + b_h_bx[i] * (pp / (q * q))
            })
            .map(|z| match self.field {
                Field::Complex => z,
                Field::Real => c64(z.re, 0.0),
            })
            .collect();
        (g, false)
    }

    /// Single ascent from `x0`. `done` may end the run once a target is met.
    pub fn ascend<D>(
        &self,
        x0: Vec<Complex64>,
        rng: &mut ChaCha8Rng,
        opts: &AscentOpts,
        done: &D,
    ) -> AscentResult
    where
        D: Fn(f64, &[Complex64]) -> bool,
    {
        let mut x = x0;
        normalize(&mut x);
        let mut hx = self.h(&x);
        let mut best = (x.clone(), hx);
        let upper = self.norm_a;
        let scale = (self.norm_a * self.norm_a).max(f64::MIN_POSITIVE);
        let mut step = 0.0f64;
        let mut perturbations_left = opts.perturbations;

        for _ in 0..opts.max_iter {
            if done(hx, &x) {
                return AscentResult {
                    x,
                    value: hx,
                    stopped_early: true,
                };
            }
            let (g, degenerate) = self.gradient(&x);
            let radial = x
                .iter()
                .zip(&g)
                .fold(0.0, |acc, (xi, gi)| acc + (xi.conj() * gi).re);
            let gt: Vec<Complex64> = g.iter().zip(&x).map(|(gi, xi)| gi - xi * radial).collect();
            let gnorm = norm(&gt);

            if gnorm <= opts.grad_tol * scale {
                let near_kink = degenerate
                    || norm(&self.b.mul_vec(&x)) <= 1e-6 * self.norm_b.max(f64::MIN_POSITIVE);
                if near_kink && perturbations_left > 0 && hx < upper * (1.0 - 1e-12) {
                    perturbations_left -= 1;
                    let kick = random_unit(rng, x.len(), self.field);
                    for (xi, ki) in x.iter_mut().zip(&kick) {
                        *xi += ki * 1e-3;
                    }
                    normalize(&mut x);
                    hx = self.h(&x);
                    step = 0.0;
                    continue;
                }
                break;
            }

            if step == 0.0 {
                step = 0.1 / gnorm;
            }
            let mut accepted = false;
            while step * gnorm > 1e-17 {
                let mut trial: Vec<Complex64> =
                    x.iter().zip(&gt).map(|(xi, gi)| xi + gi * step).collect();
                normalize(&mut trial);
                let ht = self.h(&trial);
                // sufficient increase on h² along the tangent gradient
                if ht * ht >= hx * hx + 1e-4 * step * gnorm * gnorm && ht > hx {
                    x = trial;
                    hx = ht;
                    step *= 2.0;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if hx > best.1 {
                best = (x.clone(), hx);
            }
            if !accepted {
                break;
            }
        }
        if hx > best.1 {
            best = (x, hx);
        }
        AscentResult {
            x: best.0,
            value: best.1,
            stopped_early: false,
        }
    }

    /// Restarts `range` of a seeded schedule; restart `i` depends only on `(seed, i)`.
    /// Returns the best result (ties to the lowest index) and the index it came from.
    pub fn multistart<D>(
        &self,
        range: std::ops::Range<usize>,
        seed: u64,
        opts: &AscentOpts,
        done: &D,
    ) -> Option<(usize, AscentResult)>
    where
        D: Fn(f64, &[Complex64]) -> bool,
    {
        let n = self.a.cols();
        let mut best: Option<(usize, AscentResult)> = None;
        for i in range {
            let mut rng = stream(&[0xA5CE, seed, i as u64]);
            let x0 = random_unit(&mut rng, n, self.field);
            let r = self.ascend(x0, &mut rng, opts, done);
            let stop = r.stopped_early;
            let better = best.as_ref().is_none_or(|(_, b)| r.value > b.value);
            if better {
                best = Some((i, r));
            }
            if stop {
                break;
            }
        }
        best
    }
}
