//! Seeded random matrices.
//!
//! All randomness flows through ChaCha8 streams whose seeds are derived by
//! SplitMix64 mixing, so every draw is a pure function of its integer
//! coordinates and independent of thread scheduling.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{c64, inner, norm_sqr, normalize, Field, Matrix, Vector};
use crate::spectral::{top_singular_subspace, DEFAULT_RANK_TOL};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive hash of integer coordinates into a 64-bit seed.
pub fn mix_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x6A09_E667_F3BC_C908, |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn stream(parts: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(mix_seed(parts))
}

fn field_tag(field: Field) -> u64 {
    match field {
        Field::Real => 1,
        Field::Complex => 2,
    }
}

/// One standard Gaussian scalar: `N(0,1)` for real, `N(0,½) + i·N(0,½)` for complex.
pub(crate) fn gaussian_scalar(rng: &mut ChaCha8Rng, field: Field) -> Complex64 {
    match field {
        Field::Real => c64(StandardNormal.sample(rng), 0.0),
        Field::Complex => {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            c64(re, im) * std::f64::consts::FRAC_1_SQRT_2
        }
    }
}

/// Uniformly distributed unit vector.
pub(crate) fn random_unit(rng: &mut ChaCha8Rng, n: usize, field: Field) -> Vec<Complex64> {
    loop {
        let mut x: Vec<Complex64> = (0..n).map(|_| gaussian_scalar(rng, field)).collect();
        if normalize(&mut x) > 1e-150 {
            return x;
        }
    }
}

/// `n×n` Ginibre matrix, deterministic in `(n, seed, field)`.
pub fn gen_ginibre(n: usize, seed: u64, field: Field) -> Result<Matrix> {
    if n == 0 {
        return Err(Error::InvalidInput("ginibre dimension must be ≥ 1".into()));
    }
    let mut rng = stream(&[0x617E, n as u64, seed, field_tag(field)]);
    let data = (0..n * n).map(|_| gaussian_scalar(&mut rng, field)).collect();
    Matrix::new(n, n, field, data)
}

/// A pair `(A, B)` with `A ⊥ B` by construction.
///
/// `x₀` is a top right singular vector of a Ginibre `A`; `B` is a second
/// Ginibre matrix with the rank-one correction
/// `B = B′ − (⟨B′x₀, Ax₀⟩/‖Ax₀‖²)·(Ax₀)x₀*`, which forces `⟨Bx₀, Ax₀⟩ = 0`
/// while `‖Ax₀‖ = ‖A‖`.
pub fn gen_orthogonal_pair(n: usize, seed: u64, field: Field) -> Result<(Matrix, Matrix)> {
    if n < 2 {
        return Err(Error::Unsupported { dim: n, min: 2 });
    }
    let mut a_seed = seed;
    let mut a = gen_ginibre(n, a_seed, field)?;
    while a.is_zero() {
        a_seed = a_seed.wrapping_add(2);
        a = gen_ginibre(n, a_seed, field)?;
    }
    let b_prime = gen_ginibre(n, seed.wrapping_add(1), field)?;
    let spec = top_singular_subspace(&a, DEFAULT_RANK_TOL)?;
    let x0 = &spec.top_subspace[0].data;
    let ax0 = a.mul_vec(x0);
    let bx0 = b_prime.mul_vec(x0);
    let coef = inner(&bx0, &ax0) / norm_sqr(&ax0);

    let mut b = b_prime.clone();
    for i in 0..n {
        for j in 0..n {
            let v = b.get(i, j) - coef * ax0[i] * x0[j].conj();
            b.set(i, j, v);
        }
    }
    Ok((a, b))
}

/// Haar-like random unitary (orthogonal for the real field) from modified
/// Gram-Schmidt on the columns of a Ginibre matrix.
pub fn random_unitary(n: usize, seed: u64, field: Field) -> Result<Matrix> {
    let g = gen_ginibre(n, seed ^ 0x55AA_55AA, field)?;
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| (0..n).map(|i| g.get(i, j)).collect())
        .collect();
    for j in 0..n {
        for k in 0..j {
            let (head, tail) = cols.split_at_mut(j);
            let r = inner(&tail[0], &head[k]);
            for (x, q) in tail[0].iter_mut().zip(&head[k]) {
                *x -= r * q;
            }
        }
        if normalize(&mut cols[j]) == 0.0 {
            return Err(Error::InvalidInput("degenerate Ginibre draw".into()));
        }
    }
    let mut q = Matrix::zeros(n, n, field);
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            q.set(i, j, z);
        }
    }
    Ok(q)
}

/// Gaussian vector, deterministic in `(n, seed, field)`.
pub fn gen_vector(n: usize, seed: u64, field: Field) -> Vector {
    let mut rng = stream(&[0x7EC7, n as u64, seed, field_tag(field)]);
    Vector {
        field,
        data: (0..n).map(|_| gaussian_scalar(&mut rng, field)).collect(),
    }
}
