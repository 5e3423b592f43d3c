//! Cyclic Jacobi eigensolver for dense Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{c64, Field, Matrix, Vector};

/// Off-diagonal convergence threshold, relative to ‖H‖_F.
pub const JACOBI_TOL: f64 = 1e-12;
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Relative Hermiticity tolerance accepted on input.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalues ascending, with matching orthonormal eigenvectors.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    pub vectors: Vec<Vector>,
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Rejects input whose anti-Hermitian part exceeds `1e-10·‖H‖`; the
/// Hermitian part `(H + H*)/2` is what gets diagonalized.
pub fn hermitian_eig(h: &Matrix) -> Result<HermitianEig> {
    h.ensure_square()?;
    let n = h.rows();
    let mut deviation = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            deviation = deviation.max((h.get(i, j) - h.get(j, i).conj()).norm());
        }
    }
    let scale = h.frobenius_norm();
    if deviation > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian { deviation });
    }

    let mut a: Vec<Complex64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            a.push(0.5 * (h.get(i, j) + h.get(j, i).conj()));
        }
    }
    let (values, vecs) = jacobi_in_place(&mut a, n);

    let field = h.field();
    let vectors = vecs
        .into_iter()
        .map(|data| Vector { field, data })
        .collect();
    Ok(HermitianEig { values, vectors })
}

/// Largest eigenvalue only; skips input validation.
pub(crate) fn max_eigenvalue_unchecked(h: &Matrix) -> f64 {
    let n = h.rows();
    if n == 1 {
        return h.get(0, 0).re;
    }
    if n == 2 {
        // closed form for the 2x2 Hermitian case
        let a = h.get(0, 0).re;
        let d = h.get(1, 1).re;
        let b = h.get(0, 1);
        let half_diff = 0.5 * (a - d);
        return 0.5 * (a + d) + (half_diff * half_diff + b.norm_sqr()).sqrt();
    }
    let mut a = h.data().to_vec();
    let (values, _) = jacobi_in_place(&mut a, n);
    values[n - 1]
}

/// Diagonalizes the Hermitian matrix stored row-major in `a` (destroyed).
/// Returns ascending eigenvalues and column eigenvectors as separate vectors.
fn jacobi_in_place(a: &mut [Complex64], n: usize) -> (Vec<f64>, Vec<Vec<Complex64>>) {
    let idx = |i: usize, j: usize| i * n + j;
    // v is stored row-major; column k is the k-th eigenvector
    let mut v = vec![c64(0.0, 0.0); n * n];
    for i in 0..n {
        v[idx(i, i)] = c64(1.0, 0.0);
        a[idx(i, i)].im = 0.0;
    }

    let total: f64 = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if total > 0.0 {
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += a[idx(i, j)].norm_sqr();
                }
            }
            let off = (2.0 * off).sqrt();
            if off <= JACOBI_TOL * total {
                break;
            }

            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a[idx(p, q)];
                    let r = apq.norm();
                    if r == 0.0 {
                        continue;
                    }
                    // phase step: make a_pq real positive by scaling row/col q
                    let phase = apq / r;
                    let ph_conj = phase.conj();
                    for k in 0..n {
                        a[idx(k, q)] *= ph_conj;
                        a[idx(q, k)] *= phase;
                        v[idx(k, q)] *= ph_conj;
                    }
                    a[idx(p, q)] = c64(r, 0.0);
                    a[idx(q, p)] = c64(r, 0.0);
                    a[idx(q, q)].im = 0.0;

                    let app = a[idx(p, p)].re;
                    let aqq = a[idx(q, q)].re;
                    let theta = (aqq - app) / (2.0 * r);
                    let t = if theta >= 0.0 {
                        1.0 / (theta + (theta * theta + 1.0).sqrt())
                    } else {
                        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;

                    for k in 0..n {
                        let akp = a[idx(k, p)];
                        let akq = a[idx(k, q)];
                        a[idx(k, p)] = akp * c - akq * s;
                        a[idx(k, q)] = akp * s + akq * c;
                    }
                    for k in 0..n {
                        let apk = a[idx(p, k)];
                        let aqk = a[idx(q, k)];
                        a[idx(p, k)] = apk * c - aqk * s;
                        a[idx(q, k)] = apk * s + aqk * c;
                    }
                    a[idx(p, q)] = c64(0.0, 0.0);
                    a[idx(q, p)] = c64(0.0, 0.0);
                    a[idx(p, p)] = c64(app - t * r, 0.0);
                    a[idx(q, q)] = c64(aqq + t * r, 0.0);

                    for k in 0..n {
                        let vkp = v[idx(k, p)];
                        let vkq = v[idx(k, q)];
                        v[idx(k, p)] = vkp * c - vkq * s;
                        v[idx(k, q)] = vkp * s + vkq * c;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[idx(i, i)].re.total_cmp(&a[idx(j, j)].re));
    let values = order.iter().map(|&k| a[idx(k, k)].re).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[idx(i, k)]).collect())
        .collect();
    (values, vectors)
}

/// Returns the Hermitian part `(M + M*)/2`.
pub fn hermitian_part(m: &Matrix) -> Matrix {
    let n = m.rows();
    let mut out = Matrix::zeros(n, n, m.field());
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, 0.5 * (m.get(i, j) + m.get(j, i).conj()));
        }
    }
    out
}

/// Hermitian part of `e^{iθ} C`.
pub(crate) fn rotated_hermitian_part(c: &Matrix, theta: f64) -> Matrix {
    let rot = Complex64::from_polar(1.0, theta);
    let n = c.rows();
    let mut out = Matrix::zeros(n, n, Field::Complex);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, 0.5 * (rot * c.get(i, j) + (rot * c.get(j, i)).conj()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::inner;

    fn assert_eigenpairs(h: &Matrix, eig: &HermitianEig) {
        let scale = h.frobenius_norm().max(1.0);
        for (lam, v) in eig.values.iter().zip(&eig.vectors) {
            let hv = h.mul_vec(&v.data);
            let res: f64 = hv
                .iter()
                .zip(&v.data)
                .map(|(a, b)| (a - lam * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-9 * scale, "residual {res}");
        }
        for (i, u) in eig.vectors.iter().enumerate() {
            for (j, w) in eig.vectors.iter().enumerate() {
                let ip = inner(&u.data, &w.data);
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((ip - c64(target, 0.0)).norm() < 1e-10);
            }
        }
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal() {
        let h = Matrix::diag_real(&[3.0, -1.0]);
        let eig = hermitian_eig(&h).unwrap();
        assert_eq!(eig.values, vec![-1.0, 3.0]);
        assert!((eig.vectors[0].data[1].norm() - 1.0).abs() < 1e-15);
        assert!((eig.vectors[1].data[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn identity_all_ones() {
        let eig = hermitian_eig(&Matrix::identity(4, Field::Complex)).unwrap();
        assert!(eig.values.iter().all(|&l| l == 1.0));
    }

    #[test]
    fn pauli_x() {
        let h = Matrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let eig = hermitian_eig(&h).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-15);
        assert!((eig.values[1] - 1.0).abs() < 1e-15);
        assert_eigenpairs(&h, &eig);
    }

    #[test]
    fn complex_hermitian_pauli_y() {
        let h = Matrix::from_complex_rows(&[&[(0.0, 0.0), (0.0, -1.0)], &[(0.0, 1.0), (0.0, 0.0)]])
            .unwrap();
        let eig = hermitian_eig(&h).unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        assert_eigenpairs(&h, &eig);
    }

    #[test]
    fn dense_complex_matrix() {
        let b = Matrix::from_complex_rows(&[
            &[(1.0, 0.5), (0.2, -1.0), (3.0, 0.0), (0.0, 0.1)],
            &[(-0.4, 0.0), (1.5, 1.5), (0.0, -2.0), (0.7, 0.7)],
            &[(0.0, 1.0), (2.0, 0.0), (-1.0, -1.0), (0.3, 0.0)],
            &[(0.9, -0.2), (0.0, 0.0), (0.5, 0.5), (-2.0, 0.4)],
        ])
        .unwrap();
        let h = hermitian_part(&b);
        let eig = hermitian_eig(&h).unwrap();
        assert_eigenpairs(&h, &eig);
        let trace: f64 = (0..4).map(|i| h.get(i, i).re).sum();
        let sum: f64 = eig.values.iter().sum();
        assert!((trace - sum).abs() < 1e-12);
    }

    #[test]
    fn real_input_gives_real_vectors() {
        let h = Matrix::from_real_rows(&[&[2.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 2.0]])
            .unwrap();
        let eig = hermitian_eig(&h).unwrap();
        assert_eigenpairs(&h, &eig);
        for v in &eig.vectors {
            assert!(v.data.iter().all(|z| z.im == 0.0));
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(hermitian_eig(&h), Err(Error::NotHermitian { .. })));
        let r = Matrix::from_real_rows(&[&[1.0, 2.0]]).unwrap();
        assert!(matches!(hermitian_eig(&r), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn max_eigenvalue_matches_full_solver() {
        let b = Matrix::from_complex_rows(&[
            &[(1.0, 0.5), (0.2, -1.0), (3.0, 0.0)],
            &[(-0.4, 0.0), (1.5, 1.5), (0.0, -2.0)],
            &[(0.0, 1.0), (2.0, 0.0), (-1.0, -1.0)],
        ])
        .unwrap();
        let g = b.gram();
        let full = hermitian_eig(&g).unwrap();
        assert!((max_eigenvalue_unchecked(&g) - full.values[2]).abs() < 1e-12);

        let g2 = Matrix::from_complex_rows(&[&[(2.0, 0.0), (0.5, 1.0)], &[(0.5, -1.0), (-1.0, 0.0)]])
            .unwrap();
        let full2 = hermitian_eig(&g2).unwrap();
        assert!((max_eigenvalue_unchecked(&g2) - full2.values[1]).abs() < 1e-14);
    }
}
