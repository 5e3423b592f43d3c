use num_complex::Complex64;
use proptest::prelude::*;

use bjorth::decision::{check_definitional, decide, DecisionOpts, Status};
use bjorth::eigen::hermitian_eig;
use bjorth::ensemble::{gen_ginibre, gen_orthogonal_pair, gen_vector, mix_seed, random_unitary};
use bjorth::line::{global_inf_lambda, inner_inf, pencil_norm, LineOpts};
use bjorth::matrix::{Field, Matrix, Vector};
use bjorth::minimax::{lhs_sup_inf, minimax_report, rhs_inf_sup, MinimaxOpts};
use bjorth::spectral::{operator_norm, top_singular_subspace, DEFAULT_RANK_TOL};
use bjorth::witness::{find_witness, Witness, WitnessOpts, WitnessOutcome};

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Real), Just(Field::Complex)]
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn pair(n: usize, seed: u64, field: Field) -> (Matrix, Matrix) {
    (
        gen_ginibre(n, mix_seed(&[seed, 1]), field).unwrap(),
        gen_ginibre(n, mix_seed(&[seed, 2]), field).unwrap(),
    )
}

fn conj_by(u: &Matrix, m: &Matrix) -> Matrix {
    u.matmul(m).unwrap().matmul(&u.adjoint()).unwrap()
}

fn unit(v: Vector) -> Vector {
    let s = v.norm();
    Vector {
        field: v.field,
        data: v.data.iter().map(|z| z / s).collect(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn norm_bounds_every_sample(n in 1usize..7, seed: u64, f in field()) {
        let m = gen_ginibre(n, seed, f).unwrap();
        let norm = operator_norm(&m);
        for k in 0..200 {
            let x = unit(gen_vector(n, mix_seed(&[seed, k]), f));
            prop_assert!(bjorth::matrix::norm(&m.mul_vec(&x.data)) <= norm + 1e-8 * norm.max(1.0));
        }
    }

    #[test]
    fn norm_is_unitarily_invariant(n in 1usize..7, seed: u64, f in field()) {
        let m = gen_ginibre(n, seed, f).unwrap();
        let u = random_unitary(n, seed ^ 1, f).unwrap();
        let v = random_unitary(n, seed ^ 2, f).unwrap();
        let umv = u.matmul(&m).unwrap().matmul(&v).unwrap();
        prop_assert!((operator_norm(&umv) - operator_norm(&m)).abs() <= 1e-8 * operator_norm(&m).max(1.0));
    }

    #[test]
    fn top_subspace_attains_norm(n in 1usize..7, seed: u64, f in field()) {
        let m = gen_ginibre(n, seed, f).unwrap();
        let spec = top_singular_subspace(&m, DEFAULT_RANK_TOL).unwrap();
        for v in &spec.top_subspace {
            let mv = bjorth::matrix::norm(&m.mul_vec(&v.data));
            prop_assert!(mv >= spec.op_norm * (1.0 - DEFAULT_RANK_TOL) - 1e-12);
        }
    }

    #[test]
    fn eig_reconstructs(n in 1usize..7, seed: u64, f in field()) {
        let g = gen_ginibre(n, seed, f).unwrap();
        let h = g.add_scaled(c(1.0, 0.0), &g.adjoint()).unwrap();
        let e = hermitian_eig(&h).unwrap();
        let mut r = Matrix::zeros(n, n, Field::Complex);
        for (lam, v) in e.values.iter().zip(&e.vectors) {
            let outer: Vec<Complex64> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| v.data[i] * v.data[j].conj() * lam)
                .collect();
            r = r.add_scaled(c(1.0, 0.0), &Matrix::new(n, n, Field::Complex, outer).unwrap()).unwrap();
        }
        let err = h.sub(&r).unwrap().frobenius_norm();
        prop_assert!(err <= 1e-8 * h.frobenius_norm().max(1e-300));
    }

    #[test]
    fn inner_inf_never_above_samples(n in 1usize..7, seed: u64, f in field()) {
        let u = gen_vector(n, mix_seed(&[seed, 0]), f);
        let v = gen_vector(n, mix_seed(&[seed, 1]), f);
        let r = inner_inf(&u, &v, f).unwrap();
        for k in 0..400 {
            let t = -3.0 + 6.0 * (k % 20) as f64 / 19.0;
            let s = if f == Field::Real { 0.0 } else { -3.0 + 6.0 * (k / 20) as f64 / 19.0 };
            let l = c(t, s);
            let val = bjorth::matrix::norm(&u.data.iter().zip(&v.data).map(|(p, q)| p + l * q).collect::<Vec<_>>());
            prop_assert!(r.value <= val + 1e-12);
        }
    }

    #[test]
    fn pencil_norm_is_convex(n in 1usize..6, seed: u64, t in 0.0f64..1.0,
                             l1 in (-3.0f64..3.0, -3.0f64..3.0), l2 in (-3.0f64..3.0, -3.0f64..3.0)) {
        let (a, b) = pair(n, seed, Field::Complex);
        let (l1, l2) = (c(l1.0, l1.1), c(l2.0, l2.1));
        let mid = pencil_norm(&a, &b, l1 * t + l2 * (1.0 - t));
        let chord = t * pencil_norm(&a, &b, l1) + (1.0 - t) * pencil_norm(&a, &b, l2);
        prop_assert!(mid <= chord + 1e-10);
    }

    #[test]
    fn distance_bounded_by_norm_and_scale_equivariant(n in 1usize..6, seed: u64, f in field(),
                                                      cr in 0.1f64..10.0, ci in -10.0f64..10.0) {
        let (a, b) = pair(n, seed, f);
        let opts = LineOpts { tol: 1e-10, ..LineOpts::default() };
        let base = global_inf_lambda(&a, &b, &opts).unwrap();
        prop_assert!(base.value <= operator_norm(&a) + 1e-12);
        let s = if f == Field::Real { c(-cr, 0.0) } else { c(cr, ci) };
        let scaled = global_inf_lambda(&a.scale(s), &b.scale(s), &opts).unwrap();
        prop_assert!((scaled.value - s.norm() * base.value).abs() <= 1e-8 * s.norm().max(1.0));
    }

    #[test]
    fn verdict_is_homogeneous(n in 1usize..5, seed: u64, f in field(), orth: bool,
                              cs in 0.2f64..5.0, ds in 0.2f64..5.0, ph in 0.0f64..6.28) {
        let (a, b) = if orth && n >= 2 {
            gen_orthogonal_pair(n, seed, f).unwrap()
        } else {
            pair(n, seed, f)
        };
        let (cc, dd) = if f == Field::Real { (c(cs, 0.0), c(-ds, 0.0)) } else { (Complex64::from_polar(cs, ph), c(ds, 0.0)) };
        let opts = DecisionOpts::default();
        let d0 = decide(&a, &b, &opts).unwrap();
        let d1 = decide(&a.scale(cc), &b.scale(dd), &opts).unwrap();
        prop_assert_eq!(d0.status, d1.status);
    }

    #[test]
    fn tight_witness_implies_orthogonal(n in 2usize..7, seed: u64, f in field()) {
        let (a, b) = gen_orthogonal_pair(n, seed, f).unwrap();
        let opts = WitnessOpts { seed, ..WitnessOpts::default() };
        if let WitnessOutcome::Found(w) = find_witness(&a, &b, &opts).unwrap() {
            prop_assert!(w.validate(&a, &b));
            if w.norm_residual <= 1e-8 && w.ip_residual <= 1e-8 {
                prop_assert_eq!(check_definitional(&a, &b, 1e-6).unwrap().status, Status::Orthogonal);
            }
        } else {
            prop_assert!(false, "constructed pair must have a witness");
        }
    }

    #[test]
    fn zero_b_witness_is_top_singular(n in 1usize..6, seed: u64, f in field()) {
        let a = gen_ginibre(n, seed, f).unwrap();
        let z = Matrix::zeros(n, n, f);
        match find_witness(&a, &z, &WitnessOpts::default()).unwrap() {
            WitnessOutcome::Found(w) => {
                let ax = bjorth::matrix::norm(&a.mul_vec(&w.x.data));
                prop_assert!((ax - operator_norm(&a)).abs() <= 1e-8 * operator_norm(&a));
            }
            other => prop_assert!(false, "{:?}", other),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn weak_duality_at_every_sampled_x(n in 2usize..6, seed: u64, f in field()) {
        let (a, b) = pair(n, seed, f);
        let (rhs, lam) = rhs_inf_sup(&a, &b, &MinimaxOpts::default()).unwrap();
        let bound = pencil_norm(&a, &b, lam.value);
        prop_assert!((bound - rhs).abs() <= 1e-12 * rhs.max(1.0));
        for k in 0..100 {
            let x = unit(gen_vector(n, mix_seed(&[seed, 7, k]), f));
            let ax = Vector { field: f, data: a.mul_vec(&x.data) };
            let bx = Vector { field: f, data: b.mul_vec(&x.data) };
            prop_assert!(inner_inf(&ax, &bx, f).unwrap().value <= bound + 1e-9);
        }
    }

    #[test]
    fn orthogonal_pairs_have_rhs_equal_norm(n in 2usize..7, seed: u64, f in field()) {
        let (a, b) = gen_orthogonal_pair(n, seed, f).unwrap();
        prop_assert_eq!(check_definitional(&a, &b, 1e-7).unwrap().status, Status::Orthogonal);
        let (rhs, _) = rhs_inf_sup(&a, &b, &MinimaxOpts::default()).unwrap();
        prop_assert!((rhs - operator_norm(&a)).abs() <= 1e-6);
    }

    #[test]
    fn more_restarts_never_lower_lhs(n in 2usize..5, seed: u64) {
        let (a, b) = pair(n, seed, Field::Complex);
        let mut prev = f64::NEG_INFINITY;
        for restarts in [1, 2, 4, 8, 16] {
            let (v, _) = lhs_sup_inf(&a, &b, &MinimaxOpts { restarts, seed, ..MinimaxOpts::default() }).unwrap();
            prop_assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn minimax_is_unitarily_invariant(n in 2usize..5, seed: u64, f in field()) {
        let (a, b) = pair(n, seed, f);
        let u = random_unitary(n, seed ^ 3, f).unwrap();
        let opts = MinimaxOpts { seed, ..MinimaxOpts::default() };
        let r0 = minimax_report(&a, &b, &opts).unwrap();
        let r1 = minimax_report(&conj_by(&u, &a), &conj_by(&u, &b), &opts).unwrap();
        prop_assert!((r0.lhs - r1.lhs).abs() <= 1e-6);
        prop_assert!((r0.rhs - r1.rhs).abs() <= 1e-6);
    }

    #[test]
    fn ball_never_beats_sphere(n in 2usize..5, seed: u64, f in field()) {
        let (a, b) = pair(n, seed, f);
        let (lhs, _) = lhs_sup_inf(&a, &b, &MinimaxOpts { seed, ..MinimaxOpts::default() }).unwrap();
        for k in 0..200 {
            let x = unit(gen_vector(n, mix_seed(&[seed, 9, k]), f));
            let r = (k as f64 + 0.5) / 200.0;
            let xs: Vec<Complex64> = x.data.iter().map(|z| z * r).collect();
            let ax = Vector { field: f, data: a.mul_vec(&xs) };
            let bx = Vector { field: f, data: b.mul_vec(&xs) };
            prop_assert!(inner_inf(&ax, &bx, f).unwrap().value <= lhs + 1e-9);
        }
    }
}

#[test]
fn witness_self_validates_on_random_pairs() {
    for seed in 0..40u64 {
        let (a, b) = gen_orthogonal_pair(2 + (seed as usize) % 5, seed, Field::Complex).unwrap();
        if let WitnessOutcome::Found(w) = find_witness(&a, &b, &WitnessOpts::default()).unwrap() {
            let fresh = Witness::evaluate(&a, &b, w.x.clone());
            assert!(w.validate(&a, &b));
            assert!(fresh.ip_residual <= 1e-6);
        }
    }
}
