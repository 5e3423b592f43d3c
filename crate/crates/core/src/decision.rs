//! Birkhoff-James orthogonality decisions.
//!
//! `A ⊥ B` iff `‖A + λB‖ ≥ ‖A‖` for every scalar λ. Two independent routes
//! decide it: the definitional one minimizes over λ directly, the witness
//! one looks for a norm-attaining `x` with `⟨Ax, Bx⟩ = 0`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::line::{global_inf_lambda, inner_inf, LineOpts};
use crate::matrix::{Field, Matrix, Scalar, Vector};
use crate::spectral::operator_norm;
use crate::witness::{find_witness, Witness, WitnessOpts, WitnessOutcome};

pub const DEFAULT_DECISION_TOL: f64 = 1e-7;
/// Disagreements within this multiple of `tol` are reported as boundary cases.
pub const BOUNDARY_FACTOR: f64 = 10.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Orthogonal,
    NotOrthogonal,
    Boundary,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Orthogonal => "ORTHOGONAL",
            Status::NotOrthogonal => "NOT_ORTHOGONAL",
            Status::Boundary => "BOUNDARY",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Method {
    Definitional,
    Witness,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    /// `inf_λ ‖A+λB‖ − ‖A‖` as far as the route could certify it; never positive.
    pub margin: f64,
    pub method: Method,
    pub tol: f64,
    pub lambda_star: Scalar,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate_theta: Option<f64>,
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1e-2) {
        return Err(Error::InvalidInput(format!(
            "decision tolerance must lie in (0, 1e-2), got {tol}"
        )));
    }
    Ok(())
}

/// Definitional route: ORTHOGONAL iff `inf_λ ‖A+λB‖ ≥ ‖A‖ − tol`.
pub fn check_definitional(a: &Matrix, b: &Matrix, tol: f64) -> Result<Verdict> {
    check_tol(tol)?;
    definitional_unchecked(a, b, tol)
}

fn definitional_unchecked(a: &Matrix, b: &Matrix, tol: f64) -> Result<Verdict> {
    a.ensure_same_shape(b)?;
    let norm_a = operator_norm(a);
    let line = global_inf_lambda(
        a,
        b,
        &LineOpts {
            tol: (0.1 * tol).min(crate::line::DEFAULT_LINE_TOL),
            ..LineOpts::default()
        },
    )?;
    let margin = (line.value - norm_a).min(0.0);
    let status = if line.value >= norm_a - tol {
        Status::Orthogonal
    } else {
        Status::NotOrthogonal
    };
    Ok(Verdict {
        status,
        margin,
        method: Method::Definitional,
        tol,
        lambda_star: line.lambda_star,
        certificate_theta: None,
    })
}

/// Vector form: `u ⊥ v` iff `inf_λ ‖u + λv‖ ≥ ‖u‖ − tol`. Also returns `|⟨u,v⟩|`,
/// since in an inner-product space the two notions coincide.
pub fn vector_bj_check(u: &Vector, v: &Vector, tol: f64) -> Result<(bool, f64)> {
    let field = u.field.join(v.field);
    let r = inner_inf(u, v, field)?;
    Ok((r.value >= u.norm() - tol, u.inner(v).norm()))
}

/// Outcome of the witness route as seen by the combined decision.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WitnessRoute {
    Found(Witness),
    NotOrthogonal(Verdict),
    /// `0 ∈ W(C)` was established but the vector search missed its target.
    SearchFailed { best_residual: f64 },
}

impl WitnessRoute {
    pub fn status(&self) -> Status {
        match self {
            WitnessRoute::Found(_) | WitnessRoute::SearchFailed { .. } => Status::Orthogonal,
            WitnessRoute::NotOrthogonal(_) => Status::NotOrthogonal,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Decision {
    pub status: Status,
    pub margin: f64,
    pub agree: bool,
    pub definitional: Verdict,
    pub witness: WitnessRoute,
}

#[derive(Clone, Copy, Debug)]
pub struct DecisionOpts {
    pub tol: f64,
    pub witness: WitnessOpts,
}

impl Default for DecisionOpts {
    fn default() -> Self {
        DecisionOpts {
            tol: DEFAULT_DECISION_TOL,
            witness: WitnessOpts::default(),
        }
    }
}

/// Runs both routes and merges them. Agreement gives the common status;
/// disagreement with `|margin| ≤ 10·tol` is BOUNDARY; any other
/// disagreement keeps the definitional status with `agree = false`.
pub fn decide(a: &Matrix, b: &Matrix, opts: &DecisionOpts) -> Result<Decision> {
    a.ensure_square()?;
    let definitional = definitional_unchecked(a, b, opts.tol)?;
    let witness = match find_witness(a, b, &opts.witness) {
        Ok(WitnessOutcome::Found(w)) => WitnessRoute::Found(w),
        Ok(WitnessOutcome::NotOrthogonal(v)) => WitnessRoute::NotOrthogonal(v),
        Err(Error::WitnessSearchFailed { best_residual, .. }) => {
            WitnessRoute::SearchFailed { best_residual }
        }
        Err(e) => return Err(e),
    };
    let margin = definitional.margin;
    let agree = witness.status() == definitional.status;
    let status = if agree {
        definitional.status
    } else if margin.abs() <= BOUNDARY_FACTOR * opts.tol {
        Status::Boundary
    } else {
        definitional.status
    };
    Ok(Decision {
        status,
        margin,
        agree,
        definitional,
        witness,
    })
}

/// Field used for a pair of operands.
pub fn pair_field(a: &Matrix, b: &Matrix) -> Field {
    a.field().join(b.field())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensemble::{gen_ginibre, gen_orthogonal_pair};
    use crate::matrix::c64;

    #[test]
    fn definitional_examples() {
        let a = Matrix::diag_real(&[1.0, 0.0]);
        let b = Matrix::diag_real(&[0.0, 1.0]);
        let v = check_definitional(&a, &b, 1e-7).unwrap();
        assert_eq!(v.status, Status::Orthogonal);
        assert!(v.margin.abs() <= 1e-7);

        let v = check_definitional(&a, &a, 1e-7).unwrap();
        assert_eq!(v.status, Status::NotOrthogonal);
        assert!((v.margin + 1.0).abs() <= 1e-7);
        assert!((v.lambda_star.value - c64(-1.0, 0.0)).norm() <= 1e-6);

        let a = Matrix::diag_real(&[2.0, 1.0]);
        let b = Matrix::identity(2, Field::Real);
        let v = check_definitional(&a, &b, 1e-7).unwrap();
        assert_eq!(v.status, Status::NotOrthogonal);
        assert!((v.margin + 1.5).abs() <= 1e-7);
    }

    #[test]
    fn definitional_validates_inputs() {
        let a = Matrix::identity(2, Field::Real);
        assert!(check_definitional(&a, &a, 0.0).is_err());
        assert!(check_definitional(&a, &a, 0.5).is_err());
        let b = Matrix::identity(3, Field::Real);
        assert!(matches!(
            check_definitional(&a, &b, 1e-7),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn vector_examples() {
        let e1 = Vector::basis(Field::Real, 2, 0);
        let e2 = Vector::basis(Field::Real, 2, 1);
        assert_eq!(vector_bj_check(&e1, &e2, 1e-8).unwrap(), (true, 0.0));
        assert_eq!(vector_bj_check(&e1, &e1, 1e-8).unwrap(), (false, 1.0));
        let u = Vector::from_real(&[0.6, 0.8]).unwrap();
        let v = Vector::from_real(&[0.8, -0.6]).unwrap();
        let (ok, ip) = vector_bj_check(&u, &v, 1e-8).unwrap();
        assert!(ok);
        assert!(ip < 1e-15);
        let w = Vector::from_real(&[1.0]).unwrap();
        assert!(vector_bj_check(&u, &w, 1e-8).is_err());
    }

    #[test]
    fn decide_on_constructed_and_random() {
        for field in [Field::Real, Field::Complex] {
            let (a, b) = gen_orthogonal_pair(4, 3, field).unwrap();
            let d = decide(&a, &b, &DecisionOpts::default()).unwrap();
            assert_eq!(d.status, Status::Orthogonal);
            assert!(d.agree);

            let a = gen_ginibre(4, 10, field).unwrap();
            let b = gen_ginibre(4, 11, field).unwrap();
            let d = decide(&a, &b, &DecisionOpts::default()).unwrap();
            assert_eq!(d.status, Status::NotOrthogonal);
            assert!(d.agree);
        }
    }

    #[test]
    fn zero_operands_are_orthogonal() {
        let a = gen_ginibre(3, 1, Field::Complex).unwrap();
        let z = Matrix::zeros(3, 3, Field::Complex);
        let d = decide(&a, &z, &DecisionOpts::default()).unwrap();
        assert_eq!(d.status, Status::Orthogonal);
        let d = decide(&z, &a, &DecisionOpts::default()).unwrap();
        assert_eq!(d.status, Status::Orthogonal);
        match d.witness {
            WitnessRoute::Found(w) => assert_eq!(w.x, Vector::basis(Field::Complex, 3, 0)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn dim_one_routes_agree() {
        for (a, b, expect) in [
            (1.0, 0.0, Status::Orthogonal),
            (1.0, 2.0, Status::NotOrthogonal),
            (0.0, 3.0, Status::Orthogonal),
        ] {
            let d = decide(
                &Matrix::diag_real(&[a]),
                &Matrix::diag_real(&[b]),
                &DecisionOpts::default(),
            )
            .unwrap();
            assert_eq!(d.status, expect, "a={a} b={b}");
            assert!(d.agree);
        }
    }
}
