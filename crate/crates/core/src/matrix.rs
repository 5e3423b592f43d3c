//! Dense field-generic matrices and vectors.
//!
//! Entries are always stored as `Complex64`; the [`Field`] tag decides which
//! scalars are admissible (real matrices keep `im == 0`, and a complex matrix
//! whose entries happen to be real stays tagged complex).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// Smallest field containing both.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Complex || other == Field::Complex {
            Field::Complex
        } else {
            Field::Real
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

/// A field-tagged scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scalar {
    pub field: Field,
    pub value: Complex64,
}

impl Scalar {
    pub fn real(re: f64) -> Self {
        Scalar {
            field: Field::Real,
            value: Complex64::new(re, 0.0),
        }
    }

    pub fn complex(re: f64, im: f64) -> Self {
        Scalar {
            field: Field::Complex,
            value: Complex64::new(re, im),
        }
    }

    pub fn zero(field: Field) -> Self {
        Scalar {
            field,
            value: Complex64::new(0.0, 0.0),
        }
    }

    pub fn re(&self) -> f64 {
        self.value.re
    }

    pub fn im(&self) -> f64 {
        self.value.im
    }

    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    pub fn to_pair(&self) -> [f64; 2] {
        [self.value.re, self.value.im]
    }
}

impl Serialize for Scalar {
    /// `[re, im]`.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pair().serialize(s)
    }
}

#[inline]
pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `⟨u, v⟩ = Σ uᵢ·conj(vᵢ)`, linear in the first argument.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    debug_assert_eq!(u.len(), v.len());
    u.iter()
        .zip(v)
        .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj())
}

pub fn norm_sqr(u: &[Complex64]) -> f64 {
    u.iter().map(|z| z.norm_sqr()).sum()
}

pub fn norm(u: &[Complex64]) -> f64 {
    // scaled accumulation keeps tiny and huge vectors representable
    let scale = u.iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max);
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let s: f64 = u.iter().map(|z| (z / scale).norm_sqr()).sum();
    scale * s.sqrt()
}

/// Normalizes in place; returns the original norm. Zero vectors are left unchanged.
pub fn normalize(u: &mut [Complex64]) -> f64 {
    let n = norm(u);
    if n > 0.0 {
        for z in u.iter_mut() {
            *z /= n;
        }
    }
    n
}

/// A dense vector with a field tag.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector {
    pub field: Field,
    pub data: Vec<Complex64>,
}

impl Vector {
    pub fn new(field: Field, data: Vec<Complex64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidInput("vector must have dim ≥ 1".into()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("vector has non-finite entries".into()));
        }
        if field == Field::Real && data.iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidInput(
                "real vector has nonzero imaginary parts".into(),
            ));
        }
        Ok(Vector { field, data })
    }

    pub fn from_real(data: &[f64]) -> Result<Self> {
        Vector::new(Field::Real, data.iter().map(|&x| c64(x, 0.0)).collect())
    }

    pub fn from_complex(data: &[(f64, f64)]) -> Result<Self> {
        Vector::new(
            Field::Complex,
            data.iter().map(|&(re, im)| c64(re, im)).collect(),
        )
    }

    /// Standard basis vector `e_{index}`.
    pub fn basis(field: Field, dim: usize, index: usize) -> Self {
        let mut data = vec![c64(0.0, 0.0); dim];
        data[index] = c64(1.0, 0.0);
        Vector { field, data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn inner(&self, other: &Vector) -> Complex64 {
        inner(&self.data, &other.data)
    }

    pub fn is_unit(&self) -> bool {
        (self.norm() - 1.0).abs() <= 1e-12
    }

    pub fn to_pairs(&self) -> Vec<[f64; 2]> {
        self.data.iter().map(|z| [z.re, z.im]).collect()
    }
}

impl Serialize for Vector {
    /// `[[re, im], ...]`.
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Complex64>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, field: Field, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        if field == Field::Real && data.iter().any(|z| z.im != 0.0) {
            return Err(Error::InvalidInput(
                "real matrix has nonzero imaginary parts".into(),
            ));
        }
        Ok(Matrix {
            rows,
            cols,
            field,
            data,
        })
    }

    /// Builds a real matrix from row slices.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| c64(x, 0.0)))
            .collect();
        Matrix::new(r, c, Field::Real, data)
    }

    pub fn from_complex_rows(rows: &[&[(f64, f64)]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&(re, im)| c64(re, im)))
            .collect();
        Matrix::new(r, c, Field::Complex, data)
    }

    pub fn zeros(rows: usize, cols: usize, field: Field) -> Self {
        Matrix {
            rows,
            cols,
            field,
            data: vec![c64(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Matrix::zeros(n, n, field);
        for i in 0..n {
            m.data[i * n + i] = c64(1.0, 0.0);
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let n = values.len();
        let mut m = Matrix::zeros(n, n, Field::Real);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = c64(v, 0.0);
        }
        m
    }

    pub fn diag_complex(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut m = Matrix::zeros(n, n, Field::Complex);
        for (i, &v) in values.iter().enumerate() {
            m.data[i * n + i] = v;
        }
        m
    }

    /// Same entries, retagged as complex.
    pub fn to_complex(&self) -> Matrix {
        Matrix {
            field: Field::Complex,
            ..self.clone()
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `M x`.
    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter()
                    .zip(x)
                    .fold(c64(0.0, 0.0), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// `M* y`.
    pub fn adjoint_mul_vec(&self, y: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(y.len(), self.rows);
        let mut out = vec![c64(0.0, 0.0); self.cols];
        for i in 0..self.rows {
            let yi = y[i];
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            for (o, a) in out.iter_mut().zip(row) {
                *o += a.conj() * yi;
            }
        }
        out
    }

    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows, self.field);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols, self.field.join(other.field));
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `M* M`, Hermitian positive semidefinite.
    pub fn gram(&self) -> Matrix {
        let n = self.cols;
        let mut out = Matrix::zeros(n, n, self.field);
        for i in 0..n {
            for j in i..n {
                let mut s = c64(0.0, 0.0);
                for k in 0..self.rows {
                    s += self.get(k, i).conj() * self.get(k, j);
                }
                out.set(i, j, s);
                out.set(j, i, s.conj());
            }
            let d = out.get(i, i);
            out.set(i, i, c64(d.re, 0.0));
        }
        out
    }

    /// `self + λ·other`.
    pub fn add_scaled(&self, lambda: Complex64, other: &Matrix) -> Result<Matrix> {
        self.ensure_same_shape(other)?;
        let field = if lambda.im != 0.0 {
            Field::Complex
        } else {
            self.field.join(other.field)
        };
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + lambda * b)
            .collect();
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            field,
            data,
        })
    }

    pub fn scale(&self, c: Complex64) -> Matrix {
        let field = if c.im != 0.0 { Field::Complex } else { self.field };
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add_scaled(c64(-1.0, 0.0), other)
    }

    pub fn ensure_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        Ok(())
    }

    pub fn ensure_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        Ok(())
    }

    /// Serializes to the matrix JSON schema:
    /// `{"rows", "cols", "field", "data"}` with real entries as numbers and
    /// complex entries as `[re, im]` pairs, row-major.
    pub fn to_json(&self) -> Value {
        let data: Vec<Value> = match self.field {
            Field::Real => self.data.iter().map(|z| json!(z.re)).collect(),
            Field::Complex => self.data.iter().map(|z| json!([z.re, z.im])).collect(),
        };
        json!({
            "rows": self.rows,
            "cols": self.cols,
            "field": self.field.as_str(),
            "data": data,
        })
    }

    pub fn from_json(value: &Value) -> Result<Matrix> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidInput("matrix JSON must be an object".into()))?;
        let dim = |key: &str| -> Result<usize> {
            obj.get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| Error::InvalidInput(format!("missing or invalid \"{key}\"")))
        };
        let rows = dim("rows")?;
        let cols = dim("cols")?;
        let field = match obj.get("field").and_then(Value::as_str) {
            Some("real") => Field::Real,
            Some("complex") => Field::Complex,
            other => {
                return Err(Error::InvalidInput(format!(
                    "\"field\" must be \"real\" or \"complex\", got {other:?}"
                )))
            }
        };
        let entries = obj
            .get("data")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("missing \"data\" array".into()))?;
        let mut data = Vec::with_capacity(entries.len());
        for (k, e) in entries.iter().enumerate() {
            let z = match field {
                Field::Real => e
                    .as_f64()
                    .map(|x| c64(x, 0.0))
                    .ok_or_else(|| Error::InvalidInput(format!("data[{k}] is not a number")))?,
                Field::Complex => {
                    let pair = e.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                        Error::InvalidInput(format!("data[{k}] is not an [re, im] pair"))
                    })?;
                    match (pair[0].as_f64(), pair[1].as_f64()) {
                        (Some(re), Some(im)) => c64(re, im),
                        _ => {
                            return Err(Error::InvalidInput(format!(
                                "data[{k}] has non-numeric parts"
                            )))
                        }
                    }
                }
            };
            data.push(z);
        }
        Matrix::new(rows, cols, field, data)
    }

    pub fn from_json_str(s: &str) -> Result<Matrix> {
        let v: Value = serde_json::from_str(s)?;
        Matrix::from_json(&v)
    }
}
