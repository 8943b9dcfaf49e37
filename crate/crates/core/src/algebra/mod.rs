//! Exact field arithmetic, homogeneous forms and the linear algebra the
//! rest of the crate is built on.
//!
//! Every "is this condition satisfied" question in the crate is reduced to
//! a rank or membership test over the base field, which is why `Q` and
//! `F_p` are faithful stand-ins for the complex numbers here.

mod field;
mod form;
mod matrix;
mod polymatrix;

pub use field::{Field, Scalar, MAX_PRIME};
pub use form::{basis_len, monomial_basis, mult_map, Form, Monomial};
pub use matrix::{rank_mod_p, ScalarMatrix};
pub use polymatrix::{combinations, det_poly, maximal_minors, PolyMatrix};


use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a supported prime")]
    NotPrime(u64),
    #[error("negative degree {0}")]
    NegativeDegree(i64),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape error: {0}")]
    Shape(String),
    #[error("expected a nonzero linear form")]
    ZeroLinearForm,
    #[error("both forms are zero")]
    BothZero,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coefficient matrix of equal-degree forms: one row per form, columns in
/// `monomial_basis` order.
pub fn coefficient_matrix(field: Field, forms: &[Form]) -> Result<ScalarMatrix, AlgebraError> {
    let Some(first) = forms.first() else {
        return Ok(ScalarMatrix::zeros(field, 0, 0));
    };
    let d = first.degree();
    let mut m = ScalarMatrix::zeros(field, forms.len(), basis_len(d as i64));
    for (i, f) in forms.iter().enumerate() {
        if f.degree() != d {
            return Err(AlgebraError::DegreeMismatch {
                expected: d as i64,
                found: f.degree() as i64,
            });
        }
        if f.field() != field {
            return Err(AlgebraError::FieldMismatch);
        }
        for (mono, c) in f.terms() {
            m.set(i, mono.index(), c.clone());
        }
    }
    Ok(m)
}

/// Dimension of the span of equal-degree forms.
pub fn forms_rank(forms: &[Form]) -> Result<usize, AlgebraError> {
    let Some(first) = forms.first() else {
        return Ok(0);
    };
    Ok(coefficient_matrix(first.field(), forms)?.rank())
}

/// Whether the degree-`d` form `q` lies in `l · S^{d-1}`.
pub fn divides(l: &Form, q: &Form) -> Result<bool, AlgebraError> {
    if l.degree() != 1 {
        return Err(AlgebraError::DegreeMismatch {
            expected: 1,
            found: l.degree() as i64,
        });
    }
    if l.is_zero() {
        return Err(AlgebraError::ZeroLinearForm);
    }
    if q.degree() == 0 {
        return Ok(q.is_zero());
    }
    let image = mult_map(l, q.degree() as i64 - 1)?;
    Ok(in_column_space(&image, &q.to_dense()))
}

/// Whether two forms of the same degree share a non-constant factor.
///
/// Decided by the existence of a nonzero syzygy `a1·q1 + a2·q2 = 0` with
/// `a1, a2` of degree `d - 1`: with unique factorization such a syzygy
/// exists exactly when `gcd(q1, q2)` is not a constant.
pub fn common_factor(q1: &Form, q2: &Form) -> Result<bool, AlgebraError> {
    if q1.degree() != q2.degree() {
        return Err(AlgebraError::DegreeMismatch {
            expected: q1.degree() as i64,
            found: q2.degree() as i64,
        });
    }
    if q1.is_zero() && q2.is_zero() {
        return Err(AlgebraError::BothZero);
    }
    let d = q1.degree() as i64;
    if d == 0 {
        return Ok(false);
    }
    let field = q1.field();
    let a = mult_map(q1, d - 1)?;
    let b = mult_map(q2, d - 1)?;
    let sys = ScalarMatrix::hstack(field, a.rows(), &[&a, &b]);
    Ok(sys.rank() < sys.cols())
}

/// `v` lies in the column space of `m`.
pub fn in_column_space(m: &ScalarMatrix, v: &[Scalar]) -> bool {
    let col = ScalarMatrix::from_columns(m.field(), m.rows(), &[v.to_vec()]);
    let aug = ScalarMatrix::hstack(m.field(), m.rows(), &[m, &col]);
    aug.rank() == m.rank()
}
