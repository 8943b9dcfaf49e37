//! The four forbidden shapes of X1 presentations
//! `O(-3) ⊕ 2O(-2) → O(-1) ⊕ 2O`, with entries
//!
//! ```text
//! [ q  | ℓ1  ℓ2  ]
//! [ f1 | q11 q12 ]
//! [ f2 | q21 q22 ]
//! ```
//!
//! Allowed operations: row 0 may be added to rows 1, 2 with linear
//! coefficients, rows 1, 2 mix by GL2; columns 1, 2 may be added to column
//! 0 with linear coefficients, columns 1, 2 mix by GL2. Each shape becomes
//! a rank or membership question once these moves are accounted for.

use serde::{Deserialize, Serialize};

use super::conditions::cell;
use super::{require_shape, StrataError, StratumLabel};
use crate::algebra::{forms_rank, in_column_space, mult_map, Field, Form, Scalar, ScalarMatrix};
use crate::presentation::{Presentation, PresentationError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PatternId {
    /// `[⋆ 0 0; ⋆ ⋆ ⋆; ⋆ ⋆ ⋆]`
    P1,
    /// `[⋆ ⋆ 0; ⋆ ⋆ 0; ⋆ ⋆ ⋆]`
    P2,
    /// `[⋆ ⋆ ⋆; ⋆ ⋆ ⋆; ⋆ 0 0]`
    P3,
    /// `[0 0 ⋆; ⋆ ⋆ ⋆; ⋆ ⋆ ⋆]`
    P4,
}

impl PatternId {
    pub const ALL: [PatternId; 4] = [PatternId::P1, PatternId::P2, PatternId::P3, PatternId::P4];

    /// Cells that must vanish, as `(row, col)`.
    pub fn zero_cells(self) -> [(usize, usize); 2] {
        match self {
            PatternId::P1 => [(0, 1), (0, 2)],
            PatternId::P2 => [(0, 2), (1, 2)],
            PatternId::P3 => [(2, 1), (2, 2)],
            PatternId::P4 => [(0, 0), (0, 1)],
        }
    }
}

struct Entries {
    q: Form,
    l1: Form,
    l2: Form,
    q11: Form,
    q12: Form,
    q21: Form,
    q22: Form,
}

fn entries(p: &Presentation) -> Entries {
    Entries {
        q: cell(p, 0, 0),
        l1: cell(p, 0, 1),
        l2: cell(p, 0, 2),
        q11: cell(p, 1, 1),
        q12: cell(p, 1, 2),
        q21: cell(p, 2, 1),
        q22: cell(p, 2, 2),
    }
}

/// Forbidden shapes the matrix is equivalent to; empty means admissible.
pub fn x1_patterns(p: &Presentation) -> Result<Vec<PatternId>, StrataError> {
    require_shape(p, StratumLabel::X1)?;
    let e = entries(p);
    let mut out = Vec::new();
    if p1(&e) {
        out.push(PatternId::P1);
    }
    if p2(&e)? {
        out.push(PatternId::P2);
    }
    if p3(&e) {
        out.push(PatternId::P3);
    }
    if p4(&e)? {
        out.push(PatternId::P4);
    }
    Ok(out)
}

fn p1(e: &Entries) -> bool {
    e.l1.is_zero() && e.l2.is_zero()
}

/// A column combination `(a, b) ≠ 0` killing the `ℓ`-entry whose quadratic
/// part `(a·q11 + b·q12, a·q21 + b·q22)` is a dependent pair.
fn p2(e: &Entries) -> Result<bool, PresentationError> {
    let field = e.l1.field();
    let rank_l = forms_rank(&[e.l1.clone(), e.l2.clone()])?;
    if rank_l == 2 {
        return Ok(false);
    }
    if rank_l == 1 {
        let (a, b) = if e.l1.is_zero() {
            (field.one(), field.zero())
        } else {
            let lambda = ratio(&e.l2, &e.l1);
            (lambda, -&field.one())
        };
        return pair_dependent(e, &a, &b);
    }
    for (a, b) in projective_line_candidates(e)? {
        if pair_dependent(e, &a, &b)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// `λ` with `num = λ·den`, for proportional nonzero forms.
fn ratio(num: &Form, den: &Form) -> Scalar {
    let (m, c) = den.terms().next().expect("nonzero form");
    num.coeff(m).checked_div(c).expect("nonzero coefficient")
}

fn combine(a: &Scalar, f: &Form, b: &Scalar, g: &Form) -> Form {
    &f.scale(a) + &g.scale(b)
}

fn pair_dependent(e: &Entries, a: &Scalar, b: &Scalar) -> Result<bool, PresentationError> {
    let u = combine(a, &e.q11, b, &e.q12);
    let v = combine(a, &e.q21, b, &e.q22);
    Ok(forms_rank(&[u, v])? <= 1)
}

/// Points `(a : b)` that can make the quadratic pair dependent. Over small
/// prime fields every point of the projective line; otherwise the roots of
/// the first nonvanishing `2×2` minor, a binary quadratic in `(a, b)`.
fn projective_line_candidates(e: &Entries) -> Result<Vec<(Scalar, Scalar)>, PresentationError> {
    let field = e.q11.field();
    if let Field::Prime { p } = field {
        if p <= 1 << 16 {
            let mut pts = vec![(field.zero(), field.one())];
            pts.extend((0..p).map(|t| (field.one(), Scalar::from_u64(field, t))));
            return Ok(pts);
        }
    }
    let c = |f: &Form| f.to_dense();
    let (c11, c12, c21, c22) = (c(&e.q11), c(&e.q12), c(&e.q21), c(&e.q22));
    for i in 0..6 {
        for j in i + 1..6 {
            let minor = |x: &[Scalar], y: &[Scalar]| &(&x[i] * &y[j]) - &(&x[j] * &y[i]);
            let alpha = minor(&c11, &c21);
            let beta = &minor(&c11, &c22) + &minor(&c12, &c21);
            let gamma = minor(&c12, &c22);
            if alpha.is_zero() && beta.is_zero() && gamma.is_zero() {
                continue;
            }
            return Ok(binary_quadratic_roots(field, &alpha, &beta, &gamma));
        }
    }
    // Every minor vanishes identically: any point works.
    Ok(vec![(field.one(), field.zero())])
}

/// Projective roots of `α a² + β ab + γ b²` (not identically zero), for
/// fields of characteristic other than 2.
fn binary_quadratic_roots(
    field: Field,
    alpha: &Scalar,
    beta: &Scalar,
    gamma: &Scalar,
) -> Vec<(Scalar, Scalar)> {
    let mut out = Vec::new();
    if alpha.is_zero() {
        out.push((field.one(), field.zero()));
        if !beta.is_zero() {
            out.push(((-gamma).checked_div(beta).unwrap(), field.one()));
        }
        return out;
    }
    let four = Scalar::from_i64(field, 4);
    let disc = &(beta * beta) - &(&four * &(alpha * gamma));
    if let Some(s) = disc.sqrt() {
        let two_alpha = &Scalar::from_i64(field, 2) * alpha;
        for root in [&(-beta) + &s, &(-beta) - &s] {
            out.push((root.checked_div(&two_alpha).unwrap(), field.one()));
        }
    }
    out
}

/// Scalars `(α, β) ≠ 0` and a linear `v` with
/// `α(q11, q12) + β(q21, q22) + v(ℓ1, ℓ2) = 0`.
fn p3(e: &Entries) -> bool {
    let field = e.l1.field();
    let col = |top: &Form, bottom: &Form| {
        let mut v = top.to_dense();
        v.extend(bottom.to_dense());
        v
    };
    let alpha = ScalarMatrix::from_columns(field, 12, &[col(&e.q11, &e.q12)]);
    let beta = ScalarMatrix::from_columns(field, 12, &[col(&e.q21, &e.q22)]);
    let v = ScalarMatrix::vstack(
        field,
        3,
        &[&mult_map(&e.l1, 1).unwrap(), &mult_map(&e.l2, 1).unwrap()],
    );
    let sys = ScalarMatrix::hstack(field, 12, &[&alpha, &beta, &v]);
    sys.kernel_basis()
        .iter()
        .any(|k| !k[0].is_zero() || !k[1].is_zero())
}

/// `ℓ1, ℓ2` dependent and `q ∈ ⟨ℓ1, ℓ2⟩·V*`.
fn p4(e: &Entries) -> Result<bool, PresentationError> {
    if forms_rank(&[e.l1.clone(), e.l2.clone()])? == 2 {
        return Ok(false);
    }
    let field = e.q.field();
    let span = ScalarMatrix::hstack(
        field,
        6,
        &[&mult_map(&e.l1, 1).unwrap(), &mult_map(&e.l2, 1).unwrap()],
    );
    Ok(in_column_space(&span, &e.q.to_dense()))
}
