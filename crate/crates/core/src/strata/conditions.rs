//! Matrix conditions of the normal forms X0, X2, X3, X4 and X5.

use serde::{Deserialize, Serialize};

use super::{require_shape, StrataError, StratumLabel, StratumViolation};
use crate::algebra::{
    common_factor, divides, forms_rank, maximal_minors, mult_map, Form, ScalarMatrix,
};
use crate::kronecker::{is_semistable, lattice_size, KroneckerModule, Mode, Verdict, EXACT_BUDGET};
use crate::presentation::Presentation;

/// Entry `(i, j)` relabelled to the degree the twist grid requires, so that
/// zero cells compare cleanly with their neighbours.
pub(crate) fn cell(p: &Presentation, i: usize, j: usize) -> Form {
    let e = p.entry(i, j);
    let d = p.entry_degree(i, j).max(0) as u32;
    if e.is_zero() {
        Form::zero(p.field(), d)
    } else {
        e.clone()
    }
}

fn require_zero(p: &Presentation, cells: &[(usize, usize)], out: &mut Vec<StratumViolation>) {
    for &(row, col) in cells {
        if !p.entry(row, col).is_zero() {
            out.push(StratumViolation::NonzeroBlock { row, col });
        }
    }
}

/// Semistability verdict for the `4×5` linear block of an X0 presentation.
/// Exhaustive over small prime fields, randomized otherwise.
pub fn x0_verdict(p: &Presentation) -> Result<Verdict, StrataError> {
    require_shape(p, StratumLabel::X0)?;
    let block = p.matrix().submatrix(&[0, 1, 2, 3], &[0, 1, 2, 3, 4]);
    let k = KroneckerModule::new(block)?;
    let mode = match p.field().order() {
        Some(q) if lattice_size(q, 5) <= EXACT_BUDGET => Mode::ExactSmallField,
        _ => Mode::default(),
    };
    Ok(is_semistable(&k, mode)?)
}

/// Whether `φ_11` is a semistable Kronecker module.
pub fn x0_condition(p: &Presentation) -> Result<bool, StrataError> {
    match x0_verdict(p)? {
        Verdict::Semistable(_) => Ok(true),
        Verdict::Unstable(_) => Ok(false),
        Verdict::Unknown { trials } => Err(StrataError::Undecided { trials }),
    }
}

pub(crate) fn x0_violations(p: &Presentation) -> Result<Vec<StratumViolation>, StrataError> {
    Ok(match x0_verdict(p)? {
        Verdict::Semistable(_) => Vec::new(),
        Verdict::Unstable(w) => vec![StratumViolation::Unstable {
            dim_s: w.dim_s,
            dim_t: w.dim_t,
        }],
        Verdict::Unknown { trials } => vec![StratumViolation::Undecided {
            message: format!("no certificate or witness after {trials} trials"),
        }],
    })
}

/// Rows `(q_i | ℓ_i1 ℓ_i2 | 0)` for `i = 1, 2`, then `(f_i | q_i1 q_i2 | ℓ_i)`.
pub fn x2_conditions(p: &Presentation) -> Result<Vec<StratumViolation>, StrataError> {
    require_shape(p, StratumLabel::X2)?;
    let mut out = Vec::new();
    require_zero(p, &[(0, 3), (1, 3)], &mut out);
    let (l1, l2) = (cell(p, 2, 3), cell(p, 3, 3));
    if forms_rank(&[l1, l2]).map_err(crate::presentation::PresentationError::from)? < 2 {
        out.push(StratumViolation::condition("ℓ_1, ℓ_2 dependent"));
    }
    let (l11, l12, l21, l22) = (cell(p, 0, 1), cell(p, 0, 2), cell(p, 1, 1), cell(p, 1, 2));
    let (q1, q2) = (cell(p, 0, 0), cell(p, 1, 0));
    let delta = &(&l11 * &l22) - &(&l12 * &l21);
    if delta.is_zero() {
        out.push(StratumViolation::condition(
            "ℓ_11ℓ_22 - ℓ_12ℓ_21 = 0",
        ));
        return Ok(out);
    }
    let m1 = &(&q1 * &l21) - &(&q2 * &l11);
    let m2 = &(&q1 * &l22) - &(&q2 * &l12);
    let mut forms = vec![m1.with_degree(3).unwrap(), m2.with_degree(3).unwrap()];
    for v in 0..3 {
        forms.push(&delta * &Form::var(p.field(), v));
    }
    if forms_rank(&forms).map_err(crate::presentation::PresentationError::from)? < 5 {
        out.push(StratumViolation::condition("minors dependent mod (δ)V*"));
    }
    Ok(out)
}

/// `φ_11 = (ℓ_1, ℓ_2)` independent and the `3×2` linear block `φ_22` with
/// independent maximal minors.
pub fn x3_conditions(p: &Presentation) -> Result<Vec<StratumViolation>, StrataError> {
    require_shape(p, StratumLabel::X3)?;
    let mut out = Vec::new();
    let to_err = crate::presentation::PresentationError::from;
    if forms_rank(&[cell(p, 0, 0), cell(p, 0, 1)]).map_err(to_err)? < 2 {
        out.push(StratumViolation::condition("φ_11 has dependent entries"));
    }
    let phi22 = crate::algebra::PolyMatrix::from_rows(
        p.field(),
        (1..4).map(|i| vec![cell(p, i, 2), cell(p, i, 3)]).collect(),
    )
    .map_err(to_err)?;
    let minors: Vec<Form> = maximal_minors(&phi22)
        .map_err(to_err)?
        .into_iter()
        .map(|m| m.with_degree(2).unwrap())
        .collect();
    if forms_rank(&minors).map_err(to_err)? < 3 {
        out.push(StratumViolation::condition("φ_22 has dependent maximal minors"));
    }
    Ok(out)
}

/// The two normal forms of an X4 presentation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum X4Case {
    /// First row `(0, 0, c)` with `c ≠ 0` and zero column below `c`.
    #[serde(rename = "i")]
    I,
    /// First row `(ℓ_1, ℓ_2, 0)`.
    #[serde(rename = "ii")]
    II,
}

impl X4Case {
    pub fn as_str(self) -> &'static str {
        match self {
            X4Case::I => "i",
            X4Case::II => "ii",
        }
    }
}

pub fn x4_case(p: &Presentation) -> Result<X4Case, StrataError> {
    require_shape(p, StratumLabel::X4)?;
    let c = p.entry(0, 2);
    let row_linear_zero = p.entry(0, 0).is_zero() && p.entry(0, 1).is_zero();
    if !c.is_zero() {
        if row_linear_zero && p.entry(1, 2).is_zero() && p.entry(2, 2).is_zero() {
            Ok(X4Case::I)
        } else {
            Err(StrataError::NotInNormalPosition)
        }
    } else if row_linear_zero {
        Err(StrataError::AmbiguousX4)
    } else {
        Ok(X4Case::II)
    }
}

pub fn x4_conditions(p: &Presentation) -> Result<Vec<StratumViolation>, StrataError> {
    let to_err = crate::presentation::PresentationError::from;
    let mut out = Vec::new();
    let (q1, q2) = (cell(p, 1, 0), cell(p, 1, 1));
    match x4_case(p)? {
        X4Case::I => {
            if q1.is_zero() && q2.is_zero() {
                out.push(StratumViolation::condition("q_1 = q_2 = 0"));
            } else if common_factor(&q1, &q2).map_err(to_err)? {
                out.push(StratumViolation::condition("q_1, q_2 have a common factor"));
            }
        }
        X4Case::II => {
            let (l1, l2, l) = (cell(p, 0, 0), cell(p, 0, 1), cell(p, 1, 2));
            if forms_rank(&[l1.clone(), l2.clone()]).map_err(to_err)? < 2 {
                out.push(StratumViolation::condition("ℓ_1, ℓ_2 dependent"));
            }
            if l.is_zero() {
                out.push(StratumViolation::condition("ℓ = 0"));
            } else if x4_syzygy_solvable(&l1, &l2, &l, &q1, &q2) {
                out.push(StratumViolation::condition(
                    "(q_1, q_2) = u(ℓ_1, ℓ_2) + ℓ(v_1, v_2) has a solution",
                ));
            }
        }
    }
    Ok(out)
}

/// Solvability of `(q1, q2) = u(ℓ1, ℓ2) + ℓ(v1, v2)` in linear forms
/// `u, v1, v2`: 12 equations, 9 unknowns.
fn x4_syzygy_solvable(l1: &Form, l2: &Form, l: &Form, q1: &Form, q2: &Form) -> bool {
    let field = l.field();
    let a1 = mult_map(l1, 1).unwrap();
    let a2 = mult_map(l2, 1).unwrap();
    let b = mult_map(l, 1).unwrap();
    let z = ScalarMatrix::zeros(field, 6, 3);
    let top = ScalarMatrix::hstack(field, 6, &[&a1, &b, &z]);
    let bottom = ScalarMatrix::hstack(field, 6, &[&a2, &z, &b]);
    let sys = ScalarMatrix::vstack(field, 9, &[&top, &bottom]);
    let mut rhs = q1.to_dense();
    rhs.extend(q2.to_dense());
    sys.solve(&rhs).is_some()
}

/// `[h ℓ; g q]` with `ℓ ≠ 0` and `ℓ ∤ q`.
pub fn x5_conditions(p: &Presentation) -> Result<Vec<StratumViolation>, StrataError> {
    require_shape(p, StratumLabel::X5)?;
    let (l, q) = (cell(p, 0, 1), cell(p, 1, 1));
    if l.is_zero() {
        return Ok(vec![StratumViolation::condition("ℓ = 0")]);
    }
    if divides(&l, &q).map_err(crate::presentation::PresentationError::from)? {
        return Ok(vec![StratumViolation::condition("ℓ divides q")]);
    }
    Ok(Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn p101() -> Field {
        Field::prime(101).unwrap()
    }

    fn messages(v: &[StratumViolation]) -> Vec<String> {
        v.iter().map(ToString::to_string).collect()
    }

    fn x3(l2: &str) -> Presentation {
        Presentation::parse(
            p101(),
            &[-3, -3, -1, -1],
            &[-2, 0, 0, 0],
            &[
                &["X", l2, "0", "0"],
                &["X^3 + Y^3", "Z^3", "X", "0"],
                &["Y^2*Z", "X*Y*Z + Z^3", "Y", "X"],
                &["X^2*Z", "Y^3 - X^3", "Z", "Y"],
            ],
        )
        .unwrap()
    }

    #[test]
    fn x3_example_is_ok() {
        assert_eq!(x3_conditions(&x3("Y")).unwrap(), vec![]);
        assert_eq!(
            messages(&x3_conditions(&x3("2*X")).unwrap()),
            vec!["φ_11 has dependent entries"]
        );
    }

    #[test]
    fn degenerate_x3_and_x5_keep_their_profile() {
        // The twists alone fix the profile of an injective matrix of these
        // shapes; only the matrix conditions see the degeneration.
        let bad = x3("2*X");
        assert!(!bad.fitting_determinant().unwrap().is_zero());
        assert_eq!(crate::strata::classify(&bad), Ok(StratumLabel::X3));
        let bad = x5("X", "X*Y");
        assert!(!bad.fitting_determinant().unwrap().is_zero());
        assert_eq!(crate::strata::classify(&bad), Ok(StratumLabel::X5));
    }

    fn x5(l: &str, q: &str) -> Presentation {
        Presentation::parse(p101(), &[-4, -1], &[0, 1], &[&["Y^4", l], &["X^5 + Z^5", q]]).unwrap()
    }

    #[test]
    fn x5_divisibility() {
        assert_eq!(messages(&x5_conditions(&x5("X", "X*Y")).unwrap()), vec!["ℓ divides q"]);
        assert!(x5_conditions(&x5("X", "Y^2")).unwrap().is_empty());
        assert_eq!(messages(&x5_conditions(&x5("0", "Y^2")).unwrap()), vec!["ℓ = 0"]);
        assert!(matches!(
            x5_conditions(&x3("Y")),
            Err(StrataError::WrongShape { .. })
        ));
    }

    fn x2(rows: &[&[&str]]) -> Presentation {
        Presentation::parse(p101(), &[-3, -2, -2, -1], &[-1, -1, 0, 0], rows).unwrap()
    }

    #[test]
    fn x2_conditions_examples() {
        let good = x2(&[
            &["Y^2", "X", "Y", "0"],
            &["Z^2 + X*Y", "Z", "X", "0"],
            &["X^3 + Z^3", "Y^2", "X*Z", "X"],
            &["Y^3", "Z^2", "X^2", "Y"],
        ]);
        assert!(x2_conditions(&good).unwrap().is_empty());
        let dep = x2(&[
            &["Y^2", "X", "Y", "0"],
            &["Z^2 + X*Y", "Z", "X", "0"],
            &["X^3 + Z^3", "Y^2", "X*Z", "X"],
            &["Y^3", "Z^2", "X^2", "2*X"],
        ]);
        assert_eq!(messages(&x2_conditions(&dep).unwrap()), vec!["ℓ_1, ℓ_2 dependent"]);
        let singular = x2(&[
            &["Y^2", "X", "Y", "0"],
            &["Z^2 + X*Y", "2*X", "2*Y", "0"],
            &["X^3 + Z^3", "Y^2", "X*Z", "X"],
            &["Y^3", "Z^2", "X^2", "Y"],
        ]);
        assert_eq!(
            messages(&x2_conditions(&singular).unwrap()),
            vec!["ℓ_11ℓ_22 - ℓ_12ℓ_21 = 0"]
        );
        // q1 = -ℓ12·X and q2 = -ℓ22·X give m1 = δ·X.
        let minors = x2(&[
            &["-X*Y", "X", "Y", "0"],
            &["-X^2", "Z", "X", "0"],
            &["X^3 + Z^3", "Y^2", "X*Z", "X"],
            &["Y^3", "Z^2", "X^2", "Y"],
        ]);
        assert_eq!(
            messages(&x2_conditions(&minors).unwrap()),
            vec!["minors dependent mod (δ)V*"]
        );
        let block = x2(&[
            &["Y^2", "X", "Y", "1"],
            &["Z^2 + X*Y", "Z", "X", "0"],
            &["X^3 + Z^3", "Y^2", "X*Z", "X"],
            &["Y^3", "Z^2", "X^2", "Y"],
        ]);
        assert_eq!(
            x2_conditions(&block).unwrap(),
            vec![StratumViolation::NonzeroBlock { row: 0, col: 3 }]
        );
    }

    fn x4(rows: &[&[&str]]) -> Presentation {
        Presentation::parse(p101(), &[-3, -3, -2], &[-2, -1, 1], rows).unwrap()
    }

    #[test]
    fn x4_case_ii_syzygy() {
        let bad = x4(&[
            &["X", "Y", "0"],
            &["X^2 + X*Z", "X*Y + Y*Z", "Z"],
            &["X^4", "Y^4", "Z^3"],
        ]);
        assert_eq!(x4_case(&bad).unwrap(), X4Case::II);
        assert_eq!(
            messages(&x4_conditions(&bad).unwrap()),
            vec!["(q_1, q_2) = u(ℓ_1, ℓ_2) + ℓ(v_1, v_2) has a solution"]
        );
        let good = x4(&[
            &["X", "Y", "0"],
            &["Y^2", "X^2", "Z"],
            &["X^4", "Y^4", "Z^3"],
        ]);
        assert!(x4_conditions(&good).unwrap().is_empty());
    }

    #[test]
    fn x4_case_i_common_factor() {
        let bad = x4(&[&["0", "0", "1"], &["X^2", "X*Y", "0"], &["Z^4", "Y^4", "0"]]);
        assert_eq!(x4_case(&bad).unwrap(), X4Case::I);
        assert_eq!(
            messages(&x4_conditions(&bad).unwrap()),
            vec!["q_1, q_2 have a common factor"]
        );
        let good = x4(&[&["0", "0", "1"], &["X^2 + Y*Z", "X*Y", "0"], &["Z^4", "Y^4", "0"]]);
        assert!(x4_conditions(&good).unwrap().is_empty());
        let moved = x4(&[&["X", "0", "1"], &["X^2 + Y*Z", "X*Y", "0"], &["Z^4", "Y^4", "0"]]);
        assert_eq!(x4_case(&moved), Err(StrataError::NotInNormalPosition));
    }

    #[test]
    fn x0_zero_column_is_unstable() {
        let f3 = Field::prime(3).unwrap();
        let p = Presentation::parse(
            f3,
            &[-2; 5],
            &[-1, -1, -1, -1, 0],
            &[
                &["X", "Y", "Z", "X+Y", "0"],
                &["Y", "Z", "X", "Z", "0"],
                &["Z", "X", "Y", "X-Z", "0"],
                &["X+Z", "Y", "Y+Z", "X", "0"],
                &["X^2", "Y^2", "Z^2", "X*Y", "Y*Z"],
            ],
        )
        .unwrap();
        assert_eq!(x0_condition(&p), Ok(false));
        assert_eq!(
            x0_violations(&p).unwrap(),
            vec![StratumViolation::Unstable { dim_s: 1, dim_t: 0 }]
        );
    }
}
