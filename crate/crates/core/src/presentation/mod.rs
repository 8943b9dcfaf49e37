//! Sheaves on the plane given by two-term resolutions
//! `0 → ⊕O(s_j) → ⊕O(d_i) → F → 0`.

mod cohomology;
mod io;

pub use cohomology::{CohomologyProfile, Resolution};
pub use io::{PresentationFile, FORMAT_VERSION};

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{det_poly, AlgebraError, Field, Form, PolyMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("presentation is not square ({rows}x{cols}); cohomology needs a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("presentation matrix is not injective (determinant vanishes)")]
    NotInjective,
    #[error("invalid presentation: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("malformed presentation: {0}")]
    Malformed(String),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Twists `d_1, …, d_k` of a direct sum `⊕ O(d_i)`, order preserved.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TwistVector(Vec<i32>);

impl TwistVector {
    pub fn new(twists: Vec<i32>) -> Result<Self, PresentationError> {
        if twists.is_empty() {
            return Err(PresentationError::Malformed("empty twist vector".into()));
        }
        Ok(TwistVector(twists))
    }

    pub fn as_slice(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().map(|&t| t as i64).sum()
    }

    /// Same twists as a sorted multiset, for order-insensitive comparisons.
    pub fn sorted(&self) -> Vec<i32> {
        let mut v = self.0.clone();
        v.sort_unstable();
        v
    }

    /// `t ↦ -2 - t`, the twist rule of the duality functor.
    pub fn dualized(&self) -> TwistVector {
        TwistVector(self.0.iter().map(|t| -2 - t).collect())
    }
}

impl fmt::Display for TwistVector {
    /// Renders `4O(-1)⊕O` style direct sums, grouping adjacent equal twists.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let t = self.0[i];
            let mut k = 1;
            while i + k < self.0.len() && self.0[i + k] == t {
                k += 1;
            }
            let sheaf = if t == 0 {
                "O".to_string()
            } else {
                format!("O({t})")
            };
            parts.push(if k == 1 { sheaf } else { format!("{k}{sheaf}") });
            i += k;
        }
        write!(f, "{}", parts.join("⊕"))
    }
}

/// A structural problem found by [`Presentation::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DegreeMismatch {
        row: usize,
        col: usize,
        expected: i64,
        found: u32,
    },
    ForcedZero {
        row: usize,
        col: usize,
    },
    NotSquare {
        rows: usize,
        cols: usize,
    },
    NotInjective,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegreeMismatch {
                row,
                col,
                expected,
                found,
            } => write!(
                f,
                "degree mismatch at ({row},{col}): expected {expected}, found {found}"
            ),
            Violation::ForcedZero { row, col } => {
                write!(f, "entry ({row},{col}) must be zero (negative degree)")
            }
            Violation::NotSquare { rows, cols } => write!(f, "not square ({rows}x{cols})"),
            Violation::NotInjective => write!(f, "not injective"),
        }
    }
}

/// Resolution data: source twists, target twists and the matrix of the map.
///
/// Entry `(i, j)` is a form of degree `d_i - s_j`, and is zero when that
/// difference is negative.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Presentation {
    source: TwistVector,
    target: TwistVector,
    matrix: PolyMatrix,
}

impl Presentation {
    /// Checks only that the matrix has `target.len()` rows and
    /// `source.len()` columns; degree checks live in [`validate`](Self::validate).
    pub fn new(
        source: TwistVector,
        target: TwistVector,
        matrix: PolyMatrix,
    ) -> Result<Self, PresentationError> {
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(PresentationError::Malformed(format!(
                "matrix is {}x{} but twists need {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.len(),
                source.len()
            )));
        }
        Ok(Presentation {
            source,
            target,
            matrix,
        })
    }

    /// Convenience constructor from raw twists and rows of forms.
    pub fn from_parts(
        field: Field,
        source: &[i32],
        target: &[i32],
        rows: Vec<Vec<Form>>,
    ) -> Result<Self, PresentationError> {
        let matrix = PolyMatrix::from_rows(field, rows)?;
        Self::new(
            TwistVector::new(source.to_vec())?,
            TwistVector::new(target.to_vec())?,
            matrix,
        )
    }

    /// Builds a presentation from parsed cell strings; `"0"` cells become
    /// zero forms of the degree the twists require.
    pub fn parse(
        field: Field,
        source: &[i32],
        target: &[i32],
        rows: &[&[&str]],
    ) -> Result<Self, PresentationError> {
        let mut forms = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            let mut r = Vec::with_capacity(row.len());
            for (j, cell) in row.iter().enumerate() {
                let f = if cell.trim() == "0" {
                    let d = target.get(i).copied().unwrap_or(0) - source.get(j).copied().unwrap_or(0);
                    Form::zero(field, d.max(0) as u32)
                } else {
                    Form::parse(field, cell)?
                };
                r.push(f);
            }
            forms.push(r);
        }
        Self::from_parts(field, source, target, forms)
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn source(&self) -> &TwistVector {
        &self.source
    }

    pub fn target(&self) -> &TwistVector {
        &self.target
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    pub fn entry(&self, i: usize, j: usize) -> &Form {
        self.matrix.get(i, j)
    }

    pub fn is_square(&self) -> bool {
        self.matrix.rows() == self.matrix.cols()
    }

    /// Degree required of entry `(i, j)`: `d_i - s_j`.
    pub fn entry_degree(&self, i: usize, j: usize) -> i64 {
        self.target.as_slice()[i] as i64 - self.source.as_slice()[j] as i64
    }

    /// Degree grid violations only (cell degrees and forced zeros).
    pub fn grid_violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for i in 0..self.matrix.rows() {
            for j in 0..self.matrix.cols() {
                let e = self.entry(i, j);
                let want = self.entry_degree(i, j);
                if want < 0 {
                    if !e.is_zero() {
                        out.push(Violation::ForcedZero { row: i, col: j });
                    }
                } else if !e.is_zero() && e.degree() as i64 != want {
                    out.push(Violation::DegreeMismatch {
                        row: i,
                        col: j,
                        expected: want,
                        found: e.degree(),
                    });
                }
            }
        }
        out
    }

    /// All structural violations: degree grid, squareness and injectivity.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = self.grid_violations();
        if !self.is_square() {
            out.push(Violation::NotSquare {
                rows: self.matrix.rows(),
                cols: self.matrix.cols(),
            });
        } else if out.is_empty() && self.determinant().is_zero() {
            out.push(Violation::NotInjective);
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    /// Multiplicity and Euler characteristic of the cokernel, from
    /// additivity of `χ(O(e)) = (e+1)(e+2)/2`.
    pub fn hilbert_polynomial(&self) -> Result<HilbertPoly, PresentationError> {
        if !self.is_square() {
            return Err(PresentationError::NotSquare {
                rows: self.matrix.rows(),
                cols: self.matrix.cols(),
            });
        }
        let chi_line = |e: i64| (e + 1) * (e + 2) / 2;
        let r = self.target.sum() - self.source.sum();
        let chi = self.target.as_slice().iter().map(|&d| chi_line(d as i64)).sum::<i64>()
            - self.source.as_slice().iter().map(|&s| chi_line(s as i64)).sum::<i64>();
        Ok(HilbertPoly { r, chi })
    }

    /// `det` of the matrix, a form of degree `Σd_i - Σs_j`.
    pub fn fitting_determinant(&self) -> Result<Form, PresentationError> {
        if !self.is_square() {
            return Err(PresentationError::NotSquare {
                rows: self.matrix.rows(),
                cols: self.matrix.cols(),
            });
        }
        let violations = self.grid_violations();
        if !violations.is_empty() {
            return Err(PresentationError::Invalid(violations));
        }
        Ok(self.determinant())
    }

    fn determinant(&self) -> Form {
        let deg = (self.target.sum() - self.source.sum()).max(0) as u32;
        let d = det_poly(&self.matrix).expect("square matrix");
        if d.is_zero() {
            Form::zero(self.field(), deg)
        } else {
            d
        }
    }

    /// Presentation of `Ext^1(F, ω)(1)`: transpose the matrix and send every
    /// twist `t` to `-2 - t`, swapping source and target.
    pub fn dual(&self) -> Presentation {
        Presentation {
            source: self.target.dualized(),
            target: self.source.dualized(),
            matrix: self.matrix.transpose(),
        }
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "0 -> {} -> {} -> F -> 0", self.source, self.target)?;
        write!(f, "{}", self.matrix)
    }
}

/// `P(m) = r·m + chi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPoly {
    pub r: i64,
    pub chi: i64,
}

impl HilbertPoly {
    pub fn eval(&self, m: i64) -> i64 {
        self.r * m + self.chi
    }
}

impl fmt::Display for HilbertPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.chi {
            0 => write!(f, "{}m", self.r),
            c if c < 0 => write!(f, "{}m - {}", self.r, -c),
            c => write!(f, "{}m + {}", self.r, c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p101() -> Field {
        Field::prime(101).unwrap()
    }

    fn x5_example() -> Presentation {
        Presentation::parse(
            p101(),
            &[-4, -1],
            &[0, 1],
            &[&["X^4 + Y^4 + Z^4", "X"], &["Y^5 + X*Z^4", "Y*Z"]],
        )
        .unwrap()
    }

    #[test]
    fn x5_shape_validates() {
        assert_eq!(x5_example().validate(), Ok(()));
    }

    #[test]
    fn wrong_degree_is_reported() {
        let p = Presentation::parse(p101(), &[-4, -1], &[0, 1], &[&["X^3", "X"], &["Y^5", "Y*Z"]])
            .unwrap();
        let v = p.validate().unwrap_err();
        assert_eq!(
            v,
            vec![Violation::DegreeMismatch {
                row: 0,
                col: 0,
                expected: 4,
                found: 3
            }]
        );
        assert!(v[0].to_string().starts_with("degree mismatch at (0,0)"));
    }

    #[test]
    fn equal_columns_are_not_injective() {
        let p = Presentation::parse(p101(), &[-1, -1], &[0, 0], &[&["X", "X"], &["Y", "Y"]]).unwrap();
        assert_eq!(p.validate(), Err(vec![Violation::NotInjective]));
        assert_eq!(Violation::NotInjective.to_string(), "not injective");
    }

    #[test]
    fn forced_zero_and_rectangular() {
        let p = Presentation::parse(p101(), &[-1, 0], &[-1], &[&["1", "X"]]).unwrap();
        let v = p.validate().unwrap_err();
        assert!(v.contains(&Violation::ForcedZero { row: 0, col: 1 }));
        assert!(v.contains(&Violation::NotSquare { rows: 1, cols: 2 }));
        assert!(matches!(
            p.hilbert_polynomial(),
            Err(PresentationError::NotSquare { .. })
        ));
    }

    #[test]
    fn hilbert_polynomials_of_shapes() {
        let zero = |d| Form::zero(p101(), d);
        let x0 = Presentation::from_parts(
            p101(),
            &[-2; 5],
            &[-1, -1, -1, -1, 0],
            vec![
                vec![zero(1); 5],
                vec![zero(1); 5],
                vec![zero(1); 5],
                vec![zero(1); 5],
                vec![zero(2); 5],
            ],
        )
        .unwrap();
        assert_eq!(x0.hilbert_polynomial().unwrap(), HilbertPoly { r: 6, chi: 1 });
        let sextic =
            Presentation::from_parts(p101(), &[-6], &[0], vec![vec![zero(6)]]).unwrap();
        assert_eq!(sextic.hilbert_polynomial().unwrap(), HilbertPoly { r: 6, chi: -9 });
        assert_eq!(x5_example().hilbert_polynomial().unwrap(), HilbertPoly { r: 6, chi: 1 });
        assert_eq!(HilbertPoly { r: 6, chi: -9 }.to_string(), "6m - 9");
    }

    #[test]
    fn dual_twists_and_involution() {
        let p = x5_example();
        let d = p.dual();
        assert_eq!(d.source().as_slice(), &[-2, -3]);
        assert_eq!(d.target().as_slice(), &[2, -1]);
        assert_eq!(d.hilbert_polynomial().unwrap(), HilbertPoly { r: 6, chi: 5 });
        assert_eq!(d.dual(), p);
        assert_eq!(d.validate(), Ok(()));
    }

    #[test]
    fn fitting_determinant_of_x5_is_hq_minus_lg() {
        let p = x5_example();
        let f = p.fitting_determinant().unwrap();
        let h = p.entry(0, 0);
        let l = p.entry(0, 1);
        let g = p.entry(1, 0);
        let q = p.entry(1, 1);
        assert_eq!(f, &(h * q) - &(l * g));
        assert_eq!(f.degree(), 6);
        assert_eq!(p.dual().fitting_determinant().unwrap(), f);
    }

    #[test]
    fn twist_vector_display() {
        let t = TwistVector::new(vec![-1, -1, -1, -1, 0]).unwrap();
        assert_eq!(t.to_string(), "4O(-1)⊕O");
        assert!(TwistVector::new(vec![]).is_err());
    }
}
