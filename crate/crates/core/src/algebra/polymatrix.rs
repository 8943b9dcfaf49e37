//! Matrices of homogeneous forms.

use std::collections::HashMap;
use std::fmt;

use super::field::Field;
use super::form::Form;
use super::AlgebraError;

/// Row-major matrix of [`Form`]s. Cells may have different degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Form>,
}

impl PolyMatrix {
    pub fn new(
        field: Field,
        rows: usize,
        cols: usize,
        entries: Vec<Form>,
    ) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if entries.iter().any(|e| e.field() != field) {
            return Err(AlgebraError::FieldMismatch);
        }
        Ok(PolyMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Form>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::Shape("ragged rows".into()));
        }
        Self::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Parses every cell with [`Form::parse`]; `"0"` cells become zero forms
    /// of degree 0.
    pub fn parse(field: Field, rows: &[&[&str]]) -> Result<Self, AlgebraError> {
        let parsed = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        if cell.trim() == "0" {
                            Ok(Form::zero(field, 0))
                        } else {
                            Form::parse(field, cell)
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(field, parsed)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Form {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: Form) {
        assert_eq!(f.field(), self.field, "field mismatch");
        self.entries[i * self.cols + j] = f;
    }

    pub fn entries(&self) -> &[Form] {
        &self.entries
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// The submatrix on the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> PolyMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        PolyMatrix {
            field: self.field,
            rows: rows.len(),
            cols: cols.len(),
            entries,
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| {
                    serde_json::Value::Array(
                        (0..self.cols).map(|j| self.get(i, j).to_json()).collect(),
                    )
                })
                .collect(),
        )
    }
}

impl fmt::Display for PolyMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Determinant of a square matrix of forms by Laplace expansion along the
/// rows, memoizing the minors on the remaining column sets.
///
/// The determinant of the empty matrix is the constant 1.
pub fn det_poly(m: &PolyMatrix) -> Result<Form, AlgebraError> {
    if m.rows != m.cols {
        return Err(AlgebraError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if m.rows > 20 {
        return Err(AlgebraError::Shape(format!(
            "determinant of a {}x{} matrix is out of range",
            m.rows, m.cols
        )));
    }
    let full: u32 = if m.cols == 0 { 0 } else { (1u32 << m.cols) - 1 };
    let mut memo = HashMap::new();
    Ok(minor_rec(m, 0, full, &mut memo))
}

fn minor_rec(m: &PolyMatrix, row: usize, cols: u32, memo: &mut HashMap<u32, Form>) -> Form {
    if cols == 0 {
        return Form::constant(m.field.one());
    }
    if let Some(f) = memo.get(&cols) {
        return f.clone();
    }
    let mut acc: Option<Form> = None;
    let mut position = 0;
    for j in 0..m.cols {
        if cols & (1 << j) == 0 {
            continue;
        }
        let entry = m.get(row, j);
        if !entry.is_zero() {
            let sub = minor_rec(m, row + 1, cols & !(1 << j), memo);
            if !sub.is_zero() {
                let mut term = entry * &sub;
                if position % 2 == 1 {
                    term = -term;
                }
                acc = Some(match acc {
                    None => term,
                    Some(a) => &a + &term,
                });
            }
        }
        position += 1;
    }
    let out = acc.unwrap_or_else(|| Form::zero(m.field, 0));
    memo.insert(cols, out.clone());
    out
}

/// All maximal minors of a matrix with `rows >= cols`, one per row subset of
/// size `cols`, row subsets in lexicographic order.
pub fn maximal_minors(m: &PolyMatrix) -> Result<Vec<Form>, AlgebraError> {
    if m.rows < m.cols {
        return Err(AlgebraError::Shape(format!(
            "maximal minors need rows >= cols, got {}x{}",
            m.rows, m.cols
        )));
    }
    let cols: Vec<usize> = (0..m.cols).collect();
    combinations(m.rows, m.cols)
        .into_iter()
        .map(|rows| det_poly(&m.submatrix(&rows, &cols)))
        .collect()
}

/// k-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for t in i..k {
            cur[t] = cur[t - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn diagonal_determinant() {
        let m = PolyMatrix::parse(q(), &[&["X", "0"], &["0", "Y"]]).unwrap();
        assert_eq!(det_poly(&m).unwrap(), Form::parse(q(), "X*Y").unwrap());
    }

    #[test]
    fn two_by_two_determinant_is_hq_minus_lg() {
        let m = PolyMatrix::parse(q(), &[&["Y^4", "X"], &["-X^5", "Y^2"]]).unwrap();
        assert_eq!(det_poly(&m).unwrap(), Form::parse(q(), "X^6 + Y^6").unwrap());
    }

    #[test]
    fn row_swap_flips_sign() {
        let m = PolyMatrix::parse(
            q(),
            &[&["X", "Y", "Z"], &["Y", "Z+X", "X"], &["Z", "X", "2*Y"]],
        )
        .unwrap();
        let d = det_poly(&m).unwrap();
        let mut s = m.clone();
        s.swap_rows(0, 2);
        assert_eq!(det_poly(&s).unwrap(), -&d);
    }

    #[test]
    fn non_square_is_rejected() {
        let m = PolyMatrix::parse(q(), &[&["X", "Y"]]).unwrap();
        assert!(matches!(det_poly(&m), Err(AlgebraError::NotSquare { .. })));
    }

    #[test]
    fn maximal_minors_of_three_by_two() {
        let m = PolyMatrix::parse(q(), &[&["X", "0"], &["Y", "X"], &["Z", "Y"]]).unwrap();
        let minors = maximal_minors(&m).unwrap();
        let expect: Vec<Form> = ["X^2", "X*Y", "Y^2 - X*Z"]
            .iter()
            .map(|s| Form::parse(q(), s).unwrap())
            .collect();
        assert_eq!(minors, expect);
    }

    #[test]
    fn maximal_minor_with_equal_rows_vanishes() {
        let m = PolyMatrix::parse(q(), &[&["X", "Y"], &["X", "Y"], &["Z", "X"]]).unwrap();
        let minors = maximal_minors(&m).unwrap();
        assert!(minors[0].is_zero());
        let sq = PolyMatrix::parse(q(), &[&["X", "Y"], &["Z", "X"]]).unwrap();
        assert_eq!(maximal_minors(&sq).unwrap(), vec![det_poly(&sq).unwrap()]);
        assert!(maximal_minors(&sq.submatrix(&[0], &[0, 1])).is_err());
    }

    #[test]
    fn combinations_lex() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(3, 0), vec![Vec::<usize>::new()]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }
}
