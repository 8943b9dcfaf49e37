//! Dense scalar matrices with exact Gaussian elimination.

use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use super::field::{inv_mod, mul_mod, Field, Scalar};
use super::AlgebraError;

/// Row-major dense matrix over one [`Field`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn new(
        field: Field,
        rows: usize,
        cols: usize,
        entries: Vec<Scalar>,
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
        Ok(ScalarMatrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ScalarMatrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    /// Matrix from small integers, convenient in tests and examples.
    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(field, r, c, |i, j| Scalar::from_i64(field, rows[i][j]))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        assert!(columns.iter().all(|c| c.len() == rows), "column length");
        Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    /// Matrix whose rows are the given vectors.
    pub fn from_rows_vec(field: Field, cols: usize, rows: &[Vec<Scalar>]) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length");
        Self::from_fn(field, rows.len(), cols, |i, j| rows[i][j].clone())
    }

    pub fn row_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
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

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        debug_assert_eq!(v.field(), self.field);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn matmul(&self, rhs: &ScalarMatrix) -> ScalarMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape");
        let mut out = ScalarMatrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * rhs.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "mul_vec length");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.get(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = &acc + &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    /// Horizontal concatenation; all blocks must have the same row count.
    pub fn hstack(field: Field, rows: usize, blocks: &[&ScalarMatrix]) -> ScalarMatrix {
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = ScalarMatrix::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack row mismatch");
            out.paste(0, off, b);
            off += b.cols;
        }
        out
    }

    /// Vertical concatenation; all blocks must have the same column count.
    pub fn vstack(field: Field, cols: usize, blocks: &[&ScalarMatrix]) -> ScalarMatrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let mut out = ScalarMatrix::zeros(field, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.cols, cols, "vstack column mismatch");
            out.paste(off, 0, b);
            off += b.rows;
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &ScalarMatrix) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.entries[(r0 + i) * self.cols + c0 + j] = block.get(i, j).clone();
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> ScalarMatrix {
        ScalarMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        match self.field {
            Field::Prime { p } => {
                let mut d = self.residues();
                echelon(&ModP(p), self.rows, self.cols, &mut d, false).len()
            }
            Field::Rational => {
                let mut d = self.rationals();
                echelon(&Rat, self.rows, self.cols, &mut d, false).len()
            }
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (ScalarMatrix, Vec<usize>) {
        match self.field {
            Field::Prime { p } => {
                let mut d = self.residues();
                let piv = echelon(&ModP(p), self.rows, self.cols, &mut d, true);
                let entries = d.into_iter().map(|v| Scalar::Mod { value: v, p }).collect();
                (self.with_entries(entries), piv)
            }
            Field::Rational => {
                let mut d = self.rationals();
                let piv = echelon(&Rat, self.rows, self.cols, &mut d, true);
                let entries = d.into_iter().map(Scalar::Rational).collect();
                (self.with_entries(entries), piv)
            }
        }
    }

    /// A basis of the right kernel `{v : M v = 0}`, one vector per free
    /// column of the reduced echelon form (that free entry set to 1).
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let (r, piv) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &piv {
            is_pivot[c] = true;
        }
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !is_pivot[*c]) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (row, &pc) in piv.iter().enumerate() {
                v[pc] = -r.get(row, free);
            }
            out.push(v);
        }
        out
    }

    /// A solution of `M x = b` with every free variable set to zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows, "rhs length");
        let bcol = ScalarMatrix::from_columns(self.field, self.rows, &[b.to_vec()]);
        let aug = ScalarMatrix::hstack(self.field, self.rows, &[self, &bcol]);
        let (r, piv) = aug.rref();
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in piv.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    /// Basis of the column space, taken from the pivot columns of `self`.
    pub fn column_space_basis(&self) -> Vec<Vec<Scalar>> {
        let (_, piv) = self.rref();
        piv.into_iter().map(|c| self.column(c)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array(self.row(i).iter().map(Scalar::to_json).collect()))
                .collect(),
        )
    }

    fn with_entries(&self, entries: Vec<Scalar>) -> ScalarMatrix {
        ScalarMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    fn residues(&self) -> Vec<u64> {
        self.entries
            .iter()
            .map(|e| e.residue().expect("prime field entry"))
            .collect()
    }

    fn rationals(&self) -> Vec<BigRational> {
        self.entries
            .iter()
            .map(|e| e.as_rational().expect("rational entry").clone())
            .collect()
    }
}

impl fmt::Display for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of a matrix given as raw residues mod `p`, row-major.
/// Used by hot loops that never materialize [`Scalar`]s.
pub fn rank_mod_p(p: u64, rows: usize, cols: usize, data: &mut [u64]) -> usize {
    echelon(&ModP(p), rows, cols, data, false).len()
}

/// Field operations the elimination kernel needs.
trait Arith {
    type E: Clone;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn inv(&self, a: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    /// `a - b * c`
    fn sub_mul(&self, a: &Self::E, b: &Self::E, c: &Self::E) -> Self::E;
}

struct ModP(u64);

impl Arith for ModP {
    type E = u64;
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn inv(&self, a: &u64) -> u64 {
        inv_mod(*a, self.0)
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mul_mod(*a, *b, self.0)
    }
    #[inline]
    fn sub_mul(&self, a: &u64, b: &u64, c: &u64) -> u64 {
        let p = self.0;
        (a + p - mul_mod(*b, *c, p)) % p
    }
}

struct Rat;

impl Arith for Rat {
    type E = BigRational;
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        a.recip()
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn sub_mul(&self, a: &BigRational, b: &BigRational, c: &BigRational) -> BigRational {
        a - b * c
    }
}

/// In-place Gaussian elimination. Returns the pivot columns. With
/// `reduce` the result is the reduced row echelon form; without it only
/// rows below each pivot are cleared, which is all rank needs.
fn echelon<A: Arith>(ar: &A, rows: usize, cols: usize, d: &mut [A::E], reduce: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !ar.is_zero(&d[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                d.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = ar.inv(&d[r * cols + c]);
        for j in c..cols {
            let v = ar.mul(&d[r * cols + j], &inv);
            d[r * cols + j] = v;
        }
        let start = if reduce { 0 } else { r + 1 };
        for i in start..rows {
            if i == r {
                continue;
            }
            let f = d[i * cols + c].clone();
            if ar.is_zero(&f) {
                continue;
            }
            for j in c..cols {
                let pv = &d[r * cols + j];
                if ar.is_zero(pv) {
                    continue;
                }
                let v = ar.sub_mul(&d[i * cols + j], &f, pv);
                d[i * cols + j] = v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}
