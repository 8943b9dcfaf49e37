//! Homogeneous forms in the variables X, Y, Z.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{Field, Scalar};
use super::matrix::ScalarMatrix;
use super::AlgebraError;

/// Exponent triple `(e_X, e_Y, e_Z)`.
///
/// Ordered by total degree first, then so that within one degree the
/// graded-lexicographic basis (X > Y > Z) comes out in ascending order:
/// `X^2 < XY < XZ < Y^2 < YZ < Z^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const fn new(x: u32, y: u32, z: u32) -> Self {
        Monomial([x, y, z])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    /// Position of this monomial in `monomial_basis(self.degree())`.
    pub fn index(&self) -> usize {
        let d = self.degree() as usize;
        let j = d - self.0[0] as usize;
        j * (j + 1) / 2 + (j - self.0[1] as usize)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Number of monomials of degree `d` in three variables, zero for `d < 0`.
pub fn basis_len(d: i64) -> usize {
    if d < 0 {
        0
    } else {
        let d = d as usize;
        (d + 1) * (d + 2) / 2
    }
}

/// The monomials of degree `d` in graded-lex order with X > Y > Z.
///
/// This order fixes the coordinates of every coefficient vector and
/// matrix in the crate and is part of the file format.
pub fn monomial_basis(d: i64) -> Result<Vec<Monomial>, AlgebraError> {
    if d < 0 {
        return Err(AlgebraError::NegativeDegree(d));
    }
    let d = d as u32;
    let mut out = Vec::with_capacity(basis_len(d as i64));
    for a in (0..=d).rev() {
        for b in (0..=d - a).rev() {
            out.push(Monomial::new(a, b, d - a - b));
        }
    }
    Ok(out)
}

/// A homogeneous polynomial of fixed degree.
///
/// Only nonzero coefficients are stored, so the zero form of each degree
/// has an empty coefficient map.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    field: Field,
    degree: u32,
    coeffs: BTreeMap<Monomial, Scalar>,
}

impl Form {
    pub fn zero(field: Field, degree: u32) -> Self {
        Form {
            field,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar) -> Self {
        Form::monomial(c, Monomial::new(0, 0, 0))
    }

    pub fn monomial(c: Scalar, m: Monomial) -> Self {
        let mut f = Form::zero(c.field(), m.degree());
        if !c.is_zero() {
            f.coeffs.insert(m, c);
        }
        f
    }

    /// `X`, `Y` or `Z` for `i = 0, 1, 2`.
    pub fn var(field: Field, i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        Form::monomial(field.one(), Monomial(e))
    }

    /// Builds a form of the given degree from `(coefficient, monomial)` terms.
    /// Repeated monomials are summed.
    pub fn from_terms<I>(field: Field, degree: u32, terms: I) -> Result<Self, AlgebraError>
    where
        I: IntoIterator<Item = (Scalar, Monomial)>,
    {
        let mut f = Form::zero(field, degree);
        for (c, m) in terms {
            if m.degree() != degree {
                return Err(AlgebraError::DegreeMismatch {
                    expected: degree as i64,
                    found: m.degree() as i64,
                });
            }
            if c.field() != field {
                return Err(AlgebraError::FieldMismatch);
            }
            f.add_term(&m, &c);
        }
        Ok(f)
    }

    /// Reads a coefficient vector in `monomial_basis(degree)` order.
    pub fn from_dense(field: Field, degree: u32, coeffs: &[Scalar]) -> Self {
        let basis = monomial_basis(degree as i64).expect("non-negative degree");
        assert_eq!(basis.len(), coeffs.len(), "coefficient vector length");
        let mut f = Form::zero(field, degree);
        for (m, c) in basis.into_iter().zip(coeffs) {
            if !c.is_zero() {
                f.coeffs.insert(m, c.clone());
            }
        }
        f
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.coeffs
            .get(m)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero terms in basis order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient vector in `monomial_basis(degree)` order.
    pub fn to_dense(&self) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); basis_len(self.degree as i64)];
        for (m, c) in &self.coeffs {
            v[m.index()] = c.clone();
        }
        v
    }

    /// The same form viewed as a form of a different degree; only allowed
    /// for the zero form or when the degree is unchanged.
    pub fn with_degree(&self, degree: u32) -> Result<Self, AlgebraError> {
        if degree == self.degree || self.is_zero() {
            let mut f = self.clone();
            f.degree = degree;
            Ok(f)
        } else {
            Err(AlgebraError::DegreeMismatch {
                expected: degree as i64,
                found: self.degree as i64,
            })
        }
    }

    fn add_term(&mut self, m: &Monomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(m) {
            Some(existing) => {
                let s = &*existing + c;
                if s.is_zero() {
                    self.coeffs.remove(m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.coeffs.insert(*m, c.clone());
            }
        }
    }

    pub fn scale(&self, c: &Scalar) -> Form {
        let mut out = Form::zero(self.field, self.degree);
        if c.is_zero() {
            return out;
        }
        for (m, a) in &self.coeffs {
            out.coeffs.insert(*m, a * c);
        }
        out
    }

    pub fn try_add(&self, other: &Form) -> Result<Form, AlgebraError> {
        if self.field != other.field {
            return Err(AlgebraError::FieldMismatch);
        }
        let degree = if self.degree == other.degree || other.is_zero() {
            self.degree
        } else if self.is_zero() {
            other.degree
        } else {
            return Err(AlgebraError::DegreeMismatch {
                expected: self.degree as i64,
                found: other.degree as i64,
            });
        };
        let mut out = self.clone();
        out.degree = degree;
        for (m, c) in &other.coeffs {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Form) -> Result<Form, AlgebraError> {
        self.try_add(&-other)
    }

    pub fn pow(&self, k: u32) -> Form {
        let mut acc = Form::constant(self.field.one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Evaluates at a point of the affine cone.
    pub fn eval(&self, point: &[Scalar; 3]) -> Scalar {
        let mut acc = self.field.zero();
        for (m, c) in &self.coeffs {
            let mut t = c.clone();
            for (k, e) in m.0.iter().enumerate() {
                for _ in 0..*e {
                    t = &t * &point[k];
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// JSON encoding: a list of `[coefficient, e_X, e_Y, e_Z]` in basis order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|(m, c)| serde_json::json!([c.to_json(), m.0[0], m.0[1], m.0[2]]))
                .collect(),
        )
    }

    /// Decodes the JSON term list. The degree of a nonzero form is read off
    /// its exponents; `degree_hint` is used for the zero form and checked
    /// otherwise when present.
    pub fn from_json(
        field: Field,
        v: &serde_json::Value,
        degree_hint: Option<u32>,
    ) -> Result<Form, AlgebraError> {
        let terms = v
            .as_array()
            .ok_or_else(|| AlgebraError::Parse(format!("form must be a list of terms, got {v}")))?;
        let mut parsed = Vec::with_capacity(terms.len());
        for t in terms {
            let t = t.as_array().filter(|t| t.len() == 4).ok_or_else(|| {
                AlgebraError::Parse(format!("term must be [coeff, eX, eY, eZ], got {t}"))
            })?;
            let c = Scalar::from_json(field, &t[0])?;
            let mut e = [0u32; 3];
            for k in 0..3 {
                e[k] = t[k + 1]
                    .as_u64()
                    .and_then(|x| u32::try_from(x).ok())
                    .ok_or_else(|| AlgebraError::Parse(format!("bad exponent in {t:?}")))?;
            }
            parsed.push((c, Monomial(e)));
        }
        let degree = match (parsed.first(), degree_hint) {
            (Some((_, m)), _) => m.degree(),
            (None, Some(d)) => d,
            (None, None) => 0,
        };
        if let (Some(h), false) = (degree_hint, parsed.is_empty()) {
            if h != degree {
                return Err(AlgebraError::DegreeMismatch {
                    expected: h as i64,
                    found: degree as i64,
                });
            }
        }
        Form::from_terms(field, degree, parsed)
    }

    /// Parses expressions such as `X^2 - 3*Y*Z + 1/2*Z^2`. All terms must
    /// have the same degree; the empty string and `0` are rejected because
    /// they carry no degree (use [`Form::zero`]).
    pub fn parse(field: Field, s: &str) -> Result<Form, AlgebraError> {
        let bad = |msg: &str| AlgebraError::Parse(format!("{msg} in {s:?}"));
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty expression"));
        }
        let mut terms = Vec::new();
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let (neg, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ => (false, rest),
            };
            let end = body[1.min(body.len())..]
                .find(['+', '-'])
                .map(|i| i + 1)
                .unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let mut coeff = field.one();
            let mut exps = [0u32; 3];
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(bad("empty factor"));
                }
                let first = factor.chars().next().unwrap();
                if let Some(k) = "XYZ".find(first.to_ascii_uppercase()) {
                    let e = match factor[1..].strip_prefix('^') {
                        Some(e) => e.parse::<u32>().map_err(|_| bad("bad exponent"))?,
                        None if factor.len() == 1 => 1,
                        None => return Err(bad("bad variable factor")),
                    };
                    exps[k] += e;
                } else {
                    let r = super::field::parse_rational(factor)?;
                    coeff = &coeff * &Scalar::rational(field, r)?;
                }
            }
            if neg {
                coeff = -&coeff;
            }
            terms.push((coeff, Monomial(exps)));
        }
        let degree = terms[0].1.degree();
        Form::from_terms(field, degree, terms)
    }
}

/// Matrix of multiplication by `f` from degree `b` to degree `deg f + b`.
///
/// Rows are indexed by `monomial_basis(deg f + b)`, columns by
/// `monomial_basis(b)`; the column of `m` holds the coefficients of `f·m`.
pub fn mult_map(f: &Form, b: i64) -> Result<ScalarMatrix, AlgebraError> {
    let cols = monomial_basis(b)?;
    let rows = basis_len(f.degree() as i64 + b);
    let mut out = ScalarMatrix::zeros(f.field(), rows, cols.len());
    for (j, m) in cols.iter().enumerate() {
        for (fm, c) in f.terms() {
            out.set(fm.mul(m).index(), j, c.clone());
        }
    }
    Ok(out)
}

impl<'a> Add<&'a Form> for &'a Form {
    type Output = Form;
    fn add(self, rhs: &'a Form) -> Form {
        self.try_add(rhs).expect("form addition")
    }
}

impl<'a> Sub<&'a Form> for &'a Form {
    type Output = Form;
    fn sub(self, rhs: &'a Form) -> Form {
        self.try_sub(rhs).expect("form subtraction")
    }
}

impl<'a> Mul<&'a Form> for &'a Form {
    type Output = Form;
    fn mul(self, rhs: &'a Form) -> Form {
        assert_eq!(self.field, rhs.field, "field mismatch");
        let mut out = Form::zero(self.field, self.degree + rhs.degree);
        for (ma, a) in &self.coeffs {
            for (mb, b) in &rhs.coeffs {
                out.add_term(&ma.mul(mb), &(a * b));
            }
        }
        out
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        let mut out = Form::zero(self.field, self.degree);
        for (m, c) in &self.coeffs {
            out.coeffs.insert(*m, -c);
        }
        out
    }
}

impl Add for Form {
    type Output = Form;
    fn add(self, rhs: Form) -> Form {
        &self + &rhs
    }
}

impl Sub for Form {
    type Output = Form;
    fn sub(self, rhs: Form) -> Form {
        &self - &rhs
    }
}

impl Mul for Form {
    type Output = Form;
    fn mul(self, rhs: Form) -> Form {
        &self * &rhs
    }
}

impl Neg for Form {
    type Output = Form;
    fn neg(self) -> Form {
        -&self
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.coeffs.iter().enumerate() {
            let (neg, mag) = c.signed_repr();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if mag != "1" || m.degree() == 0 {
                factors.push(mag);
            }
            for (k, name) in ["X", "Y", "Z"].iter().enumerate() {
                match m.0[k] {
                    0 => {}
                    1 => factors.push((*name).to_string()),
                    e => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    #[test]
    fn basis_small_degrees() {
        assert_eq!(monomial_basis(0).unwrap(), vec![Monomial::new(0, 0, 0)]);
        assert_eq!(
            monomial_basis(1).unwrap(),
            vec![
                Monomial::new(1, 0, 0),
                Monomial::new(0, 1, 0),
                Monomial::new(0, 0, 1)
            ]
        );
        assert_eq!(monomial_basis(3).unwrap().len(), 10);
        assert_eq!(
            monomial_basis(2).unwrap(),
            vec![
                Monomial::new(2, 0, 0),
                Monomial::new(1, 1, 0),
                Monomial::new(1, 0, 1),
                Monomial::new(0, 2, 0),
                Monomial::new(0, 1, 1),
                Monomial::new(0, 0, 2)
            ]
        );
        assert!(matches!(
            monomial_basis(-1),
            Err(AlgebraError::NegativeDegree(-1))
        ));
    }

    #[test]
    fn basis_lengths_and_indices() {
        for d in 0..=8 {
            let basis = monomial_basis(d).unwrap();
            assert_eq!(basis.len(), ((d + 1) * (d + 2) / 2) as usize);
            for (i, m) in basis.iter().enumerate() {
                assert_eq!(m.index(), i);
            }
            assert!(basis.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn mult_map_examples() {
        let one = Form::constant(q().one());
        let m = mult_map(&one, 2).unwrap();
        assert_eq!(m, ScalarMatrix::identity(q(), 6));

        let x = Form::var(q(), 0);
        let m = mult_map(&x, 0).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 1));
        assert_eq!(m.column(0), vec![q().one(), q().zero(), q().zero()]);

        let xy = Form::parse(q(), "X+Y").unwrap();
        let m = mult_map(&xy, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (6, 3));
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn parse_and_display() {
        let f = Form::parse(q(), "X^2 - 3*Y*Z + 1/2*Z^2").unwrap();
        assert_eq!(f.degree(), 2);
        assert_eq!(f.to_string(), "X^2 - 3*Y*Z + 1/2*Z^2");
        let p = Field::prime(101).unwrap();
        let g = Form::parse(p, "X^6 + Y^6").unwrap();
        assert_eq!(g.to_string(), "X^6 + Y^6");
        assert_eq!(Form::parse(p, "-X*Y").unwrap().to_string(), "-X*Y");
        assert!(Form::parse(q(), "X^2 + Y").is_err());
    }

    #[test]
    fn json_round_trip_and_zero_degree_hint() {
        let p = Field::prime(101).unwrap();
        let f = Form::parse(p, "3*X^2 + Y*Z").unwrap();
        let j = f.to_json();
        assert_eq!(j, serde_json::json!([[3, 2, 0, 0], [1, 0, 1, 1]]));
        assert_eq!(Form::from_json(p, &j, None).unwrap(), f);
        let z = Form::from_json(p, &serde_json::json!([]), Some(4)).unwrap();
        assert_eq!(z, Form::zero(p, 4));
        assert!(Form::from_json(p, &j, Some(3)).is_err());
    }

    #[test]
    fn arithmetic() {
        let x = Form::var(q(), 0);
        let y = Form::var(q(), 1);
        let d = &(&x + &y) * &(&x - &y);
        assert_eq!(d, Form::parse(q(), "X^2 - Y^2").unwrap());
        assert!((&d - &d).is_zero());
        assert_eq!((&d - &d).degree(), 2);
        assert!(x.try_add(&d).is_err());
    }
}
