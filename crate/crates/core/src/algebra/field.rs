//! Exact base fields: the rationals and prime fields `F_p`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::AlgebraError;

/// Largest modulus accepted for prime fields. Products of two residues
/// must fit in a `u64`.
pub const MAX_PRIME: u64 = u32::MAX as u64;

/// The field all scalars of a computation live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Field {
    Rational,
    Prime { p: u64 },
}

impl Field {
    /// Prime field `F_p`, checking that `p` is a prime below [`MAX_PRIME`].
    pub fn prime(p: u64) -> Result<Self, AlgebraError> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Field::Prime { p })
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime { p } => *p,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime { p } => Some(*p),
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::from_i64(*self, 0)
    }

    pub fn one(&self) -> Scalar {
        Scalar::from_i64(*self, 1)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime { p } => write!(f, "F_{p}"),
        }
    }
}

impl std::str::FromStr for Field {
    type Err = AlgebraError;

    /// Parses `q`, `rational`, or `p:<prime>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") || t.eq_ignore_ascii_case("rational") {
            return Ok(Field::Rational);
        }
        if let Some(rest) = t.strip_prefix("p:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| AlgebraError::Parse(format!("bad prime in field spec {s:?}")))?;
            return Field::prime(p);
        }
        Err(AlgebraError::Parse(format!("unknown field spec {s:?}")))
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element tagged with its field.
///
/// Residues mod `p` are always canonical representatives in `[0, p)`.
/// Mixing elements of different fields in arithmetic is a programming
/// error and panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Mod { value: u64, p: u64 },
}

impl Scalar {
    pub fn from_i64(field: Field, n: i64) -> Self {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime { p } => Scalar::Mod {
                value: n.rem_euclid(p as i64) as u64,
                p,
            },
        }
    }

    /// Residue `value mod p`; `value` need not be reduced.
    pub fn from_u64(field: Field, value: u64) -> Self {
        match field {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(value))),
            Field::Prime { p } => Scalar::Mod { value: value % p, p },
        }
    }

    pub fn rational(field: Field, r: BigRational) -> Result<Self, AlgebraError> {
        match field {
            Field::Rational => Ok(Scalar::Rational(r)),
            Field::Prime { p } => {
                let num = mod_bigint(r.numer(), p);
                let den = mod_bigint(r.denom(), p);
                if den == 0 {
                    return Err(AlgebraError::DivisionByZero);
                }
                Ok(Scalar::Mod {
                    value: mul_mod(num, inv_mod(den, p), p),
                    p,
                })
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Mod { p, .. } => Field::Prime { p: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Mod { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Mod { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Result<Scalar, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: inv_mod(*value, *p),
                p: *p,
            },
        })
    }

    pub fn checked_div(&self, rhs: &Scalar) -> Result<Scalar, AlgebraError> {
        Ok(self * &rhs.inv()?)
    }

    /// A square root in the same field, if one exists.
    pub fn sqrt(&self) -> Option<Scalar> {
        match self {
            Scalar::Rational(r) => {
                if r.is_negative() {
                    return None;
                }
                let (n, d) = (r.numer(), r.denom());
                let (sn, sd) = (n.sqrt(), d.sqrt());
                (&sn * &sn == *n && &sd * &sd == *d)
                    .then(|| Scalar::Rational(BigRational::new(sn, sd)))
            }
            Scalar::Mod { value, p } => {
                sqrt_mod(*value, *p).map(|v| Scalar::Mod { value: v, p: *p })
            }
        }
    }

    /// Residue value for prime-field elements.
    pub fn residue(&self) -> Option<u64> {
        match self {
            Scalar::Mod { value, .. } => Some(*value),
            Scalar::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(r) => Some(r),
            Scalar::Mod { .. } => None,
        }
    }

    /// JSON encoding shared by every file format: prime-field elements are
    /// integers in `[0, p)`, rationals are `"n"` or `"n/d"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Scalar::Mod { value, .. } => serde_json::Value::from(*value),
            Scalar::Rational(r) => serde_json::Value::from(format_rational(r)),
        }
    }

    pub fn from_json(field: Field, v: &serde_json::Value) -> Result<Self, AlgebraError> {
        match field {
            Field::Prime { p } => {
                let n = v.as_u64().ok_or_else(|| {
                    AlgebraError::Parse(format!("expected integer residue, got {v}"))
                })?;
                if n >= p {
                    return Err(AlgebraError::Parse(format!(
                        "residue {n} not canonical in [0, {p})"
                    )));
                }
                Ok(Scalar::Mod { value: n, p })
            }
            Field::Rational => {
                let s = v.as_str().ok_or_else(|| {
                    AlgebraError::Parse(format!("expected rational string, got {v}"))
                })?;
                Ok(Scalar::Rational(parse_rational(s)?))
            }
        }
    }
}

fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational, AlgebraError> {
    let bad = || AlgebraError::Parse(format!("malformed rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.trim().parse().map_err(|_| bad())?;
    let d: BigInt = d.trim().parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(AlgebraError::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => write!(f, "{}", format_rational(r)),
            Scalar::Mod { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Scalar {
    /// Signed display used by the form printer: rationals print as
    /// themselves, residues above `p/2` print as negative numbers.
    pub(crate) fn signed_repr(&self) -> (bool, String) {
        match self {
            Scalar::Rational(r) => (r.is_negative(), format_rational(&r.abs())),
            Scalar::Mod { value, p } => {
                if *value > p / 2 {
                    (true, (p - value).to_string())
                } else {
                    (false, value.to_string())
                }
            }
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                Scalar::Mod {
                    value: (a + b) % p,
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a - b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                Scalar::Mod {
                    value: (a + p - b) % p,
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Mod { value: a, p }, Scalar::Mod { value: b, p: q }) if p == q => {
                Scalar::Mod {
                    value: mul_mod(*a, *b, *p),
                    p: *p,
                }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Mod { value, p } => Scalar::Mod {
                value: (p - value) % p,
                p: *p,
            },
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a * b) % p
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Tonelli–Shanks square root of `a` modulo the prime `p`.
fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let (mut q, mut s) = (p - 1, 0u32);
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let z = (2..p).find(|&z| pow_mod(z, (p - 1) / 2, p) == p - 1)?;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Inverse of a nonzero residue via Fermat.
#[inline]
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

fn mod_bigint(n: &BigInt, p: u64) -> u64 {
    let r = n % BigInt::from(p);
    let r = if r.is_negative() { r + BigInt::from(p) } else { r };
    r.to_u64().expect("residue fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic_is_canonical() {
        let f = Field::prime(101).unwrap();
        let a = Scalar::from_i64(f, -3);
        assert_eq!(a.residue(), Some(98));
        let b = Scalar::from_i64(f, 5);
        assert_eq!((&a * &b).residue(), Some(86));
        assert_eq!((&a + &b).residue(), Some(2));
        assert!((&(&a * &a.inv().unwrap()) - &f.one()).is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        for field in [Field::Rational, Field::prime(7).unwrap()] {
            assert_eq!(field.zero().inv(), Err(AlgebraError::DivisionByZero));
            assert!(field.one().checked_div(&field.zero()).is_err());
        }
    }

    #[test]
    fn non_primes_are_rejected() {
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(100).is_err());
        assert!(Field::prime(32003).is_ok());
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    fn rational_reduces_into_prime_field() {
        let f = Field::prime(7).unwrap();
        let half = Scalar::rational(f, BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(half.residue(), Some(4));
        assert!(Scalar::rational(f, BigRational::new(1.into(), 7.into())).is_err());
    }

    #[test]
    fn json_encoding_round_trips() {
        let q = Scalar::Rational(BigRational::new((-3).into(), 4.into()));
        assert_eq!(q.to_json(), serde_json::json!("-3/4"));
        assert_eq!(Scalar::from_json(Field::Rational, &q.to_json()).unwrap(), q);
        let f = Field::prime(101).unwrap();
        let r = Scalar::from_i64(f, 77);
        assert_eq!(Scalar::from_json(f, &r.to_json()).unwrap(), r);
        assert!(Scalar::from_json(f, &serde_json::json!(101)).is_err());
    }

    #[test]
    fn field_spec_parsing() {
        assert_eq!("p:101".parse::<Field>().unwrap(), Field::Prime { p: 101 });
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rational);
        assert!("p:12".parse::<Field>().is_err());
        let json = serde_json::to_string(&Field::Prime { p: 101 }).unwrap();
        assert_eq!(json, r#"{"kind":"prime","p":101}"#);
        assert_eq!(serde_json::to_string(&Field::Rational).unwrap(), r#"{"kind":"rational"}"#);
    }

    #[test]
    fn square_roots() {
        for p in [2u64, 3, 5, 13, 17, 101, 32003, 65537] {
            let f = Field::prime(p).unwrap();
            let mut squares = 0;
            for a in 0..p.min(2000) {
                let x = Scalar::from_u64(f, a);
                if let Some(r) = x.sqrt() {
                    assert_eq!(&r * &r, x);
                    squares += 1;
                } else {
                    assert!((0..p).all(|b| (b * b) % p != a), "missed root of {a} mod {p}");
                }
            }
            assert!(squares > 0);
        }
        let q = Field::Rational;
        let r = Scalar::rational(q, parse_rational("9/4").unwrap()).unwrap();
        assert_eq!(r.sqrt(), Some(Scalar::rational(q, parse_rational("3/2").unwrap()).unwrap()));
        assert_eq!(Scalar::from_i64(q, 2).sqrt(), None);
        assert_eq!(Scalar::from_i64(q, -4).sqrt(), None);
    }
}
