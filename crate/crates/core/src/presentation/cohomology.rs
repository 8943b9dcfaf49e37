//! Cohomology of the cokernel sheaf read off from ranks of induced maps on
//! global sections.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Presentation, PresentationError, Violation};
use crate::algebra::{basis_len, mult_map, Form, PolyMatrix, ScalarMatrix};

/// `(h0(F(-1)), h1(F), h0(F ⊗ Ω¹(1)), h1(F(1)))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CohomologyProfile {
    pub h0_minus1: usize,
    pub h1_0: usize,
    pub h0_omega: usize,
    pub h1_1: usize,
}

impl CohomologyProfile {
    pub fn as_tuple(&self) -> (usize, usize, usize, usize) {
        (self.h0_minus1, self.h1_0, self.h0_omega, self.h1_1)
    }
}

impl fmt::Display for CohomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.h0_minus1, self.h1_0, self.h0_omega, self.h1_1
        )
    }
}

/// A presentation checked to be a resolution: square, degree grid respected,
/// nonzero determinant. All cohomology operations go through this type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    presentation: Presentation,
}

impl TryFrom<Presentation> for Resolution {
    type Error = PresentationError;

    fn try_from(p: Presentation) -> Result<Self, Self::Error> {
        Resolution::new(p)
    }
}

impl Resolution {
    pub fn new(presentation: Presentation) -> Result<Self, PresentationError> {
        match presentation.validate() {
            Ok(()) => Ok(Resolution { presentation }),
            Err(v) => match v.as_slice() {
                [Violation::NotSquare { rows, cols }] => Err(PresentationError::NotSquare {
                    rows: *rows,
                    cols: *cols,
                }),
                [Violation::NotInjective] => Err(PresentationError::NotInjective),
                _ => Err(PresentationError::Invalid(v)),
            },
        }
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn into_presentation(self) -> Presentation {
        self.presentation
    }

    /// `h0(F(t)) = Σ h0(O(d_i+t)) - rank(H0(⊕O(s_j+t)) → H0(⊕O(d_i+t)))`.
    pub fn h0(&self, t: i32) -> usize {
        let p = &self.presentation;
        let target: Vec<i64> = shifted(p.target.as_slice(), t);
        let source: Vec<i64> = shifted(p.source.as_slice(), t);
        let m = sections_map(&p.matrix, &source, &target);
        total_sections(&target) - m.rank()
    }

    /// By Serre duality `h1(F(t))` is the cokernel dimension of the transposed
    /// map `H0(⊕O(-d_i-3-t)) → H0(⊕O(-s_j-3-t))`.
    pub fn h1(&self, t: i32) -> usize {
        let p = &self.presentation;
        let new_source: Vec<i64> = p.target.as_slice().iter().map(|&d| -(d as i64) - 3 - t as i64).collect();
        let new_target: Vec<i64> = p.source.as_slice().iter().map(|&s| -(s as i64) - 3 - t as i64).collect();
        let m = sections_map(&p.matrix.transpose(), &new_source, &new_target);
        total_sections(&new_target) - m.rank()
    }

    /// `h0(F ⊗ Ω¹(1))`, using `0 → Ω¹(1) → O³ → O(1) → 0`:
    /// the kernel of `H0(F)³ → H0(F(1))` given by `(f1,f2,f3) ↦ Xf1+Yf2+Zf3`.
    pub fn h0_omega(&self) -> usize {
        let p = &self.presentation;
        let field = p.field();
        let b0: Vec<i64> = shifted(p.target.as_slice(), 0);
        let b1: Vec<i64> = shifted(p.target.as_slice(), 1);
        let a0: Vec<i64> = shifted(p.source.as_slice(), 0);
        let a1: Vec<i64> = shifted(p.source.as_slice(), 1);
        let m0 = sections_map(&p.matrix, &a0, &b0);
        let m1 = sections_map(&p.matrix, &a1, &b1);
        let hb = total_sections(&b0);
        let rows = total_sections(&b1);
        let mut l = ScalarMatrix::zeros(field, rows, 3 * hb + m1.cols());
        for v in 0..3 {
            let var = Form::var(field, v);
            let (mut r0, mut c0) = (0, v * hb);
            for &d in &b0 {
                if d >= 0 {
                    l.paste(r0, c0, &mult_map(&var, d).expect("non-negative degree"));
                }
                r0 += basis_len(d + 1);
                c0 += basis_len(d);
            }
        }
        l.paste(0, 3 * hb, &m1);
        let rank_m0 = m0.rank();
        let rank_m1 = m1.rank();
        3 * hb + rank_m1 - l.rank() - 3 * rank_m0
    }

    pub fn profile(&self) -> CohomologyProfile {
        CohomologyProfile {
            h0_minus1: self.h0(-1),
            h1_0: self.h1(0),
            h0_omega: self.h0_omega(),
            h1_1: self.h1(1),
        }
    }
}

fn shifted(twists: &[i32], t: i32) -> Vec<i64> {
    twists.iter().map(|&x| x as i64 + t as i64).collect()
}

fn total_sections(twists: &[i64]) -> usize {
    twists.iter().map(|&e| basis_len(e)).sum()
}

/// Block matrix of the map `⊕H0(O(a_j)) → ⊕H0(O(b_i))` induced by `phi`,
/// block `(i, j)` being multiplication by `phi_ij` on degree `a_j` forms.
fn sections_map(phi: &PolyMatrix, a: &[i64], b: &[i64]) -> ScalarMatrix {
    let rows = total_sections(b);
    let cols = total_sections(a);
    let mut out = ScalarMatrix::zeros(phi.field(), rows, cols);
    let mut r0 = 0;
    for (i, &bi) in b.iter().enumerate() {
        let mut c0 = 0;
        for (j, &aj) in a.iter().enumerate() {
            let e = phi.get(i, j);
            if aj >= 0 && bi >= 0 && !e.is_zero() {
                out.paste(r0, c0, &mult_map(e, aj).expect("non-negative degree"));
            }
            c0 += basis_len(aj);
        }
        r0 += basis_len(bi);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn p101() -> Field {
        Field::prime(101).unwrap()
    }

    fn x5() -> Resolution {
        Presentation::parse(
            p101(),
            &[-4, -1],
            &[0, 1],
            &[&["X^4 + Y^4 + Z^4", "X"], &["Y^5 + X*Z^4", "Y*Z"]],
        )
        .unwrap()
        .try_into()
        .unwrap()
    }

    #[test]
    fn structure_sheaf_of_sextic() {
        let r: Resolution = Presentation::parse(p101(), &[-6], &[0], &[&["X^6 + Y^6 + Z^6"]])
            .unwrap()
            .try_into()
            .unwrap();
        assert_eq!(r.h0(0), 1);
        assert_eq!(r.h1(0), 10);
        assert_eq!(r.h0(-1), 0);
        assert_eq!(r.h1(3), 1);
        for t in -4..8 {
            let chi = r.presentation().hilbert_polynomial().unwrap().eval(t as i64);
            assert_eq!(r.h0(t) as i64 - r.h1(t) as i64, chi, "t = {t}");
        }
    }

    #[test]
    fn x5_sample_profile() {
        let r = x5();
        assert_eq!(r.h0(-1), 1);
        assert_eq!(r.h1(0), 3);
        assert_eq!(r.h0_omega(), 4);
        assert_eq!(r.profile().as_tuple(), (1, 3, 4, 1));
    }

    #[test]
    fn euler_characteristic_holds_on_x5() {
        let r = x5();
        let hp = r.presentation().hilbert_polynomial().unwrap();
        for t in -5..6 {
            assert_eq!(r.h0(t) as i64 - r.h1(t) as i64, hp.eval(t as i64), "t = {t}");
        }
    }

    #[test]
    fn rectangular_and_singular_rejected() {
        let rect = Presentation::parse(p101(), &[-1, -1], &[0], &[&["X", "Y"]]).unwrap();
        assert!(matches!(
            Resolution::new(rect),
            Err(PresentationError::NotSquare { rows: 1, cols: 2 })
        ));
        let sing = Presentation::parse(p101(), &[-1, -1], &[0, 0], &[&["X", "X"], &["Y", "Y"]])
            .unwrap();
        assert_eq!(Resolution::new(sing), Err(PresentationError::NotInjective));
    }
}
