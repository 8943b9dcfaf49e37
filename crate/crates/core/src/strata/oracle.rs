//! Brute-force orbit search for the X1 shapes over `F_2`, where the
//! automorphism groups of `O(-3) ⊕ 2O(-2)` and `O(-1) ⊕ 2O` are finite
//! (384 elements each).

use rayon::prelude::*;

use super::x1::PatternId;
use super::{require_shape, StrataError, StratumLabel};
use crate::algebra::{Field, Form};
use crate::presentation::Presentation;

/// Polynomials of degree at most 3 over `F_2`, one bit per monomial.
type Poly = u32;

struct Ring {
    monomials: Vec<[u32; 3]>,
    product: Vec<Vec<Option<usize>>>,
}

impl Ring {
    fn new() -> Self {
        let mut monomials = Vec::new();
        for d in 0..=3u32 {
            for a in (0..=d).rev() {
                for b in (0..=d - a).rev() {
                    monomials.push([a, b, d - a - b]);
                }
            }
        }
        let product = monomials
            .iter()
            .map(|x| {
                monomials
                    .iter()
                    .map(|y| {
                        let e = [x[0] + y[0], x[1] + y[1], x[2] + y[2]];
                        monomials.iter().position(|m| *m == e)
                    })
                    .collect()
            })
            .collect();
        Ring { monomials, product }
    }

    fn index(&self, e: &[u32; 3]) -> usize {
        self.monomials.iter().position(|m| m == e).expect("degree <= 3")
    }

    fn from_form(&self, f: &Form) -> Poly {
        f.terms()
            .filter(|(_, c)| !c.is_zero())
            .fold(0, |acc, (m, _)| acc | 1 << self.index(&m.0))
    }

    fn mul(&self, a: Poly, b: Poly) -> Poly {
        let mut out = 0;
        for i in bits(a) {
            for j in bits(b) {
                out ^= 1 << self.product[i][j].expect("degree <= 3");
            }
        }
        out
    }

    /// The eight linear forms.
    fn linear_forms(&self) -> Vec<Poly> {
        let vars = [[1, 0, 0], [0, 1, 0], [0, 0, 1]].map(|e| 1u32 << self.index(&e));
        (0..8u32)
            .map(|mask| (0..3).filter(|k| mask >> k & 1 == 1).fold(0, |acc, k| acc ^ vars[k]))
            .collect()
    }
}

fn bits(x: Poly) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| x >> i & 1 == 1)
}

/// `GL_2(F_2)` as rows `[[a, b], [c, d]]`.
fn gl2() -> Vec<[[u32; 2]; 2]> {
    let mut out = Vec::new();
    for m in 0..16u32 {
        let g = [[m & 1, m >> 1 & 1], [m >> 2 & 1, m >> 3 & 1]];
        if (g[0][0] * g[1][1] + g[0][1] * g[1][0]) % 2 == 1 {
            out.push(g);
        }
    }
    out
}

/// Elements `[[1,0,0],[v1,g],[v2,g]]` with `g ∈ GL_2(F_2)` and `v1, v2`
/// linear. Source and target groups have the same shape.
fn group(ring: &Ring) -> Vec<[[Poly; 3]; 3]> {
    let one: Poly = 1;
    let lin = ring.linear_forms();
    let mut out = Vec::with_capacity(384);
    for g in gl2() {
        for &v1 in &lin {
            for &v2 in &lin {
                let e = |x: u32| if x == 1 { one } else { 0 };
                out.push([
                    [one, 0, 0],
                    [v1, e(g[0][0]), e(g[0][1])],
                    [v2, e(g[1][0]), e(g[1][1])],
                ]);
            }
        }
    }
    out
}

/// Whether `φ` is in the orbit of a matrix with the pattern's zero cells,
/// under `φ ↦ AφB`. Works over `F_2` only.
pub fn orbit_pattern_oracle(p: &Presentation, pattern: PatternId) -> Result<bool, StrataError> {
    require_shape(p, StratumLabel::X1)?;
    if p.field() != (Field::Prime { p: 2 }) {
        return Err(StrataError::NotF2);
    }
    let ring = Ring::new();
    let phi: [[Poly; 3]; 3] =
        std::array::from_fn(|i| std::array::from_fn(|j| ring.from_form(p.entry(i, j))));
    let group = group(&ring);
    let cells = pattern.zero_cells();
    Ok(group.par_iter().any(|a| {
        let mut a_phi = [[0 as Poly; 3]; 3];
        for (r, row) in a_phi.iter_mut().enumerate() {
            for (c, x) in row.iter_mut().enumerate() {
                *x = (0..3).fold(0, |acc, k| acc ^ ring.mul(a[r][k], phi[k][c]));
            }
        }
        group.iter().any(|b| {
            cells.iter().all(|&(r, c)| {
                (0..3).fold(0, |acc, k| acc ^ ring.mul(a_phi[r][k], b[k][c])) == 0
            })
        })
    }))
}
