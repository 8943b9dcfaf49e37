//! Kronecker modules `k^m → k^n ⊗ V*`, written as `n×m` matrices of linear
//! forms, and their semistability.
//!
//! Convention: the module is semistable iff `m·dim T ≥ n·dim S` for every
//! nonzero source subspace `S`, where `T` is the span of `K_x S` over the
//! three coefficient matrices `K_X, K_Y, K_Z`.

mod polarization;

pub use polarization::{
    c1_2, mu2_valid_22, mu2_window_22, polarization_valid_42, polarization_window_42,
    refined_valid_42, WindowReport,
};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{combinations, rank_mod_p, Field, PolyMatrix, Scalar, ScalarMatrix};

/// Largest `Σ_a |Gr(a, m)(F_p)|` the exact mode will enumerate.
pub const EXACT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KroneckerError {
    #[error("entry ({row},{col}) is not a linear form")]
    NotLinear { row: usize, col: usize },
    #[error("Kronecker module must have at least one row and one column")]
    Empty,
    #[error("exact mode needs a prime field")]
    NotPrimeField,
    #[error("subspace lattice has {needed} elements, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

/// `q(mn) - m² - n² + 1`, the dimension of `N(q, m, n)`.
pub fn moduli_dimension(q: i64, m: i64, n: i64) -> i64 {
    q * m * n - m * m - n * n + 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KroneckerModule {
    matrix: PolyMatrix,
    comps: [ScalarMatrix; 3],
}

impl KroneckerModule {
    pub fn new(matrix: PolyMatrix) -> Result<Self, KroneckerError> {
        if matrix.rows() == 0 || matrix.cols() == 0 {
            return Err(KroneckerError::Empty);
        }
        let field = matrix.field();
        let mut comps = [
            ScalarMatrix::zeros(field, matrix.rows(), matrix.cols()),
            ScalarMatrix::zeros(field, matrix.rows(), matrix.cols()),
            ScalarMatrix::zeros(field, matrix.rows(), matrix.cols()),
        ];
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                let e = matrix.get(i, j);
                if e.is_zero() {
                    continue;
                }
                if e.degree() != 1 {
                    return Err(KroneckerError::NotLinear { row: i, col: j });
                }
                for (mono, c) in e.terms() {
                    comps[mono.index()].set(i, j, c.clone());
                }
            }
        }
        Ok(KroneckerModule { matrix, comps })
    }

    /// Target dimension (rows).
    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    /// Source dimension (columns).
    pub fn m(&self) -> usize {
        self.matrix.cols()
    }

    pub fn field(&self) -> Field {
        self.matrix.field()
    }

    pub fn matrix(&self) -> &PolyMatrix {
        &self.matrix
    }

    /// Coefficient matrix of `X`, `Y` or `Z`.
    pub fn component(&self, var: usize) -> &ScalarMatrix {
        &self.comps[var]
    }

    /// Span of `K_x s` for `s` in `s_basis`, as a reduced basis.
    pub fn image_span(&self, s_basis: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        let images: Vec<Vec<Scalar>> = s_basis
            .iter()
            .flat_map(|s| self.comps.iter().map(move |k| k.mul_vec(s)))
            .collect();
        row_basis(self.field(), self.n(), &images)
    }

    /// Largest `S` with `K_x S ⊆ T` for all `x`.
    pub fn preimage(&self, t_basis: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        let field = self.field();
        let n = self.n();
        let t = ScalarMatrix::from_columns(field, n, t_basis).transpose();
        let annihilator = if t_basis.is_empty() {
            ScalarMatrix::identity(field, n).row_vectors()
        } else {
            ScalarMatrix::from_rows_vec(field, n, &t.kernel_basis()).row_vectors()
        };
        if annihilator.is_empty() {
            return ScalarMatrix::identity(field, self.m()).row_vectors();
        }
        let q = ScalarMatrix::from_rows_vec(field, n, &annihilator);
        let blocks: Vec<ScalarMatrix> = self.comps.iter().map(|k| q.matmul(k)).collect();
        let refs: Vec<&ScalarMatrix> = blocks.iter().collect();
        ScalarMatrix::vstack(field, self.m(), &refs).kernel_basis()
    }

    fn witness(&self, s_basis: Vec<Vec<Scalar>>) -> Option<Witness> {
        let t_basis = self.image_span(&s_basis);
        let w = Witness::new(self, s_basis, t_basis);
        (w.slope_deficit > 0).then_some(w)
    }

    /// Witness with `T = 0` from the common kernel of the three components.
    fn kernel_witness(&self) -> Option<Witness> {
        let refs: Vec<&ScalarMatrix> = self.comps.iter().collect();
        let stacked = ScalarMatrix::vstack(self.field(), self.m(), &refs);
        let ker = stacked.kernel_basis();
        if ker.is_empty() {
            None
        } else {
            self.witness(ker)
        }
    }
}

/// A pair `(S, T)` with `K_x S ⊆ T`; destabilizing when `slope_deficit > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub s_basis: Vec<Vec<Scalar>>,
    pub t_basis: Vec<Vec<Scalar>>,
    pub dim_s: usize,
    pub dim_t: usize,
    /// `n·dim S - m·dim T`.
    pub slope_deficit: i64,
}

impl Witness {
    fn new(k: &KroneckerModule, s_basis: Vec<Vec<Scalar>>, t_basis: Vec<Vec<Scalar>>) -> Self {
        let dim_s = s_basis.len();
        let dim_t = t_basis.len();
        Witness {
            s_basis,
            t_basis,
            dim_s,
            dim_t,
            slope_deficit: (k.n() * dim_s) as i64 - (k.m() * dim_t) as i64,
        }
    }

    /// Recomputes the dimensions and the containment `K_x S ⊆ T`.
    pub fn check(&self, k: &KroneckerModule) -> bool {
        let field = k.field();
        let s_rank = row_basis(field, k.m(), &self.s_basis).len();
        let t_rank = row_basis(field, k.n(), &self.t_basis).len();
        if s_rank != self.dim_s || t_rank != self.dim_t || self.dim_s == 0 {
            return false;
        }
        let mut all = self.t_basis.clone();
        all.extend(k.image_span(&self.s_basis));
        row_basis(field, k.n(), &all).len() == t_rank
            && self.slope_deficit == (k.n() * self.dim_s) as i64 - (k.m() * self.dim_t) as i64
    }

    pub fn to_json(&self) -> serde_json::Value {
        let enc = |vs: &[Vec<Scalar>]| {
            serde_json::Value::Array(
                vs.iter()
                    .map(|v| serde_json::Value::Array(v.iter().map(Scalar::to_json).collect()))
                    .collect(),
            )
        };
        serde_json::json!({
            "dimS": self.dim_s,
            "dimT": self.dim_t,
            "S_basis": enc(&self.s_basis),
            "T_basis": enc(&self.t_basis),
            "slope_deficit": self.slope_deficit,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exhaustive enumeration of source subspaces over a small prime field.
    ExactSmallField,
    /// Semi-invariant certificate plus random witness search.
    Randomized { seed: u64, trials: usize },
}

impl Default for Mode {
    fn default() -> Self {
        Mode::Randomized {
            seed: 0,
            trials: 200,
        }
    }
}

/// How a semistable verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// Every nonzero source subspace was checked.
    Exhaustive { subspaces: u128 },
    /// A nonvanishing semi-invariant of a test representation of dimension
    /// `(w1, w2)`: its injectivity bounds every subrepresentation.
    Certificate { w1: usize, w2: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Semistable(Evidence),
    Unstable(Witness),
    Unknown { trials: usize },
}

impl Verdict {
    pub fn is_semistable(&self) -> bool {
        matches!(self, Verdict::Semistable(_))
    }

    pub fn is_unstable(&self) -> bool {
        matches!(self, Verdict::Unstable(_))
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Verdict::Semistable(e) => serde_json::json!({"verdict": "semistable", "evidence": e}),
            Verdict::Unstable(w) => serde_json::json!({"verdict": "unstable", "witness": w.to_json()}),
            Verdict::Unknown { trials } => serde_json::json!({"verdict": "unknown", "trials": trials}),
        }
    }
}

pub fn is_semistable(k: &KroneckerModule, mode: Mode) -> Result<Verdict, KroneckerError> {
    if let Some(w) = k.kernel_witness() {
        return Ok(Verdict::Unstable(w));
    }
    match mode {
        Mode::ExactSmallField => exact(k),
        Mode::Randomized { seed, trials } => Ok(randomized(k, seed, trials)),
    }
}

/// Number of nonzero subspaces of `F_p^m`, grouped by pivot pattern.
pub fn lattice_size(p: u64, m: usize) -> u128 {
    (1..=m)
        .flat_map(|a| combinations(m, a))
        .map(|pat| (p as u128).saturating_pow(free_positions(&pat, m).len() as u32))
        .fold(0u128, |acc, x| acc.saturating_add(x))
}

fn free_positions(pivots: &[usize], m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, &c) in pivots.iter().enumerate() {
        for j in c + 1..m {
            if !pivots.contains(&j) {
                out.push((r, j));
            }
        }
    }
    out
}

fn exact(k: &KroneckerModule) -> Result<Verdict, KroneckerError> {
    let Field::Prime { p } = k.field() else {
        return Err(KroneckerError::NotPrimeField);
    };
    let (n, m) = (k.n(), k.m());
    let total = lattice_size(p, m);
    if total > EXACT_BUDGET {
        return Err(KroneckerError::BudgetExceeded {
            needed: total,
            budget: EXACT_BUDGET,
        });
    }
    let comps: Vec<Vec<u64>> = k
        .comps
        .iter()
        .map(|c| (0..n * m).map(|i| c.get(i / m, i % m).residue().unwrap()).collect())
        .collect();
    for a in 1..=m {
        let found: Vec<Option<Vec<Vec<u64>>>> = combinations(m, a)
            .par_iter()
            .map(|pat| search_pattern(&comps, p, n, m, pat))
            .collect();
        if let Some(basis) = found.into_iter().flatten().next() {
            let s_basis = basis
                .into_iter()
                .map(|v| v.into_iter().map(|x| Scalar::Mod { value: x, p }).collect())
                .collect();
            return Ok(Verdict::Unstable(k.witness(s_basis).expect("destabilizing")));
        }
    }
    Ok(Verdict::Semistable(Evidence::Exhaustive { subspaces: total }))
}

/// First destabilizing subspace with the given pivot columns, free entries
/// in odometer order (last free position fastest).
fn search_pattern(
    comps: &[Vec<u64>],
    p: u64,
    n: usize,
    m: usize,
    pivots: &[usize],
) -> Option<Vec<Vec<u64>>> {
    let a = pivots.len();
    let free = free_positions(pivots, m);
    let mut digits = vec![0u64; free.len()];
    let mut images = vec![0u64; 3 * a * n];
    loop {
        let mut basis = vec![vec![0u64; m]; a];
        for (r, &c) in pivots.iter().enumerate() {
            basis[r][c] = 1;
        }
        for (&(r, j), &d) in free.iter().zip(&digits) {
            basis[r][j] = d;
        }
        for (x, comp) in comps.iter().enumerate() {
            for (r, s) in basis.iter().enumerate() {
                let row = &mut images[(x * a + r) * n..(x * a + r + 1) * n];
                for (i, out) in row.iter_mut().enumerate() {
                    let mut acc = 0u64;
                    for (j, &sj) in s.iter().enumerate() {
                        if sj != 0 {
                            acc = (acc + comp[i * m + j] * sj) % p;
                        }
                    }
                    *out = acc;
                }
            }
        }
        let dim_t = rank_mod_p(p, 3 * a, n, &mut images.clone());
        if n * a > m * dim_t {
            return Some(basis);
        }
        let mut pos = free.len();
        loop {
            if pos == 0 {
                return None;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < p {
                break;
            }
            digits[pos] = 0;
        }
    }
}

fn randomized(k: &KroneckerModule, seed: u64, trials: usize) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let full: Vec<Vec<Scalar>> = ScalarMatrix::identity(k.field(), k.m()).row_vectors();
    if let Some(w) = k.witness(full) {
        return Verdict::Unstable(w);
    }
    if let Some(e) = certificate(k, &mut rng) {
        return Verdict::Semistable(e);
    }
    for _ in 0..trials {
        let a = 1 + (rng.next_u64() % k.m() as u64) as usize;
        let s: Vec<Vec<Scalar>> = (0..a).map(|_| random_vector(k.field(), k.m(), &mut rng)).collect();
        let s = row_basis(k.field(), k.m(), &s);
        let t = k.image_span(&s);
        if let Some(w) = k.witness(k.preimage(&t)) {
            return Verdict::Unstable(w);
        }
        let b = (rng.next_u64() % k.n() as u64) as usize;
        let t: Vec<Vec<Scalar>> = (0..b).map(|_| random_vector(k.field(), k.n(), &mut rng)).collect();
        let t = row_basis(k.field(), k.n(), &t);
        let s = k.preimage(&t);
        if !s.is_empty() {
            if let Some(w) = k.witness(s) {
                return Verdict::Unstable(w);
            }
        }
    }
    Verdict::Unknown { trials }
}

/// Tries test representations `W` of dimension `c·(n, 3n - m)/gcd(m, n)`
/// for `c = 1, 2`. The map `(f1, f2) ↦ (K_x f1 - f2 W_x)_x` is square; when
/// it is injective, so is its restriction to any subrepresentation
/// `(S, T)`, which gives `w1·dim S + w2·dim T ≤ 3·w1·dim T`, i.e.
/// `n·dim S ≤ m·dim T`.
fn certificate(k: &KroneckerModule, rng: &mut ChaCha8Rng) -> Option<Evidence> {
    let (n, m) = (k.n(), k.m());
    if m > 3 * n {
        return None;
    }
    let g = gcd(m, n);
    let field = k.field();
    for c in 1..=2 {
        let w1 = c * n / g;
        let w2 = c * (3 * n - m) / g;
        for _ in 0..3 {
            let ws: Vec<ScalarMatrix> = (0..3)
                .map(|_| {
                    ScalarMatrix::from_rows_vec(
                        field,
                        w1,
                        &(0..w2).map(|_| random_vector(field, w1, rng)).collect::<Vec<_>>(),
                    )
                })
                .collect();
            let size = 3 * n * w1;
            let mut d = ScalarMatrix::zeros(field, size, size);
            for (x, kx) in k.comps.iter().enumerate() {
                for i in 0..n {
                    for col in 0..w1 {
                        let row = (x * n + i) * w1 + col;
                        for j in 0..m {
                            let v = kx.get(i, j);
                            if !v.is_zero() {
                                d.set(row, j * w1 + col, v.clone());
                            }
                        }
                        for r in 0..w2 {
                            let v = ws[x].get(r, col);
                            if !v.is_zero() {
                                d.set(row, m * w1 + i * w2 + r, -v);
                            }
                        }
                    }
                }
            }
            if d.rank() == size {
                return Some(Evidence::Certificate { w1, w2 });
            }
        }
    }
    None
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Uniform vector over `F_p`, or small integers in `[-50, 50]` over `Q`.
fn random_vector(field: Field, len: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..len)
        .map(|_| match field {
            Field::Prime { p } => Scalar::Mod {
                value: rng.next_u64() % p,
                p,
            },
            Field::Rational => Scalar::from_i64(field, (rng.next_u64() % 101) as i64 - 50),
        })
        .collect()
}

/// Nonzero rows of the reduced echelon form of the given vectors.
fn row_basis(field: Field, len: usize, vectors: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let (r, pivots) = ScalarMatrix::from_rows_vec(field, len, vectors).rref();
    (0..pivots.len()).map(|i| r.row(i)).collect()
}
