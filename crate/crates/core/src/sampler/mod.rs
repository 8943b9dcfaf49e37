//! Seeded rejection sampling of normal forms, and the X5 constructor
//! `f = hq - ℓg`.
//!
//! Stream contract: a ChaCha8 generator seeded with `seed_from_u64(seed)`
//! and read with raw `next_u64` calls. A residue mod `p` is drawn by
//! rejecting `x >= (u64::MAX / p) * p` and returning `x % p`; a rational
//! coefficient is a residue mod 11 shifted to `[-5, 5]`. Each attempt draws
//! the free cells row by row, each cell's coefficients in basis order.
//! For X4 an attempt first draws one word whose low bit picks case (i)
//! (bit 0) or (ii) (bit 1). Batches derive per-sample seeds with
//! [`split_seed`].

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{basis_len, divides, mult_map, Field, Form, Scalar, ScalarMatrix};
use crate::presentation::{Presentation, PresentationError, PresentationFile, TwistVector};
use crate::strata::{validate_shape, StratumLabel, X4Case};

pub const DEFAULT_MAX_REJECTS: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleMetadata {
    pub stratum: StratumLabel,
    pub seed: u64,
    pub field: Field,
    pub rejects: usize,
    /// X4 normal form, `"i"` or `"ii"`; `null` for the other strata.
    pub case: Option<X4Case>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleRequest {
    pub label: StratumLabel,
    pub field: Field,
    pub seed: u64,
    pub max_rejects: usize,
    /// Sampling over `Q` draws small integers; it has to be asked for.
    pub allow_rational: bool,
}

impl SampleRequest {
    pub fn new(label: StratumLabel, field: Field, seed: u64) -> Self {
        SampleRequest {
            label,
            field,
            seed,
            max_rejects: DEFAULT_MAX_REJECTS,
            allow_rational: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("rejection budget exceeded after {rejects} rejects (last: {last_violation})")]
    RejectionBudgetExceeded { rejects: usize, last_violation: String },
    #[error("max_rejects must be at least 1")]
    ZeroBudget,
    #[error("rational sampling is disabled for this request")]
    RationalDisabled,
    #[error("f is not in the ideal (ℓ, q) in degree 6")]
    MembershipFailure,
    #[error("ℓ divides q")]
    DivisibilityFailure,
    #[error("ℓ must be a nonzero linear form")]
    ZeroLinearForm,
    #[error("{what} must have degree {expected}, found {found}")]
    Degree {
        what: &'static str,
        expected: u32,
        found: u32,
    },
    #[error(transparent)]
    Presentation(#[from] PresentationError),
}

/// The `index`-th child of `seed`: the `index + 1`-th output of the
/// SplitMix64 sequence started at `seed`.
pub fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn draw_residue(rng: &mut ChaCha8Rng, p: u64) -> u64 {
    let zone = (u64::MAX / p) * p;
    loop {
        let x = rng.next_u64();
        if x < zone {
            return x % p;
        }
    }
}

pub(crate) fn draw_scalar(rng: &mut ChaCha8Rng, field: Field) -> Scalar {
    match field {
        Field::Prime { p } => Scalar::from_u64(field, draw_residue(rng, p)),
        Field::Rational => Scalar::from_i64(field, draw_residue(rng, 11) as i64 - 5),
    }
}

pub(crate) fn draw_form(rng: &mut ChaCha8Rng, field: Field, degree: i64) -> Form {
    let coeffs: Vec<Scalar> = (0..basis_len(degree)).map(|_| draw_scalar(rng, field)).collect();
    Form::from_dense(field, degree as u32, &coeffs)
}

/// What a cell of a normal form holds.
#[derive(Clone, Copy)]
enum Cell {
    Free,
    Zero,
    One,
}

fn layout(label: StratumLabel, case: Option<X4Case>) -> Vec<Vec<Cell>> {
    use Cell::{Free as F, One as I, Zero as O};
    let (s, t) = label.shape();
    let mut cells = vec![vec![F; s.len()]; t.len()];
    let mut set = |list: &[(usize, usize)], c: Cell| {
        for &(i, j) in list {
            cells[i][j] = c;
        }
    };
    match label {
        StratumLabel::X2 => set(&[(0, 3), (1, 3)], O),
        StratumLabel::X3 => set(&[(0, 2), (0, 3)], O),
        StratumLabel::X4 => match case.expect("X4 needs a case") {
            X4Case::I => {
                set(&[(0, 0), (0, 1), (1, 2), (2, 2)], O);
                set(&[(0, 2)], I);
            }
            X4Case::II => set(&[(0, 2)], O),
        },
        _ => {}
    }
    cells
}

fn draw_presentation(
    rng: &mut ChaCha8Rng,
    label: StratumLabel,
    field: Field,
    case: Option<X4Case>,
) -> Result<Presentation, PresentationError> {
    let (s, t) = label.shape();
    let rows = layout(label, case)
        .into_iter()
        .enumerate()
        .map(|(i, row)| {
            row.into_iter()
                .enumerate()
                .map(|(j, c)| {
                    let d = (t[i] - s[j]) as i64;
                    match c {
                        Cell::Free => draw_form(rng, field, d),
                        Cell::Zero => Form::zero(field, d.max(0) as u32),
                        Cell::One => Form::constant(field.one()),
                    }
                })
                .collect()
        })
        .collect();
    Presentation::from_parts(field, s, t, rows)
}

fn draw_case(rng: &mut ChaCha8Rng, label: StratumLabel) -> Option<X4Case> {
    (label == StratumLabel::X4).then(|| {
        if rng.next_u64() & 1 == 0 {
            X4Case::I
        } else {
            X4Case::II
        }
    })
}

/// One attempt of the stream for `seed`, without any validation: the first
/// matrix [`sample`] would look at.
pub fn draw_unvalidated(label: StratumLabel, field: Field, seed: u64) -> Presentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let case = draw_case(&mut rng, label);
    draw_presentation(&mut rng, label, field, case).expect("shapes are consistent")
}

/// Draws normal forms of `req.label` until one passes every validator and
/// has a nonzero determinant.
pub fn sample(req: &SampleRequest) -> Result<PresentationFile, SampleError> {
    if req.max_rejects == 0 {
        return Err(SampleError::ZeroBudget);
    }
    if req.field == Field::Rational && !req.allow_rational {
        return Err(SampleError::RationalDisabled);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let mut rejects = 0;
    loop {
        let case = draw_case(&mut rng, req.label);
        let p = draw_presentation(&mut rng, req.label, req.field, case)?;
        let last_violation = match validate_shape(&p, req.label).first() {
            Some(v) => v.to_string(),
            None if p.fitting_determinant()?.is_zero() => "determinant vanishes".to_string(),
            None => {
                return Ok(PresentationFile {
                    presentation: p,
                    metadata: Some(SampleMetadata {
                        stratum: req.label,
                        seed: req.seed,
                        field: req.field,
                        rejects,
                        case,
                    }),
                })
            }
        };
        rejects += 1;
        if rejects >= req.max_rejects {
            return Err(SampleError::RejectionBudgetExceeded {
                rejects,
                last_violation,
            });
        }
    }
}

/// `count` samples with seeds `split_seed(req.seed, i)`, in index order.
pub fn sample_batch(req: &SampleRequest, count: u64) -> Vec<Result<PresentationFile, SampleError>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            sample(&SampleRequest {
                seed: split_seed(req.seed, i),
                ..*req
            })
        })
        .collect()
}

/// The X5 presentation `[[h, ℓ], [g, q]]` with `hq - ℓg = f`. The pair
/// `(h, g)` is only defined up to `(h + ℓc, g + qc)`; the solution with
/// every free echelon variable set to zero is returned.
pub fn construct_x5(f: &Form, l: &Form, q: &Form) -> Result<Presentation, SampleError> {
    for (what, form, expected) in [("f", f, 6), ("ℓ", l, 1), ("q", q, 2)] {
        if form.degree() != expected {
            return Err(SampleError::Degree {
                what,
                expected,
                found: form.degree(),
            });
        }
    }
    if l.is_zero() {
        return Err(SampleError::ZeroLinearForm);
    }
    let to_err = PresentationError::from;
    if divides(l, q).map_err(to_err)? {
        return Err(SampleError::DivisibilityFailure);
    }
    let field = f.field();
    let hq = mult_map(q, 4).map_err(to_err)?;
    let lg = mult_map(l, 5).map_err(to_err)?.scale(&-&field.one());
    let sys = ScalarMatrix::hstack(field, basis_len(6), &[&hq, &lg]);
    let x = sys.solve(&f.to_dense()).ok_or(SampleError::MembershipFailure)?;
    let nh = basis_len(4);
    let h = Form::from_dense(field, 4, &x[..nh]);
    let g = Form::from_dense(field, 5, &x[nh..]);
    let (s, t) = StratumLabel::X5.shape();
    Ok(Presentation::from_parts(
        field,
        s,
        t,
        vec![vec![h, l.clone()], vec![g, q.clone()]],
    )?)
}

/// Twist shape of the dual presentation of a stratum's normal form.
pub fn dual_shape(label: StratumLabel) -> (TwistVector, TwistVector) {
    let (s, t) = label.shape();
    let s = TwistVector::new(s.to_vec()).expect("nonempty");
    let t = TwistVector::new(t.to_vec()).expect("nonempty");
    (t.dualized(), s.dualized())
}
