use proptest::prelude::*;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sextic_strata::algebra::{
    common_factor, det_poly, divides, monomial_basis, mult_map, Field, Form, PolyMatrix, Scalar,
    ScalarMatrix,
};
use sextic_strata::kronecker::{is_semistable, KroneckerModule, Mode};
use sextic_strata::presentation::{Presentation, Resolution};
use sextic_strata::sampler::{sample, SampleRequest};
use sextic_strata::strata::{classify, validate_shape, x4_conditions, StratumLabel};

fn form_from(field: Field, degree: u32, coeffs: &[i64]) -> Form {
    let n = monomial_basis(degree as i64).unwrap().len();
    let c: Vec<Scalar> = (0..n)
        .map(|i| Scalar::from_i64(field, coeffs.get(i).copied().unwrap_or(0)))
        .collect();
    Form::from_dense(field, degree, &c)
}

fn small_coeffs(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-5i64..=5, len)
}

fn random_form(rng: &mut ChaCha8Rng, field: Field, degree: i64) -> Form {
    let n = monomial_basis(degree).unwrap().len();
    let p = field.characteristic();
    let c: Vec<Scalar> = (0..n).map(|_| Scalar::from_u64(field, rng.next_u64() % p)).collect();
    Form::from_dense(field, degree as u32, &c)
}

fn poly_mul(field: Field, a: &[Vec<Form>], b: &[Vec<Form>], degree: impl Fn(usize, usize) -> u32) -> Vec<Vec<Form>> {
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| {
                    let mut acc = Form::zero(field, degree(i, j));
                    for k in 0..b.len() {
                        if !a[i][k].is_zero() && !b[k][j].is_zero() {
                            acc = &acc + &(&a[i][k] * &b[k][j]);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mult_map_composes(f in small_coeffs(6), g in small_coeffs(3), b in 0i64..3) {
        let q = Field::Rational;
        let f = form_from(q, 2, &f);
        let g = form_from(q, 1, &g);
        let lhs = mult_map(&(&f * &g), b).unwrap();
        let rhs = mult_map(&f, b + 1).unwrap().matmul(&mult_map(&g, b).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn determinant_of_transpose(entries in prop::collection::vec(small_coeffs(3), 9)) {
        let q = Field::Rational;
        let rows: Vec<Vec<Form>> = entries
            .chunks(3)
            .map(|r| r.iter().map(|c| form_from(q, 1, c)).collect())
            .collect();
        let m = PolyMatrix::from_rows(q, rows).unwrap();
        prop_assert_eq!(det_poly(&m).unwrap(), det_poly(&m.transpose()).unwrap());
    }

    /// Minors of a 5×5 matrix with entries in [-5, 5] are below
    /// 5!·5^5 < 101·32003, so no nonzero minor vanishes modulo both primes.
    #[test]
    fn rational_rank_from_two_primes(rows in 1usize..=5, cols in 1usize..=5, data in small_coeffs(25)) {
        let ints: Vec<Vec<i64>> = (0..rows).map(|i| data[i * cols..(i + 1) * cols].to_vec()).collect();
        let rank = |field| ScalarMatrix::from_i64_rows(field, &ints).rank();
        let r_q = rank(Field::Rational);
        let r_p = rank(Field::prime(101).unwrap()).max(rank(Field::prime(32003).unwrap()));
        prop_assert_eq!(r_q, r_p);
    }

    #[test]
    fn linear_form_divides_its_multiples(l in small_coeffs(3), m in small_coeffs(10)) {
        let q = Field::Rational;
        let l = form_from(q, 1, &l);
        prop_assume!(!l.is_zero());
        let m = form_from(q, 3, &m);
        prop_assert!(divides(&l, &(&l * &m)).unwrap());
    }

    /// Over F_5 two quadrics share a factor exactly when they are
    /// proportional or share a linear factor; linear factors are found by
    /// trying every product.
    #[test]
    fn common_factor_matches_enumeration(a in small_coeffs(6), b in small_coeffs(6)) {
        let f5 = Field::prime(5).unwrap();
        let q1 = form_from(f5, 2, &a);
        let q2 = form_from(f5, 2, &b);
        prop_assume!(!(q1.is_zero() && q2.is_zero()));
        let linears: Vec<Form> = (1..125)
            .map(|x| form_from(f5, 1, &[x % 5, x / 5 % 5, x / 25]))
            .collect();
        let factors = |q: &Form| -> Vec<Form> {
            if q.is_zero() {
                return linears.clone();
            }
            linears
                .iter()
                .filter(|l| linears.iter().any(|m| &(*l * m) == q))
                .cloned()
                .collect()
        };
        let f1 = factors(&q1);
        let f2 = factors(&q2);
        let shared_linear = f1.iter().any(|l| f2.contains(l));
        let proportional = (1..5).any(|c| q1.scale(&Scalar::from_i64(f5, c)) == q2);
        let expected = shared_linear || proportional || q1.is_zero() || q2.is_zero();
        prop_assert_eq!(common_factor(&q1, &q2).unwrap(), expected);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn samples_classify_to_their_label(seed in any::<u64>(), idx in 0usize..6) {
        let label = StratumLabel::ALL[idx];
        let file = sample(&SampleRequest::new(label, Field::prime(101).unwrap(), seed)).unwrap();
        let p = &file.presentation;
        prop_assert_eq!(classify(p), Ok(label));
        prop_assert!(validate_shape(p, label).is_empty());
        let hp = p.hilbert_polynomial().unwrap();
        prop_assert_eq!((hp.r, hp.chi), (6, 1));
        let d = p.dual().hilbert_polynomial().unwrap();
        prop_assert_eq!((d.r, d.chi), (6, 5));
        let res = Resolution::new(p.clone()).unwrap();
        prop_assert_eq!(res.h0(3) as i64 - res.h1(3) as i64, 19);
    }

    /// Semistability is a property of the orbit under `GL_n × GL_m`.
    #[test]
    fn kronecker_verdict_is_orbit_invariant(seed in any::<u64>()) {
        let f3 = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let zero_cols = (seed % 4) as usize;
        let rows: Vec<Vec<Form>> = (0..4)
            .map(|i| (0..5).map(|j| {
                if j < zero_cols && i >= 2 { Form::zero(f3, 1) } else { random_form(&mut rng, f3, 1) }
            }).collect())
            .collect();
        let g = invertible(&mut rng, f3, 4);
        let h = invertible(&mut rng, f3, 5);
        let moved = poly_mul(f3, &poly_mul(f3, &g, &rows, |_, _| 1), &h, |_, _| 1);
        let verdict = |rows: Vec<Vec<Form>>| {
            let k = KroneckerModule::new(PolyMatrix::from_rows(f3, rows).unwrap()).unwrap();
            is_semistable(&k, Mode::ExactSmallField).unwrap().is_semistable()
        };
        prop_assert_eq!(verdict(rows), verdict(moved));
    }

    /// The X4 case (ii) verdict does not change along the group orbit.
    #[test]
    fn x4_case_ii_verdict_is_orbit_invariant(seed in any::<u64>(), degenerate in 0u8..3) {
        let field = Field::prime(101).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (src, tgt) = StratumLabel::X4.shape();
        let deg = |i: usize, j: usize| (tgt[i] - src[j]).max(0) as i64;
        let mut phi: Vec<Vec<Form>> = (0..3)
            .map(|i| (0..3).map(|j| random_form(&mut rng, field, deg(i, j))).collect())
            .collect();
        phi[0][2] = Form::zero(field, 0);
        match degenerate {
            1 => phi[0][1] = phi[0][0].scale(&Scalar::from_i64(field, 7)),
            2 => {
                let u = random_form(&mut rng, field, 1);
                let v1 = random_form(&mut rng, field, 1);
                let v2 = random_form(&mut rng, field, 1);
                phi[1][0] = &(&u * &phi[0][0]) + &(&phi[1][2] * &v1);
                phi[1][1] = &(&u * &phi[0][1]) + &(&phi[1][2] * &v2);
            }
            _ => {}
        }
        // Automorphisms: `O(d_j) → O(d_i)` blocks of degree `d_i - d_j`,
        // invertible constants on the diagonal.
        let aut = |rng: &mut ChaCha8Rng, tw: &[i32]| -> Vec<Vec<Form>> {
            let n = tw.len();
            let mut m: Vec<Vec<Form>> = (0..n)
                .map(|i| (0..n).map(|j| {
                    // Entry (i, j) maps summand j to summand i.
                    let d = tw[i] - tw[j];
                    if d < 0 { Form::zero(field, 0) } else { random_form(rng, field, d as i64) }
                }).collect())
                .collect();
            // Constants between equal twists; the group element is invertible
            // exactly when this block-diagonal part is.
            loop {
                let c = ScalarMatrix::from_fn(field, n, n, |i, j| {
                    if tw[i] == tw[j] {
                        Scalar::from_u64(field, rng.next_u64() % 101)
                    } else {
                        field.zero()
                    }
                });
                if c.rank() == n {
                    for i in 0..n {
                        for j in 0..n {
                            if tw[i] == tw[j] {
                                m[i][j] = Form::constant(c.get(i, j).clone());
                            }
                        }
                    }
                    break;
                }
            }
            m
        };
        let a = aut(&mut rng, tgt);
        let b = aut(&mut rng, src);
        let a_phi = poly_mul(field, &a, &phi, |i, j| deg(i, j) as u32);
        let moved = poly_mul(field, &a_phi, &b, |i, j| deg(i, j) as u32);
        let build = |rows: Vec<Vec<Form>>| Presentation::from_parts(field, src, tgt, rows).unwrap();
        let before = x4_conditions(&build(phi)).unwrap().is_empty();
        let after = x4_conditions(&build(moved)).unwrap().is_empty();
        prop_assert_eq!(before, after);
        if degenerate > 0 {
            prop_assert!(!before);
        }
    }
}

/// A random invertible scalar matrix, as constant forms.
fn invertible(rng: &mut ChaCha8Rng, field: Field, n: usize) -> Vec<Vec<Form>> {
    let p = field.characteristic();
    loop {
        let m = ScalarMatrix::from_fn(field, n, n, |_, _| Scalar::from_u64(field, rng.next_u64() % p));
        if m.rank() == n {
            return (0..n)
                .map(|i| (0..n).map(|j| Form::constant(m.get(i, j).clone())).collect())
                .collect();
        }
    }
}
