//! Dimension bookkeeping for the fibrations over the strata.

use serde::Serialize;

use super::StratumLabel;
use crate::algebra::basis_len;
use crate::kronecker::moduli_dimension;

/// Dimension of the moduli space of sextics with Euler characteristic 1.
pub const MODULI_DIMENSION: i64 = 37;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionRow {
    pub label: StratumLabel,
    pub codimension: i64,
    /// Dimension of the base of the fibration, when there is one.
    pub base: Option<i64>,
    /// Dimension of the projective fibre.
    pub fibre: Option<i64>,
    pub dimension: i64,
    /// The summands making up `dimension`, as a readable identity.
    pub identity: String,
}

fn h0(d: i64) -> i64 {
    basis_len(d) as i64
}

/// `dim Grass(k, n) = k(n - k)`.
fn grassmannian(k: i64, n: i64) -> i64 {
    k * (n - k)
}

/// The quotient of `Hom(O(-3) ⊕ 2O(-2), 2O(-1))` by its group: the base
/// factor of X2.
fn y_dimension() -> i64 {
    let hom = 2 * h0(2) + 2 * 2 * h0(1);
    let source_aut = 1 + 4 + 2 * h0(1);
    let target_aut = 4;
    hom - (source_aut + target_aut - 1)
}

pub fn stratum_dimensions() -> Vec<DimensionRow> {
    let row = |label: StratumLabel, base: Option<i64>, fibre: Option<i64>, identity: String| {
        let codimension = label.codimension();
        DimensionRow {
            label,
            codimension,
            base,
            fibre,
            dimension: MODULI_DIMENSION - codimension,
            identity,
        }
    };
    let n354 = moduli_dimension(3, 5, 4);
    let n323 = moduli_dimension(3, 2, 3);
    let y = y_dimension();
    let grass = grassmannian(2, 6);
    // Sextics through a length-2 subscheme, over the Hilbert scheme of two points.
    let sextics = h0(6) - 1;
    let flag_fibre = sextics - 2;
    let hilb2 = 4;
    vec![
        row(
            StratumLabel::X0,
            Some(n354),
            Some(17),
            format!("{n354} + 17 = {}", n354 + 17),
        ),
        row(
            StratumLabel::X1,
            None,
            None,
            format!("{} - 2 = 35", MODULI_DIMENSION),
        ),
        row(
            StratumLabel::X2,
            Some(y + 2),
            Some(21),
            format!("{y} + 2 + 21 = {}", y + 2 + 21),
        ),
        row(
            StratumLabel::X3,
            Some(2 + n323),
            Some(23),
            format!("2 + {n323} + 23 = {}", 2 + n323 + 23),
        ),
        row(
            StratumLabel::X4,
            Some(grass),
            Some(23),
            format!("{grass} + 23 = {}", grass + 23),
        ),
        row(
            StratumLabel::X5,
            Some(hilb2),
            Some(flag_fibre),
            format!("{sextics} - 2 + {hilb2} = {}", flag_fibre + hilb2),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summands_add_up() {
        for r in stratum_dimensions() {
            if let (Some(b), Some(f)) = (r.base, r.fibre) {
                assert_eq!(b + f, r.dimension, "{:?}", r.label);
            }
            assert_eq!(r.dimension + r.codimension, MODULI_DIMENSION);
        }
    }

    #[test]
    fn known_rows() {
        let rows = stratum_dimensions();
        assert_eq!((rows[0].base, rows[0].fibre), (Some(20), Some(17)));
        assert_eq!(rows[2].base, Some(12));
        assert_eq!(rows[2].dimension, 33);
        assert_eq!(rows[4].base, Some(8));
        assert_eq!(rows[5].dimension, 29);
        assert_eq!(rows[5].identity, "27 - 2 + 4 = 29");
        assert_eq!(y_dimension(), 10);
    }
}
