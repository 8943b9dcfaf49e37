//! The six strata of `M(6,1)`: cohomological classification and the matrix
//! conditions attached to each normal form.

mod conditions;
mod dims;
mod oracle;
mod x1;

pub use conditions::{
    x0_condition, x0_verdict, x2_conditions, x3_conditions, x4_case, x4_conditions, x5_conditions, X4Case,
};
pub use dims::{stratum_dimensions, DimensionRow, MODULI_DIMENSION};
pub use oracle::orbit_pattern_oracle;
pub use x1::{x1_patterns, PatternId};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kronecker::KroneckerError;
use crate::presentation::{
    CohomologyProfile, HilbertPoly, Presentation, PresentationError, Resolution, Violation,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StratumLabel {
    X0,
    X1,
    X2,
    X3,
    X4,
    X5,
}

impl StratumLabel {
    pub const ALL: [StratumLabel; 6] = [
        StratumLabel::X0,
        StratumLabel::X1,
        StratumLabel::X2,
        StratumLabel::X3,
        StratumLabel::X4,
        StratumLabel::X5,
    ];

    /// `(source twists, target twists)` of the normal form.
    pub fn shape(self) -> (&'static [i32], &'static [i32]) {
        match self {
            StratumLabel::X0 => (&[-2, -2, -2, -2, -2], &[-1, -1, -1, -1, 0]),
            StratumLabel::X1 => (&[-3, -2, -2], &[-1, 0, 0]),
            StratumLabel::X2 => (&[-3, -2, -2, -1], &[-1, -1, 0, 0]),
            StratumLabel::X3 => (&[-3, -3, -1, -1], &[-2, 0, 0, 0]),
            StratumLabel::X4 => (&[-3, -3, -2], &[-2, -1, 1]),
            StratumLabel::X5 => (&[-4, -1], &[0, 1]),
        }
    }

    /// `(h0(F(-1)), h1(F), h0(F ⊗ Ω¹(1)))` of the stratum.
    pub fn table_row(self) -> (usize, usize, usize) {
        match self {
            StratumLabel::X0 => (0, 0, 0),
            StratumLabel::X1 => (0, 1, 0),
            StratumLabel::X2 => (0, 1, 1),
            StratumLabel::X3 => (0, 2, 2),
            StratumLabel::X4 => (1, 2, 3),
            StratumLabel::X5 => (1, 3, 4),
        }
    }

    /// Expected `h1(F(1))`: positive only on the closed stratum.
    pub fn expected_h1_twist1(self) -> usize {
        usize::from(self == StratumLabel::X5)
    }

    pub fn from_row(row: (usize, usize, usize)) -> Option<StratumLabel> {
        Self::ALL.into_iter().find(|l| l.table_row() == row)
    }

    pub fn codimension(self) -> i64 {
        match self {
            StratumLabel::X0 => 0,
            StratumLabel::X1 => 2,
            StratumLabel::X2 => 4,
            StratumLabel::X3 | StratumLabel::X4 => 6,
            StratumLabel::X5 => 8,
        }
    }
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for StratumLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|l| l.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| format!("unknown stratum {s:?} (expected X0..X5)"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrataError {
    #[error(transparent)]
    Presentation(#[from] PresentationError),
    #[error(transparent)]
    Kronecker(#[from] KroneckerError),
    #[error("profile {0} is not a row of the table")]
    ProfileNotInTable(CohomologyProfile),
    #[error("presentation does not have the {label} twist shape")]
    WrongShape { label: StratumLabel },
    #[error("X4 presentation is not in normal position")]
    NotInNormalPosition,
    #[error("X4 presentation matches neither normal form unambiguously")]
    AmbiguousX4,
    #[error("Kronecker semistability undecided after {trials} trials")]
    Undecided { trials: usize },
    #[error("the orbit oracle works over F_2 only")]
    NotF2,
}

/// A failed stratum condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StratumViolation {
    Presentation { violation: Violation },
    TwistShape {
        expected_source: Vec<i32>,
        expected_target: Vec<i32>,
    },
    NonzeroBlock { row: usize, col: usize },
    Condition { message: String },
    Pattern { pattern: PatternId },
    NotInNormalPosition,
    Unstable { dim_s: usize, dim_t: usize },
    Undecided { message: String },
}

impl StratumViolation {
    pub(crate) fn condition(msg: &str) -> Self {
        StratumViolation::Condition {
            message: msg.to_string(),
        }
    }
}

impl fmt::Display for StratumViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumViolation::Presentation { violation } => write!(f, "{violation}"),
            StratumViolation::TwistShape {
                expected_source,
                expected_target,
            } => write!(
                f,
                "twist shape differs from {expected_source:?} -> {expected_target:?}"
            ),
            StratumViolation::NonzeroBlock { row, col } => {
                write!(f, "entry ({row},{col}) must be zero in the normal form")
            }
            StratumViolation::Condition { message } => write!(f, "{message}"),
            StratumViolation::Pattern { pattern } => {
                write!(f, "equivalent to forbidden shape {pattern:?}")
            }
            StratumViolation::NotInNormalPosition => write!(f, "not in normal position"),
            StratumViolation::Unstable { dim_s, dim_t } => write!(
                f,
                "Kronecker block is unstable (witness dim S = {dim_s}, dim T = {dim_t})"
            ),
            StratumViolation::Undecided { message } => write!(f, "undecided: {message}"),
        }
    }
}

/// Maps the cohomological profile to its table row.
pub fn classify(p: &Presentation) -> Result<StratumLabel, StrataError> {
    let res = Resolution::new(p.clone())?;
    classify_resolution(&res).map(|(l, _)| l)
}

pub fn classify_resolution(
    res: &Resolution,
) -> Result<(StratumLabel, CohomologyProfile), StrataError> {
    let profile = res.profile();
    let row = (profile.h0_minus1, profile.h1_0, profile.h0_omega);
    StratumLabel::from_row(row)
        .map(|l| (l, profile))
        .ok_or(StrataError::ProfileNotInTable(profile))
}

pub(crate) fn has_shape(p: &Presentation, label: StratumLabel) -> bool {
    let (s, t) = label.shape();
    p.source().as_slice() == s && p.target().as_slice() == t
}

pub(crate) fn require_shape(p: &Presentation, label: StratumLabel) -> Result<(), StrataError> {
    if has_shape(p, label) {
        Ok(())
    } else {
        Err(StrataError::WrongShape { label })
    }
}

/// Twist shape, degree grid, injectivity, zero blocks and the algebraic
/// conditions of the stratum. An empty list means the presentation is an
/// admissible normal form for `label`.
pub fn validate_shape(p: &Presentation, label: StratumLabel) -> Vec<StratumViolation> {
    let mut out: Vec<StratumViolation> = match p.validate() {
        Ok(()) => Vec::new(),
        Err(v) => v
            .into_iter()
            .map(|violation| StratumViolation::Presentation { violation })
            .collect(),
    };
    if !has_shape(p, label) {
        let (s, t) = label.shape();
        out.push(StratumViolation::TwistShape {
            expected_source: s.to_vec(),
            expected_target: t.to_vec(),
        });
        return out;
    }
    if !out.is_empty() {
        return out;
    }
    let conds = match label {
        StratumLabel::X0 => conditions::x0_violations(p),
        StratumLabel::X1 => x1_patterns(p).map(|pats| {
            pats.into_iter()
                .map(|pattern| StratumViolation::Pattern { pattern })
                .collect()
        }),
        StratumLabel::X2 => x2_conditions(p),
        StratumLabel::X3 => x3_conditions(p),
        StratumLabel::X4 => x4_conditions(p),
        StratumLabel::X5 => x5_conditions(p),
    };
    match conds {
        Ok(v) => out.extend(v),
        Err(StrataError::NotInNormalPosition) | Err(StrataError::AmbiguousX4) => {
            out.push(StratumViolation::NotInNormalPosition)
        }
        Err(e) => out.push(StratumViolation::Condition {
            message: e.to_string(),
        }),
    }
    out
}

/// Structured classification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub label: Option<StratumLabel>,
    /// `[h0(F(-1)), h1(F), h0(F⊗Ω¹(1)), h1(F(1))]`.
    pub profile: Option<[usize; 4]>,
    /// `[r, chi]`.
    pub hilbert: Option<[i64; 2]>,
    pub det_degree: Option<i64>,
    pub violations: Vec<String>,
}

impl ClassificationReport {
    pub fn is_ok(&self) -> bool {
        self.label.is_some()
    }
}

/// Classifies and, when the profile is a table row, audits the matrix
/// against that row's normal form.
pub fn classification_report(p: &Presentation) -> ClassificationReport {
    let hilbert = p.hilbert_polynomial().ok().map(|HilbertPoly { r, chi }| [r, chi]);
    let det_degree = p.is_square().then(|| p.target().sum() - p.source().sum());
    let mut report = ClassificationReport {
        label: None,
        profile: None,
        hilbert,
        det_degree,
        violations: Vec::new(),
    };
    let res = match Resolution::new(p.clone()) {
        Ok(r) => r,
        Err(e) => {
            report.violations.push(e.to_string());
            return report;
        }
    };
    match classify_resolution(&res) {
        Ok((label, prof)) => {
            report.label = Some(label);
            report.profile = Some(profile_array(&prof));
            report
                .violations
                .extend(validate_shape(p, label).iter().map(ToString::to_string));
        }
        Err(StrataError::ProfileNotInTable(prof)) => {
            report.profile = Some(profile_array(&prof));
            report
                .violations
                .push(StrataError::ProfileNotInTable(prof).to_string());
        }
        Err(e) => report.violations.push(e.to_string()),
    }
    report
}

fn profile_array(p: &CohomologyProfile) -> [usize; 4] {
    [p.h0_minus1, p.h1_0, p.h0_omega, p.h1_1]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    #[test]
    fn rows_map_to_labels() {
        assert_eq!(StratumLabel::from_row((0, 2, 2)), Some(StratumLabel::X3));
        assert_eq!(StratumLabel::from_row((1, 3, 4)), Some(StratumLabel::X5));
        assert_eq!(StratumLabel::from_row((0, 3, 3)), None);
        assert_eq!("x4".parse::<StratumLabel>(), Ok(StratumLabel::X4));
    }

    #[test]
    fn shapes_have_sextic_determinant_and_chi_one() {
        for l in StratumLabel::ALL {
            let (s, t) = l.shape();
            let r: i32 = t.iter().sum::<i32>() - s.iter().sum::<i32>();
            assert_eq!(r, 6, "{l}");
            assert_eq!(s.len(), t.len());
        }
    }

    #[test]
    fn x5_example_classifies() {
        let p = Presentation::parse(
            Field::prime(101).unwrap(),
            &[-4, -1],
            &[0, 1],
            &[&["X^4 + Y^4 + Z^4", "X"], &["Y^5 + X*Z^4", "Y*Z"]],
        )
        .unwrap();
        assert_eq!(classify(&p), Ok(StratumLabel::X5));
        let report = classification_report(&p);
        assert_eq!(report.profile, Some([1, 3, 4, 1]));
        assert_eq!(report.hilbert, Some([6, 1]));
        assert_eq!(report.det_degree, Some(6));
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn wrong_twists_are_reported() {
        let p = Presentation::parse(Field::prime(7).unwrap(), &[-6], &[0], &[&["X^6 + Y^6"]]).unwrap();
        let v = validate_shape(&p, StratumLabel::X5);
        assert!(matches!(v[0], StratumViolation::TwistShape { .. }));
    }
}
