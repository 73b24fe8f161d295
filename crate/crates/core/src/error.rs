use core::fmt;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `standard_j` only covers Sp(2) and Sp(4).
    UnsupportedDimension(usize),
    /// A square matrix of even dimension was required.
    NotSquareEven {
        rows: usize,
        cols: usize,
    },
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    NotSymplectic,
    /// cos θ is irrational, so the rotation block has no rational entries.
    IrrationalRotation {
        p: i64,
        q: i64,
    },
    InvalidRotation {
        p: i64,
        q: i64,
    },
    InvalidShear {
        case: u8,
        b: i64,
    },
    /// i(y,1) has the wrong parity for the normal-form case.
    ParityViolation {
        case: u8,
        i1: i64,
        required: &'static str,
    },
    /// No closed-form index formula is available (non-degenerate orbits).
    Unsupported(&'static str),
    NullityOutOfRange(usize),
    /// A critical type vector breaks one of the admissibility clauses.
    InadmissibleVector {
        clause: &'static str,
    },
    KVectorLength {
        residue: u32,
        expected: usize,
        found: usize,
    },
    MissingKVector {
        residue: u32,
    },
    ResidueOutOfRange {
        residue: u32,
        period: u32,
    },
    /// The resonance identities need every mean index to be non-zero.
    ZeroMeanIndex,
    NonPositiveMeanIndex(Rational),
    /// The unknown entry has a zero coefficient in the resonance identity.
    Inconsistent,
    /// More than one interior critical type number is unknown.
    Underdetermined,
    /// Truncation leaves no degree window to decide positivity in.
    Inconclusive {
        truncation: i64,
        guard: i64,
        lowest_degree: i64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedDimension(n) => {
                write!(f, "unsupported symplectic dimension parameter n={n} (expected 1 or 2)")
            }
            Error::NotSquareEven { rows, cols } => {
                write!(f, "expected a square matrix of even dimension, got {rows}x{cols}")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NotSymplectic => write!(f, "matrix is not symplectic"),
            Error::IrrationalRotation { p, q } => {
                write!(f, "rotation by {p}/{q} pi has irrational entries")
            }
            Error::InvalidRotation { p, q } => write!(
                f,
                "rotation angle {p}/{q} pi must satisfy 0 < p/q < 2 and p/q != 1"
            ),
            Error::InvalidShear { case, b } => write!(f, "b={b} is not allowed in case {case}"),
            Error::ParityViolation { case, i1, required } => {
                write!(f, "Case {case} requires {required} i1 (got i1={i1})")
            }
            Error::Unsupported(what) => write!(f, "unsupported: {what}"),
            Error::NullityOutOfRange(nu) => write!(f, "nullity {nu} outside [1, 3]"),
            Error::InadmissibleVector { clause } => {
                write!(f, "critical type vector violates clause {clause}")
            }
            Error::KVectorLength { residue, expected, found } => write!(
                f,
                "critical type vector for iterate {residue} has length {found}, nullity is {expected}"
            ),
            Error::MissingKVector { residue } => {
                write!(f, "missing critical type vector for iterate class {residue}")
            }
            Error::ResidueOutOfRange { residue, period } => {
                write!(f, "iterate class {residue} outside 1..={period}")
            }
            Error::ZeroMeanIndex => write!(f, "resonance identity inapplicable: mean index is 0"),
            Error::NonPositiveMeanIndex(m) => write!(f, "mean index {m} is not positive"),
            Error::Inconsistent => write!(f, "unknown has zero coefficient; identity inconsistent"),
            Error::Underdetermined => write!(f, "more than one unknown critical type number"),
            Error::Inconclusive { truncation, guard, lowest_degree } => write!(
                f,
                "inconclusive: truncation {truncation} with guard {guard} leaves no degree at or above {lowest_degree}; raise the truncation"
            ),
        }
    }
}

impl core::error::Error for Error {}
