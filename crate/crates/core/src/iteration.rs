//! Maslov-type index iteration for the degenerate normal-form cases in Sp(4).
//!
//! With `n = 2` the variational (Morse) index of the m-th iterate is the
//! Maslov-type index minus two: `i(yᵐ) = i(y, m) - 2`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Signed;

use crate::critical::CriticalTypeVector;
use crate::symplectic::{NormalFormBlock, RotationAngle};
use crate::{int, Error, Rational, Result};

/// `E(a)`: the least integer `≥ a`.
pub fn ceil_e(a: Rational) -> i64 {
    a.ceil().to_integer()
}

/// `[a]`: the greatest integer `≤ a`.
pub fn floor_part(a: Rational) -> i64 {
    a.floor().to_integer()
}

/// `{a} = a - [a]`, always in `[0, 1)`.
pub fn frac_part(a: Rational) -> Rational {
    a - int(floor_part(a))
}

/// Which basic normal form `γ(τ)` can be connected to.
///
/// The first ⋄-factor is always `N1(1, 1)`; the variant fixes the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalFormCase {
    /// Second factor `N1(-1, b)`, `b ∈ {-1, 0, 1}`.
    Case1 { b: i8 },
    /// Second factor `R(θ)` with `θ/π` rational.
    Case2 { rotation: RotationAngle },
    /// Second factor `N1(1, b)`, `b ∈ {0, 1}`.
    Case3 { b: i8 },
    /// Second factor `N1(1, -1)`.
    Case4,
    /// Every iterate is non-degenerate. No iteration formula is modelled;
    /// the mean index, when known, is supplied directly.
    NonDegenerate {
        elliptic: bool,
        /// Whether `i(y²) - i(y)` is odd.
        index_jump_odd: bool,
        mean_index: Option<Rational>,
    },
}

impl NormalFormCase {
    pub fn case1(b: i8) -> Result<Self> {
        let case = Self::Case1 { b };
        case.validate()?;
        Ok(case)
    }

    pub fn case2(p: i64, q: i64) -> Result<Self> {
        Ok(Self::Case2 {
            rotation: RotationAngle::new(p, q)?,
        })
    }

    pub fn case3(b: i8) -> Result<Self> {
        let case = Self::Case3 { b };
        case.validate()?;
        Ok(case)
    }

    /// Case number 1–4, or 0 for the non-degenerate variant.
    pub fn number(&self) -> u8 {
        match self {
            Self::Case1 { .. } => 1,
            Self::Case2 { .. } => 2,
            Self::Case3 { .. } => 3,
            Self::Case4 => 4,
            Self::NonDegenerate { .. } => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Case1 { b } if !(-1..=1).contains(&b) => Err(Error::InvalidShear { case: 1, b: b.into() }),
            Self::Case3 { b } if !(0..=1).contains(&b) => Err(Error::InvalidShear { case: 3, b: b.into() }),
            Self::Case2 { rotation } => RotationAngle::new(rotation.numer(), rotation.denom()).map(|_| ()),
            _ => Ok(()),
        }
    }

    /// Whether `i(y, 1)` has to be odd (`Some(true)`), even (`Some(false)`),
    /// or is unconstrained.
    pub fn required_i1_odd(&self) -> Option<bool> {
        match self {
            Self::Case1 { .. } | Self::Case2 { .. } | Self::Case3 { .. } => Some(false),
            Self::Case4 => Some(true),
            Self::NonDegenerate { .. } => None,
        }
    }

    /// The two ⋄-factors of the normal form, when it is one of Cases 1–4.
    pub fn blocks(&self) -> Option<(NormalFormBlock, NormalFormBlock)> {
        let first = NormalFormBlock::N1 { lambda: 1, b: 1 };
        let second = match *self {
            Self::Case1 { b } => NormalFormBlock::N1 { lambda: -1, b },
            Self::Case2 { rotation } => NormalFormBlock::Rotation(rotation),
            Self::Case3 { b } => NormalFormBlock::N1 { lambda: 1, b },
            Self::Case4 => NormalFormBlock::N1 { lambda: 1, b: -1 },
            Self::NonDegenerate { .. } => return None,
        };
        Some((first, second))
    }
}

impl fmt::Display for NormalFormCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Case1 { b } => write!(f, "Case1(b={b})"),
            Self::Case2 { rotation } => write!(f, "Case2(theta={rotation})"),
            Self::Case3 { b } => write!(f, "Case3(b={b})"),
            Self::Case4 => write!(f, "Case4"),
            Self::NonDegenerate { .. } => write!(f, "NonDegenerate"),
        }
    }
}

fn check_m(m: u64) -> Result<i64> {
    if m == 0 {
        return Err(Error::Unsupported("iterate count must be at least 1"));
    }
    Ok(m as i64)
}

/// The Maslov-type index `i(y, m)`.
pub fn maslov_index(case: &NormalFormCase, i1: i64, m: u64) -> Result<i64> {
    let mi = check_m(m)?;
    match *case {
        NormalFormCase::Case1 { b: 1 } | NormalFormCase::Case4 => Ok(mi * (i1 + 1) - 1),
        NormalFormCase::Case1 { .. } => {
            let even_bump = if m.is_multiple_of(2) { 1 } else { 0 };
            Ok(mi * (i1 + 1) - 1 - even_bump)
        }
        NormalFormCase::Case2 { rotation } => {
            let turns = Rational::new(mi * rotation.numer(), 2 * rotation.denom());
            Ok(mi * i1 + 2 * ceil_e(turns) - 2)
        }
        NormalFormCase::Case3 { .. } => Ok(mi * (i1 + 2) - 2),
        NormalFormCase::NonDegenerate { .. } => Err(Error::Unsupported(
            "no closed-form iteration formula for non-degenerate orbits",
        )),
    }
}

/// The Morse index `i(yᵐ) = i(y, m) - 2`.
pub fn morse_index(case: &NormalFormCase, i1: i64, m: u64) -> Result<i64> {
    Ok(maslov_index(case, i1, m)? - 2)
}

/// `ν(yᵐ) = dim ker(γ(mτ) - I)` from the normal form.
pub fn nullity(case: &NormalFormCase, m: u64) -> Result<usize> {
    check_m(m)?;
    let even = m.is_multiple_of(2);
    Ok(match *case {
        NormalFormCase::Case1 { b } => match (even, b) {
            (false, _) => 1,
            (true, 0) => 3,
            (true, _) => 2,
        },
        NormalFormCase::Case2 { rotation } => {
            let q2 = 2 * rotation.denom() as u64;
            if (m * rotation.numer() as u64).is_multiple_of(q2) {
                3
            } else {
                1
            }
        }
        NormalFormCase::Case3 { b: 0 } => 3,
        NormalFormCase::Case3 { .. } | NormalFormCase::Case4 => 2,
        NormalFormCase::NonDegenerate { .. } => 1,
    })
}

/// `î(y) = lim i(y, m) / m`.
pub fn mean_index(case: &NormalFormCase, i1: i64) -> Result<Rational> {
    match *case {
        NormalFormCase::Case1 { .. } | NormalFormCase::Case4 => Ok(int(i1 + 1)),
        NormalFormCase::Case2 { rotation } => Ok(int(i1) + rotation.over_pi()),
        NormalFormCase::Case3 { .. } => Ok(int(i1 + 2)),
        NormalFormCase::NonDegenerate { mean_index, .. } => mean_index.ok_or(Error::Unsupported(
            "mean index of a non-degenerate orbit must be supplied",
        )),
    }
}

/// Minimal period `K(y)` of the critical modules: the least `K ≥ 1` after
/// which nullities repeat and index jumps are even.
///
/// Both sequences are periodic with a period dividing `horizon` (2 for the
/// shear cases, the rotation order for Case 2), so one window of length
/// `horizon` decides every candidate. A representative `i(y, 1)` of the
/// required parity is used; the answer does not depend on which.
pub fn minimal_period(case: &NormalFormCase) -> u64 {
    if let NormalFormCase::NonDegenerate { index_jump_odd, .. } = case {
        return if *index_jump_odd { 2 } else { 1 };
    }
    let horizon = match case {
        NormalFormCase::Case2 { rotation } => rotation.order(),
        _ => 2,
    };
    let i1 = if case.required_i1_odd() == Some(true) {
        1
    } else {
        0
    };
    let matches = |k: u64, p: u64| -> bool {
        let same_nullity = nullity(case, p + k).ok() == nullity(case, p).ok();
        let jump = morse_index(case, i1, p + k).unwrap() - morse_index(case, i1, p).unwrap();
        same_nullity && jump % 2 == 0
    };
    (1..=horizon)
        .find(|&k| (1..=horizon).all(|p| matches(k, p)))
        .unwrap_or(horizon)
}

/// Index and nullity data of one iterate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IterationData {
    pub m: u64,
    /// `i(y, m)`
    pub maslov: i64,
    /// `i(yᵐ)`
    pub morse: i64,
    /// `ν(yᵐ)`
    pub nullity: usize,
}

/// One prime closed characteristic: its normal form, `i(y, 1)`, and
/// optionally its critical type numbers per iterate class `1..=K(y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitConfig {
    case: NormalFormCase,
    i1: i64,
    k_vectors: Option<BTreeMap<u32, CriticalTypeVector>>,
}

impl OrbitConfig {
    pub fn new(case: NormalFormCase, i1: i64) -> Result<Self> {
        case.validate()?;
        if let Some(odd) = case.required_i1_odd() {
            if (i1.rem_euclid(2) == 1) != odd {
                return Err(Error::ParityViolation {
                    case: case.number(),
                    i1,
                    required: if odd { "odd" } else { "even" },
                });
            }
        }
        Ok(Self {
            case,
            i1,
            k_vectors: None,
        })
    }

    /// Attaches critical type vectors keyed by iterate class `1..=K(y)`.
    /// Each vector must have length `ν(yᵐ)` for its class.
    pub fn with_k_vectors(mut self, k_vectors: BTreeMap<u32, CriticalTypeVector>) -> Result<Self> {
        let period = self.minimal_period();
        for (&residue, k) in &k_vectors {
            if residue == 0 || u64::from(residue) > period {
                return Err(Error::ResidueOutOfRange {
                    residue,
                    period: period as u32,
                });
            }
            let nu = nullity(&self.case, residue.into())?;
            if k.nullity() != nu {
                return Err(Error::KVectorLength {
                    residue,
                    expected: nu,
                    found: k.nullity(),
                });
            }
        }
        self.k_vectors = Some(k_vectors);
        Ok(self)
    }

    pub fn case(&self) -> &NormalFormCase {
        &self.case
    }

    pub fn i1(&self) -> i64 {
        self.i1
    }

    pub fn k_vectors(&self) -> Option<&BTreeMap<u32, CriticalTypeVector>> {
        self.k_vectors.as_ref()
    }

    pub fn minimal_period(&self) -> u64 {
        minimal_period(&self.case)
    }

    /// Iterate class in `1..=K(y)` of the m-th iterate.
    pub fn residue(&self, m: u64) -> u32 {
        ((m - 1) % self.minimal_period() + 1) as u32
    }

    /// Critical type vector of the m-th iterate, via its class.
    pub fn k_vector(&self, m: u64) -> Result<&CriticalTypeVector> {
        let residue = self.residue(m);
        self.k_vectors
            .as_ref()
            .and_then(|ks| ks.get(&residue))
            .ok_or(Error::MissingKVector { residue })
    }

    pub fn mean_index(&self) -> Result<Rational> {
        mean_index(&self.case, self.i1)
    }

    pub fn iteration(&self, m: u64) -> Result<IterationData> {
        let maslov = maslov_index(&self.case, self.i1, m)?;
        Ok(IterationData {
            m,
            maslov,
            morse: maslov - 2,
            nullity: nullity(&self.case, m)?,
        })
    }
}

/// Iteration data for `m = 1..=m_max`.
pub fn iterate_table(config: &OrbitConfig, m_max: u64) -> Result<Vec<IterationData>> {
    if m_max == 0 {
        return Err(Error::Unsupported("m_max must be at least 1"));
    }
    (1..=m_max).map(|m| config.iteration(m)).collect()
}

/// Absolute deviation `|i(y, m)/m - î|`, exact.
pub fn mean_index_deviation(case: &NormalFormCase, i1: i64, m: u64) -> Result<Rational> {
    let avg = Rational::new(maslov_index(case, i1, m)?, m as i64);
    Ok((avg - mean_index(case, i1)?).abs())
}
