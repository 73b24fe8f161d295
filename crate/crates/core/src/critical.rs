//! Critical type numbers `k_l(yᵐ)` and the average Euler characteristic.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::iteration::{morse_index, NormalFormCase, OrbitConfig};
use crate::{int, Error, Rational, Result};

/// Admissibility clauses for a critical type vector of nullity `ν`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Clause {
    /// `k_0` and `k_{ν-1}` take only the values 0 and 1.
    EndValues,
    /// `k_0 = 1` forces every later entry to vanish.
    LeadingExclusive,
    /// `k_{ν-1} = 1` forces every earlier entry to vanish.
    TrailingExclusive,
    /// A non-zero interior entry forces both ends to vanish.
    InteriorExclusive,
    /// For `ν ≤ 3` at most one entry is non-zero.
    SingleNonZero,
}

impl Clause {
    pub const ALL: [Clause; 5] = [
        Clause::EndValues,
        Clause::LeadingExclusive,
        Clause::TrailingExclusive,
        Clause::InteriorExclusive,
        Clause::SingleNonZero,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Clause::EndValues => "end-values",
            Clause::LeadingExclusive => "leading-exclusive",
            Clause::TrailingExclusive => "trailing-exclusive",
            Clause::InteriorExclusive => "interior-exclusive",
            Clause::SingleNonZero => "single-nonzero",
        }
    }

    /// Whether `k` (indexed `l = 0..ν-1`) satisfies this clause.
    pub fn holds(self, k: &[u32]) -> bool {
        let nu = k.len();
        let last = nu - 1;
        match self {
            Clause::EndValues => k[0] <= 1 && k[last] <= 1,
            Clause::LeadingExclusive => k[0] != 1 || k[1..].iter().all(|&x| x == 0),
            Clause::TrailingExclusive => k[last] != 1 || k[..last].iter().all(|&x| x == 0),
            Clause::InteriorExclusive => {
                nu < 3 || k[1..last].iter().all(|&x| x == 0) || (k[0] == 0 && k[last] == 0)
            }
            Clause::SingleNonZero => nu > 3 || k.iter().filter(|&&x| x != 0).count() <= 1,
        }
    }
}

/// Critical type numbers `(k_0, …, k_{ν-1})` of one iterate; entries outside
/// `[0, ν-1]` are zero and not stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CriticalTypeVector(Vec<u32>);

impl CriticalTypeVector {
    pub fn new(k: Vec<u32>) -> Result<Self> {
        if !(1..=3).contains(&k.len()) {
            return Err(Error::NullityOutOfRange(k.len()));
        }
        if let Some(clause) = Clause::ALL.into_iter().find(|c| !c.holds(&k)) {
            return Err(Error::InadmissibleVector {
                clause: clause.name(),
            });
        }
        Ok(Self(k))
    }

    pub fn zero(nu: usize) -> Result<Self> {
        Self::new(vec![0; nu])
    }

    pub fn nullity(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, l: usize) -> u32 {
        self.0.get(l).copied().unwrap_or(0)
    }

    /// `Σ_l (-1)^l k_l`.
    pub fn alternating_sum(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(l, &k)| if l % 2 == 0 { i64::from(k) } else { -i64::from(k) })
            .sum()
    }

    /// `Σ_l (-1)^{index + l} k_l`.
    pub fn signed_sum(&self, index: i64) -> i64 {
        sign(index) * self.alternating_sum()
    }
}

impl fmt::Display for CriticalTypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, ")")
    }
}

/// `(-1)^n`.
pub(crate) fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Every admissible vector of nullity `nu`; the interior entry (only present
/// when `nu = 3`) ranges over `1..=interior_max`.
pub fn admissible_vectors(nu: usize, interior_max: u32) -> Result<Vec<CriticalTypeVector>> {
    let mut out = Vec::new();
    match nu {
        1 => {
            out.push(vec![0]);
            out.push(vec![1]);
        }
        2 => {
            out.push(vec![0, 0]);
            out.push(vec![1, 0]);
            out.push(vec![0, 1]);
        }
        3 => {
            out.push(vec![0, 0, 0]);
            out.push(vec![1, 0, 0]);
            out.push(vec![0, 0, 1]);
            out.extend((1..=interior_max).map(|j| vec![0, j, 0]));
        }
        _ => return Err(Error::NullityOutOfRange(nu)),
    }
    out.into_iter().map(CriticalTypeVector::new).collect()
}

/// Critical type vector of a non-degenerate iterate (`ν(yᵐ) = 1`): the local
/// module is `Q` in degree `i(yᵐ)` exactly when `i(yᵐ) - i(y)` is even.
pub fn nondegenerate_iterate_vector(case: &NormalFormCase, i1: i64, m: u64) -> Result<CriticalTypeVector> {
    let jump = morse_index(case, i1, m)? - morse_index(case, i1, 1)?;
    CriticalTypeVector::new(vec![if jump % 2 == 0 { 1 } else { 0 }])
}

/// `χ̂(y)` together with the per-iterate signed sums it averages.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerData {
    pub chi_hat: Rational,
    /// `(m, Σ_l (-1)^{i(yᵐ)+l} k_l(yᵐ))` for `m = 1..=K(y)`.
    pub per_iterate_terms: Vec<(u32, i64)>,
}

pub fn euler_data(config: &OrbitConfig) -> Result<EulerData> {
    if let NormalFormCase::NonDegenerate { index_jump_odd, .. } = *config.case() {
        // i(y) = i(y, 1) - 2 has the parity of i(y, 1).
        let s = sign(config.i1());
        let chi_hat = if index_jump_odd {
            Rational::new(s, 2)
        } else {
            int(s)
        };
        return Ok(EulerData {
            chi_hat,
            per_iterate_terms: Vec::new(),
        });
    }
    let period = config.minimal_period();
    let mut per_iterate_terms = Vec::with_capacity(period as usize);
    for m in 1..=period {
        let k = config.k_vector(m)?;
        let index = morse_index(config.case(), config.i1(), m)?;
        per_iterate_terms.push((m as u32, k.signed_sum(index)));
    }
    let total: i64 = per_iterate_terms.iter().map(|(_, t)| t).sum();
    Ok(EulerData {
        chi_hat: Rational::new(total, period as i64),
        per_iterate_terms,
    })
}

/// `χ̂(y) = (1/K) Σ_{m ≤ K} Σ_l (-1)^{i(yᵐ)+l} k_l(yᵐ)`.
pub fn average_euler_char(config: &OrbitConfig) -> Result<Rational> {
    euler_data(config).map(|d| d.chi_hat)
}
