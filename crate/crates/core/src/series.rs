//! Truncated formal Laurent series over exact rationals, the normalized
//! Morse series of an orbit, and the positivity relation
//!
//! ```text
//! M(t) - 1/(1 - t²) = (1 + t) U(t),   U ≥ 0 coefficient-wise.
//! ```

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::iteration::{morse_index, nullity, OrbitConfig};
use crate::{int, Error, Rational, Result};

/// `Σ c_d t^d` for `d` from `min_degree` up. Coefficients above
/// `truncation` are unknown rather than zero; `truncation = None` marks an
/// exact Laurent polynomial.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    min_degree: i64,
    coefficients: Vec<Rational>,
    truncation: Option<i64>,
}

impl LaurentSeries {
    pub fn zero() -> Self {
        Self {
            min_degree: 0,
            coefficients: Vec::new(),
            truncation: None,
        }
    }

    /// Builds a series from `(degree, coefficient)` terms; repeated degrees
    /// add up and terms above `truncation` are dropped.
    pub fn from_terms<I>(terms: I, truncation: Option<i64>) -> Self
    where
        I: IntoIterator<Item = (i64, Rational)>,
    {
        let terms: Vec<(i64, Rational)> = terms
            .into_iter()
            .filter(|(d, _)| truncation.is_none_or(|t| *d <= t))
            .collect();
        let Some(lo) = terms.iter().map(|(d, _)| *d).min() else {
            return Self {
                truncation,
                ..Self::zero()
            };
        };
        let hi = terms.iter().map(|(d, _)| *d).max().unwrap();
        let mut coefficients = vec![Rational::zero(); (hi - lo + 1) as usize];
        for (d, c) in terms {
            coefficients[(d - lo) as usize] += c;
        }
        Self {
            min_degree: lo,
            coefficients,
            truncation,
        }
        .normalized()
    }

    fn normalized(mut self) -> Self {
        if let Some(t) = self.truncation {
            let keep = (t - self.min_degree + 1).clamp(0, self.coefficients.len() as i64);
            self.coefficients.truncate(keep as usize);
        }
        while self.coefficients.last().is_some_and(Zero::is_zero) {
            self.coefficients.pop();
        }
        let lead = self.coefficients.iter().take_while(|c| c.is_zero()).count();
        self.coefficients.drain(..lead);
        self.min_degree += lead as i64;
        if self.coefficients.is_empty() {
            self.min_degree = 0;
        }
        self
    }

    /// `c·t^d`, exact.
    pub fn monomial(c: Rational, degree: i64) -> Self {
        Self::from_terms([(degree, c)], None)
    }

    /// `Σ_{m ≥ 0} t^{2m}` truncated at degree `n`.
    pub fn geometric_even(n: i64) -> Self {
        let terms = (0..=n.max(-1)).step_by(2).map(|d| (d, int(1)));
        Self::from_terms(terms, Some(n))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Lowest degree with a non-zero coefficient; `None` for the zero series.
    pub fn min_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.min_degree)
    }

    pub fn max_degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.min_degree + self.coefficients.len() as i64 - 1)
    }

    pub fn truncation(&self) -> Option<i64> {
        self.truncation
    }

    /// Whether the coefficient of `t^d` is determined.
    pub fn is_known(&self, degree: i64) -> bool {
        self.truncation.is_none_or(|t| degree <= t)
    }

    /// Coefficient of `t^d`. Meaningless above the truncation; see
    /// [`is_known`](Self::is_known).
    pub fn coeff(&self, degree: i64) -> Rational {
        let idx = degree - self.min_degree;
        if idx < 0 {
            return Rational::zero();
        }
        self.coefficients
            .get(idx as usize)
            .copied()
            .unwrap_or_else(Rational::zero)
    }

    /// Non-zero `(degree, coefficient)` pairs in increasing degree.
    pub fn terms(&self) -> impl Iterator<Item = (i64, Rational)> + '_ {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_degree + i as i64, *c))
    }

    fn min_truncation(a: Option<i64>, b: Option<i64>) -> Option<i64> {
        match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(
            self.terms().chain(other.terms()),
            Self::min_truncation(self.truncation, other.truncation),
        )
    }

    pub fn subtract(&self, other: &Self) -> Self {
        self.add(&other.scale(int(-1)))
    }

    pub fn scale(&self, c: Rational) -> Self {
        Self::from_terms(self.terms().map(|(d, x)| (d, x * c)), self.truncation)
    }

    /// Lower bound on the true support: for a series known to vanish up
    /// to its truncation, everything starts above it.
    fn support_floor(&self) -> Option<i64> {
        self.min_degree().or(self.truncation.map(|t| t + 1))
    }

    /// Product; valid up to `min(T_a + low(b), T_b + low(a))`.
    pub fn mul(&self, other: &Self) -> Self {
        let bound = |t: Option<i64>, low: Option<i64>| match (t, low) {
            (Some(t), Some(low)) => Some(t + low),
            _ => None,
        };
        if (self.is_zero() && self.truncation.is_none()) || (other.is_zero() && other.truncation.is_none()) {
            return Self::zero();
        }
        let truncation = Self::min_truncation(
            bound(self.truncation, other.support_floor()),
            bound(other.truncation, self.support_floor()),
        );
        let terms = self
            .terms()
            .flat_map(|(da, a)| other.terms().map(move |(db, b)| (da + db, a * b)));
        Self::from_terms(terms, truncation)
    }

    /// `(1 + t)·self`.
    pub fn mul_one_plus_t(&self) -> Self {
        let shifted = self.terms().map(|(d, c)| (d + 1, c));
        Self::from_terms(self.terms().chain(shifted), self.truncation)
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}*t^{d}")?;
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(t) = self.truncation {
            write!(f, " + O(t^{})", t + 1)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositivityVerdict {
    NonNegativeUpToTruncation,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityResult {
    /// The formal solution of `(1 + t) U = M - Σ t^{2m}`.
    pub u: LaurentSeries,
    /// First degree `≤ truncation - guard` with a negative coefficient in `U`.
    pub first_violation: Option<(i64, Rational)>,
    pub verdict: PositivityVerdict,
    /// Highest degree the verdict speaks for.
    pub checked_up_to: i64,
}

/// Effective truncation of a series for the positivity check.
fn effective_truncation(series: &LaurentSeries, guard: i64) -> i64 {
    series
        .truncation()
        .unwrap_or_else(|| series.max_degree().unwrap_or(0).max(0) + guard + 1)
}

/// Solves `(1 + t) U = M - Σ t^{2m}` for `U` with bounded-below support,
/// `u_i = Σ_{j ≤ i} (-1)^{i-j} c_j`, and checks `u_i ≥ 0` for every
/// `i ≤ truncation - guard`.
pub fn check_positivity(m_series: &LaurentSeries, guard: i64) -> PositivityResult {
    let top = effective_truncation(m_series, guard);
    let c = m_series.subtract(&LaurentSeries::geometric_even(top));
    let checked_up_to = top - guard;

    let mut u_terms = Vec::new();
    let mut first_violation = None;
    if let Some(lo) = c.min_degree() {
        let mut prev = Rational::zero();
        for i in lo..=top {
            let u = c.coeff(i) - prev;
            if u.is_negative() && i <= checked_up_to && first_violation.is_none() {
                first_violation = Some((i, u));
            }
            u_terms.push((i, u));
            prev = u;
        }
    }
    let verdict = if first_violation.is_some() {
        PositivityVerdict::Violated
    } else {
        PositivityVerdict::NonNegativeUpToTruncation
    };
    PositivityResult {
        u: LaurentSeries::from_terms(u_terms, Some(top)),
        first_violation,
        verdict,
        checked_up_to,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShortcutOutcome {
    /// `M` equals `Σ t^{2m}` on every compared degree.
    pub equal: bool,
    /// First degree where they differ, with `M`'s coefficient minus one or zero.
    pub first_mismatch: Option<(i64, Rational)>,
}

/// If `M` has only even-degree terms, positivity forces `U ≡ 0`, i.e.
/// `M = Σ t^{2m}` exactly. Returns that comparison over degrees
/// `≤ truncation - guard - 1` (so any mismatch still shows up as a negative
/// `u_i` inside the checked window), or `None` when an odd-degree term is
/// present.
pub fn even_parity_shortcut(m_series: &LaurentSeries, guard: i64) -> Option<ShortcutOutcome> {
    let top = effective_truncation(m_series, guard);
    if m_series.terms().any(|(d, _)| d % 2 != 0) {
        return None;
    }
    let limit = top - guard - 1;
    let diff = m_series.subtract(&LaurentSeries::geometric_even(top));
    let first_mismatch = diff.terms().find(|(d, _)| *d <= limit);
    Some(ShortcutOutcome {
        equal: first_mismatch.is_none(),
        first_mismatch,
    })
}

/// Guard width `max(4, ⌈î⌉)` for positivity verdicts.
pub fn guard_for(mean_index: Rational) -> i64 {
    mean_index.ceil().to_integer().max(4)
}

/// Normalized Morse series `M(t) = Σ_{m ≥ 1} Σ_l k_l(yᵐ) t^{i(yᵐ)+l}` with
/// every term of degree `≤ n_trunc`.
///
/// Iteration stops once `m·î - |i(y,1)| - 6 > n_trunc`; by the mean-index
/// bound `|i(y,m) - m·î| ≤ |i(y,1)| + 4` no later iterate reaches the window.
pub fn build_morse_series(config: &OrbitConfig, n_trunc: i64) -> Result<LaurentSeries> {
    let mean = config.mean_index()?;
    if !mean.is_positive() {
        return Err(Error::NonPositiveMeanIndex(mean));
    }
    let slack = int(config.i1().abs() + 6);
    let mut terms = Vec::new();
    let mut m = 1u64;
    while int(m as i64) * mean - slack <= int(n_trunc) {
        let index = morse_index(config.case(), config.i1(), m)?;
        let k = config.k_vector(m)?;
        debug_assert_eq!(k.nullity(), nullity(config.case(), m)?);
        for (l, &kl) in k.entries().iter().enumerate() {
            let degree = index + l as i64;
            if kl != 0 && degree <= n_trunc {
                terms.push((degree, int(kl.into())));
            }
        }
        m += 1;
    }
    Ok(LaurentSeries::from_terms(terms, Some(n_trunc)))
}
