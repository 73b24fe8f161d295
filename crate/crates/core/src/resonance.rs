//! The two mean-index resonance identities, evaluated exactly:
//!
//! ```text
//! Σ_{î(y) > 0} χ̂(y) / î(y) = 1/2,    Σ_{î(y) < 0} χ̂(y) / î(y) = 0.
//! ```

use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::critical::{average_euler_char, sign, CriticalTypeVector};
use crate::iteration::{morse_index, OrbitConfig};
use crate::{frac, Error, Rational, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResonanceReport {
    pub sum_positive: Rational,
    pub sum_negative: Rational,
    /// `sum_positive == 1/2`
    pub holds_positive: bool,
    /// `sum_negative == 0`
    pub holds_negative: bool,
}

impl ResonanceReport {
    pub fn holds(&self) -> bool {
        self.holds_positive && self.holds_negative
    }
}

/// `χ̂(y) / î(y)` for one orbit. Fails when `î(y) = 0`.
pub fn contribution(config: &OrbitConfig) -> Result<Rational> {
    let mean = config.mean_index()?;
    if mean.is_zero() {
        return Err(Error::ZeroMeanIndex);
    }
    Ok(average_euler_char(config)? / mean)
}

pub fn resonance_sums(configs: &[OrbitConfig]) -> Result<ResonanceReport> {
    let mut sum_positive = Rational::zero();
    let mut sum_negative = Rational::zero();
    for config in configs {
        let term = contribution(config)?;
        if config.mean_index()?.is_positive() {
            sum_positive += term;
        } else {
            sum_negative += term;
        }
    }
    Ok(ResonanceReport {
        sum_positive,
        sum_negative,
        holds_positive: sum_positive == frac(1, 2),
        holds_negative: sum_negative.is_zero(),
    })
}

/// Position of one critical type number: `k_level(y^residue)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KSlot {
    pub residue: u32,
    pub level: usize,
}

/// Parity assumed for `i(y^residue)` when it is not taken from the formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(n: i64) -> Self {
        if n.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// The value of the unknown `k` entry at `slot` that makes a single orbit
/// satisfy `χ̂/î = 1/2`. The stored value at `slot` is ignored.
///
/// The result is not checked for admissibility.
pub fn solve_interior_k(config: &OrbitConfig, slot: KSlot) -> Result<Rational> {
    solve_with_parity(config, slot, None)
}

/// As [`solve_interior_k`], but with the parity of `i(y^residue)` taken as
/// given instead of from the iteration formula.
pub fn solve_with_parity(config: &OrbitConfig, slot: KSlot, parity: Option<Parity>) -> Result<Rational> {
    let mean = config.mean_index()?;
    if mean.is_zero() {
        return Err(Error::ZeroMeanIndex);
    }
    if !mean.is_positive() {
        return Err(Error::NonPositiveMeanIndex(mean));
    }
    let period = config.minimal_period();
    if slot.residue == 0 || u64::from(slot.residue) > period {
        return Err(Error::ResidueOutOfRange {
            residue: slot.residue,
            period: period as u32,
        });
    }

    let mut known = 0i64;
    let mut coefficient = 0i64;
    for m in 1..=period {
        let k = config.k_vector(m)?;
        let mut index = morse_index(config.case(), config.i1(), m)?;
        if m == u64::from(slot.residue) {
            if slot.level >= k.nullity() {
                return Err(Error::KVectorLength {
                    residue: slot.residue,
                    expected: k.nullity(),
                    found: slot.level + 1,
                });
            }
            if let Some(p) = parity {
                index = if p == Parity::of(index) { index } else { index + 1 };
            }
            coefficient = sign(index + slot.level as i64);
            known += k
                .entries()
                .iter()
                .enumerate()
                .filter(|&(l, _)| l != slot.level)
                .map(|(l, &kl)| sign(index + l as i64) * i64::from(kl))
                .sum::<i64>();
        } else {
            known += k.signed_sum(index);
        }
    }
    if coefficient == 0 {
        return Err(Error::Inconsistent);
    }
    // (known + coefficient·x) / (K·î) = 1/2
    let target = Rational::from_integer(period as i64) * mean / 2;
    Ok((target - Rational::from_integer(known)) / Rational::from_integer(coefficient))
}

/// Solves for the unknown under both parities of `i(y^residue)` and keeps
/// the non-negative solutions.
pub fn parity_dichotomy(config: &OrbitConfig, slot: KSlot) -> Result<Vec<(Parity, Rational)>> {
    let mut out = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        let x = solve_with_parity(config, slot, Some(parity))?;
        if !x.is_negative() {
            out.push((parity, x));
        }
    }
    Ok(out)
}

/// Replaces the entry at `slot` and re-validates the vector.
pub fn substitute(config: &OrbitConfig, slot: KSlot, value: u32) -> Result<OrbitConfig> {
    let mut ks = config.k_vectors().cloned().ok_or(Error::MissingKVector {
        residue: slot.residue,
    })?;
    let old = ks.get(&slot.residue).ok_or(Error::MissingKVector {
        residue: slot.residue,
    })?;
    let mut entries = old.entries().to_vec();
    if slot.level >= entries.len() {
        return Err(Error::KVectorLength {
            residue: slot.residue,
            expected: entries.len(),
            found: slot.level + 1,
        });
    }
    entries[slot.level] = value;
    ks.insert(slot.residue, CriticalTypeVector::new(entries)?);
    config.clone().with_k_vectors(ks)
}
