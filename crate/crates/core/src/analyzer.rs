//! Case analysis of a hypothetical hypersurface carrying exactly one prime
//! closed characteristic.
//!
//! For a single orbit the pipeline is:
//!
//! 1. non-degenerate iterates throughout: hand off to the external
//!    non-degenerate multiplicity theorem;
//! 2. the mean index must be positive;
//! 3. critical type numbers per iterate class are enumerated (non-degenerate
//!    iterates are forced, the unbounded interior entry is solved for) and
//!    filtered by the resonance identity;
//! 4. every survivor's normalized Morse series must satisfy positivity;
//! 5. a survivor with mean index exactly 2 on a degenerate orbit is a
//!    symplectically degenerate maximum, which forces infinitely many orbits.
//!
//! Anything left over is reported as `Feasible`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::Signed;

use crate::critical::{admissible_vectors, nondegenerate_iterate_vector, CriticalTypeVector};
use crate::iteration::{IterationData, NormalFormCase, OrbitConfig};
use crate::resonance::{parity_dichotomy, resonance_sums, solve_interior_k, KSlot, Parity};
use crate::series::{
    build_morse_series, check_positivity, even_parity_shortcut, guard_for, PositivityVerdict,
};
use crate::{int, Error, Rational, Result};

/// Critical type vectors keyed by iterate class `1..=K(y)`.
pub type KAssignment = BTreeMap<u32, CriticalTypeVector>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictKind {
    /// No admissible critical type data satisfies the resonance identity.
    ResonanceContradiction,
    /// Every resonance survivor has a negative coefficient in `U(t)`.
    MorseSeriesContradiction {
        degree: i64,
        coefficient: Rational,
    },
    /// Degenerate orbit with mean index exactly 2; infinitely many orbits by
    /// the symplectically-degenerate-maximum theorem.
    SymplecticallyDegenerateMaximum {
        mean_index: Rational,
    },
    /// All iterates non-degenerate; at least two orbits by the
    /// non-degenerate multiplicity theorem.
    NonDegenerateExternal,
    Feasible,
}

impl VerdictKind {
    /// Stable machine-readable name.
    pub fn key(&self) -> &'static str {
        match self {
            Self::ResonanceContradiction => "resonance_contradiction",
            Self::MorseSeriesContradiction { .. } => "morse_series_contradiction",
            Self::SymplecticallyDegenerateMaximum { .. } => "sdm",
            Self::NonDegenerateExternal => "nondegenerate_external",
            Self::Feasible => "feasible",
        }
    }

    pub fn is_contradiction(&self) -> bool {
        !matches!(self, Self::Feasible)
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ResonanceContradiction => write!(f, "ResonanceContradiction"),
            Self::MorseSeriesContradiction { degree, coefficient } => {
                write!(f, "MorseSeriesContradiction(u_{degree} = {coefficient})")
            }
            Self::SymplecticallyDegenerateMaximum { mean_index } => {
                write!(f, "SDM(mean_index={mean_index})")
            }
            Self::NonDegenerateExternal => write!(f, "NonDegenerateExternal"),
            Self::Feasible => write!(f, "Feasible"),
        }
    }
}

/// Which constraint a trace step applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    IterationFormula,
    MeanIndex,
    MinimalPeriod,
    NonDegenerateIterate,
    CriticalTypeAdmissibility,
    ResonanceIdentity,
    ParityDichotomy,
    MorseSeriesPositivity,
    EvenDegreeRigidity,
    DegenerateMaximum,
    NonDegenerateMultiplicity,
}

impl Rule {
    pub fn label(self) -> &'static str {
        match self {
            Rule::IterationFormula => "index iteration formula",
            Rule::MeanIndex => "mean index",
            Rule::MinimalPeriod => "minimal period of critical modules",
            Rule::NonDegenerateIterate => "non-degenerate iterate module",
            Rule::CriticalTypeAdmissibility => "critical type admissibility",
            Rule::ResonanceIdentity => "resonance identity",
            Rule::ParityDichotomy => "index parity dichotomy",
            Rule::MorseSeriesPositivity => "Morse series positivity",
            Rule::EvenDegreeRigidity => "even-degree rigidity",
            Rule::DegenerateMaximum => "symplectically degenerate maximum",
            Rule::NonDegenerateMultiplicity => "non-degenerate multiplicity theorem",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: Rule,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub trace: Vec<TraceStep>,
    pub mean_index: Option<Rational>,
    pub minimal_period: Option<u64>,
    /// Index data for `m = 1..=K(y)`.
    pub iterates: Vec<IterationData>,
    /// Critical type assignments that satisfy the resonance identity.
    pub resonance_survivors: Vec<KAssignment>,
}

struct Tracer(Vec<TraceStep>);

impl Tracer {
    fn push(&mut self, rule: Rule, detail: String) {
        self.0.push(TraceStep { rule, detail });
    }
}

/// One iterate class's options before the resonance filter.
#[derive(Debug, Clone)]
enum Candidate {
    Fixed(CriticalTypeVector),
    /// `(0, x, 0)` with `x` solved from the resonance identity.
    Interior,
}

fn describe(k: &KAssignment) -> String {
    let parts: Vec<String> = k.iter().map(|(m, v)| format!("k(y^{m})={v}")).collect();
    parts.join(" ")
}

pub fn analyze_single_orbit(config: &OrbitConfig, n_trunc: i64) -> Result<Verdict> {
    let mut trace = Tracer(Vec::new());
    let case = *config.case();
    let i1 = config.i1();

    if let NormalFormCase::NonDegenerate { .. } = case {
        trace.push(
            Rule::NonDegenerateMultiplicity,
            String::from("every iterate is non-degenerate: at least two closed characteristics exist"),
        );
        return Ok(Verdict {
            kind: VerdictKind::NonDegenerateExternal,
            trace: trace.0,
            mean_index: config.mean_index().ok(),
            minimal_period: Some(config.minimal_period()),
            iterates: Vec::new(),
            resonance_survivors: Vec::new(),
        });
    }

    let mean = config.mean_index()?;
    trace.push(
        Rule::MeanIndex,
        format!("{case}, i(y,1)={i1}: mean index = {mean}"),
    );
    let mut verdict = Verdict {
        kind: VerdictKind::ResonanceContradiction,
        trace: Vec::new(),
        mean_index: Some(mean),
        minimal_period: None,
        iterates: Vec::new(),
        resonance_survivors: Vec::new(),
    };
    if !mean.is_positive() {
        trace.push(
            Rule::ResonanceIdentity,
            format!("mean index {mean} <= 0: a lone orbit cannot contribute 1/2 to the positive sum"),
        );
        verdict.trace = trace.0;
        return Ok(verdict);
    }

    let period = config.minimal_period();
    verdict.minimal_period = Some(period);
    trace.push(Rule::MinimalPeriod, format!("K(y) = {period}"));
    let iterates: Vec<IterationData> = (1..=period).map(|m| config.iteration(m)).collect::<Result<_>>()?;
    for it in &iterates {
        trace.push(
            Rule::IterationFormula,
            format!(
                "m={}: i(y,m)={} i(y^m)={} nu(y^m)={}",
                it.m, it.maslov, it.morse, it.nullity
            ),
        );
    }
    let degenerate = iterates.iter().any(|it| it.nullity >= 2);

    // Candidates per iterate class.
    let mut options: Vec<(u32, Vec<Candidate>)> = Vec::new();
    for it in &iterates {
        let residue = it.m as u32;
        let cands = if it.nullity == 1 {
            let forced = nondegenerate_iterate_vector(&case, i1, it.m)?;
            trace.push(
                Rule::NonDegenerateIterate,
                format!(
                    "k(y^{}) = {forced} (index jump from i(y) is {})",
                    it.m,
                    it.morse - iterates[0].morse
                ),
            );
            vec![Candidate::Fixed(forced)]
        } else {
            let mut c: Vec<Candidate> = admissible_vectors(it.nullity, 0)?
                .into_iter()
                .map(Candidate::Fixed)
                .collect();
            if it.nullity == 3 {
                c.push(Candidate::Interior);
            }
            c
        };
        options.push((residue, cands));
    }

    // Enumerate assignments and filter by the resonance identity.
    let mut survivors: Vec<KAssignment> = Vec::new();
    let mut choice = vec![0usize; options.len()];
    loop {
        let picked: Vec<(u32, &Candidate)> = options
            .iter()
            .zip(&choice)
            .map(|((r, cs), &i)| (*r, &cs[i]))
            .collect();
        let unknowns: Vec<u32> = picked
            .iter()
            .filter(|(_, c)| matches!(c, Candidate::Interior))
            .map(|(r, _)| *r)
            .collect();
        if unknowns.len() > 1 {
            return Err(Error::Underdetermined);
        }
        let mut assignment: KAssignment = BTreeMap::new();
        for (r, c) in &picked {
            let v = match c {
                Candidate::Fixed(v) => v.clone(),
                Candidate::Interior => CriticalTypeVector::zero(3)?,
            };
            assignment.insert(*r, v);
        }
        let cfg = config.clone().with_k_vectors(assignment.clone())?;

        if let Some(&residue) = unknowns.first() {
            let slot = KSlot { residue, level: 1 };
            let x = solve_interior_k(&cfg, slot)?;
            let actual = Parity::of(iterates[residue as usize - 1].morse);
            let dichotomy = parity_dichotomy(&cfg, slot)?;
            let sols: Vec<String> = dichotomy
                .iter()
                .map(|(p, v)| format!("{p:?} i(y^{residue}) gives k_1={v}"))
                .collect();
            trace.push(
                Rule::ParityDichotomy,
                format!(
                    "with {}: non-negative solutions [{}]; formula gives {actual:?} parity",
                    describe_except(&assignment, residue),
                    sols.join(", ")
                ),
            );
            if x.is_integer() && x >= int(1) {
                let value = x.to_integer() as u32;
                let v = CriticalTypeVector::new(vec![0, value, 0])?;
                trace.push(
                    Rule::ResonanceIdentity,
                    format!("solved interior k_1(y^{residue}) = {x}: admissible"),
                );
                assignment.insert(residue, v);
                survivors.push(assignment);
            } else if x == int(0) {
                trace.push(
                    Rule::ResonanceIdentity,
                    format!("solved interior k_1(y^{residue}) = 0: same as the zero vector"),
                );
            } else {
                trace.push(
                    Rule::CriticalTypeAdmissibility,
                    format!("solved interior k_1(y^{residue}) = {x}: not a positive integer"),
                );
            }
        } else {
            let report = resonance_sums(core::slice::from_ref(&cfg))?;
            if report.holds_positive {
                trace.push(
                    Rule::ResonanceIdentity,
                    format!("{}: chi/mean = 1/2 holds", describe(&assignment)),
                );
                survivors.push(assignment);
            } else {
                trace.push(
                    Rule::ResonanceIdentity,
                    format!(
                        "{}: chi/mean = {} != 1/2",
                        describe(&assignment),
                        report.sum_positive
                    ),
                );
            }
        }

        // Odometer step.
        let mut pos = 0;
        while pos < choice.len() {
            choice[pos] += 1;
            if choice[pos] < options[pos].1.len() {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
        if pos == choice.len() {
            break;
        }
    }
    survivors.sort();
    survivors.dedup();
    verdict.iterates = iterates.clone();
    verdict.resonance_survivors = survivors.clone();

    if survivors.is_empty() {
        trace.push(
            Rule::ResonanceIdentity,
            String::from("no admissible critical type data satisfies the resonance identity"),
        );
        verdict.trace = trace.0;
        return Ok(verdict);
    }

    let guard = guard_for(mean);
    let lowest = iterates.iter().map(|it| it.morse).min().unwrap_or(0).min(0);
    if n_trunc - guard < lowest {
        return Err(Error::Inconclusive {
            truncation: n_trunc,
            guard,
            lowest_degree: lowest,
        });
    }

    let mut first_violation: Option<(i64, Rational)> = None;
    let mut passing = false;
    for assignment in &survivors {
        let cfg = config.clone().with_k_vectors(assignment.clone())?;
        let series = build_morse_series(&cfg, n_trunc)?;
        let result = check_positivity(&series, guard);
        if let Some(shortcut) = even_parity_shortcut(&series, guard) {
            trace.push(
                Rule::EvenDegreeRigidity,
                match shortcut.first_mismatch {
                    None => format!(
                        "{}: M(t) has only even terms and equals 1/(1-t^2)",
                        describe(assignment)
                    ),
                    Some((d, c)) => format!(
                        "{}: M(t) has only even terms but differs from 1/(1-t^2) at t^{d} (difference {c})",
                        describe(assignment)
                    ),
                },
            );
        }
        match result.verdict {
            PositivityVerdict::Violated => {
                let (d, c) = result.first_violation.unwrap();
                trace.push(
                    Rule::MorseSeriesPositivity,
                    format!(
                        "{}: u_{d} = {c} < 0 (checked up to degree {})",
                        describe(assignment),
                        result.checked_up_to
                    ),
                );
                if first_violation.is_none() {
                    first_violation = Some((d, c));
                }
            }
            PositivityVerdict::NonNegativeUpToTruncation => {
                trace.push(
                    Rule::MorseSeriesPositivity,
                    format!(
                        "{}: U(t) >= 0 up to degree {}",
                        describe(assignment),
                        result.checked_up_to
                    ),
                );
                passing = true;
            }
        }
    }

    verdict.kind = if !passing {
        let (degree, coefficient) = first_violation.unwrap();
        VerdictKind::MorseSeriesContradiction { degree, coefficient }
    } else if mean == int(2) && degenerate {
        trace.push(
            Rule::DegenerateMaximum,
            String::from("degenerate orbit with mean index 2: symplectically degenerate maximum, infinitely many orbits"),
        );
        VerdictKind::SymplecticallyDegenerateMaximum { mean_index: mean }
    } else {
        VerdictKind::Feasible
    };
    verdict.trace = trace.0;
    Ok(verdict)
}

fn describe_except(k: &KAssignment, residue: u32) -> String {
    let parts: Vec<String> = k
        .iter()
        .filter(|(m, _)| **m != residue)
        .map(|(m, v)| format!("k(y^{m})={v}"))
        .collect();
    if parts.is_empty() {
        String::from("no other classes")
    } else {
        parts.join(" ")
    }
}

/// Bounds of a case sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepGrid {
    pub i1_min: i64,
    pub i1_max: i64,
    pub q_max: i64,
    pub truncation: i64,
}

impl SweepGrid {
    /// Every grid configuration: Case 1 with `b ∈ {-1, 0, 1}`, Case 2 with
    /// every reduced `p/q`, `q ≤ q_max`, Case 3 with `b ∈ {0, 1}`, Case 4; each
    /// with all `i(y, 1)` of the admissible parity in range.
    pub fn configs(&self) -> Vec<OrbitConfig> {
        let mut cases = Vec::new();
        for b in -1..=1 {
            cases.push(NormalFormCase::Case1 { b });
        }
        for q in 1..=self.q_max {
            for p in 1..2 * q {
                if p != q && p.gcd(&q) == 1 {
                    if let Ok(case) = NormalFormCase::case2(p, q) {
                        cases.push(case);
                    }
                }
            }
        }
        for b in 0..=1 {
            cases.push(NormalFormCase::Case3 { b });
        }
        cases.push(NormalFormCase::Case4);

        let mut out = Vec::new();
        for case in cases {
            for i1 in self.i1_min..=self.i1_max {
                if let Ok(cfg) = OrbitConfig::new(case, i1) {
                    out.push(cfg);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepEntry {
    pub config: OrbitConfig,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepReport {
    pub grid: SweepGrid,
    pub entries: Vec<SweepEntry>,
    /// Grid points whose analysis could not finish (e.g. truncation too small).
    pub inconclusive: Vec<(OrbitConfig, Error)>,
}

impl SweepReport {
    /// Collects per-point results, which may have been computed in any order.
    pub fn from_results(grid: SweepGrid, results: Vec<(OrbitConfig, Result<Verdict>)>) -> Self {
        let mut entries = Vec::new();
        let mut inconclusive = Vec::new();
        for (config, result) in results {
            match result {
                Ok(verdict) => entries.push(SweepEntry { config, verdict }),
                Err(e) => inconclusive.push((config, e)),
            }
        }
        Self {
            grid,
            entries,
            inconclusive,
        }
    }

    pub fn count(&self, key: &str) -> usize {
        self.entries
            .iter()
            .filter(|e| e.verdict.kind.key() == key)
            .count()
    }

    pub fn feasible_count(&self) -> usize {
        self.count("feasible")
    }

    /// No feasible single-orbit world and nothing left undecided.
    pub fn certified(&self) -> bool {
        self.feasible_count() == 0 && self.inconclusive.is_empty()
    }

    /// `(verdict key, count)` for every verdict kind, in a fixed order.
    pub fn summary(&self) -> [(&'static str, usize); 5] {
        [
            "resonance_contradiction",
            "morse_series_contradiction",
            "sdm",
            "nondegenerate_external",
            "feasible",
        ]
        .map(|k| (k, self.count(k)))
    }
}

/// Runs [`analyze_single_orbit`] on every grid point, in grid order.
pub fn sweep(grid: SweepGrid) -> SweepReport {
    let results = grid
        .configs()
        .into_iter()
        .map(|cfg| {
            let r = analyze_single_orbit(&cfg, grid.truncation);
            (cfg, r)
        })
        .collect();
    SweepReport::from_results(grid, results)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(case: NormalFormCase, i1: i64) -> Verdict {
        analyze_single_orbit(&OrbitConfig::new(case, i1).unwrap(), 400).unwrap()
    }

    #[test]
    fn shear_case_smallest_index() {
        let v = run(NormalFormCase::Case1 { b: 1 }, 0);
        assert_eq!(
            v.kind,
            VerdictKind::MorseSeriesContradiction {
                degree: -1,
                coefficient: int(-1)
            }
        );
    }

    #[test]
    fn case3_is_sdm() {
        let v = run(NormalFormCase::Case3 { b: 0 }, 0);
        assert_eq!(
            v.kind,
            VerdictKind::SymplecticallyDegenerateMaximum { mean_index: int(2) }
        );
        // With ν(y) = 2 the only resonance survivor is k(y) = (1,0), whose
        // Morse series starts at t^{-2}; positivity already fails.
        let v = run(NormalFormCase::Case3 { b: 1 }, 0);
        assert_eq!(
            v.kind,
            VerdictKind::MorseSeriesContradiction {
                degree: -1,
                coefficient: int(-1)
            }
        );
    }

    #[test]
    fn case2_large_index() {
        for (p, q) in [(1, 2), (3, 2), (1, 7), (11, 12)] {
            let v = run(NormalFormCase::case2(p, q).unwrap(), 2);
            assert_eq!(v.kind, VerdictKind::ResonanceContradiction, "{p}/{q}");
        }
    }

    #[test]
    fn nonpositive_mean() {
        let v = run(NormalFormCase::Case4, -1);
        assert_eq!(v.kind, VerdictKind::ResonanceContradiction);
        let v = run(NormalFormCase::Case1 { b: 0 }, -2);
        assert_eq!(v.kind, VerdictKind::ResonanceContradiction);
    }

    #[test]
    fn nondegenerate_is_external() {
        let case = NormalFormCase::NonDegenerate {
            elliptic: false,
            index_jump_odd: false,
            mean_index: None,
        };
        assert_eq!(run(case, 0).kind, VerdictKind::NonDegenerateExternal);
    }

    #[test]
    fn too_small_truncation_is_inconclusive() {
        let cfg = OrbitConfig::new(NormalFormCase::Case4, 1).unwrap();
        assert!(matches!(
            analyze_single_orbit(&cfg, 0),
            Err(Error::Inconclusive { .. })
        ));
    }

    #[test]
    fn empty_grid() {
        let grid = SweepGrid {
            i1_min: 3,
            i1_max: 2,
            q_max: 12,
            truncation: 400,
        };
        let report = sweep(grid);
        assert!(report.entries.is_empty());
        assert_eq!(report.feasible_count(), 0);
    }

    #[test]
    fn deterministic() {
        let cfg = OrbitConfig::new(NormalFormCase::case2(5, 7).unwrap(), 0).unwrap();
        assert_eq!(analyze_single_orbit(&cfg, 200), analyze_single_orbit(&cfg, 200));
    }
}
