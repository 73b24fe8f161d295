//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use maslovkit::{emit_report, Format, Report};
use maslovkit_core::analyzer::{analyze_single_orbit, sweep, SweepGrid, VerdictKind};
use maslovkit_core::critical::{admissible_vectors, nondegenerate_iterate_vector, CriticalTypeVector};
use maslovkit_core::iteration::{
    maslov_index, mean_index, minimal_period, morse_index, nullity, NormalFormCase, OrbitConfig,
};
use maslovkit_core::resonance::{
    parity_dichotomy, resonance_sums, solve_interior_k, substitute, KSlot, Parity,
};
use maslovkit_core::series::{build_morse_series, check_positivity, LaurentSeries, PositivityVerdict};
use maslovkit_core::symplectic::nullity_oracle;
use maslovkit_core::{frac, int, Rational};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn cases(q_max: i64) -> Vec<NormalFormCase> {
    let mut out: Vec<NormalFormCase> = (-1..=1).map(|b| NormalFormCase::Case1 { b }).collect();
    for q in 1..=q_max {
        for p in 1..2 * q {
            if p != q && p.gcd(&q) == 1 {
                out.push(NormalFormCase::case2(p, q).unwrap());
            }
        }
    }
    out.extend([
        NormalFormCase::Case3 { b: 0 },
        NormalFormCase::Case3 { b: 1 },
        NormalFormCase::Case4,
    ]);
    out
}

fn config(case: NormalFormCase, i1: i64) -> OrbitConfig {
    OrbitConfig::new(case, i1).unwrap()
}

fn kv(k: &[u32]) -> CriticalTypeVector {
    CriticalTypeVector::new(k.to_vec()).unwrap()
}

fn theorem_replay() -> Check {
    let grid = SweepGrid {
        i1_min: -4,
        i1_max: 40,
        q_max: 12,
        truncation: 400,
    };
    let start = Instant::now();
    let report = sweep(grid);
    let elapsed = start.elapsed();
    ensure!(
        report.feasible_count() == 0,
        "feasible_count = {}",
        report.feasible_count()
    );
    ensure!(
        report.inconclusive.is_empty(),
        "{} inconclusive points",
        report.inconclusive.len()
    );

    let sdm: BTreeSet<(u8, i64)> = report
        .entries
        .iter()
        .filter(|e| {
            matches!(
                e.verdict.kind,
                VerdictKind::SymplecticallyDegenerateMaximum { .. }
            )
        })
        .map(|e| (e.config.case().number(), e.config.i1()))
        .collect();
    ensure!(sdm == BTreeSet::from([(3, 0), (4, 1)]), "SDM points {sdm:?}");
    for e in &report.entries {
        if let VerdictKind::SymplecticallyDegenerateMaximum { mean_index } = e.verdict.kind {
            ensure!(
                mean_index == int(2),
                "{} i1={}: SDM with mean index {mean_index}",
                e.config.case(),
                e.config.i1()
            );
        }
    }
    ensure!(elapsed.as_secs() < 60, "sweep took {elapsed:?}");
    let text = emit_report(&Report::Sweep(&report), Format::Text);
    ensure!(text.contains("feasible=0"), "summary line missing feasible=0");
    Ok(format!(
        "{} points, feasible=0, inconclusive=0, SDM at {sdm:?}, {:.1?}",
        report.entries.len(),
        elapsed
    ))
}

fn paper_intermediates() -> Check {
    // Case 1, i(y,1) = 0: the resonance identity leaves k(y²) = 0, M(t) = Σ t^{2m-4},
    // and U(t) turns negative at t^{-1}.
    for b in -1..=1 {
        let cfg = config(NormalFormCase::Case1 { b }, 0);
        let v = analyze_single_orbit(&cfg, 400).unwrap();
        ensure!(!v.resonance_survivors.is_empty(), "Case1 b={b}: no survivors");
        for s in &v.resonance_survivors {
            ensure!(
                s[&2].entries().iter().all(|&x| x == 0),
                "Case1 b={b}: k(y^2) = {}",
                s[&2]
            );
            let series = build_morse_series(&cfg.clone().with_k_vectors(s.clone()).unwrap(), 400).unwrap();
            let expected = LaurentSeries::from_terms((1..=202).map(|m| (2 * m - 4, int(1))), Some(400));
            ensure!(series == expected, "Case1 b={b}: M(t) = {series}");
        }
        ensure!(
            matches!(v.kind, VerdictKind::MorseSeriesContradiction { degree: -1, .. }),
            "Case1 b={b}: verdict {}",
            v.kind
        );
    }

    // Case 1, i(y,1) ≥ 2 (b = 0, where ν(y²) = 3): an end entry gives at most 1/3, the
    // interior solve gives k_1(y²) = i(y,1) with i(y²) odd.
    for i1 in (2..=40).step_by(2) {
        let case = NormalFormCase::Case1 { b: 0 };
        for end in [[1, 0, 0], [0, 0, 1]] {
            let cfg = config(case, i1)
                .with_k_vectors(BTreeMap::from([(1, kv(&[1])), (2, kv(&end))]))
                .unwrap();
            let r = resonance_sums(&[cfg]).unwrap();
            ensure!(
                r.sum_positive <= frac(1, 3),
                "i1={i1}: end entry sum {}",
                r.sum_positive
            );
        }
        let cfg = config(case, i1)
            .with_k_vectors(BTreeMap::from([(1, kv(&[1])), (2, kv(&[0, 0, 0]))]))
            .unwrap();
        let sols = parity_dichotomy(&cfg, KSlot { residue: 2, level: 1 }).unwrap();
        ensure!(
            sols == vec![(Parity::Odd, int(i1))],
            "i1={i1}: dichotomy {sols:?}"
        );
    }

    // Case 2, i(y,1) = 0: i(y) = -2; the interior solve gives
    // k_1(y^K) = K - 1 - Kθ/2π < K - 1, and every k_1 < K - 1 breaks positivity.
    for case in cases(12).into_iter().filter(|c| c.number() == 2) {
        let NormalFormCase::Case2 { rotation } = case else {
            unreachable!()
        };
        let k = minimal_period(&case);
        ensure!(morse_index(&case, 0, 1).unwrap() == -2, "{case}: i(y) != -2");
        let base: BTreeMap<u32, CriticalTypeVector> = (1..=k)
            .map(|m| {
                let v = if m < k {
                    nondegenerate_iterate_vector(&case, 0, m).unwrap()
                } else {
                    kv(&[0, 0, 0])
                };
                (m as u32, v)
            })
            .collect();
        let cfg = config(case, 0).with_k_vectors(base).unwrap();
        for m in 1..k {
            ensure!(
                cfg.k_vector(m).unwrap().entries() == [1],
                "{case}: k(y^{m}) not (1)"
            );
        }
        let slot = KSlot {
            residue: k as u32,
            level: 1,
        };
        let x = solve_interior_k(&cfg, slot).unwrap();
        let k_r = int(k as i64);
        let expected = k_r - int(1) - k_r * rotation.over_pi() / 2;
        ensure!(x == expected, "{case}: solved {x}, expected {expected}");
        ensure!(x < k_r - int(1), "{case}: solved {x} not below K-1");
        for k1 in 0..k - 1 {
            let trial = substitute(&cfg, slot, k1 as u32).unwrap();
            let series = build_morse_series(&trial, 400).unwrap();
            let r = check_positivity(&series, 4);
            ensure!(
                r.verdict == PositivityVerdict::Violated,
                "{case}: k_1={k1} passes positivity"
            );
        }
        let v = analyze_single_orbit(&config(case, 0), 400).unwrap();
        ensure!(
            v.kind.is_contradiction() && v.kind != VerdictKind::Feasible,
            "{case}: {}",
            v.kind
        );
    }

    // Case 3: every survivor has k_0 - k_1 + k_2 = 1.
    for b in 0..=1 {
        let v = analyze_single_orbit(&config(NormalFormCase::Case3 { b }, 0), 400).unwrap();
        ensure!(!v.resonance_survivors.is_empty(), "Case3 b={b}: no survivors");
        for s in &v.resonance_survivors {
            ensure!(s[&1].alternating_sum() == 1, "Case3 b={b}: k(y) = {}", s[&1]);
        }
    }

    // Case 4: k_1(y) = 1 at i(y,1) = 1.
    let v = analyze_single_orbit(&config(NormalFormCase::Case4, 1), 400).unwrap();
    ensure!(
        v.resonance_survivors.len() == 1,
        "Case4: survivors {:?}",
        v.resonance_survivors
    );
    ensure!(
        v.resonance_survivors[0][&1].entries() == [0, 1],
        "Case4: k(y) = {}",
        v.resonance_survivors[0][&1]
    );
    Ok("Case1 i1=0 and i1>=2, Case2 (q<=12), Case3, Case4 intermediates exact".into())
}

/// i(y, m) written out per case, independently of the library.
fn reference_maslov(case: &NormalFormCase, i1: i64, m: i64) -> i64 {
    match *case {
        NormalFormCase::Case1 { b: 1 } => m * (i1 + 1) - 1,
        NormalFormCase::Case1 { .. } => m * (i1 + 1) - 1 - (1 + (-1i64).pow((m % 2) as u32)) / 2,
        NormalFormCase::Case2 { rotation } => {
            let (p, q) = (rotation.numer(), rotation.denom());
            // E(mθ/2π) = ⌈mp / 2q⌉
            m * i1 + 2 * Integer::div_ceil(&(m * p), &(2 * q)) - 2
        }
        NormalFormCase::Case3 { .. } => m * (i1 + 2) - 2,
        NormalFormCase::Case4 => m * (i1 + 1) - 1,
        NormalFormCase::NonDegenerate { .. } => unreachable!(),
    }
}

fn iteration_suite() -> Check {
    let mut checked = 0u64;
    for case in cases(12) {
        let odd = case == NormalFormCase::Case4;
        for half in [-2i64, -1, 0, 1, 5, 20] {
            let i1 = if odd { 2 * half + 1 } else { 2 * half };
            let mean: Rational = mean_index(&case, i1).unwrap();
            let bound = int(i1.abs() + 4);
            for m in 1..=10_000u64 {
                let maslov = maslov_index(&case, i1, m).unwrap();
                ensure!(
                    maslov == reference_maslov(&case, i1, m as i64),
                    "{case} i1={i1} m={m}: i(y,m)={maslov}"
                );
                ensure!(
                    morse_index(&case, i1, m).unwrap() == maslov - 2,
                    "{case} i1={i1} m={m}: shift"
                );
                let diff = Rational::new(maslov, m as i64) - mean;
                let dev = if diff < int(0) { -diff } else { diff };
                ensure!(
                    dev * int(m as i64) <= bound,
                    "{case} i1={i1} m={m}: deviation {dev}"
                );
                checked += 1;
            }
        }
        let i1 = if odd { 1 } else { 0 };
        let passes = |k: u64| {
            (1..=100).all(|m| {
                nullity(&case, m).unwrap() == nullity(&case, m + k).unwrap()
                    && (morse_index(&case, i1, m + k).unwrap() - morse_index(&case, i1, m).unwrap()) % 2 == 0
            })
        };
        let k = minimal_period(&case);
        ensure!(passes(k), "{case}: K={k} is not a period");
        ensure!((1..k).all(|s| !passes(s)), "{case}: K={k} is not minimal");
    }
    Ok(format!("{checked} (case, i1, m) triples, periods minimal"))
}

fn nullity_oracle_equivalence() -> Check {
    let mut agree = 0;
    let mut total = 0;
    for case in cases(12) {
        let (a, b) = case.blocks().unwrap();
        for m in 1..=48 {
            total += 1;
            if nullity(&case, m).unwrap() == nullity_oracle(a, b, m).unwrap() {
                agree += 1;
            }
        }
    }
    ensure!(agree == total, "{agree}/{total} agree");
    Ok(format!("{agree}/{total} agree"))
}

fn series_round_trip() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 400;
    let guard = 4;
    for trial in 0..1000 {
        let lo = rng.gen_range(-2..=200);
        let hi = rng.gen_range(lo..=200);
        let u = LaurentSeries::from_terms((lo..=hi).map(|d| (d, int(rng.gen_range(0..=9)))), None);
        let terms: Vec<(i64, Rational)> = u
            .mul_one_plus_t()
            .add(&LaurentSeries::geometric_even(n))
            .terms()
            .collect();
        let m = LaurentSeries::from_terms(terms, Some(n));
        let r = check_positivity(&m, guard);
        ensure!(
            r.verdict == PositivityVerdict::NonNegativeUpToTruncation,
            "trial {trial}: {:?}",
            r.first_violation
        );
        for d in -2..=n - guard {
            ensure!(
                r.u.coeff(d) == u.coeff(d),
                "trial {trial}: u_{d} = {} vs {}",
                r.u.coeff(d),
                u.coeff(d)
            );
        }
    }
    Ok("1000/1000 exact reconstructions".into())
}

fn resonance_arithmetic() -> Check {
    let mut means = BTreeSet::new();
    for q in 1..=8 {
        for p in -24..=24 {
            if p != 0 {
                means.insert(Rational::new(p, q));
            }
        }
    }
    for &mean in &means {
        let case = NormalFormCase::NonDegenerate {
            elliptic: true,
            index_jump_odd: false,
            mean_index: Some(mean),
        };
        let cfg = config(case, 2);
        let r = resonance_sums(&[cfg]).unwrap();
        ensure!(
            r.holds_positive == (mean == int(2)),
            "mean {mean}: holds={}",
            r.holds_positive
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut substituted = 0;
    for case in cases(12) {
        let odd = case == NormalFormCase::Case4;
        for half in -2..=20 {
            let i1 = if odd { 2 * half + 1 } else { 2 * half };
            let cfg = config(case, i1);
            if cfg.mean_index().unwrap() <= int(0) {
                continue;
            }
            let k = cfg.minimal_period();
            let Some(target) = (1..=k).find(|&m| nullity(&case, m).unwrap() == 3) else {
                continue;
            };
            for _ in 0..4 {
                let ks: BTreeMap<u32, CriticalTypeVector> = (1..=k)
                    .map(|m| {
                        let all = admissible_vectors(nullity(&case, m).unwrap(), 3).unwrap();
                        (m as u32, all[rng.gen_range(0..all.len())].clone())
                    })
                    .collect();
                let mut ks = ks;
                ks.insert(target as u32, kv(&[0, 0, 0]));
                let cfg = cfg.clone().with_k_vectors(ks).unwrap();
                let slot = KSlot {
                    residue: target as u32,
                    level: 1,
                };
                let x = solve_interior_k(&cfg, slot).unwrap();
                if !x.is_integer() || x < int(0) {
                    continue;
                }
                let solved = substitute(&cfg, slot, x.to_integer() as u32).unwrap();
                let r = resonance_sums(&[solved]).unwrap();
                ensure!(
                    r.sum_positive == frac(1, 2),
                    "{case} i1={i1}: re-validated to {}",
                    r.sum_positive
                );
                substituted += 1;
            }
        }
    }
    ensure!(substituted > 0, "no integral solutions exercised");
    Ok(format!(
        "{} mean indices, {substituted} solve+substitute round trips",
        means.len()
    ))
}

/// Each clause written out independently of the library.
fn satisfies_all_clauses(k: &[u32]) -> bool {
    let nu = k.len();
    let last = nu - 1;
    let end_values = k[0] <= 1 && k[last] <= 1;
    let leading = k[0] != 1 || (1..nu).all(|l| k[l] == 0);
    let trailing = k[last] != 1 || (0..last).all(|l| k[l] == 0);
    let interior = (1..last).all(|l| k[l] == 0) || (k[0] == 0 && k[last] == 0);
    let single = nu > 3 || k.iter().filter(|&&x| x > 0).count() <= 1;
    end_values && leading && trailing && interior && single
}

fn admissible_filter() -> Check {
    for nu in 1..=3usize {
        for interior_max in 0..=5u32 {
            let range = interior_max.max(1) + 1;
            let mut brute = BTreeSet::new();
            for code in 0..range.pow(nu as u32) {
                let k: Vec<u32> = (0..nu).map(|l| (code / range.pow(l as u32)) % range).collect();
                let interior_ok = (1..nu.saturating_sub(1)).all(|l| k[l] <= interior_max);
                if interior_ok && satisfies_all_clauses(&k) {
                    brute.insert(k);
                }
            }
            let got: BTreeSet<Vec<u32>> = admissible_vectors(nu, interior_max)
                .unwrap()
                .iter()
                .map(|v| v.entries().to_vec())
                .collect();
            ensure!(
                got == brute,
                "nu={nu} interior_max={interior_max}: {got:?} vs {brute:?}"
            );
        }
    }
    Ok("nu in {1,2,3}, interior_max in 0..=5".into())
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("1 case sweep replay", theorem_replay),
        ("2 worked-case intermediates", paper_intermediates),
        ("3 iteration formulas", iteration_suite),
        ("4 nullity oracle", nullity_oracle_equivalence),
        ("5 series round trip", series_round_trip),
        ("6 resonance arithmetic", resonance_arithmetic),
        ("7 admissible filter", admissible_filter),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                println!("FAIL criterion {name}: {detail}");
                failed += 1;
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
