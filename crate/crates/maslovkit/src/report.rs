//! Text and key-value rendering of analysis results.
//!
//! The `kv` format is a sequence of records separated by blank lines. Each
//! record is a block of `key=value` lines whose first line is `record=<type>`:
//!
//! | record        | keys                                                                   |
//! |---------------|------------------------------------------------------------------------|
//! | `orbit`       | orbit keys, `verdict`, `mean_index`, `minimal_period`, `survivors`, and `degree`/`coefficient` for Morse series contradictions |
//! | `inconclusive`| orbit keys, `error`                                                    |
//! | `summary`     | `points`, one count per verdict key, `inconclusive`, `certified`       |
//! | `iterate`     | orbit keys, `m`, `maslov`, `morse`, `nullity`                          |
//! | `resonance`   | `sum_positive`, `sum_negative`, `holds_positive`, `holds_negative`     |
//!
//! Orbit keys are `case` (1–4 or `nondegenerate`), `b` or `theta` where they
//! apply, and `i1`. Rationals are written `p/q` or as plain integers.

use std::fmt::Write as _;

use maslovkit_core::analyzer::{SweepReport, Verdict, VerdictKind};
use maslovkit_core::critical::average_euler_char;
use maslovkit_core::iteration::{IterationData, NormalFormCase, OrbitConfig};
use maslovkit_core::resonance::{contribution, ResonanceReport};

use crate::config::Format;

pub enum Report<'a> {
    Analyze {
        orbit: &'a OrbitConfig,
        verdict: &'a Verdict,
    },
    Sweep(&'a SweepReport),
    Table {
        orbit: &'a OrbitConfig,
        rows: &'a [IterationData],
    },
    Resonance {
        orbits: &'a [OrbitConfig],
        report: &'a ResonanceReport,
    },
}

pub fn emit_report(report: &Report<'_>, format: Format) -> String {
    match format {
        Format::Text => emit_text(report),
        Format::Kv => emit_kv(report),
    }
}

fn orbit_label(orbit: &OrbitConfig) -> String {
    format!("{} i1={}", orbit.case(), orbit.i1())
}

fn orbit_keys(orbit: &OrbitConfig) -> Vec<(&'static str, String)> {
    let mut keys = Vec::new();
    match *orbit.case() {
        NormalFormCase::Case1 { b } | NormalFormCase::Case3 { b } => {
            keys.push(("case", orbit.case().number().to_string()));
            keys.push(("b", b.to_string()));
        }
        NormalFormCase::Case2 { rotation } => {
            keys.push(("case", "2".into()));
            keys.push(("theta", rotation.to_string()));
        }
        NormalFormCase::Case4 => keys.push(("case", "4".into())),
        NormalFormCase::NonDegenerate { .. } => keys.push(("case", "nondegenerate".into())),
    }
    keys.push(("i1", orbit.i1().to_string()));
    keys
}

fn push_record(out: &mut String, record: &str, fields: &[(&str, String)]) {
    if !out.is_empty() {
        out.push('\n');
    }
    let _ = writeln!(out, "record={record}");
    for (k, v) in fields {
        let _ = writeln!(out, "{k}={v}");
    }
}

fn verdict_fields(orbit: &OrbitConfig, verdict: &Verdict) -> Vec<(&'static str, String)> {
    let mut fields = orbit_keys(orbit);
    fields.push(("verdict", verdict.kind.key().into()));
    if let Some(mean) = verdict.mean_index {
        fields.push(("mean_index", mean.to_string()));
    }
    if let Some(k) = verdict.minimal_period {
        fields.push(("minimal_period", k.to_string()));
    }
    fields.push(("survivors", verdict.resonance_survivors.len().to_string()));
    if let VerdictKind::MorseSeriesContradiction { degree, coefficient } = verdict.kind {
        fields.push(("degree", degree.to_string()));
        fields.push(("coefficient", coefficient.to_string()));
    }
    fields
}

fn summary_fields(report: &SweepReport) -> Vec<(&'static str, String)> {
    let mut fields = vec![(
        "points",
        (report.entries.len() + report.inconclusive.len()).to_string(),
    )];
    fields.extend(report.summary().iter().map(|&(k, n)| (k, n.to_string())));
    fields.push(("inconclusive", report.inconclusive.len().to_string()));
    fields.push(("certified", report.certified().to_string()));
    fields
}

fn emit_kv(report: &Report<'_>) -> String {
    let mut out = String::new();
    match report {
        Report::Analyze { orbit, verdict } => push_record(&mut out, "orbit", &verdict_fields(orbit, verdict)),
        Report::Sweep(sweep) => {
            for entry in &sweep.entries {
                push_record(&mut out, "orbit", &verdict_fields(&entry.config, &entry.verdict));
            }
            for (orbit, error) in &sweep.inconclusive {
                let mut fields = orbit_keys(orbit);
                fields.push(("error", error.to_string()));
                push_record(&mut out, "inconclusive", &fields);
            }
            push_record(&mut out, "summary", &summary_fields(sweep));
        }
        Report::Table { orbit, rows } => {
            for row in rows.iter() {
                let mut fields = orbit_keys(orbit);
                fields.push(("m", row.m.to_string()));
                fields.push(("maslov", row.maslov.to_string()));
                fields.push(("morse", row.morse.to_string()));
                fields.push(("nullity", row.nullity.to_string()));
                push_record(&mut out, "iterate", &fields);
            }
        }
        Report::Resonance { report, .. } => push_record(
            &mut out,
            "resonance",
            &[
                ("sum_positive", report.sum_positive.to_string()),
                ("sum_negative", report.sum_negative.to_string()),
                ("holds_positive", report.holds_positive.to_string()),
                ("holds_negative", report.holds_negative.to_string()),
            ],
        ),
    }
    out
}

fn emit_text(report: &Report<'_>) -> String {
    let mut out = String::new();
    match report {
        Report::Analyze { orbit, verdict } => {
            let _ = writeln!(out, "orbit: {}", orbit_label(orbit));
            let _ = writeln!(out, "verdict: {}", verdict.kind);
            if let Some(mean) = verdict.mean_index {
                let _ = writeln!(out, "mean_index={mean}");
            }
            if let Some(k) = verdict.minimal_period {
                let _ = writeln!(out, "minimal_period={k}");
            }
            out.push_str("trace:\n");
            for step in &verdict.trace {
                let _ = writeln!(out, "  [{}] {}", step.rule.label(), step.detail);
            }
        }
        Report::Sweep(sweep) => {
            let g = sweep.grid;
            let _ = writeln!(
                out,
                "sweep: i1 in [{}, {}], q <= {}, truncation {}",
                g.i1_min, g.i1_max, g.q_max, g.truncation
            );
            for entry in &sweep.entries {
                let _ = writeln!(out, "{:<28} {}", orbit_label(&entry.config), entry.verdict.kind);
            }
            for (orbit, error) in &sweep.inconclusive {
                let _ = writeln!(out, "{:<28} inconclusive: {error}", orbit_label(orbit));
            }
            let counts: Vec<String> = summary_fields(sweep)
                .into_iter()
                .filter(|(k, _)| *k != "certified")
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            let _ = writeln!(out, "summary: {}", counts.join(" "));
            let _ = writeln!(out, "certified: {}", sweep.certified());
        }
        Report::Table { orbit, rows } => {
            let _ = writeln!(out, "orbit: {}", orbit_label(orbit));
            let _ = writeln!(out, "{:>6} {:>8} {:>8} {:>7}", "m", "maslov", "morse", "nullity");
            for row in rows.iter() {
                let _ = writeln!(
                    out,
                    "{:>6} {:>8} {:>8} {:>7}",
                    row.m, row.maslov, row.morse, row.nullity
                );
            }
        }
        Report::Resonance { orbits, report } => {
            for orbit in orbits.iter() {
                let chi = average_euler_char(orbit).map(|c| c.to_string());
                let term = contribution(orbit).map(|c| c.to_string());
                let mean = orbit.mean_index().map(|c| c.to_string());
                let show = |r: Result<String, maslovkit_core::Error>| r.unwrap_or_else(|e| format!("({e})"));
                let _ = writeln!(
                    out,
                    "{}: chi_hat={} mean_index={} ratio={}",
                    orbit_label(orbit),
                    show(chi),
                    show(mean),
                    show(term)
                );
            }
            let _ = writeln!(
                out,
                "sum over positive mean index = {} (target 1/2)",
                report.sum_positive
            );
            let _ = writeln!(
                out,
                "sum over negative mean index = {} (target 0)",
                report.sum_negative
            );
            let _ = writeln!(out, "holds: {}", report.holds());
        }
    }
    out
}
