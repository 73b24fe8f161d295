//! Line-oriented run configuration.
//!
//! ```text
//! # comment
//! mode=analyze
//! truncation=400
//! case=2
//! i1=0
//! theta=1/2
//! k.4=0,2,0
//! ```
//!
//! Orbit keys (`case`, `b`, `i1`, `theta`, `k.<m>`, `mean_index`, `elliptic`,
//! `index_jump_odd`) describe one orbit. An `[orbit]` line starts another
//! one; run keys may appear anywhere. `theta` is in units of π.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use maslovkit_core::critical::CriticalTypeVector;
use maslovkit_core::iteration::{NormalFormCase, OrbitConfig};
use maslovkit_core::Rational;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Analyze,
    Sweep,
    Table,
    Resonance,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Analyze => "analyze",
            Mode::Sweep => "sweep",
            Mode::Table => "table",
            Mode::Resonance => "resonance",
        }
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "analyze" => Ok(Mode::Analyze),
            "sweep" => Ok(Mode::Sweep),
            "table" => Ok(Mode::Table),
            "resonance" => Ok(Mode::Resonance),
            _ => Err(format!(
                "unknown mode '{s}' (expected analyze, sweep, table or resonance)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Kv,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Text => "text",
            Format::Kv => "kv",
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "text" => Ok(Format::Text),
            "kv" => Ok(Format::Kv),
            _ => Err(format!("unknown format '{s}' (expected text or kv)")),
        }
    }
}

/// Parsed run settings. Unset fields fall back to command-line flags, the
/// environment, or built-in defaults, in that order of precedence.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RunConfig {
    pub mode: Option<Mode>,
    pub orbits: Vec<OrbitConfig>,
    pub truncation: Option<i64>,
    pub i1_min: Option<i64>,
    pub i1_max: Option<i64>,
    pub q_max: Option<i64>,
    pub m_max: Option<u64>,
    pub format: Option<Format>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {kind}")]
pub struct ConfigError {
    pub line: usize,
    pub kind: ConfigErrorKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConfigErrorKind {
    #[error("expected key=value, got '{0}'")]
    Syntax(String),
    #[error("unknown key '{0}'")]
    UnknownKey(String),
    #[error("duplicate key '{0}'")]
    DuplicateKey(String),
    #[error("malformed fraction '{0}'")]
    MalformedFraction(String),
    #[error("invalid value for '{key}': {reason}")]
    InvalidValue { key: String, reason: String },
    #[error("orbit is missing '{0}'")]
    MissingKey(&'static str),
    #[error("'{key}' does not apply to {case}")]
    Inapplicable { key: String, case: String },
    #[error("{0}")]
    Model(maslovkit_core::Error),
}

/// Parses `p/q` or a plain integer.
pub fn parse_fraction(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().ok()?;
            let q: i64 = q.trim().parse().ok()?;
            (q != 0).then(|| Rational::new(p, q))
        }
        None => s.parse().ok().map(Rational::from_integer),
    }
}

#[derive(Default)]
struct OrbitDraft {
    start_line: usize,
    keys: BTreeMap<String, (usize, String)>,
}

impl OrbitDraft {
    fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.keys.remove(key)
    }

    fn finish(mut self) -> Result<OrbitConfig, ConfigError> {
        let start = self.start_line;
        let err = |line, kind| ConfigError { line, kind };
        let (case_line, case_str) = self
            .take("case")
            .ok_or_else(|| err(start, ConfigErrorKind::MissingKey("case")))?;
        let (i1_line, i1_str) = self
            .take("i1")
            .ok_or_else(|| err(start, ConfigErrorKind::MissingKey("i1")))?;
        let i1: i64 = parse_int(&i1_str, "i1", i1_line)?;

        let b = match self.take("b") {
            Some((line, v)) => Some((line, parse_int::<i8>(&v, "b", line)?)),
            None => None,
        };
        let case = match case_str.as_str() {
            "1" | "3" => {
                let (_, b) = b.ok_or_else(|| err(case_line, ConfigErrorKind::MissingKey("b")))?;
                let r = if case_str == "1" {
                    NormalFormCase::case1(b)
                } else {
                    NormalFormCase::case3(b)
                };
                r.map_err(|e| err(case_line, ConfigErrorKind::Model(e)))?
            }
            "2" => {
                let (line, theta) = self
                    .take("theta")
                    .ok_or_else(|| err(case_line, ConfigErrorKind::MissingKey("theta")))?;
                let r = parse_fraction(&theta)
                    .ok_or_else(|| err(line, ConfigErrorKind::MalformedFraction(theta.clone())))?;
                NormalFormCase::case2(*r.numer(), *r.denom())
                    .map_err(|e| err(line, ConfigErrorKind::Model(e)))?
            }
            "4" => NormalFormCase::Case4,
            "nondegenerate" => {
                let elliptic = self.take_bool("elliptic")?.unwrap_or(false);
                let index_jump_odd = self.take_bool("index_jump_odd")?.unwrap_or(false);
                let mean_index = match self.take("mean_index") {
                    Some((line, v)) => Some(
                        parse_fraction(&v).ok_or_else(|| err(line, ConfigErrorKind::MalformedFraction(v)))?,
                    ),
                    None => None,
                };
                NormalFormCase::NonDegenerate {
                    elliptic,
                    index_jump_odd,
                    mean_index,
                }
            }
            other => {
                return Err(err(
                    case_line,
                    ConfigErrorKind::InvalidValue {
                        key: "case".into(),
                        reason: format!("'{other}' is not 1, 2, 3, 4 or nondegenerate"),
                    },
                ))
            }
        };
        if let (
            Some((line, _)),
            NormalFormCase::Case2 { .. } | NormalFormCase::Case4 | NormalFormCase::NonDegenerate { .. },
        ) = (b, case)
        {
            return Err(err(
                line,
                ConfigErrorKind::Inapplicable {
                    key: "b".into(),
                    case: case.to_string(),
                },
            ));
        }

        let mut orbit = OrbitConfig::new(case, i1).map_err(|e| err(i1_line, ConfigErrorKind::Model(e)))?;

        let mut ks = BTreeMap::new();
        let mut last_k_line = start;
        for (key, (line, value)) in std::mem::take(&mut self.keys) {
            let Some(residue) = key.strip_prefix("k.") else {
                return Err(err(
                    line,
                    ConfigErrorKind::Inapplicable {
                        key,
                        case: case.to_string(),
                    },
                ));
            };
            let residue: u32 = residue
                .parse()
                .map_err(|_| err(line, ConfigErrorKind::UnknownKey(key.clone())))?;
            let entries = value
                .split(',')
                .map(|x| x.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| {
                    err(
                        line,
                        ConfigErrorKind::InvalidValue {
                            key: key.clone(),
                            reason: e.to_string(),
                        },
                    )
                })?;
            let v = CriticalTypeVector::new(entries).map_err(|e| err(line, ConfigErrorKind::Model(e)))?;
            ks.insert(residue, v);
            last_k_line = last_k_line.max(line);
        }
        if !ks.is_empty() {
            orbit = orbit
                .with_k_vectors(ks)
                .map_err(|e| err(last_k_line, ConfigErrorKind::Model(e)))?;
        }
        Ok(orbit)
    }

    fn take_bool(&mut self, key: &str) -> Result<Option<bool>, ConfigError> {
        match self.take(key) {
            None => Ok(None),
            Some((_, v)) if v == "true" => Ok(Some(true)),
            Some((_, v)) if v == "false" => Ok(Some(false)),
            Some((line, v)) => Err(ConfigError {
                line,
                kind: ConfigErrorKind::InvalidValue {
                    key: key.into(),
                    reason: format!("'{v}' is not true or false"),
                },
            }),
        }
    }
}

fn parse_int<T: FromStr>(value: &str, key: &str, line: usize) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value.parse().map_err(|e: T::Err| ConfigError {
        line,
        kind: ConfigErrorKind::InvalidValue {
            key: key.into(),
            reason: e.to_string(),
        },
    })
}

fn is_orbit_key(key: &str) -> bool {
    matches!(
        key,
        "case" | "b" | "i1" | "theta" | "mean_index" | "elliptic" | "index_jump_odd"
    ) || key.starts_with("k.")
}

pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut cfg = RunConfig::default();
    let mut draft = OrbitDraft {
        start_line: 1,
        ..Default::default()
    };
    let mut seen_run_keys = BTreeMap::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content == "[orbit]" {
            let done = std::mem::replace(
                &mut draft,
                OrbitDraft {
                    start_line: line,
                    ..Default::default()
                },
            );
            if !done.is_empty() {
                cfg.orbits.push(done.finish()?);
            }
            continue;
        }
        let err = |kind| ConfigError { line, kind };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(ConfigErrorKind::Syntax(content.to_string())))?;
        let (key, value) = (key.trim(), value.trim());

        if is_orbit_key(key) {
            if draft.is_empty() {
                draft.start_line = line;
            }
            if draft
                .keys
                .insert(key.to_string(), (line, value.to_string()))
                .is_some()
            {
                return Err(err(ConfigErrorKind::DuplicateKey(key.to_string())));
            }
            continue;
        }
        if seen_run_keys.insert(key.to_string(), line).is_some() {
            return Err(err(ConfigErrorKind::DuplicateKey(key.to_string())));
        }
        let invalid = |reason: String| {
            err(ConfigErrorKind::InvalidValue {
                key: key.to_string(),
                reason,
            })
        };
        match key {
            "mode" => cfg.mode = Some(value.parse().map_err(invalid)?),
            "format" => cfg.format = Some(value.parse().map_err(invalid)?),
            "truncation" => cfg.truncation = Some(parse_int(value, key, line)?),
            "i1_min" => cfg.i1_min = Some(parse_int(value, key, line)?),
            "i1_max" => cfg.i1_max = Some(parse_int(value, key, line)?),
            "q_max" => cfg.q_max = Some(parse_int(value, key, line)?),
            "m_max" => cfg.m_max = Some(parse_int(value, key, line)?),
            _ => return Err(err(ConfigErrorKind::UnknownKey(key.to_string()))),
        }
    }
    if !draft.is_empty() {
        cfg.orbits.push(draft.finish()?);
    }
    Ok(cfg)
}

fn render_orbit(out: &mut String, orbit: &OrbitConfig) {
    match *orbit.case() {
        NormalFormCase::Case1 { b } => {
            let _ = writeln!(out, "case=1\nb={b}");
        }
        NormalFormCase::Case2 { rotation } => {
            let _ = writeln!(out, "case=2\ntheta={}/{}", rotation.numer(), rotation.denom());
        }
        NormalFormCase::Case3 { b } => {
            let _ = writeln!(out, "case=3\nb={b}");
        }
        NormalFormCase::Case4 => out.push_str("case=4\n"),
        NormalFormCase::NonDegenerate {
            elliptic,
            index_jump_odd,
            mean_index,
        } => {
            let _ = writeln!(
                out,
                "case=nondegenerate\nelliptic={elliptic}\nindex_jump_odd={index_jump_odd}"
            );
            if let Some(mean) = mean_index {
                let _ = writeln!(out, "mean_index={}/{}", mean.numer(), mean.denom());
            }
        }
    }
    let _ = writeln!(out, "i1={}", orbit.i1());
    for (m, k) in orbit.k_vectors().into_iter().flatten() {
        let entries: Vec<String> = k.entries().iter().map(u32::to_string).collect();
        let _ = writeln!(out, "k.{m}={}", entries.join(","));
    }
}

/// Renders a config that [`parse_config`] reads back to the same value.
pub fn render_config(cfg: &RunConfig) -> String {
    let mut out = String::new();
    if let Some(mode) = cfg.mode {
        let _ = writeln!(out, "mode={}", mode.as_str());
    }
    if let Some(format) = cfg.format {
        let _ = writeln!(out, "format={}", format.as_str());
    }
    let ints = [
        ("truncation", cfg.truncation),
        ("i1_min", cfg.i1_min),
        ("i1_max", cfg.i1_max),
        ("q_max", cfg.q_max),
    ];
    for (key, value) in ints {
        if let Some(v) = value {
            let _ = writeln!(out, "{key}={v}");
        }
    }
    if let Some(m) = cfg.m_max {
        let _ = writeln!(out, "m_max={m}");
    }
    for orbit in &cfg.orbits {
        out.push_str("[orbit]\n");
        render_orbit(&mut out, orbit);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use maslovkit_core::frac;

    #[test]
    fn case2_analyze() {
        let cfg = parse_config("case=2\ni1=0\ntheta=1/2\ntruncation=400").unwrap();
        assert_eq!(cfg.truncation, Some(400));
        assert_eq!(cfg.orbits.len(), 1);
        assert_eq!(*cfg.orbits[0].case(), NormalFormCase::case2(1, 2).unwrap());
        assert_eq!(cfg.orbits[0].i1(), 0);
        assert_eq!(cfg.mode, None);
    }

    #[test]
    fn case1_with_shear() {
        let cfg = parse_config("case=1\nb=1\ni1=0").unwrap();
        assert_eq!(*cfg.orbits[0].case(), NormalFormCase::Case1 { b: 1 });
    }

    #[test]
    fn case4_even_index_rejected() {
        let e = parse_config("case=4\ni1=2").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.to_string().contains("Case 4 requires odd i1"), "{e}");
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_config("# header\nmode=sweep\nfoo=1").unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(e.kind, ConfigErrorKind::UnknownKey("foo".into()));

        let e = parse_config("case=2\ni1=0\ntheta=1/x").unwrap_err();
        assert_eq!(e.line, 3);
        assert_eq!(e.kind, ConfigErrorKind::MalformedFraction("1/x".into()));

        let e = parse_config("case=3\ni1=0").unwrap_err();
        assert_eq!(e.kind, ConfigErrorKind::MissingKey("b"));

        let e = parse_config("mode=sweep\n\nnonsense").unwrap_err();
        assert_eq!(e.line, 3);

        let e = parse_config("case=4\nb=1\ni1=1").unwrap_err();
        assert_eq!(e.line, 2);
    }

    #[test]
    fn multiple_orbits_and_k_vectors() {
        let text = "mode=resonance\n[orbit]\ncase=4\ni1=1\nk.1=0,1\n[orbit]\ncase=nondegenerate\ni1=2\nmean_index=4/1\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.mode, Some(Mode::Resonance));
        assert_eq!(cfg.orbits.len(), 2);
        assert_eq!(cfg.orbits[0].k_vector(1).unwrap().entries(), &[0, 1]);
        assert_eq!(cfg.orbits[1].mean_index().unwrap(), frac(4, 1));
    }

    #[test]
    fn inadmissible_k_rejected() {
        let e = parse_config("case=4\ni1=1\nk.1=1,1").unwrap_err();
        assert_eq!(e.line, 3);
    }

    #[test]
    fn render_round_trip() {
        let text = "mode=table\nformat=kv\nm_max=5\ntruncation=120\ncase=2\ni1=4\ntheta=2/6";
        let cfg = parse_config(text).unwrap();
        assert_eq!(parse_config(&render_config(&cfg)).unwrap(), cfg);
    }
}
