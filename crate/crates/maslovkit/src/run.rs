use anyhow::{bail, Result};
use maslovkit_core::analyzer::{analyze_single_orbit, sweep, SweepGrid, VerdictKind};
use maslovkit_core::iteration::{iterate_table, OrbitConfig};
use maslovkit_core::resonance::resonance_sums;

use crate::config::{Format, Mode, RunConfig};
use crate::report::{emit_report, Report};

pub const DEFAULT_TRUNCATION: i64 = 400;
pub const DEFAULT_GRID: SweepGrid = SweepGrid {
    i1_min: -4,
    i1_max: 40,
    q_max: 12,
    truncation: DEFAULT_TRUNCATION,
};
pub const DEFAULT_M_MAX: u64 = 10;

/// Fully resolved run parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Settings {
    pub mode: Mode,
    pub orbits: Vec<OrbitConfig>,
    pub grid: SweepGrid,
    pub m_max: u64,
    pub format: Format,
}

impl Settings {
    /// Merges command-line values over the config file, then the
    /// environment truncation, then defaults. Orbits come from the file.
    pub fn resolve(file: RunConfig, flags: &RunConfig, env_truncation: Option<i64>) -> Result<Self> {
        let truncation = flags
            .truncation
            .or(file.truncation)
            .or(env_truncation)
            .unwrap_or(DEFAULT_TRUNCATION);
        let grid = SweepGrid {
            i1_min: flags.i1_min.or(file.i1_min).unwrap_or(DEFAULT_GRID.i1_min),
            i1_max: flags.i1_max.or(file.i1_max).unwrap_or(DEFAULT_GRID.i1_max),
            q_max: flags.q_max.or(file.q_max).unwrap_or(DEFAULT_GRID.q_max),
            truncation,
        };
        let settings = Settings {
            mode: flags.mode.or(file.mode).unwrap_or_default(),
            orbits: file.orbits,
            grid,
            m_max: flags.m_max.or(file.m_max).unwrap_or(DEFAULT_M_MAX),
            format: flags.format.or(file.format).unwrap_or_default(),
        };
        if truncation < 0 {
            bail!("truncation must be non-negative (got {truncation})");
        }
        if grid.i1_min > grid.i1_max {
            bail!("empty i1 range [{}, {}]", grid.i1_min, grid.i1_max);
        }
        if settings.m_max == 0 {
            bail!("m_max must be at least 1");
        }
        if settings.mode != Mode::Sweep && settings.orbits.is_empty() {
            bail!(
                "mode '{}' needs at least one orbit (set case= and i1=)",
                settings.mode.as_str()
            );
        }
        Ok(settings)
    }
}

pub struct Outcome {
    pub output: String,
    /// False when a feasible configuration or an inconclusive analysis was
    /// found.
    pub certified: bool,
}

pub fn execute(settings: &Settings) -> Result<Outcome> {
    let format = settings.format;
    let mut parts = Vec::new();
    let mut certified = true;
    match settings.mode {
        Mode::Analyze => {
            for orbit in &settings.orbits {
                match analyze_single_orbit(orbit, settings.grid.truncation) {
                    Ok(verdict) => {
                        certified &= verdict.kind != VerdictKind::Feasible;
                        parts.push(emit_report(
                            &Report::Analyze {
                                orbit,
                                verdict: &verdict,
                            },
                            format,
                        ));
                    }
                    Err(e) => {
                        certified = false;
                        parts.push(match format {
                            Format::Text => {
                                format!("orbit: {} i1={}\ninconclusive: {e}\n", orbit.case(), orbit.i1())
                            }
                            Format::Kv => format!("record=inconclusive\nerror={e}\n"),
                        });
                    }
                }
            }
        }
        Mode::Sweep => {
            let report = sweep(settings.grid);
            certified = report.certified();
            parts.push(emit_report(&Report::Sweep(&report), format));
        }
        Mode::Table => {
            for orbit in &settings.orbits {
                let rows = iterate_table(orbit, settings.m_max)?;
                parts.push(emit_report(&Report::Table { orbit, rows: &rows }, format));
            }
        }
        Mode::Resonance => {
            let report = resonance_sums(&settings.orbits)?;
            parts.push(emit_report(
                &Report::Resonance {
                    orbits: &settings.orbits,
                    report: &report,
                },
                format,
            ));
        }
    }
    Ok(Outcome {
        output: parts.join("\n"),
        certified,
    })
}
