//! Scenario configuration, runners, presets and output files.

pub mod config;
pub mod manifest;
pub mod output;
pub mod power;
pub mod presets;
pub mod run;
pub mod sweep;

use std::path::Path;

pub use config::{Claim, InitialState, RunConfig, ScenarioSpec, SweepSpec};
pub use manifest::RunManifest;
pub use output::Format;
pub use power::{compare_power, PowerComparison};
pub use run::{run_scenario, simulate, Maxima, ScenarioResult, ScenarioRun};
pub use sweep::{run_sweep, SweepRun};

use crate::error::Error;
use rayon::prelude::*;

/// Outcome of every job in a [`RunConfig`].
#[derive(Debug, Default)]
pub struct RunReport {
    pub scenarios: Vec<ScenarioRun>,
    pub sweeps: Vec<SweepRun>,
    pub power: Option<PowerComparison>,
    /// Jobs that failed, by name.
    pub errors: Vec<(String, Error)>,
}

impl RunReport {
    /// No errors, warnings or failed claims.
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
            && self.scenarios.iter().all(|s| s.manifest.is_clean())
            && self.sweeps.iter().all(|s| s.manifest.is_clean())
    }
}

/// Runs every scenario (concurrently), sweep and power comparison in `cfg`.
pub fn run_config(cfg: &RunConfig, dir: &Path, format: Format) -> RunReport {
    let mut report = RunReport::default();
    let scenario_runs: Vec<_> = cfg
        .scenarios
        .par_iter()
        .map(|s| (s.name.clone(), run_scenario(s, dir, format)))
        .collect();
    for (name, r) in scenario_runs {
        match r {
            Ok(run) => report.scenarios.push(run),
            Err(e) => report.errors.push((name, e)),
        }
    }
    for s in &cfg.sweeps {
        match run_sweep(s, dir, format) {
            Ok(run) => report.sweeps.push(run),
            Err(e) => report.errors.push((s.name.clone(), e)),
        }
    }
    if let Some(pc) = &cfg.power_compare {
        let pair = (cfg.scenario(&pc.pumpless), cfg.scenario(&pc.driven));
        if let (Some(a), Some(b)) = pair {
            match power::run_power_compare(a, b, dir) {
                Ok((cmp, _)) => report.power = Some(cmp),
                Err(e) => report.errors.push(("power_compare".into(), e)),
            }
        }
    }
    report
}
