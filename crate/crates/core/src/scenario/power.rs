//! Charging-power comparison between two scenarios.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::ScenarioSpec;
use super::manifest::{RunKind, RunManifest};
use super::output::write_json;
use super::run::{simulate, ScenarioResult};
use crate::error::Result;
use crate::observables::charging_power;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSummary {
    pub name: String,
    pub tau: f64,
    pub e_b_tau: f64,
    pub power: f64,
}

impl PowerSummary {
    pub fn from_result(r: &ScenarioResult) -> Result<Self> {
        Ok(Self {
            name: r.name.clone(),
            tau: r.maxima.tau,
            e_b_tau: r.maxima.e_b_tau,
            power: charging_power(r.maxima.e_b_tau, r.maxima.tau)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerComparison {
    pub pumpless: PowerSummary,
    pub driven: PowerSummary,
    /// P_pumpless / P_driven
    pub ratio: f64,
}

pub fn compare_power(pumpless: &ScenarioSpec, driven: &ScenarioSpec) -> Result<PowerComparison> {
    let (a, b) = rayon::join(|| simulate(pumpless), || simulate(driven));
    let pumpless = PowerSummary::from_result(&a?)?;
    let driven = PowerSummary::from_result(&b?)?;
    let ratio = pumpless.power / driven.power;
    Ok(PowerComparison {
        pumpless,
        driven,
        ratio,
    })
}

/// Writes `power_compare.json` and its manifest.
pub fn run_power_compare(
    pumpless: &ScenarioSpec,
    driven: &ScenarioSpec,
    dir: &Path,
) -> Result<(PowerComparison, PathBuf)> {
    std::fs::create_dir_all(dir)?;
    let cmp = compare_power(pumpless, driven)?;
    let name = "power_compare";
    let mut manifest = RunManifest::new(name, RunKind::PowerCompare, &[pumpless, driven])?;
    let path = dir.join(format!("{name}.json"));
    write_json(&path, &cmp)?;
    manifest.files.push(path);
    let manifest_path = manifest.write(dir)?;
    Ok((cmp, manifest_path))
}
