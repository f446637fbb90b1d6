//! Figure presets. The TOML sources live in the repository's `presets/`
//! directory and are embedded here so the binary is self-contained.

use super::config::{RunConfig, ScenarioSpec};
use crate::error::{Error, Result};

const SOURCES: [(&str, &str); 6] = [
    ("fig2", include_str!("../../../../presets/fig2.toml")),
    ("fig3", include_str!("../../../../presets/fig3.toml")),
    ("fig4", include_str!("../../../../presets/fig4.toml")),
    ("fig5", include_str!("../../../../presets/fig5.toml")),
    ("fig6", include_str!("../../../../presets/fig6.toml")),
    ("fig7", include_str!("../../../../presets/fig7.toml")),
];

/// Every accepted preset name; `appendixA` is the same set as `fig7`.
pub const PRESET_NAMES: [&str; 7] = ["fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "appendixA"];

/// Presets containing time-evolution scenarios.
pub const TRAJECTORY_PRESETS: [&str; 4] = ["fig4", "fig5", "fig6", "fig7"];

pub fn preset_source(name: &str) -> Option<&'static str> {
    let key = if name == "appendixA" { "fig7" } else { name };
    SOURCES.iter().find(|(n, _)| *n == key).map(|(_, s)| *s)
}

pub fn preset(name: &str) -> Result<RunConfig> {
    let text = preset_source(name).ok_or_else(|| {
        Error::Config(format!(
            "unknown preset {name:?}; expected one of {}",
            PRESET_NAMES.join(", ")
        ))
    })?;
    RunConfig::parse(text)
}

/// A single scenario panel such as `fig4a`, looked up across the presets.
pub fn scenario_preset(panel: &str) -> Result<ScenarioSpec> {
    for name in TRAJECTORY_PRESETS {
        if let Some(s) = preset(name)?.scenario(panel) {
            return Ok(s.clone());
        }
    }
    Err(Error::Config(format!("no preset scenario named {panel:?}")))
}

/// Pumpless (fig4a) versus resonance-driven (fig5a) charging.
pub fn default_power_pair() -> Result<(ScenarioSpec, ScenarioSpec)> {
    Ok((scenario_preset("fig4a")?, scenario_preset("fig5a")?))
}
