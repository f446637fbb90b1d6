//! TOML run configuration: `[[scenario]]` time-evolution runs, `[[sweep]]`
//! steady-state grids and an optional `[power_compare]` pairing.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytics::{Axis, ParamGrid};
use crate::dynamics::IntegratorConfig;
use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::model::{
    occupation_from_temperature, DensityMatrix, ReservoirKind, ReservoirSpec, SystemParams,
};

/// Tolerance on the norm of custom initial amplitudes.
pub const AMPLITUDE_NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, rename = "scenario", skip_serializing_if = "Vec::is_empty")]
    pub scenarios: Vec<ScenarioSpec>,
    #[serde(default, rename = "sweep", skip_serializing_if = "Vec::is_empty")]
    pub sweeps: Vec<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power_compare: Option<PowerCompareSpec>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let mut names = HashSet::new();
        let all = self
            .scenarios
            .iter()
            .map(|s| &s.name)
            .chain(self.sweeps.iter().map(|s| &s.name));
        for name in all {
            check_name(name)?;
            if !names.insert(name.as_str()) {
                return Err(Error::Config(format!("duplicate run name {name:?}")));
            }
        }
        for s in &self.scenarios {
            s.validate()?;
        }
        for s in &self.sweeps {
            s.grid()?.validate()?;
        }
        if let Some(pc) = &self.power_compare {
            for name in [&pc.pumpless, &pc.driven] {
                if self.scenario(name).is_none() {
                    return Err(Error::Config(format!(
                        "power_compare refers to unknown scenario {name:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn scenario(&self, name: &str) -> Option<&ScenarioSpec> {
        self.scenarios.iter().find(|s| s.name == name)
    }

    pub fn is_empty(&self) -> bool {
        self.scenarios.is_empty() && self.sweeps.is_empty() && self.power_compare.is_none()
    }
}

fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if ok {
        Ok(())
    } else {
        Err(Error::Config(format!(
            "name {name:?} must be non-empty ASCII letters, digits, '_' or '-'"
        )))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReservoirConfig {
    #[serde(default = "default_kind")]
    pub kind: ReservoirKind,
    /// Mean occupation; mutually exclusive with `temperature`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    /// Defaults to `omega0`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_frequency: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chemical_potential: Option<f64>,
}

fn default_kind() -> ReservoirKind {
    ReservoirKind::Bosonic
}

impl Default for ReservoirConfig {
    fn default() -> Self {
        Self {
            kind: ReservoirKind::Bosonic,
            n: None,
            temperature: None,
            mode_frequency: None,
            chemical_potential: None,
        }
    }
}

impl ReservoirConfig {
    pub fn resolve(&self, omega0: f64) -> Result<ReservoirSpec> {
        let n = match (self.n, self.temperature) {
            (Some(_), Some(_)) => {
                return Err(Error::Config(
                    "reservoir: give either n or temperature, not both".into(),
                ))
            }
            (Some(n), None) => n,
            (None, Some(t)) => occupation_from_temperature(
                self.kind,
                t,
                self.mode_frequency.unwrap_or(omega0),
                self.chemical_potential.unwrap_or(0.0),
            )?,
            (None, None) => 0.0,
        };
        let spec = ReservoirSpec { kind: self.kind, n };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    #[serde(default = "one")]
    pub omega0: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "one")]
    pub g: f64,
    #[serde(default)]
    pub pump: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub reservoir: ReservoirConfig,
}

fn one() -> f64 {
    1.0
}

impl Default for ParamsConfig {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            delta: 0.0,
            g: 1.0,
            pump: 0.0,
            gamma: 0.0,
            reservoir: ReservoirConfig::default(),
        }
    }
}

impl ParamsConfig {
    pub fn resolve(&self) -> Result<SystemParams> {
        let p = SystemParams {
            omega0: self.omega0,
            delta: self.delta,
            g: self.g,
            f: self.pump,
            gamma: self.gamma,
            reservoir: self.reservoir.resolve(self.omega0)?,
        };
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisLabel {
    Ee,
    Eg,
    Ge,
    Gg,
}

/// Either a product basis label (charger first) or amplitudes over
/// |ee⟩, |eg⟩, |ge⟩, |gg⟩ as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Basis(BasisLabel),
    Custom { custom: Vec<[f64; 2]> },
}

impl InitialState {
    pub fn density_matrix(&self) -> Result<DensityMatrix> {
        match self {
            InitialState::Basis(label) => {
                let (a, b) = match label {
                    BasisLabel::Ee => (true, true),
                    BasisLabel::Eg => (true, false),
                    BasisLabel::Ge => (false, true),
                    BasisLabel::Gg => (false, false),
                };
                Ok(DensityMatrix::product(a, b))
            }
            InitialState::Custom { custom } => {
                if custom.len() != 4 {
                    return Err(Error::Config(format!(
                        "custom initial state needs 4 amplitudes, got {}",
                        custom.len()
                    )));
                }
                let amps = [0, 1, 2, 3].map(|i| C64::new(custom[i][0], custom[i][1]));
                let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > AMPLITUDE_NORM_TOL {
                    return Err(Error::Config(format!(
                        "custom amplitudes must be normalised, norm = {norm}"
                    )));
                }
                DensityMatrix::pure(&amps)
            }
        }
    }
}

/// Per-record output columns besides `t`, in the fixed CSV order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Column {
    #[serde(rename = "E_A")]
    EA,
    #[serde(rename = "E_B")]
    EB,
    #[serde(rename = "W_B")]
    WB,
    #[serde(rename = "sz_B")]
    SzB,
    #[serde(rename = "S_AB")]
    SAb,
    #[serde(rename = "S_BA")]
    SBa,
    #[serde(rename = "purity_A")]
    PurityA,
    #[serde(rename = "purity_B")]
    PurityB,
    #[serde(rename = "trace_err")]
    TraceErr,
}

impl Column {
    pub const ALL: [Column; 9] = [
        Column::EA,
        Column::EB,
        Column::WB,
        Column::SzB,
        Column::SAb,
        Column::SBa,
        Column::PurityA,
        Column::PurityB,
        Column::TraceErr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::EA => "E_A",
            Column::EB => "E_B",
            Column::WB => "W_B",
            Column::SzB => "sz_B",
            Column::SAb => "S_AB",
            Column::SBa => "S_BA",
            Column::PurityA => "purity_A",
            Column::PurityB => "purity_B",
            Column::TraceErr => "trace_err",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct OutputSelection {
    /// Columns to emit; all when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub columns: Option<Vec<Column>>,
}

impl OutputSelection {
    /// Selected columns in canonical order, without duplicates.
    pub fn resolved(&self) -> Vec<Column> {
        match &self.columns {
            None => Column::ALL.to_vec(),
            Some(cols) => {
                let mut c = cols.clone();
                c.sort();
                c.dedup();
                c
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    #[default]
    Ab,
    Ba,
    Both,
}

impl Direction {
    pub fn members(self) -> &'static [Direction] {
        match self {
            Direction::Ab => &[Direction::Ab],
            Direction::Ba => &[Direction::Ba],
            Direction::Both => &[Direction::Ab, Direction::Ba],
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Direction::Ab => "S_AB",
            Direction::Ba => "S_BA",
            Direction::Both => "S_AB,S_BA",
        }
    }
}

/// Cross-observable statement checked against the maxima of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Claim {
    /// |E_A − E_B| at the refined steering maximum is within `tolerance`·ω0.
    SteeringAtEnergyBalance {
        #[serde(default)]
        direction: Direction,
        tolerance: f64,
    },
    /// Refined steering maximum is within `tolerance` of `expected`.
    SteeringPeakValue {
        #[serde(default)]
        direction: Direction,
        expected: f64,
        tolerance: f64,
    },
    /// A ⟨σz⟩_B = 0 crossing lies within `strides` record intervals of the
    /// refined steering maximum.
    SteeringAtPopulationBalance {
        #[serde(default)]
        direction: Direction,
        #[serde(default = "one")]
        strides: f64,
    },
    /// Both energies at the refined steering maximum are within
    /// `tolerance`·ω0 of `expected`·ω0.
    EnergyAtSteeringPeak {
        #[serde(default)]
        direction: Direction,
        expected: f64,
        tolerance: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub name: String,
    #[serde(default)]
    pub params: ParamsConfig,
    pub initial_state: InitialState,
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub outputs: OutputSelection,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub claims: Vec<Claim>,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        check_name(&self.name)?;
        let p = self.params.resolve()?;
        self.integrator.validate(&p)?;
        self.initial_state.density_matrix()?;
        for c in &self.claims {
            let tol = match *c {
                Claim::SteeringAtEnergyBalance { tolerance, .. }
                | Claim::SteeringPeakValue { tolerance, .. }
                | Claim::EnergyAtSteeringPeak { tolerance, .. } => tolerance,
                Claim::SteeringAtPopulationBalance { strides, .. } => strides,
            };
            if !(tol >= 0.0 && tol.is_finite()) {
                return Err(Error::Config(format!(
                    "{}: claim tolerance must be finite and >= 0",
                    self.name
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableKind {
    #[serde(rename = "E_A_inf")]
    EAInf,
    #[serde(rename = "E_B_inf")]
    EBInf,
}

impl TableKind {
    pub fn name(self) -> &'static str {
        match self {
            TableKind::EAInf => "E_A_inf",
            TableKind::EBInf => "E_B_inf",
        }
    }
}

fn both_tables() -> Vec<TableKind> {
    vec![TableKind::EAInf, TableKind::EBInf]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub name: String,
    #[serde(default)]
    pub params: ParamsConfig,
    pub x: Axis,
    pub y: Axis,
    #[serde(default = "both_tables")]
    pub tables: Vec<TableKind>,
}

impl SweepSpec {
    pub fn grid(&self) -> Result<ParamGrid> {
        check_name(&self.name)?;
        if self.tables.is_empty() {
            return Err(Error::Config(format!("{}: no tables selected", self.name)));
        }
        Ok(ParamGrid {
            base: self.params.resolve()?,
            x: self.x,
            y: self.y,
        })
    }
}

/// Names two `[[scenario]]` entries whose charging powers are compared.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerCompareSpec {
    pub pumpless: String,
    pub driven: String,
}
