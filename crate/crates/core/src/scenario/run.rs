//! Time-evolution runs: integrate, evaluate observables, locate maxima and
//! check the per-scenario claims.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Claim, Direction, ScenarioSpec};
use super::manifest::{RunKind, RunManifest};
use super::output::{emit, records_csv, records_json, write_json, Format};
use crate::dynamics::{evolve, IntegratorDiagnostics, Trajectory, TRAJECTORY_STATE_TOL};
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::observables::{
    interpolate_near, refined_max, zero_crossings, ObservableRecord,
};

/// Largest acceptable per-step trace drift before renormalisation.
pub const TRACE_DRIFT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeakSummary {
    /// Refined time of the maximum.
    pub time: f64,
    pub value: f64,
    /// Index of the discrete argmax in the records.
    pub sample_index: usize,
    /// Observables interpolated at `time`.
    pub e_a: f64,
    pub e_b: f64,
    pub sz_b: f64,
    pub w_b: f64,
}

/// Contents of the `{name}_maxima.json` sidecar.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Maxima {
    pub max_s_ab: PeakSummary,
    pub max_s_ba: PeakSummary,
    /// Time of the global E_B maximum.
    pub tau: f64,
    pub e_b_tau: f64,
    /// E_B(τ)/τ; absent when τ = 0.
    pub power_tau: Option<f64>,
    /// Time between records.
    pub stride: f64,
}

impl Maxima {
    pub fn steering(&self, d: Direction) -> &PeakSummary {
        match d {
            Direction::Ba => &self.max_s_ba,
            _ => &self.max_s_ab,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClaimOutcome {
    pub claim: Claim,
    /// Steering function the measurement refers to.
    pub direction: Direction,
    pub measured: f64,
    pub limit: f64,
    pub passed: bool,
}

#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub name: String,
    pub params: SystemParams,
    pub trajectory: Trajectory,
    pub records: Vec<ObservableRecord>,
    pub maxima: Maxima,
    pub claims: Vec<ClaimOutcome>,
    pub warnings: Vec<String>,
}

impl ScenarioResult {
    pub fn diagnostics(&self) -> &IntegratorDiagnostics {
        &self.trajectory.diagnostics
    }

    pub fn claims_hold(&self) -> bool {
        self.claims.iter().all(|c| c.passed)
    }
}

pub fn records(trajectory: &Trajectory, omega0: f64) -> Vec<ObservableRecord> {
    trajectory
        .states
        .par_iter()
        .zip(trajectory.times.par_iter())
        .zip(trajectory.trace_errors.par_iter())
        .map(|((rho, &t), &err)| ObservableRecord::evaluate(t, rho, omega0, err))
        .collect()
}

fn peak(records: &[ObservableRecord], pick: impl Fn(&ObservableRecord) -> f64) -> PeakSummary {
    let times: Vec<f64> = records.iter().map(|r| r.t).collect();
    let values: Vec<f64> = records.iter().map(&pick).collect();
    let p = refined_max(&times, &values).expect("at least the initial record");
    let at = |f: fn(&ObservableRecord) -> f64| {
        let series: Vec<f64> = records.iter().map(f).collect();
        interpolate_near(&times, &series, p.index, p.time)
    };
    PeakSummary {
        time: p.time,
        value: p.value,
        sample_index: p.index,
        e_a: at(|r| r.e_a),
        e_b: at(|r| r.e_b),
        sz_b: at(|r| r.sz_b),
        w_b: at(|r| r.w_b),
    }
}

pub fn find_maxima(records: &[ObservableRecord], stride: f64) -> Maxima {
    let energy = peak(records, |r| r.e_b);
    Maxima {
        max_s_ab: peak(records, |r| r.s_ab),
        max_s_ba: peak(records, |r| r.s_ba),
        tau: energy.time,
        e_b_tau: energy.value,
        power_tau: (energy.time > 0.0).then(|| energy.value / energy.time),
        stride,
    }
}

pub fn check_claims(
    claims: &[Claim],
    records: &[ObservableRecord],
    maxima: &Maxima,
    omega0: f64,
) -> Vec<ClaimOutcome> {
    let times: Vec<f64> = records.iter().map(|r| r.t).collect();
    let sz: Vec<f64> = records.iter().map(|r| r.sz_b).collect();
    let crossings = zero_crossings(&times, &sz);
    let mut out = Vec::new();
    for claim in claims {
        let direction = match *claim {
            Claim::SteeringAtEnergyBalance { direction, .. }
            | Claim::SteeringPeakValue { direction, .. }
            | Claim::SteeringAtPopulationBalance { direction, .. }
            | Claim::EnergyAtSteeringPeak { direction, .. } => direction,
        };
        for &d in direction.members() {
            let p = maxima.steering(d);
            let (measured, limit) = match *claim {
                Claim::SteeringAtEnergyBalance { tolerance, .. } => {
                    ((p.e_a - p.e_b).abs() / omega0, tolerance)
                }
                Claim::SteeringPeakValue {
                    expected, tolerance, ..
                } => ((p.value - expected).abs(), tolerance),
                Claim::SteeringAtPopulationBalance { strides, .. } => {
                    let nearest = crossings
                        .iter()
                        .map(|c| (c - p.time).abs())
                        .fold(f64::INFINITY, f64::min);
                    (nearest, strides * maxima.stride)
                }
                Claim::EnergyAtSteeringPeak {
                    expected, tolerance, ..
                } => {
                    let dev = (p.e_a / omega0 - expected)
                        .abs()
                        .max((p.e_b / omega0 - expected).abs());
                    (dev, tolerance)
                }
            };
            out.push(ClaimOutcome {
                claim: *claim,
                direction: d,
                measured,
                limit,
                passed: measured <= limit,
            });
        }
    }
    out
}

fn diagnostic_warnings(d: &IntegratorDiagnostics) -> Vec<String> {
    let mut w = Vec::new();
    if d.max_trace_drift > TRACE_DRIFT_TOL {
        w.push(format!(
            "trace drift {:.3e} exceeds {TRACE_DRIFT_TOL:e}",
            d.max_trace_drift
        ));
    }
    if d.min_eigenvalue < -TRAJECTORY_STATE_TOL {
        w.push(format!(
            "minimum eigenvalue {:.3e} below -{TRAJECTORY_STATE_TOL:e}",
            d.min_eigenvalue
        ));
    }
    w
}

/// Builds the result for an already integrated trajectory.
pub fn analyse(name: &str, params: SystemParams, claims: &[Claim], trajectory: Trajectory) -> ScenarioResult {
    let records = records(&trajectory, params.omega0);
    let maxima = find_maxima(&records, trajectory.stride());
    let claims = check_claims(claims, &records, &maxima, params.omega0);
    let mut warnings = diagnostic_warnings(&trajectory.diagnostics);
    if maxima.power_tau.is_none() {
        warnings.push("battery energy peaks at t = 0; charging power undefined".into());
    }
    ScenarioResult {
        name: name.to_owned(),
        params,
        trajectory,
        records,
        maxima,
        claims,
        warnings,
    }
}

/// Runs a scenario in memory.
pub fn simulate(spec: &ScenarioSpec) -> Result<ScenarioResult> {
    spec.validate()?;
    let params = spec.params.resolve()?;
    let rho0 = spec.initial_state.density_matrix()?;
    let trajectory = evolve(&params, &rho0, &spec.integrator)?;
    Ok(analyse(&spec.name, params, &spec.claims, trajectory))
}

#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub result: ScenarioResult,
    pub manifest: RunManifest,
    pub manifest_path: PathBuf,
}

pub fn maxima_file_name(name: &str) -> String {
    format!("{name}_maxima.json")
}

fn write_outputs(
    spec: &ScenarioSpec,
    result: &ScenarioResult,
    dir: &Path,
    format: Format,
    manifest: &mut RunManifest,
) -> Result<()> {
    let columns = spec.outputs.resolved();
    let body = match format {
        Format::Csv => records_csv(&result.records, &columns),
        Format::Json => records_json(&result.records, &columns)?,
    };
    emit(dir, &format!("{}.{}", spec.name, format.extension()), &body, &mut manifest.files)?;
    let maxima_path = dir.join(maxima_file_name(&spec.name));
    write_json(&maxima_path, &result.maxima)?;
    manifest.files.push(maxima_path);
    manifest.resolved_params = Some(result.params);
    manifest.resolved_dt = Some(result.trajectory.diagnostics.dt);
    manifest.diagnostics = Some(result.trajectory.diagnostics);
    manifest.claims = result.claims.clone();
    manifest.warnings.extend(result.warnings.iter().cloned());
    for c in result.claims.iter().filter(|c| !c.passed) {
        manifest.warnings.push(format!(
            "claim {:?} on {} failed: {:.3e} > {:.3e}",
            c.claim,
            c.direction.label(),
            c.measured,
            c.limit
        ));
    }
    Ok(())
}

/// Runs a scenario and writes `{name}.csv|json`, `{name}_maxima.json` and
/// `{name}_manifest.json` into `dir`. An integrator abort still writes the
/// partial records and a manifest marked partial before the error is returned.
pub fn run_scenario(spec: &ScenarioSpec, dir: &Path, format: Format) -> Result<ScenarioRun> {
    std::fs::create_dir_all(dir)?;
    let mut manifest = RunManifest::new(&spec.name, RunKind::Scenario, spec)?;
    match simulate(spec) {
        Ok(result) => {
            write_outputs(spec, &result, dir, format, &mut manifest)?;
            let manifest_path = manifest.write(dir)?;
            Ok(ScenarioRun {
                result,
                manifest,
                manifest_path,
            })
        }
        Err(Error::IntegrationAborted {
            time,
            reason,
            partial,
        }) => {
            let params = spec.params.resolve()?;
            let result = analyse(&spec.name, params, &spec.claims, (*partial).clone());
            write_outputs(spec, &result, dir, format, &mut manifest)?;
            manifest.partial = true;
            manifest
                .warnings
                .push(format!("integration aborted at t = {time}: {reason}"));
            manifest.write(dir)?;
            Err(Error::IntegrationAborted {
                time,
                reason,
                partial,
            })
        }
        Err(e) => Err(e),
    }
}
