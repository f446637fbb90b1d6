//! Closed-form zero-detuning, zero-temperature steady-state energies and
//! parameter sweeps over the steady state.
//!
//! With k = F/g and l = Γ/g,
//!
//! E_A/ω0 = 4k² [32k⁴(1 + l²) + l⁴(4 + 9l²) + 4k²(2 + l²)(4 + 9l²)] / α
//! E_B/ω0 = 16k² [8(k² + k⁴) + 2(2 + 9k²)l² + 9l⁴] / α
//!
//! α = 256k⁶(1 + l²) + l²(4 + l²)²(4 + 9l²) + 4k²l²(4 + 3l²)(4 + 9l²)
//!     + 64k⁴(4 + 11l² + 5l⁴)

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dynamics::steady_state;
use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::observables::{charger_energy, stored_energy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyStateAnalytic {
    pub k: f64,
    pub l: f64,
    pub e_a_inf: f64,
    pub e_b_inf: f64,
    pub alpha: f64,
}

pub fn alpha(k: f64, l: f64) -> f64 {
    let (k2, l2) = (k * k, l * l);
    let k4 = k2 * k2;
    let k6 = k4 * k2;
    let four_l = 4.0 + l2;
    256.0 * k6 * (1.0 + l2)
        + l2 * four_l * four_l * (4.0 + 9.0 * l2)
        + 4.0 * k2 * l2 * (4.0 + 3.0 * l2) * (4.0 + 9.0 * l2)
        + 64.0 * k4 * (4.0 + 11.0 * l2 + 5.0 * l2 * l2)
}

pub fn steady_energy_analytic(k: f64, l: f64, omega0: f64) -> Result<SteadyStateAnalytic> {
    if k == 0.0 && l == 0.0 {
        return Err(Error::AnalyticUndefined);
    }
    if !(k >= 0.0 && l >= 0.0 && k.is_finite() && l.is_finite()) {
        return Err(Error::InvalidParams(format!("k = {k}, l = {l} must be finite and >= 0")));
    }
    let (k2, l2) = (k * k, l * l);
    let k4 = k2 * k2;
    let l4 = l2 * l2;
    let a = alpha(k, l);
    let charger = 4.0
        * k2
        * (32.0 * k4 * (1.0 + l2) + l4 * (4.0 + 9.0 * l2) + 4.0 * k2 * (2.0 + l2) * (4.0 + 9.0 * l2));
    let battery = 16.0 * k2 * (8.0 * (k2 + k4) + 2.0 * (2.0 + 9.0 * k2) * l2 + 9.0 * l4);
    Ok(SteadyStateAnalytic {
        k,
        l,
        e_a_inf: omega0 * charger / a,
        e_b_inf: omega0 * battery / a,
        alpha: a,
    })
}

/// Sweepable parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// F/g
    K,
    /// Γ/g
    L,
    Delta,
    /// Reservoir occupation n.
    N,
}

impl SweepParam {
    pub fn label(self) -> &'static str {
        match self {
            SweepParam::K => "F_over_g",
            SweepParam::L => "Gamma_over_g",
            SweepParam::Delta => "Delta",
            SweepParam::N => "n",
        }
    }

    pub fn apply(self, p: &mut SystemParams, value: f64) {
        match self {
            SweepParam::K => p.f = value * p.g,
            SweepParam::L => p.gamma = value * p.g,
            SweepParam::Delta => p.delta = value,
            SweepParam::N => p.reservoir.n = value,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum AxisScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default)]
    pub scale: AxisScale,
}

impl Axis {
    pub fn validate(&self) -> Result<()> {
        if self.points == 0 {
            return Err(Error::Config(format!("axis {:?} needs at least one point", self.param)));
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Config(format!("axis {:?} bounds must be finite", self.param)));
        }
        if self.scale == AxisScale::Log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::Config(format!(
                "log axis {:?} needs positive bounds",
                self.param
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let u = i as f64 / last;
                match self.scale {
                    AxisScale::Linear => self.start + (self.stop - self.start) * u,
                    AxisScale::Log => {
                        let (a, b) = (self.start.log10(), self.stop.log10());
                        10f64.powf(a + (b - a) * u)
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub base: SystemParams,
    pub x: Axis,
    pub y: Axis,
}

impl ParamGrid {
    pub fn validate(&self) -> Result<()> {
        self.x.validate()?;
        self.y.validate()?;
        if self.x.param == self.y.param {
            return Err(Error::Config("sweep axes must differ".into()));
        }
        let needs_g = [self.x.param, self.y.param]
            .iter()
            .any(|p| matches!(p, SweepParam::K | SweepParam::L));
        if needs_g && !(self.base.g > 0.0) {
            return Err(Error::Config("F/g or Gamma/g axes need g > 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SteadyMethod {
    Analytic,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyEnergies {
    pub e_a: f64,
    pub e_b: f64,
    pub method: SteadyMethod,
}

/// Steady-state energies of one parameter point: closed form when
/// Δ = 0 and n = 0, Liouvillian kernel otherwise.
pub fn steady_energies(p: &SystemParams) -> Result<SteadyEnergies> {
    p.validate()?;
    if p.delta == 0.0 && p.reservoir.n == 0.0 && p.g > 0.0 {
        let a = steady_energy_analytic(p.f / p.g, p.gamma / p.g, p.omega0)?;
        return Ok(SteadyEnergies {
            e_a: a.e_a_inf,
            e_b: a.e_b_inf,
            method: SteadyMethod::Analytic,
        });
    }
    steady_energies_numeric(p)
}

pub fn steady_energies_numeric(p: &SystemParams) -> Result<SteadyEnergies> {
    let rho = steady_state(p)?;
    Ok(SteadyEnergies {
        e_a: charger_energy(&rho, p.omega0),
        e_b: stored_energy(&rho, p.omega0),
        method: SteadyMethod::Numeric,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointFailure {
    pub x: f64,
    pub y: f64,
    pub message: String,
}

/// Rectangular sweep result; `e_a[iy][ix]`, NaN where a point failed.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepTable {
    pub x_param: SweepParam,
    pub y_param: SweepParam,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub e_a: Vec<Vec<f64>>,
    pub e_b: Vec<Vec<f64>>,
    pub failures: Vec<PointFailure>,
}

/// Evaluates every grid point (in parallel); failed points are recorded
/// with their coordinates rather than aborting the sweep.
pub fn sweep_steady(grid: &ParamGrid) -> Result<SweepTable> {
    grid.validate()?;
    let xs = grid.x.values();
    let ys = grid.y.values();
    let points: Vec<(usize, usize)> = (0..ys.len())
        .flat_map(|iy| (0..xs.len()).map(move |ix| (iy, ix)))
        .collect();
    let results: Vec<Result<SteadyEnergies>> = points
        .par_iter()
        .map(|&(iy, ix)| {
            let mut p = grid.base;
            grid.x.param.apply(&mut p, xs[ix]);
            grid.y.param.apply(&mut p, ys[iy]);
            steady_energies(&p)
        })
        .collect();

    let mut e_a = vec![vec![f64::NAN; xs.len()]; ys.len()];
    let mut e_b = e_a.clone();
    let mut failures = Vec::new();
    for (&(iy, ix), r) in points.iter().zip(results) {
        match r {
            Ok(e) => {
                e_a[iy][ix] = e.e_a;
                e_b[iy][ix] = e.e_b;
            }
            Err(err) => failures.push(PointFailure {
                x: xs[ix],
                y: ys[iy],
                message: err.to_string(),
            }),
        }
    }
    Ok(SweepTable {
        x_param: grid.x.param,
        y_param: grid.y.param,
        x: xs,
        y: ys,
        e_a,
        e_b,
        failures,
    })
}
