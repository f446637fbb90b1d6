//! Self-check suite run by `qbat validate`: closed-form oracles, random
//! state equivalences and the dynamics invariants over every preset.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{steady_energies_numeric, steady_energy_analytic};
use crate::dynamics::{evolve, IntegratorConfig, Trajectory};
use crate::error::Result;
use crate::linalg::C64;
use crate::model::{DensityMatrix, ReservoirSpec, SystemParams};
use crate::observables::{ergotropy_closed, ergotropy_oracle, steering, stored_energy, ObservableRecord};
use crate::sampling::{random_state, rng};
use crate::scenario::presets::{preset, TRAJECTORY_PRESETS};
use crate::scenario::run::{analyse, records, TRACE_DRIFT_TOL};
use crate::scenario::ScenarioSpec;

pub const STEP_HALVING_TOL: f64 = 1e-7;
pub const MIN_EIGENVALUE_TOL: f64 = 1e-7;
pub const ERGOTROPY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn bound(name: &str, measured: f64, limit: f64) -> Self {
        Self {
            name: name.to_owned(),
            passed: measured <= limit,
            detail: format!("{measured:.3e} <= {limit:.1e}"),
        }
    }

    fn failed(name: &str, err: impl std::fmt::Display) -> Self {
        Self {
            name: name.to_owned(),
            passed: false,
            detail: err.to_string(),
        }
    }
}

fn or_fail(name: &str, r: Result<CheckOutcome>) -> CheckOutcome {
    r.unwrap_or_else(|e| CheckOutcome::failed(name, e))
}

fn rabi() -> Result<CheckOutcome> {
    let cfg = IntegratorConfig::new(1e-3, 2.0 * std::f64::consts::PI, 1);
    let traj = evolve(&SystemParams::default(), &DensityMatrix::product(true, false), &cfg)?;
    let err = traj
        .times
        .iter()
        .zip(&traj.states)
        .map(|(t, rho)| (stored_energy(rho, 1.0) - t.sin().powi(2)).abs())
        .fold(0.0, f64::max);
    Ok(CheckOutcome::bound("closed Rabi oscillation", err, 1e-6))
}

fn steering_references() -> CheckOutcome {
    let mut worst: f64 = 0.0;
    for (a, b) in [(true, true), (true, false), (false, true), (false, false)] {
        let s = steering(&DensityMatrix::product(a, b));
        worst = worst.max(s.s_ab.abs()).max(s.s_ba.abs());
    }
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let zero = C64::new(0.0, 0.0);
    let bell = DensityMatrix::pure(&[h, zero, zero, h]).expect("normalised");
    let s = steering(&bell);
    let want = 1.5 - 3f64.sqrt() / 2.0;
    let bell_err = (s.s_ab - want).abs().max((s.s_ba - want).abs());
    let passed = worst <= 1e-12 && bell_err <= 1e-10;
    CheckOutcome {
        name: "steering reference states".into(),
        passed,
        detail: format!("product {worst:.1e}, Bell {bell_err:.1e}"),
    }
}

fn analytic_grid() -> Result<CheckOutcome> {
    let mut worst: f64 = 0.0;
    for k in [0.5, 1.0, 2.0, 4.0] {
        for l in [0.1, 0.5, 1.0, 2.0] {
            let a = steady_energy_analytic(k, l, 1.0)?;
            let p = SystemParams {
                f: k,
                gamma: l,
                ..SystemParams::default()
            };
            let n = steady_energies_numeric(&p)?;
            worst = worst
                .max((n.e_a - a.e_a_inf).abs())
                .max((n.e_b - a.e_b_inf).abs());
        }
    }
    Ok(CheckOutcome::bound("analytic vs numeric steady state", worst, 1e-6))
}

fn fermionic_transition() -> Result<CheckOutcome> {
    let series = |n: f64| -> Result<Vec<f64>> {
        [0.0, 1.0, 2.0]
            .iter()
            .map(|&delta| {
                let p = SystemParams {
                    delta,
                    f: 1.0,
                    gamma: 1.0,
                    reservoir: ReservoirSpec::fermionic(n),
                    ..SystemParams::default()
                };
                Ok(steady_energies_numeric(&p)?.e_b)
            })
            .collect()
    };
    let cold = series(0.1)?;
    let hot = series(0.9)?;
    let passed = cold.windows(2).all(|w| w[1] < w[0]) && hot.windows(2).all(|w| w[1] > w[0]);
    Ok(CheckOutcome {
        name: "fermionic transition at n_f = 0.5".into(),
        passed,
        detail: format!("n_f=0.1 {cold:.4?}, n_f=0.9 {hot:.4?}"),
    })
}

fn random_ergotropy(seed: u64, samples: usize) -> CheckOutcome {
    let mut r = rng(seed);
    let worst = (0..samples)
        .map(|_| random_state(&mut r))
        .map(|rho| (ergotropy_closed(&rho, 1.0) - ergotropy_oracle(&rho, 1.0)).abs())
        .fold(0.0, f64::max);
    CheckOutcome::bound(&format!("ergotropy forms on {samples} random states"), worst, ERGOTROPY_TOL)
}

fn max_observable_gap(a: &[ObservableRecord], b: &[ObservableRecord]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            [
                x.e_a - y.e_a,
                x.e_b - y.e_b,
                x.w_b - y.w_b,
                x.sz_b - y.sz_b,
                x.s_ab - y.s_ab,
                x.s_ba - y.s_ba,
            ]
            .iter()
            .fold(0.0f64, |m, d| m.max(d.abs()))
        })
        .fold(0.0, f64::max)
}

fn trajectory_ergotropy_gap(t: &Trajectory, omega0: f64) -> f64 {
    t.states
        .iter()
        .map(|rho| (ergotropy_closed(rho, omega0) - ergotropy_oracle(rho, omega0)).abs())
        .fold(0.0, f64::max)
}

/// Invariants for one preset scenario: trace drift without renormalisation,
/// positivity, step halving, ergotropy forms and the scenario's own claims.
pub fn check_scenario(spec: &ScenarioSpec) -> Vec<CheckOutcome> {
    let name = &spec.name;
    let run = || -> Result<Vec<CheckOutcome>> {
        let p = spec.params.resolve()?;
        let rho0 = spec.initial_state.density_matrix()?;
        let raw_cfg = IntegratorConfig {
            renormalize: false,
            ..spec.integrator
        };
        let full = evolve(&p, &rho0, &raw_cfg)?;
        let cumulative = full
            .states
            .iter()
            .map(|s| (s.matrix().trace() - 1.0).norm())
            .fold(0.0, f64::max);
        let half = evolve(&p, &rho0, &spec.integrator.halved(&p))?;
        let gap = max_observable_gap(&records(&full, p.omega0), &records(&half, p.omega0));
        let erg = trajectory_ergotropy_gap(&full, p.omega0);
        let min_eig = full.diagnostics.min_eigenvalue;
        let result = analyse(name, p, &spec.claims, full);
        let mut out = vec![
            CheckOutcome::bound(&format!("{name}: trace drift"), cumulative, TRACE_DRIFT_TOL),
            CheckOutcome::bound(&format!("{name}: negative eigenvalue"), (-min_eig).max(0.0), MIN_EIGENVALUE_TOL),
            CheckOutcome::bound(&format!("{name}: step halving"), gap, STEP_HALVING_TOL),
            CheckOutcome::bound(&format!("{name}: ergotropy forms on trajectory"), erg, ERGOTROPY_TOL),
        ];
        for c in &result.claims {
            out.push(CheckOutcome {
                name: format!("{name}: {} claim {:?}", c.direction.label(), c.claim),
                passed: c.passed,
                detail: format!("{:.3e} <= {:.3e}", c.measured, c.limit),
            });
        }
        Ok(out)
    };
    run().unwrap_or_else(|e| vec![CheckOutcome::failed(name, e)])
}

/// Runs the whole suite; `samples` random states are drawn from `seed`.
pub fn validate_all(seed: u64, samples: usize) -> Vec<CheckOutcome> {
    let mut out = vec![
        or_fail("closed Rabi oscillation", rabi()),
        steering_references(),
        or_fail("analytic vs numeric steady state", analytic_grid()),
        or_fail("fermionic transition at n_f = 0.5", fermionic_transition()),
        random_ergotropy(seed, samples),
    ];
    let specs: Vec<ScenarioSpec> = TRAJECTORY_PRESETS
        .iter()
        .flat_map(|name| preset(name).map(|c| c.scenarios).unwrap_or_default())
        .collect();
    let per_scenario: Vec<Vec<CheckOutcome>> = specs.par_iter().map(check_scenario).collect();
    out.extend(per_scenario.into_iter().flatten());
    out
}
