//! Time evolution under the Lindblad generator and steady-state extraction.
//!
//! The generator is vectorised once into a 16×16 Liouvillian acting on
//! row-major `vec(ρ)`. Evolution is fixed-step classical RK4 on that linear
//! ODE; the steady state is the right singular vector of the smallest
//! singular value.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, C64, ZERO};
use crate::linalg::svd;
use crate::model::{DensityMatrix, Generator, SystemParams};

/// Liouville-space dimension for two qubits.
pub const LIOUVILLE_DIM: usize = 16;

/// Per-step trace or Hermiticity error that aborts integration.
pub const ABORT_TOL: f64 = 1e-5;
/// Recorded states must satisfy the density-matrix invariants to this level.
pub const TRAJECTORY_STATE_TOL: f64 = 1e-7;
/// Singular values at or below this (relative to max(1, σ_max)) count as kernel.
pub const KERNEL_TOL: f64 = 1e-10;
/// Largest entry of L[ρ_ss] accepted from the kernel solve.
pub const STEADY_RESIDUAL_TOL: f64 = 1e-9;

type Vec16 = [C64; LIOUVILLE_DIM];

/// Matrix form of ρ ↦ L[ρ] on row-major vectorised states.
#[derive(Debug, Clone)]
pub struct Liouvillian {
    matrix: ComplexMatrix,
}

impl Liouvillian {
    pub fn new(p: &SystemParams) -> Self {
        Self::from_generator(&Generator::new(p))
    }

    /// Column `4i + j` is vec(L[|i⟩⟨j|]).
    pub fn from_generator(gen: &Generator) -> Self {
        let mut matrix = ComplexMatrix::zeros(LIOUVILLE_DIM, LIOUVILLE_DIM);
        for i in 0..4 {
            for j in 0..4 {
                let mut e = ComplexMatrix::zeros(4, 4);
                e[(i, j)] = C64::new(1.0, 0.0);
                let image = gen.apply(&e);
                for (row, &z) in image.as_slice().iter().enumerate() {
                    matrix[(row, 4 * i + j)] = z;
                }
            }
        }
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    #[inline]
    fn apply_into(&self, x: &Vec16, out: &mut Vec16) {
        let m = self.matrix.as_slice();
        for (r, o) in out.iter_mut().enumerate() {
            let row = &m[r * LIOUVILLE_DIM..(r + 1) * LIOUVILLE_DIM];
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let v = self.matrix.matvec(rho.as_slice()).expect("4x4 operand");
        ComplexMatrix::from_vec(4, 4, v).expect("16 entries")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    /// RK4 step; `None` picks [`SystemParams::default_dt`].
    #[serde(default)]
    pub dt: Option<f64>,
    pub t_max: f64,
    #[serde(default = "default_record_every")]
    pub record_every: usize,
    #[serde(default = "default_renormalize")]
    pub renormalize: bool,
}

fn default_record_every() -> usize {
    1
}

fn default_renormalize() -> bool {
    true
}

impl IntegratorConfig {
    pub fn new(dt: f64, t_max: f64, record_every: usize) -> Self {
        Self {
            dt: Some(dt),
            t_max,
            record_every,
            renormalize: true,
        }
    }

    pub fn resolve_dt(&self, p: &SystemParams) -> f64 {
        self.dt.unwrap_or_else(|| p.default_dt())
    }

    pub fn validate(&self, p: &SystemParams) -> Result<()> {
        let dt = self.resolve_dt(p);
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidIntegrator(format!("dt must be positive, got {dt}")));
        }
        if !(self.t_max >= dt) {
            return Err(Error::InvalidIntegrator(format!(
                "t_max ({}) must be at least dt ({dt})",
                self.t_max
            )));
        }
        if self.record_every == 0 {
            return Err(Error::InvalidIntegrator("record_every must be >= 1".into()));
        }
        Ok(())
    }

    /// Same horizon with half the step and twice the stride, so records align.
    pub fn halved(&self, p: &SystemParams) -> Self {
        Self {
            dt: Some(self.resolve_dt(p) / 2.0),
            record_every: self.record_every * 2,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorDiagnostics {
    pub steps: usize,
    pub dt: f64,
    /// max |Tr ρ − 1| seen before renormalisation.
    pub max_trace_drift: f64,
    /// max |ρ − ρ†| entry seen before Hermitisation.
    pub max_hermiticity_error: f64,
    /// Smallest eigenvalue over recorded states.
    pub min_eigenvalue: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// |Tr ρ − 1| at each record, measured before renormalisation.
    pub trace_errors: Vec<f64>,
    pub diagnostics: IntegratorDiagnostics,
    pub record_every: usize,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Time between consecutive records.
    pub fn stride(&self) -> f64 {
        self.diagnostics.dt * self.record_every as f64
    }
}

fn hermitize(x: &mut Vec16) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        let d = 4 * i + i;
        worst = worst.max(x[d].im.abs());
        x[d].im = 0.0;
        for j in i + 1..4 {
            let (a, b) = (x[4 * i + j], x[4 * j + i]);
            worst = worst.max((a - b.conj()).norm());
            let avg = (a + b.conj()) * 0.5;
            x[4 * i + j] = avg;
            x[4 * j + i] = avg.conj();
        }
    }
    worst
}

fn trace(x: &Vec16) -> C64 {
    x[0] + x[5] + x[10] + x[15]
}

fn to_state(x: &Vec16) -> DensityMatrix {
    DensityMatrix::new_unchecked(ComplexMatrix::from_vec(4, 4, x.to_vec()).expect("16 entries"))
}

/// Integrates ρ̇ = L[ρ] from `rho0` with fixed-step RK4.
///
/// After every step the state is Hermitised and, if configured, divided by
/// its trace. Trace drift and Hermiticity error are measured first and
/// reported in the diagnostics. A step whose error exceeds [`ABORT_TOL`],
/// or a recorded state with an eigenvalue below −[`ABORT_TOL`], aborts
/// with the partial trajectory attached.
pub fn evolve(p: &SystemParams, rho0: &DensityMatrix, cfg: &IntegratorConfig) -> Result<Trajectory> {
    p.validate()?;
    cfg.validate(p)?;
    DensityMatrix::check(rho0.matrix(), crate::model::STATE_TOL)?;
    let lv = Liouvillian::new(p);
    evolve_with(&lv, rho0, cfg.resolve_dt(p), cfg)
}

/// [`evolve`] with a prebuilt Liouvillian and resolved step.
pub fn evolve_with(
    lv: &Liouvillian,
    rho0: &DensityMatrix,
    dt: f64,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let steps = (cfg.t_max / dt).round().max(1.0) as usize;
    let n_records = steps / cfg.record_every + 1;

    let mut x: Vec16 = [ZERO; LIOUVILLE_DIM];
    x.copy_from_slice(rho0.matrix().as_slice());

    let initial_min = rho0.min_eigenvalue();
    let mut traj = Trajectory {
        times: Vec::with_capacity(n_records),
        states: Vec::with_capacity(n_records),
        trace_errors: Vec::with_capacity(n_records),
        diagnostics: IntegratorDiagnostics {
            steps: 0,
            dt,
            max_trace_drift: (trace(&x) - 1.0).norm(),
            max_hermiticity_error: rho0.matrix().hermiticity_error(),
            min_eigenvalue: initial_min,
        },
        record_every: cfg.record_every,
    };
    traj.times.push(0.0);
    traj.states.push(rho0.clone());
    traj.trace_errors.push(traj.diagnostics.max_trace_drift);

    let (mut k1, mut k2, mut k3, mut k4, mut tmp) = ([ZERO; 16], [ZERO; 16], [ZERO; 16], [ZERO; 16], [ZERO; 16]);
    let half = dt / 2.0;
    for step in 1..=steps {
        lv.apply_into(&x, &mut k1);
        for i in 0..16 {
            tmp[i] = x[i] + k1[i] * half;
        }
        lv.apply_into(&tmp, &mut k2);
        for i in 0..16 {
            tmp[i] = x[i] + k2[i] * half;
        }
        lv.apply_into(&tmp, &mut k3);
        for i in 0..16 {
            tmp[i] = x[i] + k3[i] * dt;
        }
        lv.apply_into(&tmp, &mut k4);
        for i in 0..16 {
            x[i] += (k1[i] + (k2[i] + k3[i]) * 2.0 + k4[i]) * (dt / 6.0);
        }

        let herm_err = hermitize(&mut x);
        let tr = trace(&x);
        let drift = (tr - 1.0).norm();
        let t = step as f64 * dt;
        let diag = &mut traj.diagnostics;
        diag.steps = step;
        diag.max_trace_drift = diag.max_trace_drift.max(drift);
        diag.max_hermiticity_error = diag.max_hermiticity_error.max(herm_err);

        let finite = x.iter().all(|z| z.re.is_finite() && z.im.is_finite());
        if !finite || drift > ABORT_TOL || herm_err > ABORT_TOL {
            return Err(abort(
                traj,
                t,
                format!("trace drift {drift:.3e}, hermiticity error {herm_err:.3e}; reduce dt"),
            ));
        }
        if cfg.renormalize {
            let inv = 1.0 / tr.re;
            for z in x.iter_mut() {
                *z *= inv;
            }
        }
        if step % cfg.record_every == 0 {
            let state = to_state(&x);
            let min_eig = state.min_eigenvalue();
            traj.diagnostics.min_eigenvalue = traj.diagnostics.min_eigenvalue.min(min_eig);
            traj.times.push(t);
            traj.states.push(state);
            traj.trace_errors.push(drift);
            if min_eig < -ABORT_TOL {
                return Err(abort(
                    traj,
                    t,
                    format!("eigenvalue {min_eig:.3e} lost positivity; reduce dt"),
                ));
            }
        }
    }
    Ok(traj)
}

fn abort(traj: Trajectory, time: f64, reason: String) -> Error {
    Error::IntegrationAborted {
        time,
        reason,
        partial: Box::new(traj),
    }
}

#[derive(Debug, Clone)]
pub struct SteadyState {
    pub state: DensityMatrix,
    /// max |L[ρ]| entry.
    pub residual: f64,
    /// Ascending tail of the Liouvillian singular values.
    pub smallest_singular_values: Vec<f64>,
}

/// Unique fixed point of the generator.
pub fn steady_state(p: &SystemParams) -> Result<DensityMatrix> {
    steady_state_detailed(p).map(|s| s.state)
}

pub fn steady_state_detailed(p: &SystemParams) -> Result<SteadyState> {
    p.validate()?;
    if p.gamma <= 0.0 && p.f <= 0.0 {
        return Err(Error::InvalidParams(
            "steady state needs gamma > 0 or pump > 0".into(),
        ));
    }
    let lv = Liouvillian::new(p);
    let decomposition = svd(lv.matrix());
    let values = &decomposition.values;
    let cutoff = KERNEL_TOL * values[0].max(1.0);
    let kernel_dim = values.iter().filter(|&&s| s <= cutoff).count();
    let smallest: Vec<f64> = values.iter().rev().take(3).copied().collect();
    if kernel_dim > 1 {
        return Err(Error::DegenerateSteadyState {
            kernel_dim,
            smallest,
        });
    }

    let v = decomposition.smallest_right_vector();
    let raw = ComplexMatrix::from_vec(4, 4, v).expect("16 entries");
    let tr = raw.trace();
    if tr.norm() < 1e-12 {
        return Err(Error::InvalidState(
            "kernel vector is traceless; no physical steady state".into(),
        ));
    }
    let mut rho = raw.scale(tr.inv()).hermitian_part();
    let tr = rho.trace().re;
    rho = rho.scale_real(1.0 / tr);

    let residual = lv.apply(&rho).max_abs();
    if residual > STEADY_RESIDUAL_TOL {
        return Err(Error::InvalidState(format!(
            "steady-state residual {residual:.3e} exceeds {STEADY_RESIDUAL_TOL:e}"
        )));
    }
    Ok(SteadyState {
        state: DensityMatrix::new_unchecked(rho),
        residual,
        smallest_singular_values: smallest,
    })
}
