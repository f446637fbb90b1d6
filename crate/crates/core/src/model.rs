//! Physical model: parameters, rotating-frame Hamiltonian, reservoir
//! statistics and the Lindblad right-hand side.
//!
//! Both qubits share the transition frequency ω0, so in the frame rotating
//! at the pump frequency only the detuning Δ = ω0 − ωL appears:
//!
//! H = (Δ/2)(σz_A + σz_B) + g(σ+_A σ−_B + σ−_A σ+_B) + F(σ+_A + σ−_A)
//!
//! Dissipation acts on each qubit with the common rate Γ, emission weighted
//! by N = 1 ± n and absorption by n, where n is the reservoir occupation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix::{anticommutator, commutator, ComplexMatrix, C64, I};
use crate::linalg::pauli::{on_a, on_b, sigma_minus, sigma_plus, sigma_z};
use crate::linalg::{hermitian_eig, partial_trace, Subsystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReservoirKind {
    Bosonic,
    Fermionic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReservoirSpec {
    pub kind: ReservoirKind,
    /// Mean occupation n(T).
    pub n: f64,
}

impl ReservoirSpec {
    pub fn bosonic(n: f64) -> Self {
        Self {
            kind: ReservoirKind::Bosonic,
            n,
        }
    }

    pub fn fermionic(n: f64) -> Self {
        Self {
            kind: ReservoirKind::Fermionic,
            n,
        }
    }

    pub fn zero_temperature() -> Self {
        Self::bosonic(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match self.kind {
            ReservoirKind::Bosonic => self.n.is_finite() && self.n >= 0.0,
            ReservoirKind::Fermionic => (0.0..=1.0).contains(&self.n),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParams(format!(
                "{:?} reservoir occupation {} out of range",
                self.kind, self.n
            )))
        }
    }

    /// Weight of the decay channels: 1 + n (bosons) or 1 − n (fermions).
    pub fn emission_factor(&self) -> f64 {
        match self.kind {
            ReservoirKind::Bosonic => 1.0 + self.n,
            ReservoirKind::Fermionic => 1.0 - self.n,
        }
    }

    /// Weight of the excitation channels.
    pub fn absorption_factor(&self) -> f64 {
        self.n
    }
}

/// Bose–Einstein or Fermi–Dirac occupation of a reservoir mode.
///
/// `chemical_potential` is ignored for bosons. Zero temperature has no
/// finite representation here; pass the occupation directly instead.
pub fn occupation_from_temperature(
    kind: ReservoirKind,
    temperature: f64,
    mode_frequency: f64,
    chemical_potential: f64,
) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    if !(mode_frequency > 0.0) {
        return Err(Error::InvalidParams(format!(
            "mode frequency must be positive, got {mode_frequency}"
        )));
    }
    Ok(match kind {
        ReservoirKind::Bosonic => 1.0 / (mode_frequency / temperature).exp_m1(),
        ReservoirKind::Fermionic => {
            1.0 / (((mode_frequency - chemical_potential) / temperature).exp() + 1.0)
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Transition frequency of charger and battery; sets the energy unit.
    pub omega0: f64,
    /// Detuning ω0 − ωL.
    pub delta: f64,
    /// Charger–battery coupling.
    pub g: f64,
    /// Pump amplitude on the charger.
    #[serde(rename = "pump")]
    pub f: f64,
    /// Dissipation rate.
    pub gamma: f64,
    pub reservoir: ReservoirSpec,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            omega0: 1.0,
            delta: 0.0,
            g: 1.0,
            f: 0.0,
            gamma: 0.0,
            reservoir: ReservoirSpec::zero_temperature(),
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.omega0 > 0.0 && self.omega0.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "omega0 must be positive, got {}",
                self.omega0
            )));
        }
        for (name, v) in [("g", self.g), ("pump", self.f), ("gamma", self.gamma)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParams(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        if !self.delta.is_finite() {
            return Err(Error::InvalidParams("delta must be finite".into()));
        }
        self.reservoir.validate()
    }

    /// Default RK4 step: 1e−3 of the fastest time scale.
    pub fn default_dt(&self) -> f64 {
        let rate = self
            .f
            .max(self.gamma * self.reservoir.emission_factor().max(self.reservoir.n))
            .max(self.delta.abs())
            .max(1e-6);
        let coupling_time = if self.g > 0.0 { 1.0 / self.g } else { f64::INFINITY };
        1e-3 * coupling_time.min(1.0 / rate)
    }
}

pub fn hamiltonian(p: &SystemParams) -> ComplexMatrix {
    let sz = sigma_z();
    let (sp, sm) = (sigma_plus(), sigma_minus());
    let detuning = &on_a(&sz) + &on_b(&sz);
    let exchange = &(&on_a(&sp) * &on_b(&sm)) + &(&on_a(&sm) * &on_b(&sp));
    let pump = on_a(&(&sp + &sm));
    let h = &detuning.scale_real(p.delta / 2.0) + &exchange.scale_real(p.g);
    &h + &pump.scale_real(p.f)
}

/// A jump operator with its total rate.
#[derive(Debug, Clone)]
pub struct Channel {
    pub jump: ComplexMatrix,
    pub rate: f64,
}

/// Precomputed pieces of the master equation for one parameter set.
#[derive(Debug, Clone)]
pub struct Generator {
    pub hamiltonian: ComplexMatrix,
    pub channels: Vec<Channel>,
}

impl Generator {
    pub fn new(p: &SystemParams) -> Self {
        let (sp, sm) = (sigma_plus(), sigma_minus());
        let down = p.gamma * p.reservoir.emission_factor();
        let up = p.gamma * p.reservoir.absorption_factor();
        let channels = [
            (on_a(&sm), down),
            (on_b(&sm), down),
            (on_a(&sp), up),
            (on_b(&sp), up),
        ]
        .into_iter()
        .map(|(jump, rate)| Channel { jump, rate })
        .collect();
        Self {
            hamiltonian: hamiltonian(p),
            channels,
        }
    }

    pub fn coherent_part(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        commutator(&self.hamiltonian, rho).scale(-I)
    }

    pub fn dissipative_part(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
        for ch in self.channels.iter().filter(|c| c.rate != 0.0) {
            out = &out + &dissipator(&ch.jump, rho).scale_real(ch.rate);
        }
        out
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        &self.coherent_part(rho) + &self.dissipative_part(rho)
    }
}

/// j ρ j† − {j†j, ρ}/2
pub fn dissipator(jump: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let jd = jump.adjoint();
    let sandwich = &(jump * rho) * &jd;
    &sandwich - &anticommutator(&(&jd * jump), rho).scale_real(0.5)
}

/// −i[H, ρ] + Γ{N Σ L_{σ−}[ρ] + n Σ L_{σ+}[ρ]} over both qubits.
pub fn lindblad_rhs(p: &SystemParams, rho: &ComplexMatrix) -> ComplexMatrix {
    Generator::new(p).apply(rho)
}

/// Construction-time tolerance for [`DensityMatrix`] invariants.
pub const STATE_TOL: f64 = 1e-9;

/// Two-qubit state of charger ⊗ battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::check(&m, STATE_TOL)?;
        Ok(Self(m))
    }

    /// Wraps without checking; callers vouch for the invariants at their own tolerance.
    pub fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    /// Hermitian, unit trace and positive semidefinite, each within `tol`.
    pub fn check(m: &ComplexMatrix, tol: f64) -> Result<()> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::DimensionMismatch {
                expected: "4x4".into(),
                actual: format!("{}x{}", m.rows(), m.cols()),
            });
        }
        let herm = m.hermiticity_error();
        if herm > tol {
            return Err(Error::InvalidState(format!("hermiticity error {herm:.3e}")));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = min_eigenvalue(m)?;
        if min < -tol {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(())
    }

    /// Pure state from four amplitudes in |ee⟩, |eg⟩, |ge⟩, |gg⟩ order.
    pub fn pure(amplitudes: &[C64; 4]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!(
                "amplitudes not normalized (norm^2 = {norm})"
            )));
        }
        Ok(Self(ComplexMatrix::outer(amplitudes, amplitudes)))
    }

    /// Product basis state; `true` means excited.
    pub fn product(charger_excited: bool, battery_excited: bool) -> Self {
        let idx = crate::linalg::pauli::basis_index(charger_excited, battery_excited);
        Self(ComplexMatrix::basis_projector(4, idx))
    }

    pub fn maximally_mixed() -> Self {
        Self(ComplexMatrix::identity(4).scale_real(0.25))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// 0-based element access; the 1-based ρ_ij of the literature is `element(i-1, j-1)`.
    pub fn element(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn reduced(&self, keep: Subsystem) -> ComplexMatrix {
        partial_trace(&self.0, keep).expect("density matrix is 4x4")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.0).unwrap_or(f64::NEG_INFINITY)
    }
}

fn min_eigenvalue(m: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eig(&m.hermitian_part())?.values[0])
}
