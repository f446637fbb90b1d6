//! Figures of merit evaluated on a two-qubit state.
//!
//! Matrix elements below are 0-based; with the |ee⟩, |eg⟩, |ge⟩, |gg⟩
//! ordering the battery is excited on indices 0 and 2 and the charger on
//! indices 0 and 1.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::matrix::{kron, trace_of_product, ComplexMatrix};
use crate::linalg::pauli::{loo_basis, sigma_minus, sigma_plus};
use crate::linalg::{hermitian_eig, singular_values, Subsystem};
use crate::model::DensityMatrix;

/// E_B = ω0 (ρ11 + ρ33)
pub fn stored_energy(rho: &DensityMatrix, omega0: f64) -> f64 {
    omega0 * (rho.element(0, 0).re + rho.element(2, 2).re)
}

/// E_A = ω0 (ρ11 + ρ22)
pub fn charger_energy(rho: &DensityMatrix, omega0: f64) -> f64 {
    omega0 * (rho.element(0, 0).re + rho.element(1, 1).re)
}

/// ⟨σz⟩_B = p_e − p_g
pub fn population_difference(rho: &DensityMatrix) -> f64 {
    2.0 * (rho.element(0, 0).re + rho.element(2, 2).re) - 1.0
}

/// Battery ergotropy from the closed form in the matrix elements:
/// ω0 {√(4|ρ12 + ρ34|² + χ²) + χ}/2 with χ = 2(ρ11 + ρ33) − 1.
pub fn ergotropy_closed(rho: &DensityMatrix, omega0: f64) -> f64 {
    let coherence = rho.element(0, 1) + rho.element(2, 3);
    let chi = population_difference(rho);
    let w = omega0 * ((4.0 * coherence.norm_sqr() + chi * chi).sqrt() + chi) / 2.0;
    w.max(0.0)
}

/// Battery Hamiltonian ω0 σ+σ−.
pub fn battery_hamiltonian(omega0: f64) -> ComplexMatrix {
    (&sigma_plus() * &sigma_minus()).scale_real(omega0)
}

/// Battery ergotropy by explicit passive-state construction: populations
/// sorted descending are assigned to energy levels sorted ascending.
pub fn ergotropy_oracle(rho: &DensityMatrix, omega0: f64) -> f64 {
    let rho_b = rho.reduced(Subsystem::B).hermitian_part();
    let h_b = battery_hamiltonian(omega0);
    let energy = trace_of_product(&h_b, &rho_b).re;
    let mut populations = hermitian_eig(&rho_b).expect("reduced state is Hermitian").values;
    populations.reverse();
    let levels = hermitian_eig(&h_b).expect("Hamiltonian is Hermitian").values;
    let passive: f64 = levels.iter().zip(&populations).map(|(e, l)| e * l).sum();
    energy - passive
}

/// Tr ρ² of a single-qubit state.
pub fn purity(reduced: &ComplexMatrix) -> f64 {
    trace_of_product(reduced, reduced).re
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteeringResult {
    /// S_{A→B}; positive certifies that A steers B.
    pub s_ab: f64,
    /// S_{B→A}
    pub s_ba: f64,
    /// ‖C‖_tr of the LOO correlation matrix.
    pub trace_norm: f64,
    /// √[(2 − Tr ρA²)(1 − Tr ρB²)]
    pub bound_ab: f64,
    /// √[(2 − Tr ρB²)(1 − Tr ρA²)]
    pub bound_ba: f64,
    pub purity_a: f64,
    pub purity_b: f64,
    /// Largest |C| entry in the identity row and column, zero up to rounding.
    pub marginal_residual: f64,
}

/// Correlation matrix C_ij = Tr[(G_i ⊗ G_j)(ρ − ρA ⊗ ρB)] over {I, σx, σy, σz}/√2.
pub fn correlation_matrix(rho: &DensityMatrix) -> [[f64; 4]; 4] {
    let rho_a = rho.reduced(Subsystem::A);
    let rho_b = rho.reduced(Subsystem::B);
    let connected = rho.matrix() - &kron(&rho_a, &rho_b);
    let basis = loo_basis();
    let mut c = [[0.0; 4]; 4];
    for (i, gi) in basis.iter().enumerate() {
        for (j, gj) in basis.iter().enumerate() {
            c[i][j] = trace_of_product(&kron(gi, gj), &connected).re;
        }
    }
    c
}

pub fn steering(rho: &DensityMatrix) -> SteeringResult {
    let c = correlation_matrix(rho);
    let marginal_residual = (0..4)
        .map(|k| c[0][k].abs().max(c[k][0].abs()))
        .fold(0.0, f64::max);
    debug_assert!(
        marginal_residual < 1e-10,
        "identity row/column of C should vanish, got {marginal_residual:e}"
    );
    let trace_norm: f64 = singular_values(&ComplexMatrix::from_real_rows(c)).iter().sum();

    let purity_a = purity(&rho.reduced(Subsystem::A));
    let purity_b = purity(&rho.reduced(Subsystem::B));
    let bound = |pa: f64, pb: f64| ((2.0 - pa) * (1.0 - pb)).max(0.0).sqrt();
    let bound_ab = bound(purity_a, purity_b);
    let bound_ba = bound(purity_b, purity_a);
    SteeringResult {
        s_ab: trace_norm - bound_ab,
        s_ba: trace_norm - bound_ba,
        trace_norm,
        bound_ab,
        bound_ba,
        purity_a,
        purity_b,
        marginal_residual,
    }
}

/// P(τ) = E_B(τ)/τ
pub fn charging_power(energy_at_tau: f64, tau: f64) -> Result<f64> {
    if tau <= 0.0 {
        return Err(Error::ZeroChargingTime);
    }
    Ok(energy_at_tau / tau)
}

/// One row of a trajectory output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub t: f64,
    #[serde(rename = "E_A")]
    pub e_a: f64,
    #[serde(rename = "E_B")]
    pub e_b: f64,
    #[serde(rename = "W_B")]
    pub w_b: f64,
    #[serde(rename = "sz_B")]
    pub sz_b: f64,
    #[serde(rename = "S_AB")]
    pub s_ab: f64,
    #[serde(rename = "S_BA")]
    pub s_ba: f64,
    pub purity_a: f64,
    pub purity_b: f64,
    pub trace_err: f64,
}

impl ObservableRecord {
    pub fn evaluate(t: f64, rho: &DensityMatrix, omega0: f64, trace_err: f64) -> Self {
        let s = steering(rho);
        Self {
            t,
            e_a: charger_energy(rho, omega0),
            e_b: stored_energy(rho, omega0),
            w_b: ergotropy_closed(rho, omega0),
            sz_b: population_difference(rho),
            s_ab: s.s_ab,
            s_ba: s.s_ba,
            purity_a: s.purity_a,
            purity_b: s.purity_b,
            trace_err,
        }
    }
}

/// A maximum located on a sampled series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    /// Sample index of the discrete argmax.
    pub index: usize,
    pub time: f64,
    pub value: f64,
}

/// Global maximum (earliest on ties), refined by the parabola through the
/// neighbouring samples when the argmax is interior and the samples are
/// concave. Assumes uniform sampling.
pub fn refined_max(times: &[f64], values: &[f64]) -> Option<Peak> {
    let mut index = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[index] {
            index = i;
        }
    }
    if values.is_empty() {
        return None;
    }
    let raw = Peak {
        index,
        time: times[index],
        value: values[index],
    };
    if index == 0 || index + 1 >= values.len() {
        return Some(raw);
    }
    let (y0, y1, y2) = (values[index - 1], values[index], values[index + 1]);
    let curvature = y0 - 2.0 * y1 + y2;
    if !(curvature < 0.0) {
        return Some(raw);
    }
    let h = times[index + 1] - times[index];
    let offset = 0.5 * (y0 - y2) / curvature;
    Some(Peak {
        index,
        time: times[index] + offset * h,
        value: y1 - 0.125 * (y0 - y2) * (y0 - y2) / curvature,
    })
}

/// Quadratic interpolation of `values` at `t` through the three samples
/// centred on `index` (shifted inward at the ends).
pub fn interpolate_near(times: &[f64], values: &[f64], index: usize, t: f64) -> f64 {
    if values.len() < 3 {
        return values[index];
    }
    let c = index.clamp(1, values.len() - 2);
    let (x0, x1, x2) = (times[c - 1], times[c], times[c + 1]);
    let (y0, y1, y2) = (values[c - 1], values[c], values[c + 1]);
    y0 * (t - x1) * (t - x2) / ((x0 - x1) * (x0 - x2))
        + y1 * (t - x0) * (t - x2) / ((x1 - x0) * (x1 - x2))
        + y2 * (t - x0) * (t - x1) / ((x2 - x0) * (x2 - x1))
}

/// Times where the series changes sign, by linear interpolation.
pub fn zero_crossings(times: &[f64], values: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 0..values.len().saturating_sub(1) {
        let (a, b) = (values[i], values[i + 1]);
        if a == 0.0 {
            out.push(times[i]);
        } else if a * b < 0.0 {
            out.push(times[i] + (times[i + 1] - times[i]) * a / (a - b));
        }
    }
    if values.last() == Some(&0.0) {
        out.push(*times.last().unwrap());
    }
    out
}
