//! Single-qubit operator constants.
//!
//! Basis ordering is index 0 = |e⟩, index 1 = |g⟩, so σz = diag(+1, −1)
//! and σ+ = |e⟩⟨g| sits in the upper-right corner. Two-qubit operators use
//! `A ⊗ B`, giving the ordering |ee⟩, |eg⟩, |ge⟩, |gg⟩.

use super::matrix::{kron, ComplexMatrix, C64, I, ONE, ZERO};

pub fn identity2() -> ComplexMatrix {
    ComplexMatrix::identity(2)
}

pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, ONE], [ONE, ZERO]])
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, -I], [I, ZERO]])
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::diag(&[1.0, -1.0])
}

/// σ+ = |e⟩⟨g|
pub fn sigma_plus() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, ONE], [ZERO, ZERO]])
}

/// σ− = |g⟩⟨e|
pub fn sigma_minus() -> ComplexMatrix {
    ComplexMatrix::from_rows([[ZERO, ZERO], [ONE, ZERO]])
}

/// Lifts a single-qubit operator onto the charger: `op ⊗ I`.
pub fn on_a(op: &ComplexMatrix) -> ComplexMatrix {
    kron(op, &identity2())
}

/// Lifts a single-qubit operator onto the battery: `I ⊗ op`.
pub fn on_b(op: &ComplexMatrix) -> ComplexMatrix {
    kron(&identity2(), op)
}

/// Local orthogonal observables {I, σx, σy, σz}/√2, orthonormal under
/// the Hilbert–Schmidt inner product.
pub fn loo_basis() -> [ComplexMatrix; 4] {
    let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [
        identity2().scale(s),
        sigma_x().scale(s),
        sigma_y().scale(s),
        sigma_z().scale(s),
    ]
}

/// Two-qubit computational basis index for (charger, battery) levels,
/// `true` meaning excited.
pub const fn basis_index(charger_excited: bool, battery_excited: bool) -> usize {
    let a = if charger_excited { 0 } else { 1 };
    let b = if battery_excited { 0 } else { 1 };
    2 * a + b
}
