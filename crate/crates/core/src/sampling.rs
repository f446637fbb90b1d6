//! Seeded random two-qubit states for invariant checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::matrix::{ComplexMatrix, C64};
use crate::model::DensityMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random pure state.
pub fn random_pure<R: Rng>(rng: &mut R) -> DensityMatrix {
    let mut amps = [C64::new(0.0, 0.0); 4];
    for a in &mut amps {
        *a = gaussian(rng);
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    DensityMatrix::new_unchecked(ComplexMatrix::outer(&amps, &amps))
}

/// G G† / Tr with G a 4×rank Ginibre matrix.
pub fn random_mixed<R: Rng>(rng: &mut R, rank: usize) -> DensityMatrix {
    assert!((1..=4).contains(&rank), "rank must be 1..=4");
    let data = (0..4 * rank).map(|_| gaussian(rng)).collect();
    let g = ComplexMatrix::from_vec(4, rank, data).expect("shape matches data");
    let w = &g * &g.adjoint();
    let tr = w.trace().re;
    DensityMatrix::new_unchecked(w.scale_real(1.0 / tr).hermitian_part())
}

/// Pure with probability 1/5, otherwise mixed of uniform rank 1..=4.
pub fn random_state<R: Rng>(rng: &mut R) -> DensityMatrix {
    if rng.random_range(0..5) == 0 {
        random_pure(rng)
    } else {
        let rank = rng.random_range(1..=4);
        random_mixed(rng, rank)
    }
}
