//! Hermitian eigendecomposition.

use nalgebra::DMatrix;

use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Largest tolerated max |m − m†| entry for input to [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// V diag(λ) V†
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let v = self.vector(k);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[i] * v[j].conj() * lam;
                }
            }
        }
        out
    }
}

pub(super) fn to_dmatrix(m: &ComplexMatrix) -> DMatrix<C64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// Columns of `d` in the given order.
pub(super) fn columns_in_order(d: &DMatrix<C64>, order: &[usize]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(d.nrows(), order.len());
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..d.nrows() {
            out[(r, dst)] = d[(r, src)];
        }
    }
    out
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: "square matrix".into(),
            actual: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    let deviation = m.hermiticity_error();
    if deviation > HERMITIAN_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let e = to_dmatrix(&m.hermitian_part()).symmetric_eigen();
    let mut order: Vec<usize> = (0..m.rows()).collect();
    order.sort_by(|&i, &j| e.eigenvalues[i].total_cmp(&e.eigenvalues[j]));
    Ok(HermitianEigen {
        values: order.iter().map(|&i| e.eigenvalues[i]).collect(),
        vectors: columns_in_order(&e.eigenvectors, &order),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli::{sigma_x, sigma_y, sigma_z};
    use crate::linalg::matrix::ONE;
    use proptest::prelude::*;

    fn assert_eigenpairs(m: &ComplexMatrix, e: &HermitianEigen, tol: f64) {
        for k in 0..e.values.len() {
            let v = e.vector(k);
            let mv = m.matvec(&v).unwrap();
            for (x, y) in mv.iter().zip(&v) {
                assert!((x - y * e.values[k]).norm() < tol);
            }
        }
    }

    #[test]
    fn sigma_z_spectrum() {
        let e = hermitian_eig(&sigma_z()).unwrap();
        assert_eq!(e.values, vec![-1.0, 1.0]);
        // -1 ↔ |g⟩ (index 1), +1 ↔ |e⟩ (index 0)
        assert!((e.vector(0)[1].norm() - 1.0).abs() < 1e-15);
        assert!((e.vector(1)[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_is_sorted() {
        let e = hermitian_eig(&ComplexMatrix::diag(&[0.7, 0.3])).unwrap();
        assert_eq!(e.values, vec![0.3, 0.7]);
    }

    #[test]
    fn sigma_x_eigenvectors() {
        let m = sigma_x();
        let e = hermitian_eig(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // (|e⟩ − |g⟩)/√2 up to a global phase
        let v0 = e.vector(0);
        let overlap = v0[0] * s - v0[1] * s;
        assert!((overlap.norm() - 1.0).abs() < 1e-14);
        assert_eigenpairs(&m, &e, 1e-14);
    }

    #[test]
    fn complex_entries() {
        let m = &sigma_y() + &sigma_z().scale_real(0.3);
        let e = hermitian_eig(&m).unwrap();
        let r = (1.0f64 + 0.09).sqrt();
        assert!((e.values[0] + r).abs() < 1e-14);
        assert!((e.values[1] - r).abs() < 1e-14);
        assert_eigenpairs(&m, &e, 1e-13);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2);
        m[(0, 1)] = ONE;
        assert!(matches!(hermitian_eig(&m), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_eig(&ComplexMatrix::zeros(4, 4)).unwrap();
        assert_eq!(e.values, vec![0.0; 4]);
        assert_eq!(e.vectors, ComplexMatrix::identity(4));
    }

    fn hermitian_strategy(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |xs| {
            let mut m = ComplexMatrix::zeros(n, n);
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] = C64::new(xs[2 * (i * n + j)], xs[2 * (i * n + j) + 1]);
                }
            }
            m.hermitian_part()
        })
    }

    proptest! {
        #[test]
        fn reconstructs_random_hermitian(m in hermitian_strategy(4)) {
            let e = hermitian_eig(&m).unwrap();
            prop_assert!(e.reconstruct().max_abs_diff(&m) < 1e-9);
            prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let vtv = &e.vectors.adjoint() * &e.vectors;
            prop_assert!(vtv.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-12);
        }

        #[test]
        fn eigenpairs_of_random_16(m in hermitian_strategy(16)) {
            let e = hermitian_eig(&m).unwrap();
            for k in 0..16 {
                let v = e.vector(k);
                let mv = m.matvec(&v).unwrap();
                let res = mv.iter().zip(&v).map(|(x, y)| (x - y * e.values[k]).norm()).fold(0.0, f64::max);
                prop_assert!(res < 1e-9);
            }
        }
    }
}
