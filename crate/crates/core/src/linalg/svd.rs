//! Singular value decomposition.

use super::eig::{columns_in_order, to_dmatrix};
use super::matrix::{ComplexMatrix, C64};

#[derive(Debug, Clone)]
pub struct Svd {
    /// Descending, `min(rows, cols)` of them.
    pub values: Vec<f64>,
    /// Column k is the unit left vector for `values[k]`.
    pub left: ComplexMatrix,
    /// Column k is the unit right vector for `values[k]`.
    pub right: ComplexMatrix,
}

impl Svd {
    /// Right singular vector belonging to the smallest singular value.
    pub fn smallest_right_vector(&self) -> Vec<C64> {
        self.right.column(self.values.len() - 1)
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.left.rows(), self.right.rows());
        let mut out = ComplexMatrix::zeros(m, n);
        for (k, &s) in self.values.iter().enumerate() {
            for i in 0..m {
                for j in 0..n {
                    out[(i, j)] += self.left[(i, k)] * self.right[(j, k)].conj() * s;
                }
            }
        }
        out
    }
}

pub fn svd(m: &ComplexMatrix) -> Svd {
    let d = to_dmatrix(m).svd_unordered(true, true);
    let values = d.singular_values;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
    let u = d.u.expect("requested");
    let v = d.v_t.expect("requested").adjoint();
    Svd {
        values: order.iter().map(|&i| values[i]).collect(),
        left: columns_in_order(&u, &order),
        right: columns_in_order(&v, &order),
    }
}

/// Singular values in descending order, `min(rows, cols)` of them.
pub fn singular_values(m: &ComplexMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = to_dmatrix(m).singular_values().iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

/// Sum of singular values.
pub fn trace_norm(m: &ComplexMatrix) -> f64 {
    singular_values(m).iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ZERO;
    use crate::linalg::eig::hermitian_eig;
    use proptest::prelude::*;

    #[test]
    fn identity_values() {
        assert_eq!(singular_values(&ComplexMatrix::identity(4)), vec![1.0; 4]);
    }

    #[test]
    fn diagonal_with_negative_entry() {
        let v = singular_values(&ComplexMatrix::diag(&[3.0, -2.0]));
        assert!((v[0] - 3.0).abs() < 1e-15 && (v[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rectangular_shapes() {
        let m = ComplexMatrix::from_vec(
            2,
            3,
            vec![
                C64::new(3.0, 0.0),
                ZERO,
                ZERO,
                ZERO,
                C64::new(0.0, 4.0),
                ZERO,
            ],
        )
        .unwrap();
        let v = singular_values(&m);
        assert_eq!(v.len(), 2);
        assert!((v[0] - 4.0).abs() < 1e-14 && (v[1] - 3.0).abs() < 1e-14);
        let vt = singular_values(&m.adjoint());
        assert!((vt[0] - 4.0).abs() < 1e-14 && (vt[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn rank_deficient_kernel_vector() {
        // Rows span only e1, e2; kernel is e3 ∝ (0, 0, 1).
        let m = ComplexMatrix::from_real_rows([[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [2.0, 4.0, 0.0]]);
        let d = svd(&m);
        assert!(d.values[2].abs() < 1e-14);
        let k = d.smallest_right_vector();
        assert!((k[2].norm() - 1.0).abs() < 1e-14);
        assert!(d.reconstruct().max_abs_diff(&m) < 1e-13);
    }

    fn complex_strategy(n: usize) -> impl Strategy<Value = ComplexMatrix> {
        prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |xs| {
            let data = xs.chunks(2).map(|c| C64::new(c[0], c[1])).collect();
            ComplexMatrix::from_vec(n, n, data).unwrap()
        })
    }

    fn unitary_from(m: &ComplexMatrix) -> ComplexMatrix {
        // Eigenvectors of a Hermitian matrix are a unitary.
        hermitian_eig(&m.hermitian_part()).unwrap().vectors
    }

    proptest! {
        #[test]
        fn reconstruction_and_ordering(m in complex_strategy(4)) {
            let d = svd(&m);
            prop_assert!(d.reconstruct().max_abs_diff(&m) < 1e-12);
            prop_assert!(d.values.windows(2).all(|w| w[0] >= w[1]));
            prop_assert!(d.values.iter().all(|&s| s >= 0.0));
        }

        #[test]
        fn hermitian_values_are_abs_eigenvalues(m in complex_strategy(4)) {
            let h = m.hermitian_part();
            let mut abs_eigs: Vec<f64> = hermitian_eig(&h).unwrap().values.iter().map(|x| x.abs()).collect();
            abs_eigs.sort_by(|a, b| b.total_cmp(a));
            let sv = singular_values(&h);
            for (a, b) in abs_eigs.iter().zip(&sv) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn trace_norm_unitarily_invariant(m in complex_strategy(4), a in complex_strategy(4), b in complex_strategy(4)) {
            let u = unitary_from(&a);
            let w = unitary_from(&b);
            let rotated = &(&u * &m) * &w;
            prop_assert!((trace_norm(&rotated) - trace_norm(&m)).abs() < 1e-9);
        }
    }
}
