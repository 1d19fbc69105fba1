//! Small dense helpers for 3×3 matrices.

use nalgebra::{Matrix3, Vector3};

const MAX_SWEEPS: usize = 64;

/// Off-diagonal Frobenius norm, relative to the matrix norm, at which the
/// Jacobi iteration stops.
const JACOBI_TOL: f64 = 1e-15;

/// Eigendecomposition of a symmetric 3×3 matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricEigen {
    pub values: Vector3<f64>,
    /// Eigenvectors stored as columns, matching `values`.
    pub vectors: Matrix3<f64>,
}

impl SymmetricEigen {
    /// Cyclic Jacobi rotations on the symmetric part of `m`.
    pub fn new(m: &Matrix3<f64>) -> Self {
        let mut a = symmetrize(m);
        let mut v = Matrix3::identity();
        let scale = a.norm();
        if scale == 0.0 || !scale.is_finite() {
            return Self { values: a.diagonal(), vectors: v };
        }
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= JACOBI_TOL * scale {
                break;
            }
            for (p, q) in [(0, 1), (0, 2), (1, 2)] {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                rotate(&mut a, &mut v, p, q, c, s);
            }
        }
        Self { values: a.diagonal(), vectors: v }
    }

    pub fn min_value(&self) -> f64 {
        self.values.min()
    }

    /// Rebuilds `V · diag(f(λ)) · Vᵀ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix3<f64> {
        let d = Matrix3::from_diagonal(&self.values.map(f));
        symmetrize(&(self.vectors * d * self.vectors.transpose()))
    }
}

// A ← JᵀAJ and V ← VJ for the Givens rotation J in the (p, q) plane.
fn rotate(a: &mut Matrix3<f64>, v: &mut Matrix3<f64>, p: usize, q: usize, c: f64, s: f64) {
    for k in 0..3 {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = c * akp - s * akq;
        a[(k, q)] = s * akp + c * akq;
    }
    for k in 0..3 {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = c * apk - s * aqk;
        a[(q, k)] = s * apk + c * aqk;
    }
    for k in 0..3 {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

fn off_diagonal_norm(a: &Matrix3<f64>) -> f64 {
    (2.0 * (a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2))).sqrt()
}

/// (A + Aᵀ)/2.
pub fn symmetrize(m: &Matrix3<f64>) -> Matrix3<f64> {
    (m + m.transpose()) * 0.5
}

/// Largest absolute entry of `A − Aᵀ`.
pub fn asymmetry(m: &Matrix3<f64>) -> f64 {
    (m - m.transpose()).amax()
}

pub fn from_row_major(c: &[f64]) -> Matrix3<f64> {
    Matrix3::from_row_slice(c)
}

pub fn push_row_major(m: &Matrix3<f64>, out: &mut Vec<f64>) {
    for r in 0..3 {
        for c in 0..3 {
            out.push(m[(r, c)]);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_is_its_own_decomposition() {
        let m = Matrix3::from_diagonal(&Vector3::new(3.0, 1.0, 2.0));
        let e = SymmetricEigen::new(&m);
        assert_eq!(e.values, Vector3::new(3.0, 1.0, 2.0));
        assert_eq!(e.vectors, Matrix3::identity());
    }

    #[test]
    fn reconstructs_symmetric_matrix() {
        let m = Matrix3::new(4.0, 1.0, -2.0, 1.0, 3.0, 0.5, -2.0, 0.5, 5.0);
        let e = SymmetricEigen::new(&m);
        let back = e.map(|x| x);
        assert!((back - m).amax() < 1e-13);
        let vtv = e.vectors.transpose() * e.vectors;
        assert!((vtv - Matrix3::identity()).amax() < 1e-14);
        // trace and determinant are preserved
        assert!((e.values.sum() - m.trace()).abs() < 1e-13);
        assert!((e.values.product() - m.determinant()).abs() < 1e-11);
    }

    #[test]
    fn repeated_eigenvalues() {
        let m = Matrix3::new(2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 3.0);
        let mut vals: Vec<f64> = SymmetricEigen::new(&m).values.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        for (got, want) in vals.iter().zip([1.0, 3.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
    }
}
