use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::Matrix3;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{asymmetry, from_row_major, push_row_major, symmetrize, SymmetricEigen};
use crate::manifold::{Manifold, ManifoldKind};

const SYMMETRY_TOL: f64 = 1e-10;

/// Smallest eigenvalue accepted for a positive-definite matrix.
pub const MIN_EIGENVALUE: f64 = 1e-14;

/// Square root and inverse square root of an SPD matrix.
struct Roots {
    sqrt: Matrix3<f64>,
    inv_sqrt: Matrix3<f64>,
}

fn roots(d: &Matrix3<f64>) -> Roots {
    let e = SymmetricEigen::new(d);
    Roots {
        sqrt: e.map(f64::sqrt),
        inv_sqrt: e.map(|x| 1.0 / x.sqrt()),
    }
}

/// Symmetric positive-definite 3×3 matrices Pos₃ with the affine-invariant
/// metric `g_D(W, V) = tr(D^{-1/2} W D^{-1} V D^{-1/2})`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Spd;

impl Spd {
    /// Eigenvalues κ of `D^{-1/2} E D^{-1/2}`.
    pub fn relative_eigenvalues(d: &Matrix3<f64>, e: &Matrix3<f64>) -> [f64; 3] {
        let r = roots(d);
        let m = r.inv_sqrt * e * r.inv_sqrt;
        let vals = SymmetricEigen::new(&m).values;
        [vals[0], vals[1], vals[2]]
    }

    /// `d²(D, E) = Σ log(κ_l)²`, straight from the relative eigenvalues.
    pub fn eigenvalue_distance(d: &Matrix3<f64>, e: &Matrix3<f64>) -> f64 {
        Self::relative_eigenvalues(d, e)
            .iter()
            .map(|k| k.ln().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Validates that `m` is symmetric positive-definite, rejecting rather
    /// than repairing bad input.
    pub fn require_spd(m: &Matrix3<f64>) -> Result<()> {
        Spd.check_point(m).map_err(Error::Domain)
    }
}

impl Manifold for Spd {
    type Point = Matrix3<f64>;
    type Tangent = Matrix3<f64>;

    fn kind(&self) -> ManifoldKind {
        ManifoldKind::Spd
    }

    fn exp(&self, base: &Matrix3<f64>, v: &Matrix3<f64>) -> Matrix3<f64> {
        if v.iter().all(|&x| x == 0.0) {
            return *base;
        }
        let r = roots(base);
        let inner = SymmetricEigen::new(&(r.inv_sqrt * v * r.inv_sqrt)).map(f64::exp);
        symmetrize(&(r.sqrt * inner * r.sqrt))
    }

    fn log(&self, base: &Matrix3<f64>, target: &Matrix3<f64>) -> Result<Matrix3<f64>> {
        if base == target {
            return Ok(Matrix3::zeros());
        }
        let r = roots(base);
        let e = SymmetricEigen::new(&(r.inv_sqrt * target * r.inv_sqrt));
        if !(e.min_value() > 0.0) {
            return Err(Error::Domain(format!(
                "matrices are not both positive definite: {base:?}, {target:?}"
            )));
        }
        Ok(symmetrize(&(r.sqrt * e.map(f64::ln) * r.sqrt)))
    }

    fn norm(&self, base: &Matrix3<f64>, v: &Matrix3<f64>) -> f64 {
        let r = roots(base);
        (r.inv_sqrt * v * r.inv_sqrt).norm()
    }

    fn dist(&self, a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
        if a == b {
            return 0.0;
        }
        Self::eigenvalue_distance(a, b)
    }

    fn zero_tangent(&self, _base: &Matrix3<f64>) -> Matrix3<f64> {
        Matrix3::zeros()
    }

    fn scale(&self, v: &Matrix3<f64>, s: f64) -> Matrix3<f64> {
        v * s
    }

    fn add(&self, a: &Matrix3<f64>, b: &Matrix3<f64>) -> Matrix3<f64> {
        a + b
    }

    fn check_point(&self, p: &Matrix3<f64>) -> Result<(), String> {
        if !p.iter().all(|x| x.is_finite()) {
            return Err("non-finite entry".into());
        }
        let asym = asymmetry(p);
        if asym > SYMMETRY_TOL {
            return Err(format!("not symmetric (|A - Aᵀ| = {asym:e})"));
        }
        let min = SymmetricEigen::new(p).min_value();
        if !(min > MIN_EIGENVALUE) {
            return Err(format!("smallest eigenvalue {min:e} is not positive"));
        }
        Ok(())
    }

    fn check_tangent(&self, _base: &Matrix3<f64>, v: &Matrix3<f64>) -> Result<(), String> {
        let asym = asymmetry(v);
        if asym <= SYMMETRY_TOL {
            Ok(())
        } else {
            Err(format!("tangent not symmetric ({asym:e})"))
        }
    }

    fn write_coords(&self, p: &Matrix3<f64>, out: &mut Vec<f64>) {
        push_row_major(p, out);
    }

    fn read_coords(&self, coords: &[f64]) -> Matrix3<f64> {
        from_row_major(coords)
    }

    fn sample_tangent<R: Rng + ?Sized>(
        &self,
        base: &Matrix3<f64>,
        sigma: f64,
        rng: &mut R,
    ) -> Matrix3<f64> {
        // orthonormal basis of Sym(3): e_ii and (e_ij + e_ji)/√2
        let mut s = Matrix3::zeros();
        for i in 0..3 {
            s[(i, i)] = sigma * rng.sample::<f64, _>(StandardNormal);
        }
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let x = sigma * FRAC_1_SQRT_2 * rng.sample::<f64, _>(StandardNormal);
            s[(i, j)] = x;
            s[(j, i)] = x;
        }
        let r = roots(base);
        symmetrize(&(r.sqrt * s * r.sqrt))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Vector3;
    use std::f64::consts::E;

    fn diag(a: f64, b: f64, c: f64) -> Matrix3<f64> {
        Matrix3::from_diagonal(&Vector3::new(a, b, c))
    }

    #[test]
    fn exp_at_identity() {
        assert_eq!(Spd.exp(&Matrix3::identity(), &Matrix3::zeros()), Matrix3::identity());
        let r = Spd.exp(&Matrix3::identity(), &diag(1.0, 0.0, 0.0));
        assert!((r - diag(E, 1.0, 1.0)).amax() < 1e-14);
        assert_eq!(Spd.exp(&diag(4.0, 1.0, 1.0), &Matrix3::zeros()), diag(4.0, 1.0, 1.0));
    }

    #[test]
    fn log_at_identity() {
        let w = Spd.log(&Matrix3::identity(), &diag(E, 1.0, 1.0)).unwrap();
        assert!((w - diag(1.0, 0.0, 0.0)).amax() < 1e-15);
        let d = diag(2.0, 3.0, 0.5);
        assert_eq!(Spd.log(&d, &d).unwrap(), Matrix3::zeros());
    }

    #[test]
    fn distances() {
        assert!((Spd.dist(&Matrix3::identity(), &diag(E * E, 1.0, 1.0)) - 2.0).abs() < 1e-14);
        assert!((Spd.dist(&Matrix3::identity(), &diag(E, E, E)) - 3f64.sqrt()).abs() < 1e-14);
        assert!((Spd.norm(&Matrix3::identity(), &diag(1.0, 0.0, 0.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn metric_is_affine_invariant() {
        let d = Matrix3::new(2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 0.7);
        let e = Matrix3::new(1.0, -0.1, 0.0, -0.1, 1.5, 0.4, 0.0, 0.4, 2.0);
        let g = Matrix3::new(1.0, 2.0, 0.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0);
        let moved = Spd.dist(&(g * d * g.transpose()), &(g * e * g.transpose()));
        assert!((moved - Spd.dist(&d, &e)).abs() < 1e-12);
    }

    #[test]
    fn rejects_indefinite_matrices() {
        assert!(Spd::require_spd(&diag(1.0, -1.0, 1.0)).is_err());
        assert!(Spd::require_spd(&diag(1.0, 0.0, 1.0)).is_err());
        let asym = Matrix3::new(1.0, 0.1, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
        assert!(Spd::require_spd(&asym).is_err());
        assert!(Spd::require_spd(&Matrix3::identity()).is_ok());
    }
}
