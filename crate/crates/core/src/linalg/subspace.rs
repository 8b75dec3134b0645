//! Orthonormal-column subspaces, intersections and null spaces.

use crate::error::{Error, Result};
use crate::linalg::eigen::{hermitian_eig, right_singular};
use crate::linalg::matrix::{ComplexMatrix, C64};

/// A complex subspace of `ℂ^ambient_dim` held as an orthonormal column basis.
#[derive(Debug, Clone)]
pub struct Subspace {
    basis: ComplexMatrix,
    tol: f64,
}

impl Subspace {
    /// Wraps a basis that is already orthonormal to within `tol`.
    pub fn new(basis: ComplexMatrix, tol: f64) -> Result<Self> {
        let defect = basis.unitary_defect();
        if basis.cols() > basis.rows() || defect >= tol {
            return Err(Error::Shape(format!(
                "basis of {} columns in dimension {} is not orthonormal (defect {defect:.3e})",
                basis.cols(),
                basis.rows()
            )));
        }
        Ok(Self { basis, tol })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self { basis: ComplexMatrix::zeros(ambient_dim, 0), tol: 0.0 }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self { basis: ComplexMatrix::identity(ambient_dim), tol: 0.0 }
    }

    /// Orthonormalized span of arbitrary columns: left singular directions with
    /// singular value above `tol·max(‖M‖_F, 1)`, the rule used by [`rank`].
    pub fn span(columns: &ComplexMatrix, tol: f64) -> Result<Self> {
        let n = columns.rows();
        if columns.cols() == 0 {
            return Ok(Self::zero(n));
        }
        let threshold = tol * columns.frobenius_norm().max(1.0);
        let sv = right_singular(&columns.adjoint())?;
        let keep: Vec<Vec<C64>> =
            (0..n).filter(|&k| sv.values[k] > threshold).map(|k| sv.vectors.column(k)).collect();
        Ok(Self { basis: ComplexMatrix::from_columns(n, &keep), tol })
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Orthogonal projector `B Bᴴ`.
    pub fn projector(&self) -> ComplexMatrix {
        self.basis.matmul(&self.basis.adjoint())
    }

    /// Image of the subspace under an isometric embedding `U` whose columns are
    /// orthonormal (used to lift subspaces of a graded piece back to the module).
    pub fn embed(&self, isometry: &ComplexMatrix) -> Self {
        Self { basis: isometry.matmul(&self.basis), tol: self.tol }
    }

    /// Distance from a vector to the subspace, `‖(I - P) v‖`.
    pub fn distance(&self, v: &[C64]) -> f64 {
        let coeffs = self.basis.adjoint().mul_vec(v);
        let proj = self.basis.mul_vec(&coeffs);
        v.iter().zip(&proj).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn contains(&self, v: &[C64], tol: f64) -> bool {
        self.distance(v) <= tol * crate::linalg::matrix::vec_norm(v).max(1.0)
    }
}

/// Intersection of subspaces as the near-null eigenspace of `Σ_i (I - P_i)`.
pub fn subspace_intersection(subs: &[Subspace], tol: f64) -> Result<Subspace> {
    let Some(first) = subs.first() else {
        return Err(Error::InvalidArgument("intersection of an empty family".into()));
    };
    let n = first.ambient_dim();
    if let Some(bad) = subs.iter().find(|s| s.ambient_dim() != n) {
        return Err(Error::Shape(format!(
            "ambient dimensions differ: {} vs {}",
            n,
            bad.ambient_dim()
        )));
    }
    if subs.iter().any(|s| s.dim() == 0) {
        return Ok(Subspace::zero(n));
    }
    let mut sum = ComplexMatrix::zeros(n, n);
    let id = ComplexMatrix::identity(n);
    for s in subs {
        sum = &sum + &(&id - &s.projector());
    }
    let e = hermitian_eig(&sum, 1e-8)?;
    let cols: Vec<Vec<C64>> =
        (0..n).filter(|&k| e.values[k] < tol).map(|k| e.vector(k)).collect();
    Ok(Subspace { basis: ComplexMatrix::from_columns(n, &cols), tol })
}

/// Right null space: directions with singular value below `tol·max(‖M‖_F, 1)`.
pub fn nullspace(m: &ComplexMatrix, tol: f64) -> Result<Subspace> {
    let n = m.cols();
    if m.rows() == 0 {
        return Ok(Subspace::full(n));
    }
    let threshold = tol * m.frobenius_norm().max(1.0);
    let sv = right_singular(m)?;
    let mut cols: Vec<Vec<C64>> = (0..n)
        .filter(|&k| sv.values[k] < threshold)
        .map(|k| sv.vectors.column(k))
        .collect();
    for c in cols.iter_mut() {
        crate::linalg::eigen::normalize_phase(c);
    }
    Ok(Subspace { basis: ComplexMatrix::from_columns(n, &cols), tol })
}

/// Numerical rank with the same threshold rule as [`nullspace`].
pub fn rank(m: &ComplexMatrix, tol: f64) -> Result<usize> {
    Ok(m.cols() - nullspace(m, tol)?.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{ONE, ZERO};

    fn e(n: usize, k: usize) -> Vec<C64> {
        (0..n).map(|i| if i == k { ONE } else { ZERO }).collect()
    }

    #[test]
    fn coordinate_intersection() {
        let a = Subspace::span(&ComplexMatrix::from_columns(3, &[e(3, 0), e(3, 1)]), 1e-9).unwrap();
        let b = Subspace::span(&ComplexMatrix::from_columns(3, &[e(3, 1), e(3, 2)]), 1e-9).unwrap();
        let c = subspace_intersection(&[a, b], 1e-8).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&e(3, 1), 1e-12));
    }

    #[test]
    fn self_intersection_keeps_dimension() {
        let a = Subspace::span(
            &ComplexMatrix::from_columns(4, &[vec![ONE, ONE, ZERO, ZERO], e(4, 3)]),
            1e-9,
        )
        .unwrap();
        let c = subspace_intersection(&[a.clone(), a], 1e-8).unwrap();
        assert_eq!(c.dim(), 2);
    }

    #[test]
    fn nullspace_of_zero_is_everything() {
        assert_eq!(nullspace(&ComplexMatrix::zeros(3, 4), 1e-9).unwrap().dim(), 4);
    }

    #[test]
    fn wide_matrix_nullity() {
        let m = ComplexMatrix::from_fn(1, 3, |_, j| C64::new(j as f64 + 1.0, 0.0));
        assert_eq!(nullspace(&m, 1e-9).unwrap().dim(), 2);
    }
}
