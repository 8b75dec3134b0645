//! Simultaneous diagonalization of commuting Hermitian families.

use crate::error::{Error, Result};
use crate::linalg::eigen::hermitian_eig;
use crate::linalg::matrix::{ComplexMatrix, C64};
use crate::linalg::subspace::Subspace;

/// A common unitary eigenbasis together with the eigenvalue tuple of each
/// basis column.
#[derive(Debug, Clone)]
pub struct JointEigenstructure {
    pub vectors: ComplexMatrix,
    /// `tuples[k][j]` is the eigenvalue of operator `j` on column `k`.
    pub tuples: Vec<Vec<f64>>,
}

impl JointEigenstructure {
    pub fn dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn operator_count(&self) -> usize {
        self.tuples.first().map_or(0, Vec::len)
    }

    /// `max_j ‖L_j V - V Λ_j‖_F`.
    pub fn residual(&self, ls: &[ComplexMatrix]) -> f64 {
        ls.iter()
            .enumerate()
            .map(|(j, l)| {
                let lam: Vec<f64> = self.tuples.iter().map(|t| t[j]).collect();
                let lv = l.matmul(&self.vectors);
                let vl = self.vectors.matmul(&ComplexMatrix::diag_real(&lam));
                (&lv - &vl).frobenius_norm()
            })
            .fold(0.0, f64::max)
    }
}

/// Groups indices of a sorted sequence into runs whose consecutive gaps are at
/// most `gap`.
fn clusters(values: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for k in 1..=values.len() {
        if k == values.len() || values[k] - values[k - 1] > gap {
            out.push(start..k);
            start = k;
        }
    }
    out
}

/// Sequential refinement: diagonalize `L_1`, then diagonalize the compression
/// of `L_2` onto each eigenspace of `L_1`, and so on.
pub fn joint_eig(ls: &[ComplexMatrix], tol: f64) -> Result<JointEigenstructure> {
    let Some(first) = ls.first() else {
        return Err(Error::InvalidArgument("joint_eig needs at least one operator".into()));
    };
    let n = first.rows();
    let scale = ls.iter().map(ComplexMatrix::frobenius_norm).fold(1.0, f64::max);
    for (i, l) in ls.iter().enumerate() {
        if l.rows() != n || l.cols() != n {
            return Err(Error::Shape(format!("operator {i} is {}x{}, expected {n}x{n}", l.rows(), l.cols())));
        }
        let defect = l.hermitian_defect();
        if defect >= tol * scale {
            return Err(Error::NotHermitian { defect });
        }
    }
    for i in 0..ls.len() {
        for j in i + 1..ls.len() {
            let norm = ls[i].commutator(&ls[j]).frobenius_norm();
            if norm >= tol * scale * scale {
                return Err(Error::NotCommuting { i, j, norm });
            }
        }
    }

    // Blocks of mutually degenerate columns still to be refined.
    let mut blocks: Vec<ComplexMatrix> = vec![ComplexMatrix::identity(n)];
    let gap = 1e-8 * scale;
    for l in ls {
        let mut next = Vec::new();
        for b in &blocks {
            let e = hermitian_eig(&l.compress(b), tol.max(1e-9))?;
            let rotated = b.matmul(&e.vectors);
            for r in clusters(&e.values, gap) {
                let cols: Vec<Vec<C64>> = r.map(|k| rotated.column(k)).collect();
                next.push(ComplexMatrix::from_columns(n, &cols));
            }
        }
        blocks = next;
    }

    let cols: Vec<Vec<C64>> =
        blocks.iter().flat_map(|b| (0..b.cols()).map(move |k| b.column(k))).collect();
    let vectors = ComplexMatrix::from_columns(n, &cols);
    let tuples = cols
        .iter()
        .map(|v| {
            ls.iter()
                .map(|l| crate::linalg::matrix::inner(v, &l.mul_vec(v)).re)
                .collect()
        })
        .collect();
    Ok(JointEigenstructure { vectors, tuples })
}

/// Span of the joint eigenvectors whose `j`-th eigenvalue is negative.
///
/// Fails when any `j`-th eigenvalue lies within `sign_tol` of zero.
pub fn negative_eigenspace(s: &JointEigenstructure, j: usize, sign_tol: f64) -> Result<Subspace> {
    if j >= s.operator_count() {
        return Err(Error::IndexOutOfRange { index: j + 1, dim: s.operator_count() });
    }
    let n = s.vectors.rows();
    let mut cols = Vec::new();
    for (k, t) in s.tuples.iter().enumerate() {
        let lam = t[j];
        if lam.abs() <= sign_tol {
            return Err(Error::DegenerateEigenvalue { value: lam, sign_tol });
        }
        if lam < 0.0 {
            cols.push(s.vectors.column(k));
        }
    }
    Subspace::new(ComplexMatrix::from_columns(n, &cols), 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_pair() {
        let l1 = ComplexMatrix::diag_real(&[1.0, -1.0]);
        let l2 = ComplexMatrix::diag_real(&[-1.0, -1.0]);
        let s = joint_eig(&[l1, l2], 1e-9).unwrap();
        let mut t = s.tuples.clone();
        t.sort_by(|a, b| a[0].total_cmp(&b[0]));
        assert_eq!(t, vec![vec![-1.0, -1.0], vec![1.0, -1.0]]);
    }

    #[test]
    fn non_commuting_rejected() {
        let x = ComplexMatrix::from_fn(2, 2, |i, j| C64::new(if i != j { 1.0 } else { 0.0 }, 0.0));
        let z = ComplexMatrix::diag_real(&[1.0, -1.0]);
        assert!(matches!(joint_eig(&[x, z], 1e-9), Err(Error::NotCommuting { .. })));
    }

    #[test]
    fn negative_space_dimension_and_degeneracy() {
        let s = joint_eig(&[ComplexMatrix::diag_real(&[1.0, -1.0])], 1e-9).unwrap();
        assert_eq!(negative_eigenspace(&s, 0, 1e-8).unwrap().dim(), 1);
        let s = joint_eig(&[ComplexMatrix::diag_real(&[1e-12, -1.0])], 1e-9).unwrap();
        assert!(matches!(
            negative_eigenspace(&s, 0, 1e-8),
            Err(Error::DegenerateEigenvalue { .. })
        ));
    }
}
