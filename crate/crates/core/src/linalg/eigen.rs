//! Cyclic complex Jacobi eigensolver and one-sided Jacobi singular values.
//!
//! Both routines sweep the index pairs `(p, q)`, `p < q`, in a fixed row-cyclic
//! order, so identical inputs give bitwise-identical outputs.

use crate::error::{Error, Result};
use crate::linalg::matrix::{vec_norm, ComplexMatrix, C64, ZERO};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order with the matching unitary eigenvector matrix
/// (eigenvectors in columns).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// `V diag(values) Vᴴ`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::diag_real(&self.values);
        self.vectors.matmul(&d).matmul(&self.vectors.adjoint())
    }
}

/// Unitary 2x2 rotation `[[c, s], [-s·e^{-iφ}, c·e^{-iφ}]]` that diagonalizes the
/// Hermitian block `[[app, apq], [conj(apq), aqq]]` under `Uᴴ A U`.
#[derive(Clone, Copy)]
struct Rotation {
    c: f64,
    s: f64,
    phase: C64, // e^{-iφ}
}

impl Rotation {
    fn annihilating(app: f64, aqq: f64, apq: C64) -> Self {
        let mag = apq.norm();
        let phase = (apq / mag).conj();
        let tau = (aqq - app) / (2.0 * mag);
        let t = if tau >= 0.0 {
            1.0 / (tau + (1.0 + tau * tau).sqrt())
        } else {
            -1.0 / (-tau + (1.0 + tau * tau).sqrt())
        };
        let c = 1.0 / (1.0 + t * t).sqrt();
        Rotation { c, s: t * c, phase }
    }

    /// `(x_p, x_q) ← (c x_p - s e^{-iφ} x_q, s x_p + c e^{-iφ} x_q)`, i.e. right
    /// multiplication of a row vector by the rotation.
    #[inline]
    fn apply(&self, xp: C64, xq: C64) -> (C64, C64) {
        let eq = self.phase * xq;
        (xp * self.c - eq * self.s, xp * self.s + eq * self.c)
    }
}

fn rotate_columns(m: &mut ComplexMatrix, p: usize, q: usize, r: Rotation) {
    for k in 0..m.rows() {
        let (a, b) = r.apply(m[(k, p)], m[(k, q)]);
        m[(k, p)] = a;
        m[(k, q)] = b;
    }
}

fn rotate_rows_adjoint(m: &mut ComplexMatrix, p: usize, q: usize, r: Rotation) {
    // Uᴴ A acting on rows p, q: conjugate of the column rule applied to conj rows.
    for k in 0..m.cols() {
        let (a, b) = r.apply(m[(p, k)].conj(), m[(q, k)].conj());
        m[(p, k)] = a.conj();
        m[(q, k)] = b.conj();
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Index of the first coordinate with modulus above `1e-10` (used for
/// deterministic tie-breaking and phase normalization).
pub(crate) fn first_significant(v: &[C64]) -> usize {
    let scale = vec_norm(v).max(f64::MIN_POSITIVE);
    v.iter().position(|z| z.norm() > 1e-10 * scale).unwrap_or(0)
}

/// Rotates the phase of `v` so that its first significant coordinate is real positive.
pub(crate) fn normalize_phase(v: &mut [C64]) {
    let k = first_significant(v);
    let z = v[k];
    if z.norm() > 0.0 {
        let ph = (z / z.norm()).conj();
        for x in v.iter_mut() {
            *x *= ph;
        }
    }
}

/// Hermitian eigendecomposition by cyclic Jacobi rotations.
///
/// Rejects inputs with `‖M - Mᴴ‖ ≥ tol·max(1, ‖M‖)`. Eigenvalues come back in
/// ascending order; runs of eigenvalues equal to within `1e-12·‖M‖` are ordered
/// by the index of the first significant eigenvector coordinate, and every
/// eigenvector has its first significant coordinate real positive.
pub fn hermitian_eig(m: &ComplexMatrix, tol: f64) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::Shape(format!("hermitian_eig needs a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let n = m.rows();
    let norm = m.frobenius_norm();
    let defect = m.hermitian_defect();
    if defect >= tol * norm.max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    // Symmetrize so that rounding in the input does not bias the result.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    for i in 0..n {
        a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
    }
    let mut v = ComplexMatrix::identity(n);
    let target = f64::EPSILON * norm;
    let mut converged = n < 2 || norm == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off: off_diagonal_norm(&a) });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.norm() <= f64::MIN_POSITIVE * 1e4 {
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    continue;
                }
                let r = Rotation::annihilating(a[(p, p)].re, a[(q, q)].re, apq);
                rotate_columns(&mut a, p, q, r);
                rotate_rows_adjoint(&mut a, p, q, r);
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                rotate_columns(&mut v, p, q, r);
            }
        }
        converged = off_diagonal_norm(&a) <= target;
    }

    let mut pairs: Vec<(f64, Vec<C64>)> = (0..n)
        .map(|k| {
            let mut col = v.column(k);
            normalize_phase(&mut col);
            (a[(k, k)].re, col)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let tie = 1e-12 * norm.max(1.0);
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 <= tie {
            end += 1;
        }
        pairs[start..end].sort_by_key(|(_, col)| first_significant(col));
        start = end;
    }
    let values = pairs.iter().map(|(x, _)| *x).collect();
    let cols: Vec<Vec<C64>> = pairs.into_iter().map(|(_, c)| c).collect();
    Ok(HermitianEigen { values, vectors: ComplexMatrix::from_columns(n, &cols) })
}

/// Singular values and right singular vectors of `m` by one-sided (Hestenes)
/// Jacobi orthogonalization of the columns.
#[derive(Debug, Clone)]
pub struct RightSingular {
    /// One entry per column of the input, in the same order as `vectors`' columns.
    pub values: Vec<f64>,
    /// Unitary `cols x cols` matrix of right singular vectors.
    pub vectors: ComplexMatrix,
}

/// One-sided Jacobi SVD returning singular values (descending) and the right
/// singular vectors. Works for any shape; when `rows < cols` the surplus
/// singular values are zero.
pub fn right_singular(m: &ComplexMatrix) -> Result<RightSingular> {
    let n = m.cols();
    let mut a = m.clone();
    let mut v = ComplexMatrix::identity(n);
    let negligible = (f64::EPSILON * m.frobenius_norm()).powi(2);
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for k in 0..a.rows() {
                    let (x, y) = (a[(k, p)], a[(k, q)]);
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                if gamma.norm() <= f64::EPSILON * (alpha * beta).sqrt()
                    || alpha.min(beta) <= negligible
                {
                    continue;
                }
                rotated = true;
                let r = Rotation::annihilating(alpha, beta, gamma);
                rotate_columns(&mut a, p, q, r);
                rotate_columns(&mut v, p, q, r);
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps, off: f64::NAN });
        }
    }
    let mut order: Vec<(f64, Vec<C64>)> =
        (0..n).map(|k| (vec_norm(&a.column(k)), v.column(k))).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));
    let values = order.iter().map(|(s, _)| *s).collect();
    let cols: Vec<Vec<C64>> = order.into_iter().map(|(_, c)| c).collect();
    Ok(RightSingular { values, vectors: ComplexMatrix::from_columns(n, &cols) })
}

/// Smallest singular value of a square or tall matrix.
pub fn smallest_singular_value(m: &ComplexMatrix) -> Result<f64> {
    let sv = right_singular(m)?;
    let min = sv.values.last().copied().unwrap_or(0.0);
    Ok(if m.rows() < m.cols() { 0.0 } else { min })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ONE;

    #[test]
    fn diagonal_input_sorted() {
        let m = ComplexMatrix::diag_real(&[3.0, 1.0, 2.0]);
        let e = hermitian_eig(&m, 1e-9).unwrap();
        assert_eq!(e.values, vec![1.0, 2.0, 3.0]);
        assert_eq!(e.vector(0), vec![ZERO, ONE, ZERO]);
    }

    #[test]
    fn pauli_x() {
        let m = ComplexMatrix::from_row_major(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap();
        let e = hermitian_eig(&m, 1e-9).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = e.vector(0);
        assert!((v0[0].re - r).abs() < 1e-15 && (v0[1].re + r).abs() < 1e-15);
        let v1 = e.vector(1);
        assert!((v1[0].re - r).abs() < 1e-15 && (v1[1].re - r).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_row_major(2, 2, vec![ZERO, ONE, ZERO, ZERO]).unwrap();
        assert!(matches!(hermitian_eig(&m, 1e-9), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn complex_hermitian_reconstructs() {
        let m = ComplexMatrix::from_fn(5, 5, |i, j| {
            let (a, b) = (i.min(j) as f64, i.max(j) as f64);
            let im = if i < j { 0.3 * (a + 1.0) } else if i > j { -0.3 * (a + 1.0) } else { 0.0 };
            C64::new(1.0 / (1.0 + a + b), im)
        });
        let e = hermitian_eig(&m, 1e-9).unwrap();
        assert!((&e.reconstruct() - &m).frobenius_norm() < 1e-13);
        assert!(e.vectors.unitary_defect() < 1e-13);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn singular_values_of_rank_one() {
        let u = [C64::new(1.0, 1.0), C64::new(0.0, 2.0), ONE];
        let m = ComplexMatrix::from_fn(3, 3, |i, j| u[i] * u[j].conj());
        let sv = right_singular(&m).unwrap();
        let n2: f64 = u.iter().map(|z| z.norm_sqr()).sum();
        assert!((sv.values[0] - n2).abs() < 1e-13);
        assert!(sv.values[1].abs() < 1e-13 && sv.values[2].abs() < 1e-13);
    }
}
