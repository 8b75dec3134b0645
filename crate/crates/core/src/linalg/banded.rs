//! Eigenvalue counting and bisection for structured Hermitian matrices.
//!
//! Both solvers count eigenvalues below a shift `σ` from the inertia of an
//! `LDLᴴ` factorization of `A - σI` (Sylvester's law; for block matrices the
//! Haynsworth additivity of inertia over Schur complements) and then bisect.

use crate::error::{Error, Result};
use crate::linalg::eigen::hermitian_eig;
use crate::linalg::matrix::ComplexMatrix;

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::Shape(format!(
                "tridiagonal needs n diagonal and n-1 off-diagonal entries, got {} and {}",
                diag.len(),
                off.len()
            )));
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `sigma` (Sturm sequence count).
    pub fn count_below(&self, sigma: f64) -> usize {
        let mut count = 0;
        let mut d = self.diag[0] - sigma;
        if d < 0.0 {
            count += 1;
        }
        for k in 1..self.dim() {
            let prev = if d == 0.0 { f64::EPSILON * (self.off[k - 1].abs() + 1.0) } else { d };
            d = self.diag[k] - sigma - self.off[k - 1] * self.off[k - 1] / prev;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..n {
            let r = if k > 0 { self.off[k - 1].abs() } else { 0.0 }
                + if k + 1 < n { self.off[k].abs() } else { 0.0 };
            lo = lo.min(self.diag[k] - r);
            hi = hi.max(self.diag[k] + r);
        }
        (lo, hi)
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn lowest(&self, count: usize) -> Vec<f64> {
        let (lo, hi) = self.gershgorin();
        let count = count.min(self.dim());
        (0..count).map(|k| bisect_kth(k, lo, hi, |s| self.count_below(s))).collect()
    }
}

/// Smallest `σ` with `count_below(σ) > k`, located by bisection to
/// floating-point resolution.
fn bisect_kth(k: usize, lo: f64, hi: f64, count_below: impl Fn(f64) -> usize) -> f64 {
    let pad = 1e-12 * (lo.abs().max(hi.abs()) + 1.0);
    let (mut a, mut b) = (lo - pad, hi + pad);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if count_below(mid) > k {
            b = mid;
        } else {
            a = mid;
        }
    }
    0.5 * (a + b)
}

/// Hermitian block-tridiagonal matrix with square diagonal blocks of uniform
/// size: `diag[k]` on the diagonal and `lower[k]` at block position `(k+1, k)`.
#[derive(Debug, Clone)]
pub struct BlockTridiagonal {
    pub diag: Vec<ComplexMatrix>,
    pub lower: Vec<ComplexMatrix>,
}

impl BlockTridiagonal {
    pub fn new(diag: Vec<ComplexMatrix>, lower: Vec<ComplexMatrix>) -> Result<Self> {
        if diag.is_empty() || lower.len() + 1 != diag.len() {
            return Err(Error::Shape("block tridiagonal needs n diagonal and n-1 lower blocks".into()));
        }
        let b = diag[0].rows();
        if diag.iter().chain(&lower).any(|m| m.rows() != b || m.cols() != b) {
            return Err(Error::Shape("block tridiagonal blocks must share one square size".into()));
        }
        Ok(Self { diag, lower })
    }

    /// Regroups a Hermitian banded block matrix into block-tridiagonal form.
    ///
    /// `band[d][k]` is the block at position `(k + d, k)` for `d = 0..=w`, with
    /// `band[d].len() == n - d`. Consecutive groups of `w` blocks become one
    /// super-block; trailing positions are padded with an isolated identity
    /// scaled by `pad_value`, which callers place above the spectrum of interest.
    pub fn from_band(band: &[Vec<ComplexMatrix>], pad_value: f64) -> Result<Self> {
        let w = band.len().saturating_sub(1).max(1);
        let n = band[0].len();
        let b = band[0][0].rows();
        let groups = n.div_ceil(w);
        let big = w * b;
        let get = |i: usize, j: usize| -> Option<ComplexMatrix> {
            // block (i, j) of the full matrix, i, j < n
            if i >= j {
                band.get(i - j).map(|v| v[j].clone())
            } else {
                band.get(j - i).map(|v| v[i].adjoint())
            }
        };
        let assemble = |gi: usize, gj: usize| -> ComplexMatrix {
            let mut m = ComplexMatrix::zeros(big, big);
            for a in 0..w {
                for c in 0..w {
                    let (i, j) = (gi * w + a, gj * w + c);
                    let blk = if i < n && j < n {
                        get(i, j)
                    } else if i == j {
                        Some(ComplexMatrix::identity(b).scale_real(pad_value))
                    } else {
                        None
                    };
                    if let Some(blk) = blk {
                        for r in 0..b {
                            for s in 0..b {
                                m[(a * b + r, c * b + s)] = blk[(r, s)];
                            }
                        }
                    }
                }
            }
            m
        };
        let diag = (0..groups).map(|g| assemble(g, g)).collect();
        let lower = (0..groups.saturating_sub(1)).map(|g| assemble(g + 1, g)).collect();
        Self::new(diag, lower)
    }

    pub fn block_size(&self) -> usize {
        self.diag[0].rows()
    }

    pub fn dim(&self) -> usize {
        self.diag.len() * self.block_size()
    }

    /// Dense copy (testing and small problems).
    pub fn to_dense(&self) -> ComplexMatrix {
        let b = self.block_size();
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n, n);
        for (k, d) in self.diag.iter().enumerate() {
            for r in 0..b {
                for s in 0..b {
                    m[(k * b + r, k * b + s)] = d[(r, s)];
                }
            }
        }
        for (k, l) in self.lower.iter().enumerate() {
            for r in 0..b {
                for s in 0..b {
                    m[((k + 1) * b + r, k * b + s)] = l[(r, s)];
                    m[(k * b + s, (k + 1) * b + r)] = l[(r, s)].conj();
                }
            }
        }
        m
    }

    /// Number of eigenvalues strictly below `sigma`, from the inertia of the
    /// block `LDLᴴ` pivots `S_k = A_k - σI - L_{k-1} S_{k-1}^{-1} L_{k-1}ᴴ`.
    pub fn count_below(&self, sigma: f64) -> Result<usize> {
        let b = self.block_size();
        let shift = ComplexMatrix::identity(b).scale_real(sigma);
        let mut count = 0;
        let mut prev: Option<(ComplexMatrix, usize)> = None; // (S^{-1}, index)
        for (k, a) in self.diag.iter().enumerate() {
            let mut s = a - &shift;
            if let Some((sinv, _)) = &prev {
                let l = &self.lower[k - 1];
                s = &s - &l.matmul(sinv).matmul(&l.adjoint());
            }
            let e = hermitian_eig(&s, 1e-6)?;
            let scale = e.values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            let floor = f64::EPSILON * scale;
            count += e.values.iter().filter(|&&v| v < 0.0).count();
            // S^{-1} = V diag(1/λ) Vᴴ with pivots kept away from exact zero.
            let inv: Vec<f64> = e
                .values
                .iter()
                .map(|&v| {
                    let v = if v.abs() < floor { floor.copysign(if v == 0.0 { 1.0 } else { v }) } else { v };
                    1.0 / v
                })
                .collect();
            let sinv = e.vectors.matmul(&ComplexMatrix::diag_real(&inv)).matmul(&e.vectors.adjoint());
            prev = Some((sinv, k));
        }
        Ok(count)
    }

    fn gershgorin(&self) -> (f64, f64) {
        let dense_rows = |k: usize| -> Vec<f64> {
            let b = self.block_size();
            (0..b)
                .map(|r| {
                    let mut off = 0.0;
                    for s in 0..b {
                        if s != r {
                            off += self.diag[k][(r, s)].norm();
                        }
                    }
                    if k > 0 {
                        off += self.lower[k - 1].row(r).iter().map(|z| z.norm()).sum::<f64>();
                    }
                    if k < self.lower.len() {
                        off += (0..b).map(|s| self.lower[k][(s, r)].norm()).sum::<f64>();
                    }
                    off
                })
                .collect()
        };
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..self.diag.len() {
            for (r, off) in dense_rows(k).into_iter().enumerate() {
                let d = self.diag[k][(r, r)].re;
                lo = lo.min(d - off);
                hi = hi.max(d + off);
            }
        }
        (lo, hi)
    }

    /// The `count` smallest eigenvalues in ascending order.
    pub fn lowest(&self, count: usize) -> Result<Vec<f64>> {
        let (lo, hi) = self.gershgorin();
        let count = count.min(self.dim());
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let pad = 1e-12 * (lo.abs().max(hi.abs()) + 1.0);
            let (mut a, mut b) = (out.last().map_or(lo, |&x: &f64| x.min(hi)) - pad, hi + pad);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if mid <= a || mid >= b {
                    break;
                }
                if self.count_below(mid)? > k {
                    b = mid;
                } else {
                    a = mid;
                }
            }
            out.push(0.5 * (a + b));
        }
        Ok(out)
    }
}

/// Applies `f` to every block of a band (helper for grading restriction).
pub fn map_band(band: &[Vec<ComplexMatrix>], f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Vec<Vec<ComplexMatrix>> {
    band.iter().map(|d| d.iter().map(&f).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::C64;

    #[test]
    fn tridiagonal_laplacian() {
        // Eigenvalues of tridiag(-1, 2, -1) of size n: 2 - 2cos(kπ/(n+1)).
        let n = 50;
        let t = SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
        let got = t.lowest(4);
        for (k, g) in got.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((g - exact).abs() < 1e-13, "{g} vs {exact}");
        }
    }

    #[test]
    fn block_counts_match_dense() {
        let b = 2;
        let n = 7;
        let diag: Vec<ComplexMatrix> = (0..n)
            .map(|k| {
                let mut m = ComplexMatrix::diag_real(&[k as f64, -(k as f64) * 0.5]);
                m[(0, 1)] = C64::new(0.3, 0.2);
                m[(1, 0)] = C64::new(0.3, -0.2);
                m
            })
            .collect();
        let lower: Vec<ComplexMatrix> = (0..n - 1)
            .map(|k| ComplexMatrix::from_fn(b, b, |r, s| C64::new(0.1 * (r + s + k) as f64, 0.05 * r as f64)))
            .collect();
        let bt = BlockTridiagonal::new(diag, lower).unwrap();
        let dense = hermitian_eig(&bt.to_dense(), 1e-9).unwrap();
        let low = bt.lowest(5).unwrap();
        for (g, e) in low.iter().zip(&dense.values) {
            assert!((g - e).abs() < 1e-10, "{g} vs {e}");
        }
    }

    #[test]
    fn band_regrouping_preserves_matrix() {
        // pentadiagonal scalar band regrouped into 2x2 super-blocks
        let n = 5;
        let one = |x: f64| ComplexMatrix::diag_real(&[x]);
        let band = vec![
            (0..n).map(|k| one(k as f64)).collect::<Vec<_>>(),
            (0..n - 1).map(|k| one(0.5 + k as f64)).collect(),
            (0..n - 2).map(|_| one(0.25)).collect(),
        ];
        let bt = BlockTridiagonal::from_band(&band, 100.0).unwrap();
        let d = bt.to_dense();
        assert_eq!(d.rows(), 6);
        assert_eq!(d[(3, 1)], C64::new(0.25, 0.0));
        assert_eq!(d[(1, 0)], C64::new(0.5, 0.0));
        assert_eq!(d[(5, 5)], C64::new(100.0, 0.0));
    }
}
