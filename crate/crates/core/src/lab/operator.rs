use super::CircleModel;
use crate::error::{Error, Result};
use crate::linalg::{map_band, BlockTridiagonal, ComplexMatrix, C64};
use crate::local_index::graded_bases_of;

fn check_args(s: f64, modes: usize) -> Result<()> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::InvalidArgument(format!("s must be positive, got {s}")));
    }
    if modes == 0 {
        return Err(Error::InvalidArgument("at least one Fourier mode is required".into()));
    }
    Ok(())
}

/// Truncated `D = C d/dt + B + sZ` on modes `-N..=N`, as block bands:
/// `d_band[p + P][k]` is the block at `(k + p, k)` for `p = -P..=P`.
struct DiracBands {
    modes: usize,
    width: usize,
    blocks: Vec<Vec<ComplexMatrix>>,
}

impl DiracBands {
    fn new(model: &CircleModel, s: f64, modes: usize) -> Self {
        let n = model.fiber_dim();
        let total = 2 * modes + 1;
        let width = (model.bandwidth() as usize).min(2 * modes);
        let coeff: Vec<ComplexMatrix> = (-(width as i64)..=width as i64)
            .map(|p| &model.drift().fourier(p) + &model.z().fourier(p).scale_real(s))
            .collect();
        let blocks = (-(width as i64)..=width as i64)
            .map(|p| {
                let rows = total as i64 - p.abs();
                (0..rows)
                    .map(|k| {
                        // column mode index k (or k - p when p < 0)
                        let col = if p >= 0 { k } else { k - p };
                        let mut b = coeff[(p + width as i64) as usize].clone();
                        if p == 0 {
                            let freq = col as f64 - modes as f64;
                            b = &b + &model.symbol().scale(C64::new(0.0, freq));
                        }
                        debug_assert_eq!(b.rows(), n);
                        b
                    })
                    .collect()
            })
            .collect();
        Self { modes, width, blocks }
    }

    fn total(&self) -> usize {
        2 * self.modes + 1
    }

    /// Block `(i, j)` of `D`, if inside the band.
    fn get(&self, i: usize, j: usize) -> Option<&ComplexMatrix> {
        let p = i as i64 - j as i64;
        if p.unsigned_abs() as usize > self.width {
            return None;
        }
        let idx = (p + self.width as i64) as usize;
        Some(&self.blocks[idx][i.min(j)])
    }
}

/// Lower block band of `H_s = D²/s`: `band[d][k]` is the block at `(k + d, k)`.
#[derive(Debug, Clone)]
pub struct HsBand {
    pub modes: usize,
    pub band: Vec<Vec<ComplexMatrix>>,
}

impl HsBand {
    pub fn new(model: &CircleModel, s: f64, modes: usize) -> Result<Self> {
        check_args(s, modes)?;
        let d = DiracBands::new(model, s, modes);
        let total = d.total();
        let w = d.width;
        let n = model.fiber_dim();
        let band = (0..=(2 * w).min(total - 1))
            .map(|off| {
                (0..total - off)
                    .map(|j| {
                        let i = j + off;
                        let lo = i.saturating_sub(w);
                        let hi = (j + w).min(total - 1);
                        let mut acc = ComplexMatrix::zeros(n, n);
                        for k in lo..=hi {
                            if let (Some(a), Some(b)) = (d.get(i, k), d.get(k, j)) {
                                acc = &acc + &a.matmul(b);
                            }
                        }
                        acc.scale_real(1.0 / s)
                    })
                    .collect()
            })
            .collect();
        Ok(Self { modes, band })
    }

    /// Upper bound on the spectral radius, used to park padding eigenvalues.
    fn norm_bound(&self) -> f64 {
        self.band.iter().flatten().map(|b| b.frobenius_norm()).sum::<f64>() * 2.0 + 1.0
    }

    pub fn tridiagonal(&self) -> Result<BlockTridiagonal> {
        BlockTridiagonal::from_band(&self.band, self.norm_bound())
    }

    /// The band restricted to one graded half, given an isometry onto it.
    pub fn restricted(&self, basis: &ComplexMatrix) -> Self {
        Self { modes: self.modes, band: map_band(&self.band, |b| b.compress(basis)) }
    }
}

/// Dense `H_s` on modes `-N..=N` with fiber index fastest.
pub fn assemble_hs(model: &CircleModel, s: f64, modes: usize) -> Result<ComplexMatrix> {
    check_args(s, modes)?;
    let d = DiracBands::new(model, s, modes);
    let n = model.fiber_dim();
    let total = d.total();
    let mut dense = ComplexMatrix::zeros(n * total, n * total);
    for i in 0..total {
        for j in 0..total {
            if let Some(b) = d.get(i, j) {
                for r in 0..n {
                    for c in 0..n {
                        dense[(i * n + r, j * n + c)] = b[(r, c)];
                    }
                }
            }
        }
    }
    Ok(dense.matmul(&dense).scale_real(1.0 / s))
}

/// The `count` smallest eigenvalues of `H_s`.
pub fn lowest_eigenvalues(model: &CircleModel, s: f64, modes: usize, count: usize) -> Result<Vec<f64>> {
    HsBand::new(model, s, modes)?.tridiagonal()?.lowest(count)
}

/// Numbers of eigenvalues of `H_s` below `r` on `E⁺` and `E⁻`.
pub fn graded_counts_below(model: &CircleModel, s: f64, modes: usize, r: f64) -> Result<(usize, usize)> {
    let band = HsBand::new(model, s, modes)?;
    let (plus, minus) = graded_bases_of(model.grading(), 1e-9)?;
    let count = |basis: &ComplexMatrix| -> Result<usize> {
        if basis.cols() == 0 {
            return Ok(0);
        }
        band.restricted(basis).tridiagonal()?.count_below(r)
    };
    Ok((count(&plus)?, count(&minus)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{clifford_generator, parity};
    use crate::lab::TrigMatrix;
    use crate::linalg::hermitian_eig;

    fn flat() -> CircleModel {
        let c = clifford_generator(1, 1).unwrap();
        CircleModel::new(c, TrigMatrix::zero(2), TrigMatrix::zero(2), parity(1)).unwrap()
    }

    #[test]
    fn flat_circle_spectrum() {
        let s = 4.0;
        let got = lowest_eigenvalues(&flat(), s, 8, 9).unwrap();
        let want = [0.0, 0.0, 0.25, 0.25, 0.25, 0.25, 1.0, 1.0, 1.0];
        for (g, w) in got.iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{got:?}");
        }
    }

    #[test]
    fn banded_agrees_with_dense() {
        let model = CircleModel::cos_hat();
        let dense = assemble_hs(&model, 3.0, 10).unwrap();
        assert!(dense.hermitian_defect() < 1e-12);
        let e = hermitian_eig(&dense, 1e-12).unwrap();
        let banded = lowest_eigenvalues(&model, 3.0, 10, 6).unwrap();
        for (a, b) in e.values.iter().zip(&banded) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn graded_counts_split_the_spectrum() {
        let model = CircleModel::cos_hat();
        let all = HsBand::new(&model, 5.0, 12).unwrap().tridiagonal().unwrap().count_below(3.0).unwrap();
        let (p, m) = graded_counts_below(&model, 5.0, 12, 3.0).unwrap();
        assert_eq!(p + m, all);
    }
}
