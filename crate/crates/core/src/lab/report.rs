use super::operator::{graded_counts_below, lowest_eigenvalues};
use super::CircleModel;
use crate::error::{Error, Result};
use crate::linalg::{joint_eig, smallest_singular_value};

const SCAN_POINTS: usize = 4096;

/// Harmonic-oscillator model at one zero `t` of `Z`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroModel {
    pub t: f64,
    /// Eigenvalues of `L = C·Z'(t)` paired with the grading sign of the
    /// eigenvector.
    pub l_eigen: Vec<(f64, i8)>,
}

impl ZeroModel {
    /// Graded kernel dimensions of `−∂² + L + x²L²`: eigenvectors of `L` with
    /// negative eigenvalue, split by grading.
    pub fn kernel(&self) -> (usize, usize) {
        let neg = self.l_eigen.iter().filter(|(l, _)| *l < 0.0);
        let plus = neg.clone().filter(|(_, g)| *g > 0).count();
        let minus = neg.filter(|(_, g)| *g < 0).count();
        (plus, minus)
    }

    /// The `count` lowest oscillator levels `|λ|(2n+1) + λ`.
    pub fn levels(&self, count: usize) -> Vec<f64> {
        let lams: Vec<f64> = self.l_eigen.iter().map(|&(l, _)| l).collect();
        merged_levels(&lams, count)
    }
}

/// Merges the level ladders `|λ|(2n+1) + λ` of several one-dimensional
/// oscillators and keeps the `count` smallest.
pub(crate) fn merged_levels(lams: &[f64], count: usize) -> Vec<f64> {
    let mut next = vec![0u64; lams.len()];
    let level = |l: f64, n: u64| l.abs() * (2 * n + 1) as f64 + l;
    let mut out = Vec::with_capacity(count);
    while out.len() < count && !lams.is_empty() {
        let (k, v) = lams
            .iter()
            .enumerate()
            .map(|(k, &l)| (k, level(l, next[k])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        out.push(v);
        next[k] += 1;
    }
    out
}

/// Simple zeros of `Z` on `[0, 2π)`, located as minima of `‖Z(t)‖²`.
pub fn zeros(model: &CircleModel) -> Result<Vec<f64>> {
    let tau = std::f64::consts::TAU;
    let z = model.z();
    if z.is_zero() {
        return Err(Error::NonSimpleZero { t: 0.0, sigma: 0.0 });
    }
    let slope = |t: f64| -> f64 {
        let v = z.eval(t);
        let dv = z.derivative(t);
        2.0 * v.adjoint().matmul(&dv).trace().re
    };
    let grid: Vec<f64> = (0..SCAN_POINTS).map(|k| tau * k as f64 / SCAN_POINTS as f64).collect();
    let scale = grid.iter().map(|&t| z.eval(t).frobenius_norm()).fold(0.0, f64::max);
    let slopes: Vec<f64> = grid.iter().map(|&t| slope(t)).collect();
    let mut out = Vec::new();
    for k in 0..SCAN_POINTS {
        let (a, fa) = (grid[k], slopes[k]);
        let (b, fb) = (a + tau / SCAN_POINTS as f64, slopes[(k + 1) % SCAN_POINTS]);
        if !(fa < 0.0 && fb >= 0.0) {
            continue;
        }
        let (mut lo, mut hi) = (a, b);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if slope(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = 0.5 * (lo + hi);
        if z.eval(t).frobenius_norm() > 1e-7 * scale {
            continue;
        }
        let sigma = smallest_singular_value(&z.derivative(t))?;
        if sigma < 1e-8 * scale {
            return Err(Error::NonSimpleZero { t, sigma });
        }
        out.push(t.rem_euclid(tau));
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    Ok(out)
}

/// Oscillator models `−∂² + L + x²L²` with `L = C·Z'(t_i)` at each zero.
pub fn zero_models(model: &CircleModel) -> Result<Vec<ZeroModel>> {
    zeros(model)?
        .into_iter()
        .map(|t| {
            let l = model.symbol().matmul(&model.z().derivative(t));
            let scale = l.frobenius_norm().max(1.0);
            if l.hermitian_defect() > 1e-9 * scale {
                return Err(Error::InvalidArgument(format!(
                    "C·Z'(t) is not Hermitian at t = {t:.6}; Z' must anticommute with C"
                )));
            }
            let joint = joint_eig(&[l, model.grading().clone()], 1e-9)?;
            let l_eigen = joint.tuples.iter().map(|tp| (tp[0], if tp[1] > 0.0 { 1 } else { -1 })).collect();
            Ok(ZeroModel { t, l_eigen })
        })
        .collect()
}

/// Lowest `count` eigenvalues of the direct sum of the models at the zeros.
/// Empty when `Z` has no zeros.
pub fn model_spectrum_at_zeros(model: &CircleModel, count: usize) -> Result<Vec<f64>> {
    let lams: Vec<f64> = zero_models(model)?.iter().flat_map(|z| z.l_eigen.iter().map(|&(l, _)| l)).collect();
    Ok(merged_levels(&lams, count))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub s: f64,
    pub eigenvalues: Vec<f64>,
    /// `|λ_j(s) − μ_j|`; empty without zeros.
    pub gaps: Vec<f64>,
    /// Largest change of a reported eigenvalue when the mode count doubles.
    pub doubling_delta: f64,
}

impl ConvergenceRow {
    pub fn max_gap(&self) -> f64 {
        self.gaps.iter().copied().fold(0.0, f64::max)
    }
}

/// Outcome when `Z` vanishes somewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Localization {
    pub zeros: Vec<f64>,
    pub model: Vec<f64>,
    /// `max_j` gaps strictly decrease over the last three `s`.
    pub monotone_tail: bool,
    /// `C = gap(s_2)·s_2^{1/5}`.
    pub fitted_c: f64,
    /// `gap(s) ≤ C s^{−1/5}` for every `s ≥ s_2`.
    pub bound_holds: bool,
    /// Kernel threshold: half the smallest positive model eigenvalue.
    pub threshold: f64,
    /// Graded counts of eigenvalues below the threshold at the largest `s`.
    pub kernel: (usize, usize),
    /// Graded kernel of the model operators.
    pub model_kernel: (usize, usize),
}

impl Localization {
    pub fn spectral_index(&self) -> i64 {
        self.kernel.0 as i64 - self.kernel.1 as i64
    }
}

/// Outcome when `Z` is invertible everywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct Growth {
    /// `min_s λ_1(s)/s`.
    pub fitted_c: f64,
    pub linear: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Localizing(Localization),
    Invertible(Growth),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub modes: usize,
    pub j_max: usize,
    pub rows: Vec<ConvergenceRow>,
    pub outcome: Outcome,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        match &self.outcome {
            Outcome::Localizing(l) => l.monotone_tail && l.bound_holds,
            Outcome::Invertible(g) => g.linear,
        }
    }
}

/// Relative size of eigenvalue changes under mode doubling that still counts
/// as converged.
const DOUBLING_TOL: f64 = 1e-8;

/// Lowest `j_max` eigenvalues of `H_s` for each `s`, compared with the model
/// spectrum at the zeros of `Z`.
pub fn convergence_report(model: &CircleModel, s_list: &[f64], j_max: usize, modes: usize) -> Result<ConvergenceReport> {
    if s_list.len() < 3 {
        return Err(Error::InvalidArgument("at least three values of s are required".into()));
    }
    if s_list.windows(2).any(|w| !(w[1] > w[0])) || s_list[0] <= 0.0 {
        return Err(Error::InvalidArgument("s values must be positive and strictly increasing".into()));
    }
    if j_max == 0 {
        return Err(Error::InvalidArgument("j_max must be positive".into()));
    }
    let zms = zero_models(model)?;
    let mu = model_spectrum_at_zeros(model, j_max)?;
    let mut rows = Vec::with_capacity(s_list.len());
    for &s in s_list {
        let eig = lowest_eigenvalues(model, s, modes, j_max)?;
        let fine = lowest_eigenvalues(model, s, 2 * modes, j_max)?;
        let mut delta: f64 = 0.0;
        for (j, (a, b)) in eig.iter().zip(&fine).enumerate() {
            let d = (a - b).abs();
            if d > DOUBLING_TOL * a.abs().max(1.0) {
                return Err(Error::NotConverged { s, j: j + 1, delta: d, modes });
            }
            delta = delta.max(d);
        }
        let gaps = if zms.is_empty() { Vec::new() } else { eig.iter().zip(&mu).map(|(a, b)| (a - b).abs()).collect() };
        rows.push(ConvergenceRow { s, eigenvalues: eig, gaps, doubling_delta: delta });
    }

    let outcome = if zms.is_empty() {
        let fitted_c = rows.iter().map(|r| r.eigenvalues[0] / r.s).fold(f64::INFINITY, f64::min);
        Outcome::Invertible(Growth { fitted_c, linear: fitted_c > 0.0 })
    } else {
        let gaps: Vec<f64> = rows.iter().map(ConvergenceRow::max_gap).collect();
        let tail = &gaps[gaps.len() - 3..];
        let monotone_tail = tail.windows(2).all(|w| w[1] < w[0]);
        let s_fit = s_list[1];
        let fitted_c = gaps[1] * s_fit.powf(0.2);
        let bound_holds = s_list
            .iter()
            .zip(&gaps)
            .skip(1)
            .all(|(&s, &g)| g <= fitted_c * s.powf(-0.2) * (1.0 + 1e-12));
        let smallest_positive = zms
            .iter()
            .flat_map(|z| z.l_eigen.iter().map(|&(l, _)| 2.0 * l.abs()))
            .fold(f64::INFINITY, f64::min);
        let threshold = 0.5 * smallest_positive;
        let s_last = *s_list.last().expect("nonempty");
        let kernel = graded_counts_below(model, s_last, modes, threshold)?;
        let model_kernel = zms.iter().map(ZeroModel::kernel).fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
        Outcome::Localizing(Localization {
            zeros: zms.iter().map(|z| z.t).collect(),
            model: mu,
            monotone_tail,
            fitted_c,
            bound_holds,
            threshold,
            kernel,
            model_kernel,
        })
    };
    Ok(ConvergenceReport { modes, j_max, rows, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cos_hat_zeros_and_model() {
        let m = CircleModel::cos_hat();
        let z = zeros(&m).unwrap();
        assert_eq!(z.len(), 2);
        assert!((z[0] - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        assert!((z[1] - 3.0 * std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let mu = model_spectrum_at_zeros(&m, 6).unwrap();
        for (g, w) in mu.iter().zip([0.0, 0.0, 2.0, 2.0, 2.0, 2.0]) {
            assert!((g - w).abs() < 1e-12, "{mu:?}");
        }
    }

    #[test]
    fn constant_perturbation_has_no_zeros() {
        assert!(model_spectrum_at_zeros(&CircleModel::constant_hat(), 4).unwrap().is_empty());
    }

    #[test]
    fn carriere_zero_kernels() {
        let m = CircleModel::carriere(CircleModel::default_carriere_lambda()).unwrap();
        let zms = zero_models(&m).unwrap();
        assert_eq!(zms.len(), 2);
        for z in &zms {
            assert_eq!(z.kernel(), (1, 1));
            let mut l: Vec<f64> = z.l_eigen.iter().map(|p| p.0.abs()).collect();
            l.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            assert!((l[0] - std::f64::consts::TAU).abs() < 1e-12);
        }
    }

    #[test]
    fn merged_ladders() {
        assert_eq!(merged_levels(&[-1.0, 1.0], 5), vec![0.0, 2.0, 2.0, 4.0, 4.0]);
    }
}
