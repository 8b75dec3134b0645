//! The harmonic-oscillator model `K = Σ_j(−∂_j² + L_j + x_j² L_j²)` at a
//! critical closure: analytic spectrum, a finite-difference oracle, and the
//! holonomy-invariant kernel computed on Gaussian sections.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use crate::error::{Error, Result};
use crate::local_index::{build_l, global_index_detail, local_index, ClosureDatum, ScenarioModel};
use crate::linalg::{joint_eig, nullspace, ComplexMatrix, SymTridiagonal, C64};
use crate::tolerance::Tolerances;

/// One joint eigentuple `(λ_1 … λ_m)` of the `L_j` with its grading sign.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigentuple {
    pub lambdas: Vec<f64>,
    pub grade: i8,
}

impl Eigentuple {
    pub fn in_kernel(&self) -> bool {
        self.lambdas.iter().all(|&l| l < 0.0)
    }

    /// `Σ_j (|λ_j|(2n_j + 1) + λ_j)`.
    pub fn level(&self, n: &[u32]) -> f64 {
        self.lambdas.iter().zip(n).map(|(&l, &k)| oscillator_level(l, k)).sum()
    }

    /// The `count` smallest levels of this tuple, ascending with multiplicity.
    pub fn levels(&self, count: usize) -> Vec<f64> {
        lowest_levels(std::slice::from_ref(self), count).into_iter().map(|(v, _)| v).collect()
    }
}

/// `|λ|(2n+1) + λ`, the `n`-th eigenvalue of `−f'' + (λ + λ²x²) f`.
pub fn oscillator_level(lambda: f64, n: u32) -> f64 {
    lambda.abs() * (2 * n + 1) as f64 + lambda
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpectrum {
    /// Ascending, with multiplicity.
    pub eigenvalues: Vec<f64>,
    pub kernel_dim_plus: usize,
    pub kernel_dim_minus: usize,
    pub tuples: Vec<Eigentuple>,
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Smallest levels over all tuples with the tuple index that produced each.
fn lowest_levels(tuples: &[Eigentuple], count: usize) -> Vec<(f64, usize)> {
    let mut heap = BinaryHeap::new();
    let mut seen = HashSet::new();
    for (k, t) in tuples.iter().enumerate() {
        let n = vec![0u32; t.lambdas.len()];
        heap.push(Reverse((Key(t.level(&n)), k, n.clone())));
        seen.insert((k, n));
    }
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let Some(Reverse((Key(v), k, n))) = heap.pop() else { break };
        out.push((v, k));
        for j in 0..n.len() {
            let mut next = n.clone();
            next[j] += 1;
            if seen.insert((k, next.clone())) {
                heap.push(Reverse((Key(tuples[k].level(&next)), k, next)));
            }
        }
    }
    out
}

/// Joint eigentuples of `(L_1 … L_m, ε)` on the full module.
pub fn eigentuples(d: &ClosureDatum, tols: Tolerances) -> Result<(Vec<Eigentuple>, ComplexMatrix)> {
    let mut ops = build_l(d, tols.tol)?;
    let m = ops.len();
    ops.push(d.module().grading().clone());
    let joint = joint_eig(&ops, tols.tol)?;
    let tuples = joint
        .tuples
        .iter()
        .map(|t| {
            if let Some(&l) = t[..m].iter().find(|l| l.abs() <= tols.sign_tol) {
                return Err(Error::DegenerateEigenvalue { value: l, sign_tol: tols.sign_tol });
            }
            Ok(Eigentuple { lambdas: t[..m].to_vec(), grade: if t[m] > 0.0 { 1 } else { -1 } })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((tuples, joint.vectors))
}

/// The `count` lowest eigenvalues of the model operator with the graded,
/// holonomy-invariant kernel dimensions.
pub fn analytic_spectrum(d: &ClosureDatum, count: usize, tols: Tolerances) -> Result<ModelSpectrum> {
    let (tuples, _) = eigentuples(d, tols)?;
    let eigenvalues = lowest_levels(&tuples, count).into_iter().map(|(v, _)| v).collect();
    let (plus, minus) = invariant_kernel(d, tols)?;
    Ok(ModelSpectrum { eigenvalues, kernel_dim_plus: plus, kernel_dim_minus: minus, tuples })
}

/// Dirichlet box radius at which the oscillator ground state has decayed
/// below `e^{-28} < 10⁻¹²`.
pub fn decay_radius(lambda: f64) -> f64 {
    (56.0 / lambda.abs()).sqrt()
}

/// Lowest eigenvalues of `−f'' + (λ + λ²x²) f` on `[−R, R]`, Dirichlet ends,
/// second-order central differences on `N` interior points.
pub fn oscillator_fd(lambda: f64, count: usize, n: usize, radius: f64) -> Result<Vec<f64>> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::InvalidArgument(format!("oscillator needs a nonzero finite λ, got {lambda}")));
    }
    if n < 2 || !(radius > 0.0) {
        return Err(Error::InvalidArgument("grid needs at least two points and a positive radius".into()));
    }
    let h = 2.0 * radius / (n + 1) as f64;
    let inv_h2 = 1.0 / (h * h);
    let diag = (1..=n)
        .map(|i| {
            let x = -radius + i as f64 * h;
            2.0 * inv_h2 + lambda + lambda * lambda * x * x
        })
        .collect();
    let t = SymTridiagonal::new(diag, vec![-inv_h2; n - 1])?;
    Ok(t.lowest(count))
}

/// Finite-difference oracle with one Richardson step: `(4E_{2N} − E_N)/3`
/// removes the `O(h²)` error term.
pub fn oscillator_1d_oracle(lambda: f64, count: usize, n: usize, radius: f64) -> Result<Vec<f64>> {
    if n < 500 {
        return Err(Error::InvalidArgument(format!("oracle grid needs N ≥ 500, got {n}")));
    }
    if (-0.5 * lambda.abs() * radius * radius).exp() >= 1e-12 {
        return Err(Error::InvalidArgument(format!("radius {radius} too small for λ = {lambda}")));
    }
    let coarse = oscillator_fd(lambda, count, n, radius)?;
    let fine = oscillator_fd(lambda, count, 2 * n + 1, radius)?;
    Ok(coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect())
}

/// The `count` lowest levels of one tuple composed from per-axis oracles.
pub fn tuple_oracle_levels(lambdas: &[f64], count: usize, n: usize) -> Result<Vec<f64>> {
    let ladders =
        lambdas.iter().map(|&l| oscillator_1d_oracle(l, count, n, decay_radius(l))).collect::<Result<Vec<_>>>()?;
    // all sums with at most `count` levels per axis, smallest first
    let mut sums = vec![0.0];
    for ladder in &ladders {
        let mut next: Vec<f64> = sums.iter().flat_map(|s| ladder.iter().map(move |v| s + v)).collect();
        next.sort_by(f64::total_cmp);
        next.truncate(count);
        sums = next;
    }
    Ok(sums)
}

/// Graded dimensions of the holonomy-invariant kernel of the model operator,
/// computed on Gaussian sections `exp(½ xᵀQx) v`. Cross-checked against
/// [`local_index`]; disagreement is an error.
pub fn invariant_kernel(d: &ClosureDatum, tols: Tolerances) -> Result<(usize, usize)> {
    let (tuples, vectors) = eigentuples(d, tols)?;
    let n = d.dim();
    let m = d.m();
    let holonomy = d.holonomy();

    let kernel: Vec<usize> = (0..tuples.len()).filter(|&k| tuples[k].in_kernel()).collect();
    // Every kernel section shares the quadratic form Q = diag(λ_j) = −diag(√G_jj).
    let q = match kernel.first() {
        Some(&k) => tuples[k].lambdas.clone(),
        None => vec![0.0; m],
    };
    for &k in &kernel {
        let dev = tuples[k].lambdas.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if dev > tols.sign_tol * q.iter().map(|v| v.abs()).fold(1.0, f64::max) {
            return Err(Error::RouteMismatch(format!(
                "closure `{}`: kernel sections carry different Gaussian forms",
                d.name()
            )));
        }
    }
    let qscale = q.iter().map(|v| v.abs()).fold(1.0, f64::max);
    for (r, g) in holonomy.components().iter().enumerate() {
        let moved = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| {
                let v: f64 = (0..m).map(|k| g.dg[(i, k)] * q[k] * g.dg[(j, k)]).sum();
                let target = if i == j { q[i] } else { 0.0 };
                (v - target).abs()
            })
            .fold(0.0, f64::max);
        if moved > tols.tol * qscale {
            return Err(Error::NotInvariant { generator: format!("component {r} on the Gaussian form"), violation: moved });
        }
    }
    for (r, g) in holonomy.infinitesimal().iter().enumerate() {
        let moved = (0..m)
            .flat_map(|i| (0..m).map(move |j| (i, j)))
            .map(|(i, j)| (g.x[(i, j)] * (q[j] - q[i])).abs())
            .fold(0.0, f64::max);
        if moved > tols.tol * qscale {
            return Err(Error::NotInvariant {
                generator: format!("infinitesimal {r} on the Gaussian form"),
                violation: moved,
            });
        }
    }

    let mut dims = [0usize; 2];
    for (slot, sign) in [(0usize, 1i8), (1, -1)] {
        let cols: Vec<Vec<C64>> =
            kernel.iter().filter(|&&k| tuples[k].grade == sign).map(|&k| vectors.column(k)).collect();
        if cols.is_empty() {
            continue;
        }
        let basis = ComplexMatrix::from_columns(n, &cols);
        let id = ComplexMatrix::identity(n);
        let proj_out = &id - &basis.matmul(&basis.adjoint());
        let mut blocks = Vec::new();
        let actions = holonomy
            .components()
            .iter()
            .enumerate()
            .map(|(r, g)| (format!("component {r}"), g.action.clone(), true))
            .chain(holonomy.infinitesimal().iter().enumerate().map(|(r, g)| (format!("infinitesimal {r}"), g.action.clone(), false)));
        for (label, action, group_element) in actions {
            let image = action.matmul(&basis);
            let leak = proj_out.matmul(&image).frobenius_norm();
            if leak > tols.tol * action.frobenius_norm().max(1.0) {
                return Err(Error::NotInvariant { generator: label, violation: leak });
            }
            let restricted = basis.adjoint().matmul(&image);
            blocks.push(if group_element {
                &restricted - &ComplexMatrix::identity(cols.len())
            } else {
                restricted
            });
        }
        dims[slot] = if blocks.is_empty() {
            cols.len()
        } else {
            nullspace(&ComplexMatrix::vstack(&blocks), tols.tol)?.dim()
        };
    }

    let (_, detail) = local_index(d, tols)?;
    let route = (detail.plus.invariant_dim, detail.minus.invariant_dim);
    if route != (dims[0], dims[1]) {
        return Err(Error::RouteMismatch(format!(
            "closure `{}`: kernel route gives ({}, {}), index route gives ({}, {})",
            d.name(),
            dims[0],
            dims[1],
            route.0,
            route.1
        )));
    }
    Ok((dims[0], dims[1]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheckRow {
    pub closure: String,
    pub local_index: i64,
    pub kernel_plus: usize,
    pub kernel_minus: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossCheckReport {
    pub rows: Vec<CrossCheckRow>,
    pub global_index: i64,
    pub kernel_index: i64,
}

/// `Σ (dim ker⁺ − dim ker⁻)` over the closures must equal the global index.
pub fn model_cross_check(s: &ScenarioModel, tols: Tolerances) -> Result<CrossCheckReport> {
    let (global, details) = global_index_detail(s, tols)?;
    let mut rows = Vec::with_capacity(details.len());
    for (c, detail) in s.closures.iter().zip(&details) {
        let (plus, minus) = invariant_kernel(c, tols).map_err(|e| e.in_closure(c.name()))?;
        rows.push(CrossCheckRow { closure: c.name().to_string(), local_index: detail.index(), kernel_plus: plus, kernel_minus: minus });
    }
    let kernel_index = rows.iter().map(|r| r.kernel_plus as i64 - r.kernel_minus as i64).sum();
    if kernel_index != global {
        return Err(Error::RouteMismatch(format!(
            "scenario `{}`: kernel total {kernel_index} differs from index total {global}",
            s.name
        )));
    }
    Ok(CrossCheckReport { rows, global_index: global, kernel_index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_index::presets::*;

    #[test]
    fn single_axis_ladder() {
        let t = Eigentuple { lambdas: vec![-1.0], grade: 1 };
        let u = Eigentuple { lambdas: vec![1.0], grade: -1 };
        let got: Vec<f64> = lowest_levels(&[t, u], 5).into_iter().map(|(v, _)| v).collect();
        assert_eq!(got, vec![0.0, 2.0, 2.0, 4.0, 4.0]);
    }

    #[test]
    fn two_axis_multiplicities() {
        let t = Eigentuple { lambdas: vec![1.0, 1.0], grade: 1 };
        // 2+2, then (n1,n2) = (1,0),(0,1), then three at level 8
        assert_eq!(t.levels(6), vec![4.0, 6.0, 6.0, 8.0, 8.0, 8.0]);
    }

    #[test]
    fn positive_definite_minimum() {
        let d = sphere_pole(true).unwrap();
        let spec = analytic_spectrum(&d, 4, Tolerances::default()).unwrap();
        assert_eq!(spec.eigenvalues[0], 0.0);
        assert!(spec.eigenvalues.iter().all(|&v| v >= 0.0));
        assert_eq!((spec.kernel_dim_plus, spec.kernel_dim_minus), (1, 0));
    }

    #[test]
    fn oracle_matches_levels() {
        for &l in &[-1.0, 1.0, -std::f64::consts::TAU] {
            let got = oscillator_1d_oracle(l, 3, 2000, decay_radius(l)).unwrap();
            for (n, g) in got.iter().enumerate() {
                let want = oscillator_level(l, n as u32);
                assert!((g - want).abs() < 1e-6, "λ = {l}, n = {n}: {g} vs {want}");
            }
        }
        assert!(oscillator_1d_oracle(0.0, 3, 2000, 5.0).is_err());
        assert!(oscillator_1d_oracle(1.0, 3, 100, 8.0).is_err());
    }

    #[test]
    fn kernel_routes_agree_on_presets() {
        let t = Tolerances::default();
        assert_eq!(invariant_kernel(&sphere_pole(true).unwrap(), t).unwrap(), (1, 0));
        assert_eq!(invariant_kernel(&carriere_closure(true).unwrap(), t).unwrap(), (1, 1));
        assert_eq!(invariant_kernel(&cp2_fixed_point(0, [0.0, 1.0, 3.0]).unwrap(), t).unwrap(), (1, 0));
        let r = model_cross_check(&sphere_suspension().unwrap(), t).unwrap();
        assert_eq!((r.global_index, r.kernel_index), (2, 2));
        let empty = ScenarioModel::new("empty", 1, vec![]).unwrap();
        assert_eq!(model_cross_check(&empty, t).unwrap().kernel_index, 0);
    }
}
