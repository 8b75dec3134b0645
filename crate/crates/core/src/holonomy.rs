//! Holonomy groups at a critical leaf closure and their invariant subspaces.
//!
//! A group is presented by generators: infinitesimal generators `X` (skew
//! matrices on the normal slice) with their module action `dρ(X)`, and
//! component representatives `dg` (orthogonal) with `ρ(g)`. Invariant vectors
//! are the common kernel of `ρ(g) - I` and `dρ(X)` over the generators.

use crate::clifford::{derived_exterior_action, exterior_rep};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, ComplexMatrix, RealMatrix, Subspace, C64};
use crate::local_index::ClosureDatum;

#[derive(Debug, Clone, PartialEq)]
pub struct InfinitesimalGenerator {
    pub x: RealMatrix,
    pub action: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentGenerator {
    pub dg: RealMatrix,
    pub action: ComplexMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HolonomyGroup {
    m: usize,
    module_dim: usize,
    infinitesimal: Vec<InfinitesimalGenerator>,
    components: Vec<ComponentGenerator>,
}

impl HolonomyGroup {
    pub fn trivial(m: usize, module_dim: usize) -> Self {
        Self { m, module_dim, infinitesimal: Vec::new(), components: Vec::new() }
    }

    /// Group acting on `Λ*(ℝ^m)` through the exterior representation.
    pub fn from_exterior(m: usize, infinitesimal: Vec<RealMatrix>, components: Vec<RealMatrix>) -> Result<Self> {
        let inf = infinitesimal
            .into_iter()
            .map(|x| Ok(InfinitesimalGenerator { action: derived_exterior_action(&x)?, x }))
            .collect::<Result<Vec<_>>>()?;
        let comp = components
            .into_iter()
            .map(|dg| Ok(ComponentGenerator { action: exterior_rep(&dg)?, dg }))
            .collect::<Result<Vec<_>>>()?;
        Self::new(m, 1 << m, inf, comp)
    }

    pub fn new(
        m: usize,
        module_dim: usize,
        infinitesimal: Vec<InfinitesimalGenerator>,
        components: Vec<ComponentGenerator>,
    ) -> Result<Self> {
        for (k, g) in infinitesimal.iter().enumerate() {
            if g.x.rows() != m || g.x.cols() != m {
                return Err(Error::Shape(format!("infinitesimal generator {k} is not {m}x{m}")));
            }
            if g.action.rows() != module_dim || g.action.cols() != module_dim {
                return Err(Error::Shape(format!(
                    "module action of infinitesimal generator {k} is not {module_dim}x{module_dim}"
                )));
            }
        }
        for (k, g) in components.iter().enumerate() {
            if g.dg.rows() != m || g.dg.cols() != m {
                return Err(Error::Shape(format!("component generator {k} is not {m}x{m}")));
            }
            if g.action.rows() != module_dim || g.action.cols() != module_dim {
                return Err(Error::Shape(format!(
                    "module action of component generator {k} is not {module_dim}x{module_dim}"
                )));
            }
        }
        Ok(Self { m, module_dim, infinitesimal, components })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn module_dim(&self) -> usize {
        self.module_dim
    }

    pub fn is_trivial(&self) -> bool {
        self.infinitesimal.is_empty() && self.components.is_empty()
    }

    pub fn infinitesimal(&self) -> &[InfinitesimalGenerator] {
        &self.infinitesimal
    }

    pub fn components(&self) -> &[ComponentGenerator] {
        &self.components
    }

    /// Largest violation among: `X` skew, `dg` orthogonal, `ρ(g)` unitary,
    /// `dρ(X)` skew-Hermitian.
    pub fn structure_defect(&self) -> f64 {
        let inf = self
            .infinitesimal
            .iter()
            .map(|g| g.x.skew_defect().max(g.action.skew_hermitian_defect()));
        let comp = self
            .components
            .iter()
            .map(|g| g.dg.orthogonal_defect().max(g.action.unitary_defect()));
        inf.chain(comp).fold(0.0, f64::max)
    }

    /// Generator operators whose common kernel is the invariant subspace,
    /// labelled for error messages.
    fn kernel_operators(&self) -> Vec<(String, ComplexMatrix)> {
        let id = ComplexMatrix::identity(self.module_dim);
        let comps = self
            .components
            .iter()
            .enumerate()
            .map(|(k, g)| (format!("component {k}"), &g.action - &id));
        let infs = self
            .infinitesimal
            .iter()
            .enumerate()
            .map(|(k, g)| (format!("infinitesimal {k}"), g.action.clone()));
        comps.chain(infs).collect()
    }

    /// The same group with normal-slice indices relabelled: new axis `i` is old
    /// axis `perm[i]`. Module actions are unchanged.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            m: self.m,
            module_dim: self.module_dim,
            infinitesimal: self
                .infinitesimal
                .iter()
                .map(|g| InfinitesimalGenerator { x: g.x.permute(perm), action: g.action.clone() })
                .collect(),
            components: self
                .components
                .iter()
                .map(|g| ComponentGenerator { dg: g.dg.permute(perm), action: g.action.clone() })
                .collect(),
        }
    }
}

/// Vectors fixed by every component generator and annihilated by every
/// infinitesimal generator.
pub fn invariant_subspace(group: &HolonomyGroup, module_dim: usize, tol: f64) -> Result<Subspace> {
    if group.module_dim != module_dim {
        return Err(Error::Shape(format!(
            "group acts on dimension {}, expected {module_dim}",
            group.module_dim
        )));
    }
    let ops: Vec<ComplexMatrix> = group.kernel_operators().into_iter().map(|(_, m)| m).collect();
    if ops.is_empty() {
        return Ok(Subspace::full(module_dim));
    }
    nullspace(&ComplexMatrix::vstack(&ops), tol)
}

/// `dim(W ∩ invariants)`, computed as the common nullity of the generators
/// restricted to `W`. Fails if `W` is not preserved by some generator.
pub fn invariant_dim_in(group: &HolonomyGroup, w: &Subspace, tol: f64) -> Result<usize> {
    if group.module_dim != w.ambient_dim() {
        return Err(Error::Shape(format!(
            "group acts on dimension {}, subspace lives in {}",
            group.module_dim,
            w.ambient_dim()
        )));
    }
    if w.dim() == 0 {
        return Ok(0);
    }
    let b = w.basis();
    let p = w.projector();
    let mut restricted = Vec::new();
    for (label, a) in group.kernel_operators() {
        let ap = a.matmul(&p);
        let violation = (&ap - &p.matmul(&ap)).frobenius_norm();
        if violation >= tol * a.frobenius_norm().max(1.0) {
            return Err(Error::NotInvariant { generator: label, violation });
        }
        restricted.push(a.compress(b));
    }
    if restricted.is_empty() {
        return Ok(w.dim());
    }
    Ok(nullspace(&ComplexMatrix::vstack(&restricted), tol)?.dim())
}

/// Maximum violation of each equivariance rule over all generators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivarianceReport {
    /// `ρ(g) c_j ρ(g)⁻¹ = Σ_k (dg)_{kj} c_k` and `[dρ(X), c_j] = Σ_k X_{kj} c_k`.
    pub clifford: f64,
    /// Same rules for the perturbation coefficients `Z_j`.
    pub perturbation: f64,
    /// `[ρ(g), ε] = 0` and `[dρ(X), ε] = 0`.
    pub grading: f64,
}

impl EquivarianceReport {
    pub fn max(&self) -> f64 {
        self.clifford.max(self.perturbation).max(self.grading)
    }
}

fn combine(coeffs: impl Iterator<Item = f64>, mats: &[ComplexMatrix]) -> ComplexMatrix {
    let n = mats[0].rows();
    coeffs.zip(mats).fold(ComplexMatrix::zeros(n, n), |acc, (a, m)| {
        if a == 0.0 {
            acc
        } else {
            &acc + &m.scale_real(a)
        }
    })
}

fn family_violation(group: &HolonomyGroup, family: &[ComplexMatrix]) -> f64 {
    if family.is_empty() {
        return 0.0;
    }
    let m = family.len();
    let mut worst: f64 = 0.0;
    for g in &group.components {
        let inv = g.action.adjoint();
        for j in 0..m {
            let lhs = g.action.matmul(&family[j]).matmul(&inv);
            let rhs = combine((0..m).map(|k| g.dg[(k, j)]), family);
            worst = worst.max((&lhs - &rhs).frobenius_norm());
        }
    }
    for g in &group.infinitesimal {
        for j in 0..m {
            let lhs = g.action.commutator(&family[j]);
            let rhs = combine((0..m).map(|k| g.x[(k, j)]), family);
            worst = worst.max((&lhs - &rhs).frobenius_norm());
        }
    }
    worst
}

/// Equivariance diagnostics for a closure datum. Non-equivariant data is still
/// computable; callers decide how to treat the violations.
pub fn check_equivariance(group: &HolonomyGroup, closure: &ClosureDatum) -> EquivarianceReport {
    let module = closure.module();
    if group.m != module.m() || group.module_dim != module.dim() {
        return EquivarianceReport { clifford: f64::INFINITY, perturbation: f64::INFINITY, grading: f64::INFINITY };
    }
    let grading = group
        .components
        .iter()
        .map(|g| g.action.commutator(module.grading()).frobenius_norm())
        .chain(group.infinitesimal.iter().map(|g| g.action.commutator(module.grading()).frobenius_norm()))
        .fold(0.0, f64::max);
    EquivarianceReport {
        clifford: family_violation(group, module.generators()),
        perturbation: family_violation(group, closure.z()),
        grading,
    }
}

/// Coefficients `μ` minimizing `‖a - Σ_r μ_r X_r‖_F` over the infinitesimal
/// generators, with the residual norm.
pub(crate) fn fit_in_generator_span(group: &HolonomyGroup, a: &[Vec<C64>]) -> f64 {
    let m = a.len();
    let xs: Vec<&RealMatrix> = group.infinitesimal.iter().map(|g| &g.x).collect();
    let target_norm: f64 = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if xs.is_empty() {
        return target_norm;
    }
    let r = xs.len();
    // Gram matrix of the (real) generators and right-hand side ⟨X_r, a⟩.
    let gram = ComplexMatrix::from_fn(r, r, |p, q| {
        let s: f64 = xs[p].as_slice().iter().zip(xs[q].as_slice()).map(|(u, v)| u * v).sum();
        C64::new(s, 0.0)
    });
    let rhs: Vec<C64> = xs
        .iter()
        .map(|x| (0..m).flat_map(|i| (0..m).map(move |j| (i, j))).map(|(i, j)| a[i][j] * x[(i, j)]).sum())
        .collect();
    let Ok(e) = crate::linalg::hermitian_eig(&gram, 1e-9) else {
        return target_norm;
    };
    let top = e.values.last().copied().unwrap_or(0.0);
    // pseudo-inverse solve
    let mut mu = vec![C64::new(0.0, 0.0); r];
    for k in 0..r {
        if e.values[k] > 1e-12 * top {
            let v = e.vector(k);
            let proj: C64 = v.iter().zip(&rhs).map(|(vi, bi)| vi.conj() * bi).sum::<C64>() / e.values[k];
            for (mi, vi) in mu.iter_mut().zip(&v) {
                *mi += vi * proj;
            }
        }
    }
    let mut res = 0.0;
    for i in 0..m {
        for j in 0..m {
            let fit: C64 = mu.iter().zip(&xs).map(|(mu, x)| mu * x[(i, j)]).sum();
            res += (a[i][j] - fit).norm_sqr();
        }
    }
    res.sqrt()
}
