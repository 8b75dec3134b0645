//! Clifford modules on the exterior algebra `Λ*(ℝ^m)* ⊗ ℂ`.
//!
//! Basis element for a subset `S = {i1 < … < ik}` of `{1..m}` is
//! `dx_{i1} ∧ … ∧ dx_{ik}`, stored at position `Σ_{i∈S} 2^{i-1}`.
//! `wedge_op(j)` is left multiplication `dx_j ∧ ·`, `contract_op(j)` its
//! adjoint, `c(v) = Σ v_j (wedge_j - contract_j)` squares to `-|v|²` and
//! `ĉ(v) = Σ v_j (wedge_j + contract_j)` squares to `+|v|²`.

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, RealMatrix, C64, I, ONE, ZERO};

/// Index conventions for the `2^m` exterior basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiVectorBasis {
    m: usize,
}

impl MultiVectorBasis {
    pub fn new(m: usize) -> Self {
        Self { m }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        1 << self.m
    }

    /// Position of the basis element for the given 1-based generator indices.
    pub fn position(&self, indices: &[usize]) -> Result<usize> {
        let mut mask = 0usize;
        for &i in indices {
            if i == 0 || i > self.m {
                return Err(Error::IndexOutOfRange { index: i, dim: self.m });
            }
            mask |= 1 << (i - 1);
        }
        Ok(mask)
    }

    pub fn volume(&self) -> usize {
        self.dim() - 1
    }

    /// Form degree of the basis element at `pos`.
    pub fn degree(&self, pos: usize) -> u32 {
        pos.count_ones()
    }

    /// Basis vector for the 1-based indices (sorted or not, distinct).
    pub fn unit(&self, indices: &[usize]) -> Result<Vec<C64>> {
        let p = self.position(indices)?;
        let mut v = vec![ZERO; self.dim()];
        v[p] = ONE;
        Ok(v)
    }

    pub fn label(&self, pos: usize) -> String {
        if pos == 0 {
            return "1".into();
        }
        (0..self.m)
            .filter(|i| pos & (1 << i) != 0)
            .map(|i| format!("dx{}", i + 1))
            .collect::<Vec<_>>()
            .join("^")
    }
}

fn check_index(j: usize, m: usize) -> Result<()> {
    if j == 0 || j > m {
        Err(Error::IndexOutOfRange { index: j, dim: m })
    } else {
        Ok(())
    }
}

/// Left exterior multiplication `dx_j ∧ ·` on `Λ*(ℝ^m)`.
pub fn wedge_op(j: usize, m: usize) -> Result<ComplexMatrix> {
    check_index(j, m)?;
    let n = 1usize << m;
    let bit = 1usize << (j - 1);
    let mut w = ComplexMatrix::zeros(n, n);
    for s in 0..n {
        if s & bit != 0 {
            continue;
        }
        let below = (s & (bit - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
        w[(s | bit, s)] = C64::new(sign, 0.0);
    }
    Ok(w)
}

/// Interior product, the adjoint of [`wedge_op`].
pub fn contract_op(j: usize, m: usize) -> Result<ComplexMatrix> {
    Ok(wedge_op(j, m)?.adjoint())
}

fn check_len(v: &[f64], m: usize) -> Result<()> {
    if v.len() != m {
        return Err(Error::Shape(format!("vector of length {} for m = {m}", v.len())));
    }
    Ok(())
}

/// Clifford action `c(v) = Σ v_j (dx_j∧ - dx_j⌟)`.
pub fn clifford_c(v: &[f64], m: usize) -> Result<ComplexMatrix> {
    check_len(v, m)?;
    let mut out = ComplexMatrix::zeros(1 << m, 1 << m);
    for (j, &vj) in v.iter().enumerate() {
        if vj != 0.0 {
            let w = wedge_op(j + 1, m)?;
            out = &out + &(&w - &w.adjoint()).scale_real(vj);
        }
    }
    Ok(out)
}

/// Dual Clifford action `ĉ(v) = Σ v_j (dx_j∧ + dx_j⌟)`.
pub fn clifford_hat(v: &[f64], m: usize) -> Result<ComplexMatrix> {
    check_len(v, m)?;
    let mut out = ComplexMatrix::zeros(1 << m, 1 << m);
    for (j, &vj) in v.iter().enumerate() {
        if vj != 0.0 {
            let w = wedge_op(j + 1, m)?;
            out = &out + &(&w + &w.adjoint()).scale_real(vj);
        }
    }
    Ok(out)
}

fn unit_vector(j: usize, m: usize) -> Vec<f64> {
    (0..m).map(|i| if i + 1 == j { 1.0 } else { 0.0 }).collect()
}

/// `c(e_j)` for the standard basis vector `e_j` (1-based).
pub fn clifford_generator(j: usize, m: usize) -> Result<ComplexMatrix> {
    check_index(j, m)?;
    clifford_c(&unit_vector(j, m), m)
}

/// `ĉ(e_j)` (1-based).
pub fn clifford_hat_generator(j: usize, m: usize) -> Result<ComplexMatrix> {
    check_index(j, m)?;
    clifford_hat(&unit_vector(j, m), m)
}

/// Parity involution `(-1)^degree` on `Λ*(ℝ^m)`.
pub fn parity(m: usize) -> ComplexMatrix {
    let b = MultiVectorBasis::new(m);
    let d: Vec<f64> =
        (0..b.dim()).map(|p| if b.degree(p).is_multiple_of(2) { 1.0 } else { -1.0 }).collect();
    ComplexMatrix::diag_real(&d)
}

/// `i^k` with `k = q/2` for even `q` and `(q+1)/2` for odd `q`.
pub fn chirality_phase(q: usize) -> C64 {
    let k = if q.is_multiple_of(2) { q / 2 } else { q.div_ceil(2) };
    I.powu(k as u32)
}

/// Which involution grades a module.
#[derive(Debug, Clone, PartialEq)]
pub enum GradingKind {
    /// `(-1)^degree` (exterior modules only).
    Parity,
    /// `γ = i^k c_1 ⋯ c_q`.
    Chirality,
    Explicit(ComplexMatrix),
}

/// A finite-dimensional complex Clifford module with a grading involution.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordModule {
    c: Vec<ComplexMatrix>,
    grading: ComplexMatrix,
    exterior: bool,
}

impl CliffordModule {
    /// The exterior algebra `Λ*(ℝ^m)` with generators `c(e_1) … c(e_m)`.
    pub fn exterior(m: usize, grading: GradingKind) -> Result<Self> {
        let c = (1..=m).map(|j| clifford_generator(j, m)).collect::<Result<Vec<_>>>()?;
        let grading = match grading {
            GradingKind::Parity => parity(m),
            GradingKind::Chirality => chirality_of(&c),
            GradingKind::Explicit(g) => g,
        };
        let module = Self { c, grading, exterior: true };
        module.check_shapes()?;
        Ok(module)
    }

    /// A module given by explicit generator matrices. `Parity` is rejected since
    /// it needs the exterior structure.
    pub fn explicit(c: Vec<ComplexMatrix>, grading: GradingKind) -> Result<Self> {
        let grading = match grading {
            GradingKind::Parity => {
                return Err(Error::InvalidArgument(
                    "parity grading needs an exterior module; pass the matrix explicitly".into(),
                ))
            }
            GradingKind::Chirality => chirality_of(&c),
            GradingKind::Explicit(g) => g,
        };
        let module = Self { c, grading, exterior: false };
        module.check_shapes()?;
        Ok(module)
    }

    fn check_shapes(&self) -> Result<()> {
        let n = self.grading.rows();
        if !self.grading.is_square() {
            return Err(Error::Shape("grading must be square".into()));
        }
        for (j, c) in self.c.iter().enumerate() {
            if c.rows() != n || c.cols() != n {
                return Err(Error::Shape(format!(
                    "generator c_{} is {}x{}, module dimension is {n}",
                    j + 1,
                    c.rows(),
                    c.cols()
                )));
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.c.len()
    }

    pub fn dim(&self) -> usize {
        self.grading.rows()
    }

    pub fn generators(&self) -> &[ComplexMatrix] {
        &self.c
    }

    /// `c_j`, 1-based.
    pub fn c(&self, j: usize) -> &ComplexMatrix {
        &self.c[j - 1]
    }

    pub fn grading(&self) -> &ComplexMatrix {
        &self.grading
    }

    pub fn is_exterior(&self) -> bool {
        self.exterior
    }

    /// Chirality `γ = i^k c_1 ⋯ c_q` computed from this module's generators.
    pub fn chirality(&self) -> ComplexMatrix {
        chirality_of(&self.c)
    }

    /// Returns a copy with the grading replaced.
    pub fn with_grading(&self, grading: ComplexMatrix) -> Result<Self> {
        let module = Self { c: self.c.clone(), grading, exterior: self.exterior };
        module.check_shapes()?;
        Ok(module)
    }

    /// Largest violation of `c_j c_k + c_k c_j = -2δ_jk`.
    pub fn clifford_defect(&self) -> f64 {
        let n = self.dim();
        let id = ComplexMatrix::identity(n);
        let mut worst: f64 = 0.0;
        for j in 0..self.m() {
            for k in j..self.m() {
                let mut ac = self.c[j].anticommutator(&self.c[k]);
                if j == k {
                    ac = &ac + &id.scale_real(2.0);
                }
                worst = worst.max(ac.frobenius_norm());
            }
        }
        worst
    }

    /// Largest `‖c_j + c_jᴴ‖`.
    pub fn skew_defect(&self) -> f64 {
        self.c.iter().map(ComplexMatrix::skew_hermitian_defect).fold(0.0, f64::max)
    }

    /// Largest of `‖ε - εᴴ‖`, `‖ε² - I‖`.
    pub fn involution_defect(&self) -> f64 {
        let e = &self.grading;
        let sq = (&e.matmul(e) - &ComplexMatrix::identity(self.dim())).frobenius_norm();
        e.hermitian_defect().max(sq)
    }

    /// Largest `‖ε c_j + c_j ε‖`.
    pub fn odd_defect(&self) -> f64 {
        self.c.iter().map(|c| self.grading.anticommutator(c).frobenius_norm()).fold(0.0, f64::max)
    }
}

fn chirality_of(c: &[ComplexMatrix]) -> ComplexMatrix {
    let n = c.first().map_or(1, ComplexMatrix::rows);
    let mut g = ComplexMatrix::identity(n);
    for cj in c {
        g = g.matmul(cj);
    }
    g.scale(chirality_phase(c.len()))
}

/// Chirality operator `γ = i^k c(e_1) ⋯ c(e_q)` of a module with `q` generators.
pub fn chirality(q: usize, module: &CliffordModule) -> Result<ComplexMatrix> {
    if module.m() != q {
        return Err(Error::InvalidArgument(format!(
            "chirality for q = {q} needs a module with {q} generators, got {}",
            module.m()
        )));
    }
    Ok(module.chirality())
}

/// Functorial action of an orthogonal `g` on `Λ*(ℝ^m)* ⊗ ℂ`:
/// `dx_{i1}∧…∧dx_{ik} ↦ (g dx_{i1})∧…∧(g dx_{ik})` with `g dx_i = Σ_k g_{ki} dx_k`.
pub fn exterior_rep(g: &RealMatrix) -> Result<ComplexMatrix> {
    let m = g.rows();
    let defect = g.orthogonal_defect();
    if defect >= 1e-9 {
        return Err(Error::NotOrthogonal { defect });
    }
    let wedges = (1..=m).map(|k| wedge_op(k, m)).collect::<Result<Vec<_>>>()?;
    // image of dx_i as a left-multiplication operator
    let images: Vec<ComplexMatrix> = (0..m)
        .map(|i| {
            let mut acc = ComplexMatrix::zeros(1 << m, 1 << m);
            for (k, w) in wedges.iter().enumerate() {
                if g[(k, i)] != 0.0 {
                    acc = &acc + &w.scale_real(g[(k, i)]);
                }
            }
            acc
        })
        .collect();
    let n = 1usize << m;
    let mut out = ComplexMatrix::zeros(n, n);
    for s in 0..n {
        let mut v = vec![ZERO; n];
        v[0] = ONE;
        for i in (0..m).rev().filter(|i| s & (1 << i) != 0) {
            v = images[i].mul_vec(&v);
        }
        out.set_column(s, &v);
    }
    Ok(out)
}

/// Leibniz extension of a skew `X` to `Λ*`: `Σ_{j,k} X_{kj} dx_k∧ dx_j⌟`.
pub fn derived_exterior_action(x: &RealMatrix) -> Result<ComplexMatrix> {
    let m = x.rows();
    let defect = x.skew_defect();
    if defect >= 1e-9 {
        return Err(Error::NotSkew { defect });
    }
    let wedges = (1..=m).map(|k| wedge_op(k, m)).collect::<Result<Vec<_>>>()?;
    let mut out = ComplexMatrix::zeros(1 << m, 1 << m);
    for j in 0..m {
        let contract = wedges[j].adjoint();
        for k in 0..m {
            if x[(k, j)] != 0.0 {
                out = &out + &wedges[k].matmul(&contract).scale_real(x[(k, j)]);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eig;

    fn close(a: &ComplexMatrix, b: &ComplexMatrix, tol: f64) -> bool {
        (a - b).frobenius_norm() < tol
    }

    #[test]
    fn basis_positions() {
        let b = MultiVectorBasis::new(3);
        assert_eq!(b.dim(), 8);
        assert_eq!(b.position(&[]).unwrap(), 0);
        assert_eq!(b.position(&[1, 2, 3]).unwrap(), 7);
        assert_eq!(b.position(&[3, 1]).unwrap(), 5);
        assert!(b.position(&[4]).is_err());
        assert_eq!(b.label(5), "dx1^dx3");
    }

    #[test]
    fn wedge_m1() {
        let w = wedge_op(1, 1).unwrap();
        let expect = ComplexMatrix::from_row_major(2, 2, vec![ZERO, ZERO, ONE, ZERO]).unwrap();
        assert_eq!(w, expect);
    }

    #[test]
    fn wedge_signs_m2() {
        // dx2 ∧ dx1 = -dx1∧dx2
        let w2 = wedge_op(2, 2).unwrap();
        assert_eq!(w2[(3, 1)], C64::new(-1.0, 0.0));
        // dx1 ∧ dx2 = +dx1∧dx2
        let w1 = wedge_op(1, 2).unwrap();
        assert_eq!(w1[(3, 2)], ONE);
        assert!(wedge_op(3, 2).is_err());
        assert!(wedge_op(0, 2).is_err());
    }

    #[test]
    fn contraction_examples() {
        let k = contract_op(1, 1).unwrap();
        assert_eq!(k[(0, 1)], ONE);
        assert_eq!(k[(1, 0)], ZERO);
        let k1 = contract_op(1, 2).unwrap();
        // dx1⌟(dx1∧dx2) = dx2
        assert_eq!(k1[(2, 3)], ONE);
        for m in 1..=4 {
            for j in 1..=m {
                let k = contract_op(j, m).unwrap();
                assert!(k.matmul(&k).frobenius_norm() == 0.0);
            }
        }
    }

    #[test]
    fn clifford_m1_and_scaled() {
        let c = clifford_c(&[1.0], 1).unwrap();
        assert_eq!(c[(1, 0)], ONE);
        assert_eq!(c[(0, 1)], C64::new(-1.0, 0.0));
        assert!(close(&c.matmul(&c), &ComplexMatrix::identity(2).scale_real(-1.0), 1e-15));
        let v = clifford_c(&[3.0, 4.0], 2).unwrap();
        assert!(close(&v.matmul(&v), &ComplexMatrix::identity(4).scale_real(-25.0), 1e-12));
        let e1 = clifford_c(&[1.0, 0.0], 2).unwrap();
        let e2 = clifford_c(&[0.0, 1.0], 2).unwrap();
        assert!(e1.anticommutator(&e2).frobenius_norm() < 1e-15);
    }

    #[test]
    fn clifford_hat_examples() {
        let h = clifford_hat(&[1.0], 1).unwrap();
        assert_eq!(h[(1, 0)], ONE);
        assert_eq!(h[(0, 1)], ONE);
        let h11 = clifford_hat(&[1.0, 1.0], 2).unwrap();
        assert!(close(&h11.matmul(&h11), &ComplexMatrix::identity(4).scale_real(2.0), 1e-12));
        let c1 = clifford_generator(1, 2).unwrap();
        let h1 = clifford_hat_generator(1, 2).unwrap();
        assert!(h1.anticommutator(&c1).frobenius_norm() < 1e-15);
    }

    #[test]
    fn chirality_q1() {
        let module = CliffordModule::exterior(1, GradingKind::Parity).unwrap();
        let g = chirality(1, &module).unwrap();
        let expect = ComplexMatrix::from_row_major(2, 2, vec![ZERO, -I, I, ZERO]).unwrap();
        assert!(close(&g, &expect, 1e-15));
        let e = hermitian_eig(&g, 1e-9).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn chirality_involution_and_parity_of_q() {
        for q in 1..=5 {
            let module = CliffordModule::exterior(q, GradingKind::Parity).unwrap();
            let g = module.chirality();
            let id = ComplexMatrix::identity(1 << q);
            assert!(close(&g.matmul(&g), &id, 1e-12), "q = {q}");
            assert!(g.hermitian_defect() < 1e-12);
            for c in module.generators() {
                let rel = if q % 2 == 0 { g.anticommutator(c) } else { g.commutator(c) };
                assert!(rel.frobenius_norm() < 1e-12, "q = {q}");
            }
        }
    }

    #[test]
    fn chirality_q4_self_dual_two_forms() {
        let module = CliffordModule::exterior(4, GradingKind::Chirality).unwrap();
        let g = module.grading();
        let b = MultiVectorBasis::new(4);
        let a = b.unit(&[1, 2]).unwrap();
        let d = b.unit(&[3, 4]).unwrap();
        for sign in [1.0, -1.0] {
            let v: Vec<C64> = a.iter().zip(&d).map(|(x, y)| x + y * sign).collect();
            let gv = g.mul_vec(&v);
            for (x, y) in gv.iter().zip(&v) {
                assert!((x - y * sign).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn exterior_rep_examples() {
        assert_eq!(exterior_rep(&RealMatrix::identity(3)).unwrap(), ComplexMatrix::identity(8));
        let r = exterior_rep(&RealMatrix::plane_rotation(2, 0, 1, 0.83)).unwrap();
        assert!((r[(0, 0)] - ONE).norm() < 1e-15);
        assert!((r[(3, 3)] - ONE).norm() < 1e-14);
        let refl = exterior_rep(&RealMatrix::from_rows(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()).unwrap();
        assert_eq!(refl[(2, 2)], C64::new(-1.0, 0.0));
        assert_eq!(refl[(3, 3)], C64::new(-1.0, 0.0));
        assert_eq!(refl[(1, 1)], ONE);
        assert!(exterior_rep(&RealMatrix::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap()).is_err());
    }

    #[test]
    fn derived_action_examples() {
        assert_eq!(
            derived_exterior_action(&RealMatrix::zeros(2, 2)).unwrap(),
            ComplexMatrix::zeros(4, 4)
        );
        let x = RealMatrix::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        let d = derived_exterior_action(&x).unwrap();
        let null = crate::linalg::nullspace(&d, 1e-10).unwrap();
        assert_eq!(null.dim(), 2);
        let b = MultiVectorBasis::new(2);
        assert!(null.contains(&b.unit(&[]).unwrap(), 1e-12));
        assert!(null.contains(&b.unit(&[1, 2]).unwrap(), 1e-12));
        // Λ¹ block is [[0,-1],[1,0]] with eigenvalues ±i: (iD) is Hermitian with eigenvalues ∓1.
        let block = ComplexMatrix::from_fn(2, 2, |i, j| d[(i + 1, j + 1)] * I);
        let e = hermitian_eig(&block, 1e-9).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14 && (e.values[1] - 1.0).abs() < 1e-14);
        assert!(derived_exterior_action(&RealMatrix::identity(2)).is_err());
    }

    #[test]
    fn module_validation_helpers() {
        for m in 1..=4 {
            for kind in [GradingKind::Parity, GradingKind::Chirality] {
                let module = CliffordModule::exterior(m, kind.clone()).unwrap();
                assert!(module.clifford_defect() < 1e-12);
                assert!(module.skew_defect() < 1e-12);
                assert!(module.involution_defect() < 1e-12);
                if kind == GradingKind::Parity || m % 2 == 0 {
                    assert!(module.odd_defect() < 1e-12);
                }
            }
        }
        assert!(CliffordModule::explicit(vec![ComplexMatrix::identity(2)], GradingKind::Parity).is_err());
    }
}
