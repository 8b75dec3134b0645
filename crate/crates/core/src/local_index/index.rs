use super::{validate_closure, ClosureDatum, ScenarioModel};
use crate::clifford::{parity, CliffordModule};
use crate::error::{Error, Result};
use crate::holonomy::invariant_dim_in;
use crate::linalg::{
    hermitian_eig, joint_eig, negative_eigenspace, smallest_singular_value, subspace_intersection, ComplexMatrix,
    Subspace, C64,
};
use crate::tolerance::Tolerances;

/// `L_j = c_j Z_j`, checked to be Hermitian, even, pairwise commuting, with
/// `L_j² = G_jj·I`.
pub fn build_l(d: &ClosureDatum, tol: f64) -> Result<Vec<ComplexMatrix>> {
    let module = d.module();
    let n = d.dim();
    let root_n = (n as f64).sqrt();
    let ls: Vec<ComplexMatrix> = module.generators().iter().zip(d.z()).map(|(c, z)| c.matmul(z)).collect();
    let scale = ls.iter().map(|l| l.frobenius_norm() / root_n).fold(1.0, f64::max);
    let (g, _) = d.gram();
    let fail = |j: usize, k: usize, reason: String| Error::LProperty { j: j + 1, k: k + 1, reason };
    for (j, l) in ls.iter().enumerate() {
        let h = l.hermitian_defect() / root_n / scale;
        if h >= tol {
            return Err(fail(j, j, format!("L_{} is not Hermitian (defect {h:.3e})", j + 1)));
        }
        let e = l.commutator(module.grading()).frobenius_norm() / root_n / scale;
        if e >= tol {
            return Err(fail(j, j, format!("L_{} does not commute with the grading (defect {e:.3e})", j + 1)));
        }
        let sq = &l.matmul(l) - &ComplexMatrix::identity(n).scale(g[j][j]);
        let s = sq.frobenius_norm() / root_n / (scale * scale);
        if s >= tol {
            return Err(fail(j, j, format!("L_{0}² ≠ G_{0}{0}·I (defect {s:.3e})", j + 1)));
        }
        if g[j][j].re <= tol * scale * scale {
            return Err(fail(j, j, format!("L_{} is not invertible", j + 1)));
        }
    }
    for j in 0..ls.len() {
        for k in j + 1..ls.len() {
            let c = ls[j].commutator(&ls[k]).frobenius_norm() / root_n / (scale * scale);
            if c >= tol {
                return Err(fail(j, k, format!("[L_{}, L_{}] ≠ 0 (norm {c:.3e})", j + 1, k + 1)));
            }
        }
    }
    Ok(ls)
}

/// One graded half `E^±` of the local index computation.
#[derive(Debug, Clone)]
pub struct SectorDetail {
    /// `+1` or `-1`.
    pub sign: i8,
    pub sector_dim: usize,
    /// Joint eigenvalue tuples of the restricted `L_j`, one per basis vector.
    pub tuples: Vec<Vec<f64>>,
    /// `∩_j` of the negative eigenspaces, in full module coordinates.
    pub intersection: Subspace,
    /// Dimension of the holonomy-invariant part of `intersection`.
    pub invariant_dim: usize,
}

impl SectorDetail {
    pub fn intersection_dim(&self) -> usize {
        self.intersection.dim()
    }
}

#[derive(Debug, Clone)]
pub struct LocalIndexDetail {
    pub closure: String,
    pub plus: SectorDetail,
    pub minus: SectorDetail,
}

impl LocalIndexDetail {
    pub fn index(&self) -> i64 {
        self.plus.invariant_dim as i64 - self.minus.invariant_dim as i64
    }
}

/// Orthonormal bases of the `+1` and `-1` eigenspaces of the grading.
pub(crate) fn graded_bases_of(grading: &ComplexMatrix, tol: f64) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = grading.rows();
    let e = hermitian_eig(grading, tol)?;
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for (k, &v) in e.values.iter().enumerate() {
        if v > 0.0 {
            plus.push(e.vector(k));
        } else {
            minus.push(e.vector(k));
        }
    }
    Ok((ComplexMatrix::from_columns(n, &plus), ComplexMatrix::from_columns(n, &minus)))
}

fn sector(
    d: &ClosureDatum,
    ls: &[ComplexMatrix],
    basis: &ComplexMatrix,
    sign: i8,
    tols: Tolerances,
) -> Result<SectorDetail> {
    let n = d.dim();
    let k = basis.cols();
    if k == 0 {
        return Ok(SectorDetail {
            sign,
            sector_dim: 0,
            tuples: Vec::new(),
            intersection: Subspace::zero(n),
            invariant_dim: 0,
        });
    }
    let restricted: Vec<ComplexMatrix> = ls.iter().map(|l| l.compress(basis)).collect();
    let joint = joint_eig(&restricted, tols.tol)?;
    let negatives =
        (0..ls.len()).map(|j| negative_eigenspace(&joint, j, tols.sign_tol)).collect::<Result<Vec<_>>>()?;
    let local = subspace_intersection(&negatives, 1e-6)?;
    let intersection = local.embed(basis);
    let invariant_dim = invariant_dim_in(d.holonomy(), &intersection, tols.tol)?;
    Ok(SectorDetail { sign, sector_dim: k, tuples: joint.tuples, intersection, invariant_dim })
}

/// Local index at one closure: the holonomy-invariant dimension of
/// `∩_j E_{<0}(L_j)` on `E⁺` minus the same on `E⁻`.
pub fn local_index(d: &ClosureDatum, tols: Tolerances) -> Result<(i64, LocalIndexDetail)> {
    let report = validate_closure(d, tols.tol);
    if let Some(bad) = report.errors().next() {
        return Err(Error::InvalidClosure {
            closure: d.name().to_string(),
            reason: format!("{} failed (violation {:.3e}) {}", bad.name, bad.violation, bad.note)
                .trim_end()
                .to_string(),
        });
    }
    let ls = build_l(d, tols.tol)?;
    let (plus, minus) = graded_bases_of(d.module().grading(), tols.tol)?;
    let detail = LocalIndexDetail {
        closure: d.name().to_string(),
        plus: sector(d, &ls, &plus, 1, tols)?,
        minus: sector(d, &ls, &minus, -1, tols)?,
    };
    Ok((detail.index(), detail))
}

/// Per-closure details, with errors tagged by closure name.
pub fn global_index_detail(s: &ScenarioModel, tols: Tolerances) -> Result<(i64, Vec<LocalIndexDetail>)> {
    let mut total = 0;
    let mut details = Vec::with_capacity(s.closures.len());
    for c in &s.closures {
        let (ind, detail) = local_index(c, tols).map_err(|e| e.in_closure(c.name()))?;
        total += ind;
        details.push(detail);
    }
    Ok((total, details))
}

/// Sum of local indices; zero when there are no critical closures.
pub fn global_index(s: &ScenarioModel, tols: Tolerances) -> Result<i64> {
    global_index_detail(s, tols).map(|(i, _)| i)
}

/// `Z = i^{q(q+1)/2} c_1 ⋯ c_q` on a parity-graded module with odd `q`,
/// checked to be Hermitian, invertible and odd.
pub fn odd_invertible_perturbation(module: &CliffordModule, tol: f64) -> Result<ComplexMatrix> {
    let q = module.m();
    if q.is_multiple_of(2) {
        return Err(Error::EvenCodimension(q));
    }
    let n = module.dim();
    if n != 1 << q || (module.grading() - &parity(q)).frobenius_norm() > tol * (n as f64).sqrt() {
        return Err(Error::InvalidArgument("the chirality product needs the parity-graded exterior module".into()));
    }
    let phase = C64::new(0.0, 1.0).powu((q * (q + 1) / 2) as u32 % 4);
    let z = module.generators().iter().fold(ComplexMatrix::identity(n), |acc, c| acc.matmul(c)).scale(phase);
    let root_n = (n as f64).sqrt();
    let herm = z.hermitian_defect() / root_n;
    if herm >= tol {
        return Err(Error::NotHermitian { defect: herm });
    }
    let smin = smallest_singular_value(&z)?;
    if smin < 1.0 - tol {
        return Err(Error::InvalidArgument(format!("chirality product is singular (σ_min = {smin:.3e})")));
    }
    let odd = module.grading().anticommutator(&z).frobenius_norm() / root_n;
    if odd >= tol {
        return Err(Error::InvalidArgument(format!("chirality product is not odd (defect {odd:.3e})")));
    }
    Ok(z)
}

/// Whether a rank-`r` bundle can carry `k` anticommuting invertible symbols:
/// `r` must be a multiple of `2^⌊(k-1)/2⌋`.
pub fn admissible_rank(k: usize, r: usize) -> bool {
    if k == 0 || r == 0 {
        return false;
    }
    let unit = 1usize << ((k - 1) / 2);
    r.is_multiple_of(unit)
}
