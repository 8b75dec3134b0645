//! Closure data and scenarios for the bundled worked examples.

use super::{ClosureDatum, GlobalPerturbation, ScenarioModel};
use crate::clifford::{clifford_generator, clifford_hat_generator, parity, CliffordModule, GradingKind};
use crate::error::{Error, Result};
use crate::holonomy::HolonomyGroup;
use crate::lab::CircleModel;
use crate::linalg::{RealMatrix, C64};

/// Rotation-invariant suspension of the 2-sphere: at each pole `Z_j = ∓ĉ(e_j)`
/// on `Λ*(ℝ²)` with parity grading and `SO(2)` holonomy. `north = true` gives
/// the minus sign.
pub fn sphere_pole(north: bool) -> Result<ClosureDatum> {
    let sign = if north { -1.0 } else { 1.0 };
    let module = CliffordModule::exterior(2, GradingKind::Parity)?;
    let z = (1..=2).map(|j| Ok(clifford_hat_generator(j, 2)?.scale_real(sign))).collect::<Result<Vec<_>>>()?;
    let holonomy = HolonomyGroup::from_exterior(2, vec![RealMatrix::plane_generator(2, 0, 1)], vec![])?;
    ClosureDatum::new(if north { "north_pole" } else { "south_pole" }, module, z, holonomy)
}

pub fn sphere_suspension() -> Result<ScenarioModel> {
    Ok(ScenarioModel::new("sphere_suspension", 2, vec![sphere_pole(true)?, sphere_pole(false)?])?.with_expected_index(2))
}

/// Closure of the Carrière flow at `τ = π/2` (`north = true`) or `3π/2`: one
/// normal direction `t`, module `Λ*(ℝ²)` on `(y, t)` with parity grading,
/// `Z_1 = ∓2π ĉ(dt)` so that `L_1 = ∓2π(dt∧dt⌟ − dt⌟dt∧)`.
pub fn carriere_closure(first: bool) -> Result<ClosureDatum> {
    let sign = if first { -1.0 } else { 1.0 };
    let c_t = clifford_generator(2, 2)?;
    let module = CliffordModule::explicit(vec![c_t], GradingKind::Explicit(parity(2)))?;
    let z = clifford_hat_generator(2, 2)?.scale_real(sign * std::f64::consts::TAU);
    let name = if first { "t_quarter" } else { "t_three_quarters" };
    ClosureDatum::new(name, module, vec![z], HolonomyGroup::trivial(1, 4))
}

pub fn carriere(lambda: f64) -> Result<ScenarioModel> {
    Ok(ScenarioModel::new("carriere", 2, vec![carriere_closure(true)?, carriere_closure(false)?])?
        .with_expected_index(0)
        .with_circle_model(CircleModel::carriere(lambda)?))
}

/// Fixed point `p` of the torus action on `CP²` in the suspension with
/// Morse-type weights `alpha`. Coordinates `(x1, y1, x2, y2)` on the normal
/// slice; with `a = α_i − α_p`, `b = α_j − α_p` for the other two indices,
/// `Z = (i a c_2, −i a c_1, i b c_4, −i b c_3)` on the chirality-graded
/// `Λ*(ℝ⁴)` with holonomy the two plane rotations.
pub fn cp2_fixed_point(p: usize, alpha: [f64; 3]) -> Result<ClosureDatum> {
    if p > 2 {
        return Err(Error::InvalidArgument(format!("fixed point index {p} is not in 0..3")));
    }
    let others: Vec<usize> = (0..3).filter(|&k| k != p).collect();
    let a = alpha[others[0]] - alpha[p];
    let b = alpha[others[1]] - alpha[p];
    if a == 0.0 || b == 0.0 {
        return Err(Error::InvalidArgument("weights must be pairwise distinct".into()));
    }
    let module = CliffordModule::exterior(4, GradingKind::Chirality)?;
    let i = C64::new(0.0, 1.0);
    let c = module.generators();
    let z = vec![
        c[1].scale(i * a),
        c[0].scale(-i * a),
        c[3].scale(i * b),
        c[2].scale(-i * b),
    ];
    let holonomy = HolonomyGroup::from_exterior(
        4,
        vec![RealMatrix::plane_generator(4, 0, 1), RealMatrix::plane_generator(4, 2, 3)],
        vec![],
    )?;
    let mut label = ['0'; 3];
    label[p] = '1';
    let name = format!("fixed_point_{}", label.iter().collect::<String>());
    ClosureDatum::new(name, module.clone(), z, holonomy)
}

pub fn cp2_signature(alpha: [f64; 3]) -> Result<ScenarioModel> {
    let closures = (0..3).map(|p| cp2_fixed_point(p, alpha)).collect::<Result<Vec<_>>>()?;
    Ok(ScenarioModel::new("cp2_signature", 4, closures)?.with_expected_index(1))
}

/// Codimension-3 Riemannian flow with the everywhere-invertible chirality
/// product as perturbation; no critical closures.
pub fn odd_codim_q3() -> Result<ScenarioModel> {
    ScenarioModel::new("odd_codim_q3", 3, vec![])?
        .with_expected_index(0)
        .with_global_perturbation(GlobalPerturbation::OddChiralityProduct)
}
