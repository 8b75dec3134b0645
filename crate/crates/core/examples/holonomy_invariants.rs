//! Holonomy-invariant vectors of exterior modules under torus and circle
//! actions, and a finite cyclic group.

use basicindex::holonomy::{invariant_subspace, HolonomyGroup};
use basicindex::linalg::RealMatrix;

fn report(name: &str, group: &HolonomyGroup) -> basicindex::Result<()> {
    let inv = invariant_subspace(group, group.module_dim(), 1e-9)?;
    println!("{name:<28} invariant dimension {}", inv.dim());
    Ok(())
}

fn main() -> basicindex::Result<()> {
    let r01 = RealMatrix::plane_generator(4, 0, 1);
    let r23 = RealMatrix::plane_generator(4, 2, 3);

    // SO(2) on Λ*(ℝ²): constants and the area form
    report("SO(2) on Λ*(ℝ²)", &HolonomyGroup::from_exterior(2, vec![RealMatrix::plane_generator(2, 0, 1)], vec![])?)?;
    // both planes rotate independently: 1, dx1∧dx2, dx3∧dx4, volume
    report("T² on Λ*(ℝ⁴)", &HolonomyGroup::from_exterior(4, vec![r01.clone(), r23.clone()], vec![])?)?;
    // the diagonal circle also fixes the mixed 2-forms of Kähler type
    let diagonal = &r01 + &r23;
    report("diagonal circle on Λ*(ℝ⁴)", &HolonomyGroup::from_exterior(4, vec![diagonal], vec![])?)?;

    // rotation by a quarter turn generates Z/4; its invariants match SO(2)'s
    let quarter = RealMatrix::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]])?;
    report("Z/4 on Λ*(ℝ²)", &HolonomyGroup::from_exterior(2, vec![], vec![quarter])?)?;
    Ok(())
}
