//! Local indices of the rotation-invariant perturbation on the suspended
//! 2-sphere. Each pole contributes through the area form `dx∧dy`.

use basicindex::clifford::MultiVectorBasis;
use basicindex::local_index::{global_index, local_index, presets};
use basicindex::Tolerances;

fn main() -> basicindex::Result<()> {
    let tols = Tolerances::default();
    let scenario = presets::sphere_suspension()?;
    let basis = MultiVectorBasis::new(2);
    for closure in &scenario.closures {
        let (index, detail) = local_index(closure, tols)?;
        let plus = &detail.plus.intersection;
        println!(
            "{}: index {index}, E⁺ intersection {}, E⁻ intersection {}",
            closure.name(),
            plus.dim(),
            detail.minus.intersection_dim()
        );
        if plus.dim() == 1 {
            let v = plus.basis().column(0);
            let (pos, weight) = v.iter().enumerate().map(|(k, z)| (k, z.norm())).fold((0, 0.0), |a, b| if b.1 > a.1 { b } else { a });
            println!("  kernel vector is {} up to phase (weight {weight:.12})", basis.label(pos));
        }
    }
    println!("total {}", global_index(&scenario, tols)?);
    Ok(())
}
