//! In odd codimension the chirality product is an everywhere-invertible odd
//! perturbation, so there are no critical closures and the index vanishes.

use basicindex::clifford::{CliffordModule, GradingKind};
use basicindex::linalg::smallest_singular_value;
use basicindex::local_index::{global_index, odd_invertible_perturbation, presets};
use basicindex::Tolerances;

fn main() -> basicindex::Result<()> {
    for q in [1, 3, 5] {
        let module = CliffordModule::exterior(q, GradingKind::Parity)?;
        let z = odd_invertible_perturbation(&module, 1e-9)?;
        println!(
            "q = {q}: dim {:>2}, Hermitian defect {:.1e}, smallest singular value {:.12}",
            module.dim(),
            z.hermitian_defect(),
            smallest_singular_value(&z)?
        );
    }
    let even = CliffordModule::exterior(2, GradingKind::Parity)?;
    println!("q = 2: {}", odd_invertible_perturbation(&even, 1e-9).unwrap_err());
    println!("odd_codim_q3 index {}", global_index(&presets::odd_codim_q3()?, Tolerances::default())?);
    Ok(())
}
