//! Exterior-algebra Clifford modules: generator relations, the chirality
//! involution, and the mixed `c`/`ĉ` anticommutation.

use basicindex::clifford::{clifford_c, clifford_hat, CliffordModule, GradingKind, MultiVectorBasis};
use basicindex::linalg::ComplexMatrix;

fn main() -> basicindex::Result<()> {
    for m in 1..=4 {
        // chirality anticommutes with the generators only in even rank
        let grading = if m % 2 == 0 { GradingKind::Chirality } else { GradingKind::Parity };
        let module = CliffordModule::exterior(m, grading)?;
        let gamma = module.chirality();
        let gamma_sq = (&gamma.matmul(&gamma) - &ComplexMatrix::identity(module.dim())).frobenius_norm();
        println!(
            "m = {m}: dim {:>2}, clifford defect {:.1e}, γ² − I {:.1e}, odd defect {:.1e}",
            module.dim(),
            module.clifford_defect(),
            gamma_sq,
            module.odd_defect()
        );
    }

    let v = [0.3, -1.2, 0.5];
    let w = [2.0, 0.1, -0.7];
    let c = clifford_c(&v, 3)?;
    let hat = clifford_hat(&w, 3)?;
    println!("‖{{c(v), ĉ(w)}}‖ = {:.1e}", c.anticommutator(&hat).frobenius_norm());

    let basis = MultiVectorBasis::new(3);
    let labels: Vec<String> = (0..basis.dim()).map(|p| basis.label(p)).collect();
    println!("basis of Λ*(ℝ³): {}", labels.join(", "));
    Ok(())
}
