//! Harmonic-oscillator model operators at the critical closures: analytic
//! levels against a finite-difference solve, and the invariant kernel against
//! the local index.

use basicindex::local_index::presets;
use basicindex::model::{analytic_spectrum, model_cross_check, tuple_oracle_levels};
use basicindex::Tolerances;

fn main() -> basicindex::Result<()> {
    let tols = Tolerances::default();
    let scenario = presets::sphere_suspension()?;
    let north = &scenario.closures[0];
    let spec = analytic_spectrum(north, 6, tols)?;
    println!("north pole levels {:?}", spec.eigenvalues);
    println!("invariant kernel: plus {}, minus {}", spec.kernel_dim_plus, spec.kernel_dim_minus);

    let tuple = &spec.tuples[0];
    let analytic = tuple.levels(5);
    let oracle = tuple_oracle_levels(&tuple.lambdas, 5, 2000)?;
    for (a, o) in analytic.iter().zip(&oracle) {
        println!("  analytic {a:>6.3}  finite differences {o:.10}  deviation {:.1e}", (a - o).abs());
    }

    for scenario in [presets::carriere(presets_lambda())?, presets::cp2_signature([0.0, 1.0, 3.0])?] {
        let report = model_cross_check(&scenario, tols)?;
        println!("{}: index {}, kernel index {}", scenario.name, report.global_index, report.kernel_index);
    }
    Ok(())
}

fn presets_lambda() -> f64 {
    basicindex::lab::CircleModel::default_carriere_lambda()
}
