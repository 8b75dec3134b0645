//! Signature of CP² from a torus-invariant perturbation: three fixed points
//! with contributions ±1, for several orderings of the weights.

use basicindex::local_index::{global_index_detail, presets};
use basicindex::Tolerances;

fn main() -> basicindex::Result<()> {
    for alpha in [[0.0, 1.0, 3.0], [1.0, 0.0, 3.0], [0.0, 3.0, 1.0], [2.0, -1.0, 0.5]] {
        let scenario = presets::cp2_signature(alpha)?;
        let (total, details) = global_index_detail(&scenario, Tolerances::default())?;
        let parts: Vec<String> = details.iter().map(|d| format!("{} {:+}", d.closure, d.index())).collect();
        println!("weights {alpha:?}: {} => {total}", parts.join(", "));
    }
    Ok(())
}
