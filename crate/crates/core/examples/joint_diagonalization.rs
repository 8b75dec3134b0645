//! Joint eigenbasis of the commuting operators `L_j = c(∂_j) Z_j` at a CP²
//! fixed point, and the negative eigenspaces that carry the local index.

use basicindex::linalg::{joint_eig, negative_eigenspace};
use basicindex::local_index::{build_l, presets};

fn main() -> basicindex::Result<()> {
    let closure = presets::cp2_fixed_point(1, [0.0, 1.0, 3.0])?;
    let ls = build_l(&closure, 1e-9)?;
    let joint = joint_eig(&ls, 1e-9)?;
    println!("{} operators on dimension {}", joint.operator_count(), joint.dim());
    println!("reconstruction residual {:.2e}", joint.residual(&ls));

    let rounded: Vec<Vec<i64>> = joint.tuples.iter().map(|t| t.iter().map(|l| l.round() as i64).collect()).collect();
    let mut distinct = rounded.clone();
    distinct.sort();
    distinct.dedup();
    for t in &distinct {
        let mult = rounded.iter().filter(|u| *u == t).count();
        println!("  tuple {t:?} with multiplicity {mult}");
    }
    for j in 0..ls.len() {
        println!("negative eigenspace of L_{}: dimension {}", j + 1, negative_eigenspace(&joint, j, 1e-8)?.dim());
    }
    Ok(())
}
