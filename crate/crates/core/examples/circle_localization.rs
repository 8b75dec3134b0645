//! Eigenvalues of `(D + sZ)²/s` on the circle converge to the model spectrum
//! at the zeros of `Z`; for invertible `Z` they grow linearly in `s`.
//!
//! Run with `--release`; a full sweep takes a few seconds.

use basicindex::lab::{convergence_report, CircleModel, Outcome};

fn main() -> basicindex::Result<()> {
    let s_list = [10.0, 100.0, 1000.0, 10000.0];
    let report = convergence_report(&CircleModel::cos_hat(), &s_list, 4, 512)?;
    for row in &report.rows {
        println!("s = {:>7}: max gap {:.3e}, eigenvalues {:?}", row.s, row.max_gap(), row.eigenvalues);
    }
    if let Outcome::Localizing(l) = &report.outcome {
        println!("zeros {:?}, model levels {:?}", l.zeros, l.model);
        println!("fitted C {:.4e}, bound holds {}, tail decreasing {}", l.fitted_c, l.bound_holds, l.monotone_tail);
        println!("spectral index {}", l.spectral_index());
    }

    let invertible = convergence_report(&CircleModel::constant_hat(), &s_list, 2, 64)?;
    if let Outcome::Invertible(g) = &invertible.outcome {
        println!("constant Z: min λ₁(s)/s = {:.6}", g.fitted_c);
    }

    // at 256 modes the s = 10⁴ eigenfunctions are too narrow to resolve
    match convergence_report(&CircleModel::cos_hat(), &s_list, 4, 256) {
        Ok(_) => println!("256 modes: converged"),
        Err(e) => println!("256 modes: {e}"),
    }
    Ok(())
}
