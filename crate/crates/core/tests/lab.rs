use basicindex::clifford::parity;
use basicindex::lab::{assemble_hs, graded_counts_below, lowest_eigenvalues, zero_models, zeros, CircleModel};
use basicindex::linalg::ComplexMatrix;

#[test]
fn carriere_hamiltonian_is_hermitian_and_nonnegative() {
    let model = CircleModel::carriere(CircleModel::default_carriere_lambda()).unwrap();
    let h = assemble_hs(&model, 1.0, 64).unwrap();
    let scale = h.frobenius_norm();
    assert!(h.hermitian_defect() <= 1e-10 * scale);
    let lowest = lowest_eigenvalues(&model, 1.0, 64, 1).unwrap()[0];
    assert!(lowest >= -1e-8 * scale, "{lowest}");
}

#[test]
fn hamiltonian_commutes_with_grading() {
    for model in [CircleModel::cos_hat(), CircleModel::carriere(2.0).unwrap()] {
        let n = model.fiber_dim();
        let modes = 32;
        let h = assemble_hs(&model, 10.0, modes).unwrap();
        let eps = ComplexMatrix::identity(2 * modes + 1).kron(model.grading());
        let defect = h.commutator(&eps).frobenius_norm();
        assert!(defect < 1e-10 * h.frobenius_norm().max(1.0), "fiber {n}: {defect:.3e}");
    }
}

#[test]
fn grid_doubling_at_moderate_coupling() {
    let model = CircleModel::cos_hat();
    let coarse = lowest_eigenvalues(&model, 100.0, 64, 10).unwrap();
    let fine = lowest_eigenvalues(&model, 100.0, 128, 10).unwrap();
    for (a, b) in coarse.iter().zip(&fine) {
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }
}

#[test]
fn carriere_zeros_are_quarter_turns() {
    let model = CircleModel::carriere(CircleModel::default_carriere_lambda()).unwrap();
    let z = zeros(&model).unwrap();
    let half_pi = std::f64::consts::FRAC_PI_2;
    assert_eq!(z.len(), 2);
    assert!((z[0] - half_pi).abs() < 1e-12 && (z[1] - 3.0 * half_pi).abs() < 1e-12, "{z:?}");
    assert_eq!(model.grading(), &parity(2));
}

#[test]
fn carriere_spectral_index_ignores_the_drift() {
    for lambda in [2.0, CircleModel::default_carriere_lambda(), 5.0] {
        let model = CircleModel::carriere(lambda).unwrap();
        let zms = zero_models(&model).unwrap();
        let smallest = zms.iter().flat_map(|z| z.l_eigen.iter().map(|l| 2.0 * l.0.abs())).fold(f64::INFINITY, f64::min);
        let (plus, minus) = graded_counts_below(&model, 400.0, 128, 0.5 * smallest).unwrap();
        assert_eq!(plus as i64 - minus as i64, 0, "λ = {lambda}");
        assert_eq!((plus, minus), (2, 2), "λ = {lambda}");
    }
}

#[test]
fn nonsimple_zero_rejected() {
    use basicindex::lab::{TrigMatrix, TrigTerm};
    use basicindex::clifford::{clifford_generator, clifford_hat_generator};
    // cos² t has double zeros
    let hat = clifford_hat_generator(1, 1).unwrap();
    let term = TrigTerm { matrix: hat, cos: vec![(0, 0.5), (2, 0.5)], sin: vec![] };
    let z = TrigMatrix::new(2, vec![term]).unwrap();
    let model = CircleModel::new(clifford_generator(1, 1).unwrap(), TrigMatrix::zero(2), z, parity(1)).unwrap();
    assert!(matches!(zeros(&model), Err(basicindex::Error::NonSimpleZero { .. })));
}
