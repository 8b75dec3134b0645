use super::presets::*;
use super::*;
use crate::clifford::{clifford_generator, wedge_op, GradingKind, MultiVectorBasis};
use crate::linalg::{inner, vec_norm};
use crate::tolerance::Tolerances;

fn tols() -> Tolerances {
    Tolerances::default()
}

#[test]
fn sphere_north_pole_validates_and_has_index_one() {
    let d = sphere_pole(true).unwrap();
    let report = validate_closure(&d, 1e-9);
    assert!(report.passed(), "{:?}", report.errors().collect::<Vec<_>>());
    assert_eq!(report.warnings().count(), 0);
    let (ind, detail) = local_index(&d, tols()).unwrap();
    assert_eq!(ind, 1);
    assert_eq!(detail.plus.intersection_dim(), 1);
    assert_eq!(detail.minus.intersection_dim(), 0);
    let top = MultiVectorBasis::new(2).unit(&[1, 2]).unwrap();
    let v = detail.plus.intersection.basis().column(0);
    assert!((inner(&top, &v).norm() - 1.0).abs() < 1e-12);
    assert!((vec_norm(&v) - 1.0).abs() < 1e-12);
}

#[test]
fn sphere_south_pole_index_from_constants() {
    let (ind, detail) = local_index(&sphere_pole(false).unwrap(), tols()).unwrap();
    assert_eq!(ind, 1);
    let one = MultiVectorBasis::new(2).unit(&[]).unwrap();
    assert!(detail.plus.intersection.contains(&one, 1e-12));
}

#[test]
fn north_pole_l_operator() {
    let d = sphere_pole(true).unwrap();
    let l = build_l(&d, 1e-9).unwrap();
    let w = wedge_op(1, 2).unwrap();
    let i = w.adjoint();
    let expected = -&(&w.matmul(&i) - &i.matmul(&w));
    assert!((&l[0] - &expected).frobenius_norm() < 1e-14);
    assert!(l[0].commutator(&l[1]).frobenius_norm() < 1e-14);
}

#[test]
fn carriere_closures_cancel() {
    for first in [true, false] {
        let d = carriere_closure(first).unwrap();
        let (ind, detail) = local_index(&d, tols()).unwrap();
        assert_eq!(ind, 0);
        assert_eq!((detail.plus.invariant_dim, detail.minus.invariant_dim), (1, 1));
        let l = &build_l(&d, 1e-9).unwrap()[0];
        let mut values: Vec<f64> = detail.plus.tuples.iter().chain(&detail.minus.tuples).map(|t| t[0]).collect();
        values.sort_by(f64::total_cmp);
        assert!((values[0] + std::f64::consts::TAU).abs() < 1e-12);
        assert!((values[3] - std::f64::consts::TAU).abs() < 1e-12);
        assert!(l.hermitian_defect() < 1e-14);
    }
    let w = wedge_op(2, 2).unwrap();
    let i = w.adjoint();
    let l = &build_l(&carriere_closure(true).unwrap(), 1e-9).unwrap()[0];
    let expected = (&w.matmul(&i) - &i.matmul(&w)).scale_real(-std::f64::consts::TAU);
    assert!((l - &expected).frobenius_norm() < 1e-12);
}

#[test]
fn cp2_case_table() {
    let alpha = [0.0, 1.0, 3.0];
    let expected = [1, -1, 1];
    for p in 0..3 {
        let d = cp2_fixed_point(p, alpha).unwrap();
        let report = validate_closure(&d, 1e-9);
        assert!(report.passed(), "{:?}", report.errors().collect::<Vec<_>>());
        assert_eq!(local_index(&d, tols()).unwrap().0, expected[p], "fixed point {p}");
    }
    assert_eq!(global_index(&cp2_signature(alpha).unwrap(), tols()).unwrap(), 1);
    assert_eq!(global_index(&cp2_signature([2.0, -1.0, 0.5]).unwrap(), tols()).unwrap(), 1);
}

#[test]
fn golden_globals() {
    assert_eq!(global_index(&sphere_suspension().unwrap(), tols()).unwrap(), 2);
    assert_eq!(global_index(&carriere(CircleModel::default_carriere_lambda()).unwrap(), tols()).unwrap(), 0);
    assert_eq!(global_index(&odd_codim_q3().unwrap(), tols()).unwrap(), 0);
    let empty = ScenarioModel::new("empty", 2, vec![]).unwrap();
    assert_eq!(global_index(&empty, tols()).unwrap(), 0);
}

#[test]
fn repeated_perturbation_fails_positivity() {
    let d = sphere_pole(true).unwrap();
    let z = vec![d.z()[0].clone(), d.z()[0].clone()];
    let bad = ClosureDatum::new("bad", d.module().clone(), z, d.holonomy().clone()).unwrap();
    let report = validate_closure(&bad, 1e-9);
    assert!(!report.get("g_positive_definite").unwrap().passed);
    assert!(local_index(&bad, tols()).is_err());
}

#[test]
fn commuting_perturbation_fails_anticommutation() {
    let d = sphere_pole(true).unwrap();
    // i·c_1 is Hermitian and odd but commutes with c_1.
    let z1 = d.module().c(1).scale(crate::linalg::C64::new(0.0, 1.0));
    let bad = ClosureDatum::new("bad", d.module().clone(), vec![z1, d.z()[1].clone()], d.holonomy().clone()).unwrap();
    assert!(!validate_closure(&bad, 1e-9).get("anticommutation").unwrap().passed);
}

#[test]
fn global_errors_carry_closure_name() {
    let d = sphere_pole(true).unwrap();
    let z = vec![d.z()[0].clone(), d.z()[0].clone()];
    let bad = ClosureDatum::new("broken", d.module().clone(), z, d.holonomy().clone()).unwrap();
    let s = ScenarioModel::new("s", 2, vec![bad]).unwrap();
    match global_index(&s, tols()) {
        Err(Error::InClosure { closure, .. }) => assert_eq!(closure, "broken"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn odd_product_perturbations() {
    for q in [1usize, 3, 5] {
        let module = CliffordModule::exterior(q, GradingKind::Parity).unwrap();
        let z = odd_invertible_perturbation(&module, 1e-9).unwrap();
        let n = 1 << q;
        assert!(z.hermitian_defect() < 1e-12);
        let sq = &z.matmul(&z) - &ComplexMatrix::identity(n);
        assert!(sq.frobenius_norm() < 1e-12, "q = {q}");
    }
    let q1 = CliffordModule::exterior(1, GradingKind::Parity).unwrap();
    let z = odd_invertible_perturbation(&q1, 1e-9).unwrap();
    let expected = clifford_generator(1, 1).unwrap().scale(crate::linalg::C64::new(0.0, 1.0));
    assert!((&z - &expected).frobenius_norm() < 1e-15);
    let even = CliffordModule::exterior(2, GradingKind::Parity).unwrap();
    assert!(matches!(odd_invertible_perturbation(&even, 1e-9), Err(Error::EvenCodimension(2))));
}

#[test]
fn rank_admissibility() {
    assert!(admissible_rank(1, 1));
    assert!(admissible_rank(3, 2));
    assert!(!admissible_rank(3, 3));
    assert!(admissible_rank(4, 4));
    assert!(!admissible_rank(5, 2));
}

#[test]
fn scenario_rejects_excess_directions() {
    let d = sphere_pole(true).unwrap();
    assert!(ScenarioModel::new("s", 1, vec![d]).is_err());
}
