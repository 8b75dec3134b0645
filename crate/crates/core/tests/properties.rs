use basicindex::clifford::{clifford_c, clifford_hat, CliffordModule, GradingKind};
use basicindex::linalg::{hermitian_eig, joint_eig, rank, subspace_intersection, ComplexMatrix, Subspace, C64};
use basicindex::local_index::{build_l, global_index_detail, local_index, presets, ClosureDatum, ScenarioModel};
use basicindex::holonomy::HolonomyGroup;
use basicindex::scenario::{fmt_g, parse_scenario, serialize_scenario};
use basicindex::Tolerances;
use proptest::prelude::*;

fn unit_vec(m: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, m)
}

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| C64::new(a, b)), n)
}

fn hermitian(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    complex_vec(n * n).prop_map(move |d| {
        let a = ComplexMatrix::from_row_major(n, n, d).unwrap();
        (&a + &a.adjoint()).scale_real(0.5)
    })
}

fn dot(v: &[f64], w: &[f64]) -> f64 {
    v.iter().zip(w).map(|(a, b)| a * b).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn clifford_relations((m, v, w) in (1usize..=5).prop_flat_map(|m| (Just(m), unit_vec(m), unit_vec(m)))) {
        let id = ComplexMatrix::identity(1 << m);
        let (cv, cw) = (clifford_c(&v, m).unwrap(), clifford_c(&w, m).unwrap());
        let (hv, hw) = (clifford_hat(&v, m).unwrap(), clifford_hat(&w, m).unwrap());
        let ip = dot(&v, &w);
        prop_assert!((&cv.anticommutator(&cw) + &id.scale_real(2.0 * ip)).frobenius_norm() < 1e-12);
        prop_assert!((&hv.anticommutator(&hw) - &id.scale_real(2.0 * ip)).frobenius_norm() < 1e-12);
        prop_assert!(cv.anticommutator(&hw).frobenius_norm() < 1e-12);
        prop_assert!(cv.skew_hermitian_defect() < 1e-14 && hv.hermitian_defect() < 1e-14);
    }

    #[test]
    fn hermitian_eig_reconstructs(h in (1usize..=10).prop_flat_map(hermitian)) {
        let e = hermitian_eig(&h, 1e-12).unwrap();
        prop_assert!((&e.reconstruct() - &h).frobenius_norm() < 1e-9 * h.frobenius_norm().max(1.0));
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn joint_eig_reconstructs(
        (q, diags) in (2usize..=8).prop_flat_map(|n| (hermitian(n), prop::collection::vec(prop::collection::vec(-2i32..=2, n), 1..=3)))
    ) {
        let n = q.rows();
        let basis = hermitian_eig(&q, 1e-12).unwrap().vectors;
        let ls: Vec<ComplexMatrix> = diags
            .iter()
            .map(|d| {
                let d: Vec<f64> = d.iter().map(|&x| x as f64).collect();
                basis.matmul(&ComplexMatrix::diag_real(&d)).matmul(&basis.adjoint())
            })
            .collect();
        let joint = joint_eig(&ls, 1e-9).unwrap();
        prop_assert_eq!(joint.dim(), n);
        for (j, l) in ls.iter().enumerate() {
            let lam: Vec<f64> = joint.tuples.iter().map(|t| t[j]).collect();
            let back = joint.vectors.matmul(&ComplexMatrix::diag_real(&lam)).matmul(&joint.vectors.adjoint());
            prop_assert!((&back - l).frobenius_norm() < 1e-9);
        }
    }

    #[test]
    fn intersection_matches_rank_oracle(
        (n, shared, extra_u, extra_v, seed) in (3usize..=8, 0usize..=2, 0usize..=3, 0usize..=3, complex_vec(64))
    ) {
        let shared = shared.min(n / 2);
        let column = |k: usize| -> Vec<C64> { (0..n).map(|i| seed[(k * 7 + i * 3) % 64] + C64::new(0.01 * (k * n + i) as f64, 0.0)).collect() };
        let mut u: Vec<Vec<C64>> = (0..shared).map(column).collect();
        let mut v = u.clone();
        u.extend((0..extra_u.min(n - shared)).map(|k| column(10 + k)));
        v.extend((0..extra_v.min(n - shared)).map(|k| column(20 + k)));
        let su = Subspace::span(&ComplexMatrix::from_columns(n, &u), 1e-9).unwrap();
        let sv = Subspace::span(&ComplexMatrix::from_columns(n, &v), 1e-9).unwrap();
        let both: Vec<Vec<C64>> = u.iter().chain(&v).cloned().collect();
        let r = rank(&ComplexMatrix::from_columns(n, &both), 1e-9).unwrap();
        let want = su.dim() + sv.dim() - r;
        prop_assert_eq!(subspace_intersection(&[su.clone(), sv], 1e-6).unwrap().dim(), want);
        prop_assert_eq!(subspace_intersection(&[su.clone(), su.clone()], 1e-6).unwrap().dim(), su.dim());
    }

    #[test]
    fn local_index_scaling_and_relabeling(
        planes in prop::collection::vec(0.1f64..10.0, 2),
        swap_planes in any::<bool>(),
        which in 0usize..5,
    ) {
        let mut closures = presets::cp2_signature([0.0, 1.0, 3.0]).unwrap().closures;
        closures.extend(presets::sphere_suspension().unwrap().closures);
        let d = &closures[which];
        let (base, _) = local_index(d, Tolerances::default()).unwrap();
        let t: Vec<f64> = (0..d.m()).map(|j| planes[j / 2]).collect();
        let (scaled, _) = local_index(&d.scaled(&t).unwrap(), Tolerances::default()).unwrap();
        prop_assert_eq!(scaled, base);
        // exchanging the two rotation planes is an even permutation
        if d.m() == 4 && swap_planes {
            let (p, _) = local_index(&d.permuted(&[2, 3, 0, 1]).unwrap(), Tolerances::default()).unwrap();
            prop_assert_eq!(p, base);
        }
    }

    #[test]
    fn cp2_signature_for_any_distinct_weights(alpha in prop::array::uniform3(-5.0f64..5.0)) {
        prop_assume!((alpha[0] - alpha[1]).abs() > 1e-3 && (alpha[1] - alpha[2]).abs() > 1e-3 && (alpha[0] - alpha[2]).abs() > 1e-3);
        let s = presets::cp2_signature(alpha).unwrap();
        let (total, details) = global_index_detail(&s, Tolerances::default()).unwrap();
        prop_assert_eq!(total, 1);
        for (p, d) in details.iter().enumerate() {
            let others: Vec<usize> = (0..3).filter(|&k| k != p).collect();
            let a = alpha[others[0]] - alpha[p];
            let b = alpha[others[1]] - alpha[p];
            prop_assert_eq!(d.index(), if a * b > 0.0 { 1 } else { -1 });
        }
    }

    #[test]
    fn l_operators_preserve_grading(which in 0usize..5) {
        let mut closures = presets::cp2_signature([2.0, -1.0, 0.5]).unwrap().closures;
        closures.extend(presets::sphere_suspension().unwrap().closures);
        let d = &closures[which];
        for l in build_l(d, 1e-9).unwrap() {
            prop_assert!(l.commutator(d.module().grading()).frobenius_norm() < 1e-10);
        }
    }

    #[test]
    fn scaled_scenarios_round_trip(t in prop::collection::vec(0.1f64..10.0, 2)) {
        let base = presets::sphere_suspension().unwrap();
        let closures: Vec<ClosureDatum> = base.closures.iter().map(|d| d.scaled(&t).unwrap()).collect();
        let s = ScenarioModel::new("scaled", 2, closures).unwrap().with_expected_index(2);
        prop_assert_eq!(parse_scenario(&serialize_scenario(&s)).unwrap(), s);
    }

    #[test]
    fn twelve_digit_formatting(x in prop::num::f64::NORMAL) {
        let back: f64 = fmt_g(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-12 * x.abs());
    }
}

#[test]
fn chirality_squares_to_one() {
    for m in 1..=6 {
        let module = CliffordModule::exterior(m, GradingKind::Parity).unwrap();
        let g = module.chirality();
        assert!((&g.matmul(&g) - &ComplexMatrix::identity(1 << m)).frobenius_norm() < 1e-12);
        let anti = module.generators().iter().map(|c| c.anticommutator(&g).frobenius_norm()).fold(0.0, f64::max);
        if m % 2 == 0 {
            assert!(anti < 1e-12, "m = {m}");
        }
    }
}

/// Rank-two modules with one normal direction: `c = ±[[0,−1],[1,0]]`,
/// `Z = ±σ_x`, grading `±σ_z`. The local index is the grading sign of the
/// basis vector on which `L = cZ` is negative.
#[test]
fn single_direction_brute_force() {
    let i = |re: f64| C64::new(re, 0.0);
    let m = |a: [f64; 4]| ComplexMatrix::from_row_major(2, 2, a.iter().map(|&x| i(x)).collect()).unwrap();
    for sc in [1.0, -1.0] {
        for sz in [1.0, -1.0] {
            for se in [1.0, -1.0] {
                let c = m([0.0, -sc, sc, 0.0]);
                let z = m([0.0, sz, sz, 0.0]);
                let eps = m([se, 0.0, 0.0, -se]);
                let l = c.matmul(&z);
                let want: i64 = (0..2).filter(|&k| l[(k, k)].re < 0.0).map(|k| eps[(k, k)].re as i64).sum();
                let module = CliffordModule::explicit(vec![c], GradingKind::Explicit(eps)).unwrap();
                let d = ClosureDatum::new("b", module, vec![z], HolonomyGroup::trivial(1, 2)).unwrap();
                let (got, _) = local_index(&d, Tolerances::default()).unwrap();
                assert_eq!(got, want, "c {sc}, z {sz}, grading {se}");
            }
        }
    }
}
