use d42sym::hamiltonian::HamiltonianSystem;
use d42sym::weyl::{
    adjoint_series_check, generator, invariant_divisor_check, involution_points, translation,
    weyl_relation_order, RelationOrder,
};
use d42sym::{algebra::int, Var};

#[test]
fn generators_are_backlund_symmetries() {
    let sys = HamiltonianSystem::d42();
    for i in 0..4 {
        let report = d42sym::weyl::is_backlund_symmetry(&generator(i), &sys);
        assert!(report.holds(), "s{i}: {:?}", report.residuals);
    }
}

#[test]
fn divisors_are_invariant_on_their_loci() {
    let sys = HamiltonianSystem::d42();
    for i in 0..4 {
        let r = invariant_divisor_check(i, &sys);
        assert!(r.holds(), "f{i}: {}", r.residual);
    }
}

#[test]
fn coxeter_orders() {
    let expected = [
        ((0, 1), 4),
        ((0, 2), 2),
        ((0, 3), 2),
        ((1, 2), 3),
        ((1, 3), 2),
        ((2, 3), 4),
    ];
    for ((i, j), m) in expected {
        assert_eq!(
            weyl_relation_order(i, j, 3, 7, 12),
            RelationOrder::Order(m),
            "s{i} s{j}"
        );
    }
}

#[test]
fn generators_are_involutions() {
    for i in 0..4 {
        assert_eq!(involution_points(i, 5, 11 + i as u64), Ok(5));
    }
}

#[test]
fn translation_vectors() {
    assert_eq!(
        translation(1).vector,
        Some([int(-2), int(2), int(0), int(0)])
    );
    assert_eq!(
        translation(2).vector,
        Some([int(0), int(-2), int(2), int(0)])
    );
    assert_eq!(
        translation(3).vector,
        Some([int(0), int(0), int(-2), int(2)])
    );
}

#[test]
fn adjoint_series_terminate_for_every_generator() {
    for i in 0..4 {
        for var in Var::PHASE {
            let s = adjoint_series_check(i, var).unwrap();
            assert!(s.matches_generator, "s{i} on {var}");
        }
    }
}
