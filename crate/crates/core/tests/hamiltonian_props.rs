use d42sym::algebra::{ratio, v, Monomial, Polynomial, Var};
use d42sym::hamiltonian::{eliminate_alpha0_poly, hamiltonian_h, PoissonStructure};
use d42sym::principal::PrincipalPart;
use d42sym::sampling::ExactSampler;
use d42sym::HamiltonianSystem;
use proptest::prelude::*;

fn quadratic() -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((0..6usize, 0..6usize, 0..3u8, -4..5i64), 1..5).prop_map(|terms| {
        Polynomial::from_terms(terms.into_iter().map(|(i, j, deg, c)| {
            let m = match deg {
                0 => Monomial::one(),
                1 => Monomial::var(Var::PHASE[i]),
                _ => Monomial::var(Var::PHASE[i]).mul(&Monomial::var(Var::PHASE[j])),
            };
            (m, ratio(c, 1))
        }))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jacobi_identity(f in quadratic(), g in quadratic(), h in quadratic()) {
        let b = |a: &Polynomial, c: &Polynomial| PoissonStructure.bracket(a, c);
        let sum = b(&f, &b(&g, &h)) + b(&g, &b(&h, &f)) + b(&h, &b(&f, &g));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn bracket_is_antisymmetric_and_leibniz(f in quadratic(), g in quadratic(), h in quadratic()) {
        let b = |a: &Polynomial, c: &Polynomial| PoissonStructure.bracket(a, c);
        prop_assert_eq!(b(&f, &g), -b(&g, &f));
        prop_assert_eq!(b(&f, &(&g * &h)), b(&f, &g) * &h + &g * b(&f, &h));
    }
}

#[test]
fn restricted_flow_is_the_flow_restricted() {
    let sys = HamiltonianSystem::new(hamiltonian_h());
    let full = sys.equations_of_motion();
    for part in PrincipalPart::ALL {
        let zeroed = part.zeroed();
        let zero: d42sym::algebra::Assignment = zeroed.iter().map(|v| (*v, ratio(0, 1))).collect();
        let restricted = sys.restrict(&zeroed).equations_of_motion();
        let (a, b) = part.pair();
        for var in [a, b] {
            assert_eq!(
                restricted.component(var),
                &full.component(var).specialize(&zero).unwrap(),
                "{part:?} {var}"
            );
        }
    }
}

#[test]
fn coefficient_identities_from_the_constraint() {
    let a: Vec<Polynomial> = Var::ALPHA.iter().map(|x| v(*x)).collect();
    let k = Polynomial::int;
    let lhs = k(3) * &a[3] - k(1);
    let rhs = -(&a[0] + &a[1] + &a[2] - k(2) * &a[3]);
    assert_eq!(eliminate_alpha0_poly(&lhs), eliminate_alpha0_poly(&rhs));
    let e1 = k(3) * (&a[1] + &a[2] + &a[3]) - k(2);
    let e2 = k(1) - k(3) * &a[0];
    let e3 = -(k(2) * &a[0] - &a[1] - &a[2] - &a[3]);
    assert_eq!(eliminate_alpha0_poly(&e1), eliminate_alpha0_poly(&e2));
    assert_eq!(eliminate_alpha0_poly(&e2), eliminate_alpha0_poly(&e3));
}

#[test]
fn h_and_y_plus_2p_are_not_conserved() {
    let sys = HamiltonianSystem::d42();
    assert!(!sys.total_time_derivative(sys.hamiltonian()).is_zero());
    let g = v(Var::Y) + Polynomial::int(2) * v(Var::P);
    let d = sys.total_time_derivative(&g);
    assert!(!d.is_zero());
    // the derivative is (y + 2p)/t, so (y + 2p)/t is conserved
    assert_eq!(d, &g * &Polynomial::var_pow(Var::T, -1));
}

#[test]
fn quadratic_search_finds_the_scaled_y_plus_2p() {
    let params = ExactSampler::new(3).generic_parameters();
    let sys = HamiltonianSystem::d42().specialize(&params);
    let g = (v(Var::Y) + Polynomial::int(2) * v(Var::P)) * Polynomial::var_pow(Var::T, -1);
    let wide = sys.first_integral_search(2, (-3, 3), 10_000_000).unwrap();
    assert_eq!(wide.dimension(), 3);
    assert!(wide.contains(&g));
    assert!(wide.contains(&g.pow_u(2)));
    let polynomial_in_t = sys.first_integral_search(2, (0, 3), 10_000_000).unwrap();
    assert!(polynomial_in_t.constants_only());
}

#[test]
fn k2_tilde_search_contains_i() {
    let params = ExactSampler::new(4).generic_parameters();
    let sys = d42sym::principal::k2_tilde_system().specialize(&params);
    let i = d42sym::principal::first_integral_i()
        .specialize(&params.assignment())
        .unwrap();
    let basis = sys.first_integral_search(4, (-1, 1), 10_000_000).unwrap();
    assert!(basis.contains(&i));
}
