use d42sym::algebra::ratio;
use d42sym::numerics::{
    backlund_numeric_check, backlund_numeric_deviation, closed_form_numeric_deviation,
    closed_form_ode_residual, divisor_numeric_check, first_integral_numeric_check,
    hamiltonian_numeric_drift, linspace, IntegratorConfig,
};
use d42sym::principal::{closed_forms_nondegenerate, k1_solution, k3_solution, PrincipalPart};
use d42sym::sampling::ExactSampler;
use d42sym::weyl::{generator, ParamAction};
use d42sym::Parameters;

#[test]
fn generators_map_trajectories_to_trajectories() {
    let config = IntegratorConfig::default();
    for i in 0..4 {
        let d = backlund_numeric_check(i, 100 + i as u64, (1.0, 2.0), &config).unwrap();
        assert!(d <= 1e-6, "s{i}: {d}");
    }
}

#[test]
fn wrong_parameter_action_is_detected() {
    let mut map = generator(1);
    map.params = ParamAction::identity();
    let params = Parameters::from_tail(ratio(1, 3), ratio(1, 5), ratio(1, 7));
    let d = backlund_numeric_deviation(
        &map,
        &params,
        [0.1, -0.2, 0.3, 0.4, -0.1, 0.2],
        (1.0, 1.3),
        10,
        &IntegratorConfig::default(),
    )
    .unwrap();
    assert!(d > 1e-3, "{d}");
}

#[test]
fn divisors_stay_invariant_numerically() {
    let config = IntegratorConfig::default();
    for i in 0..4 {
        let m = divisor_numeric_check(i, 40 + i as u64, &config).unwrap();
        assert!(m <= 1e-9, "f{i}: {m}");
    }
}

#[test]
fn i_is_conserved_and_h_is_not() {
    let config = IntegratorConfig::default();
    let drift = first_integral_numeric_check(5, &config).unwrap();
    assert!(drift <= 1e-8, "{drift}");
    let h = hamiltonian_numeric_drift(5, &config).unwrap();
    assert!(h > 1e-3, "{h}");
}

#[test]
fn closed_forms_match_integration() {
    let mut sampler = ExactSampler::new(9);
    let times = linspace(1.0, 2.0, 10);
    let config = IntegratorConfig::default();
    let mut runs = 0;
    while runs < 5 {
        let params = sampler.small_parameters();
        if !closed_forms_nondegenerate(&params) {
            continue;
        }
        let (c1, c2) = (
            sampler.rational() / ratio(4, 1),
            sampler.rational() / ratio(4, 1),
        );
        for (part, sol) in [
            (PrincipalPart::K1, k1_solution()),
            (PrincipalPart::K3, k3_solution()),
        ] {
            let dev =
                closed_form_numeric_deviation(part, &sol, &params, (&c1, &c2), &times, &config)
                    .unwrap();
            assert!(dev <= 1e-8, "{part:?} {params:?}: {dev}");
            let res = closed_form_ode_residual(part, &sol, &params, (&c1, &c2), &times).unwrap();
            assert!(res <= 1e-10, "{part:?}: {res}");
        }
        runs += 1;
    }
}
