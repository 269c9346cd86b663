//! End-to-end acceptance criteria.  Prints one line per criterion and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use d42sym::algebra::{int, v, Polynomial, Var};
use d42sym::hamiltonian::{eliminate_alpha0_poly, hamiltonian_h};
use d42sym::holomorphy::{
    ansatz_sample_runs, check_holomorphy, check_holomorphy_unadjusted, direction, AnsatzFamily,
};
use d42sym::numerics::{
    backlund_numeric_check, closed_form_numeric_deviation, divisor_numeric_check,
    first_integral_numeric_check, linspace, IntegratorConfig,
};
use d42sym::principal::{
    closed_forms_nondegenerate, first_integral_i_check, k1_solution, k2_transform, k3_solution,
    verify_closed_form, PrincipalPart,
};
use d42sym::sampling::ExactSampler;
use d42sym::weyl::{
    adjoint_series_check, generator, invariant_divisor_check, involution_points,
    is_backlund_symmetry, translation, weyl_relation_order, RelationOrder,
};
use d42sym::HamiltonianSystem;

const SEED: u64 = 2024;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn c1_backlund() -> Outcome {
    let sys = HamiltonianSystem::d42();
    for i in 0..4 {
        let r = is_backlund_symmetry(&generator(i), &sys);
        ensure(r.holds(), format!("s{i} leaves a nonzero residual"))?;
    }
    Ok("s0..s3 pushforward residuals identically zero".into())
}

fn c2_involutions_and_orders() -> Outcome {
    for i in 0..4 {
        let n = involution_points(i, 20, SEED + i as u64)?;
        ensure(n >= 20, format!("s{i}: only {n} points"))?;
    }
    let expected = [
        ((0, 1), 4),
        ((1, 2), 3),
        ((2, 3), 4),
        ((0, 2), 2),
        ((0, 3), 2),
        ((1, 3), 2),
    ];
    let mut found = Vec::new();
    for ((i, j), m) in expected {
        match weyl_relation_order(i, j, 20, SEED + (10 * i + j) as u64, 12) {
            RelationOrder::Order(k) => {
                ensure(k == m, format!("(s{i}s{j}) has order {k}, expected {m}"))?;
                found.push(format!("s{i}s{j}:{k}"));
            }
            RelationOrder::Unresolved(why) => return Err(format!("s{i}s{j} unresolved: {why}")),
        }
    }
    Ok(format!(
        "involutions at 20 points each; orders {}",
        found.join(" ")
    ))
}

fn c3_divisors() -> Outcome {
    let sys = HamiltonianSystem::d42();
    let cfg = IntegratorConfig::default();
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        let r = invariant_divisor_check(i, &sys);
        ensure(r.holds(), format!("f{i}: remainder {}", r.residual))?;
        let m = divisor_numeric_check(i, SEED + i as u64, &cfg).map_err(|e| e.to_string())?;
        ensure(m <= 1e-9, format!("f{i}: max |f| = {m:e} > 1e-9"))?;
        worst = worst.max(m);
    }
    Ok(format!(
        "exact remainders zero; max numeric |f_i| {worst:.2e}"
    ))
}

fn c4_translations() -> Outcome {
    let expected = [[-2, 2, 0, 0], [0, -2, 2, 0], [0, 0, -2, 2]];
    for (k, e) in (1..=3).zip(expected) {
        let got = translation(k)
            .vector
            .ok_or(format!("T{k} is not a translation"))?;
        ensure(got == e.map(int), format!("T{k} shifts by {got:?}"))?;
    }
    Ok("T1, T2, T3 shift by (-2,2,0,0), (0,-2,2,0), (0,0,-2,2)".into())
}

fn c5_adjoint() -> Outcome {
    for i in 0..4 {
        for var in Var::PHASE {
            let s = adjoint_series_check(i, var).map_err(|e| e.to_string())?;
            ensure(
                s.matches_generator,
                format!("s{i}({var}) differs from the series"),
            )?;
            ensure(
                i != 2 || s.order <= 2,
                format!("s2({var}) series order {}", s.order),
            )?;
        }
    }
    Ok("24 (generator, coordinate) series match; s2 orders <= 2".into())
}

fn c6_principal() -> Outcome {
    let h = HamiltonianSystem::new(hamiltonian_h());
    for part in PrincipalPart::ALL {
        let r = h.restrict(&part.zeroed());
        ensure(
            r.hamiltonian() == &part.hamiltonian(),
            format!("{part:?} restriction differs"),
        )?;
        if let Some(field) = part.displayed_field() {
            let eom = r.equations_of_motion();
            let (a, b) = part.pair();
            for (var, shown) in [a, b].into_iter().zip(field) {
                ensure(
                    eliminate_alpha0_poly(eom.component(var)) == eliminate_alpha0_poly(&shown),
                    format!("{part:?} d{var}/dt differs"),
                )?;
            }
        }
    }
    ensure(
        verify_closed_form(&k1_solution(), PrincipalPart::K1).holds(),
        "K1 residual nonzero",
    )?;
    ensure(
        verify_closed_form(&k3_solution(), PrincipalPart::K3).holds(),
        "K3 residual nonzero",
    )?;
    let mut sampler = ExactSampler::new(SEED);
    let times = linspace(1.0, 2.0, 10);
    let cfg = IntegratorConfig::default();
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    while runs < 5 {
        let params = sampler.small_parameters();
        if !closed_forms_nondegenerate(&params) {
            continue;
        }
        let quarter = d42sym::algebra::ratio(1, 4);
        let (c1, c2) = (sampler.rational() * &quarter, sampler.rational() * &quarter);
        for (part, sol) in [
            (PrincipalPart::K1, k1_solution()),
            (PrincipalPart::K3, k3_solution()),
        ] {
            let d = closed_form_numeric_deviation(part, &sol, &params, (&c1, &c2), &times, &cfg)
                .map_err(|e| e.to_string())?;
            ensure(d <= 1e-8, format!("{part:?}: deviation {d:e} > 1e-8"))?;
            worst = worst.max(d);
        }
        runs += 1;
    }
    Ok(format!(
        "restrictions and closed forms exact; numeric deviation {worst:.2e} at 5 parameter points"
    ))
}

fn c7_k2() -> Outcome {
    let tr = k2_transform();
    ensure(
        tr.matches_closed_form,
        format!("derived K2~ = {}", tr.transformed),
    )?;
    ensure(tr.symplectic, "z1 = tz, w1 = w/t is not symplectic")?;
    ensure(first_integral_i_check(), "dI/dt is nonzero")?;
    let drift = first_integral_numeric_check(SEED, &IntegratorConfig::default())
        .map_err(|e| e.to_string())?;
    ensure(drift <= 1e-8, format!("drift of I {drift:e} > 1e-8"))?;
    Ok(format!(
        "K2~ reproduced; dI/dt = 0; numeric drift {drift:.2e}"
    ))
}

fn c8_holomorphy() -> Outcome {
    let h = hamiltonian_h();
    for i in 0..4 {
        let r = check_holomorphy(&h, i);
        ensure(r.holds(), format!("r{i}: offending {}", r.offending))?;
    }
    ensure(
        !check_holomorphy_unadjusted(&h, 2).holds(),
        "H itself is polynomial in r2",
    )?;
    let member = AnsatzFamily::new().symbolic_member();
    for i in 0..4 {
        let r = check_holomorphy(&member, i);
        ensure(
            r.holds(),
            format!("family member fails in r{i}: {}", r.offending),
        )?;
    }
    let runs = ansatz_sample_runs(5, SEED);
    let mut dims = Vec::new();
    for (k, run) in runs.iter().enumerate() {
        let run = run.as_ref().map_err(|e| format!("sample {k}: {e}"))?;
        ensure(run.contains_h, format!("sample {k}: H not a solution"))?;
        ensure(
            run.contains_direction.iter().all(|&b| b),
            format!("sample {k}: missing direction"),
        )?;
        for j in 1..=4 {
            let h0 = run.satisfies(&direction(j), true);
            ensure(
                h0,
                format!("sample {k}: (y+2p)^{j} not a homogeneous solution"),
            )?;
        }
        dims.push(run.dimension);
    }
    ensure(
        dims.windows(2).all(|w| w[0] == w[1]),
        format!("dimensions vary: {dims:?}"),
    )?;
    Ok(format!(
        "H polynomial in r0,r1,r3 and H-z in r2; family symbolic; ansatz dimensions {dims:?}"
    ))
}

fn c9_non_integrals() -> Outcome {
    let sys = HamiltonianSystem::d42();
    ensure(
        !sys.total_time_derivative(sys.hamiltonian()).is_zero(),
        "dH/dt = 0",
    )?;
    let g = v(Var::Y) + Polynomial::int(2) * v(Var::P);
    ensure(!sys.total_time_derivative(&g).is_zero(), "d(y+2p)/dt = 0")?;
    let params = ExactSampler::new(SEED).generic_parameters();
    let basis = sys
        .specialize(&params)
        .first_integral_search(2, (-3, 3), 10_000_000)
        .map_err(|e| e.to_string())?;
    let found: Vec<String> = basis.integrals.iter().map(|p| p.to_string()).collect();
    ensure(
        basis.constants_only(),
        format!(
            "degree-2 search with t^-3..t^3 finds dimension {}: [{}]",
            basis.dimension(),
            found.join("; ")
        ),
    )?;
    Ok("H, y+2p not conserved; degree-2 search finds constants only".into())
}

fn c10_numeric_symmetry() -> Outcome {
    let cfg = IntegratorConfig::default();
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        let d = backlund_numeric_check(i, SEED + i as u64, (1.0, 2.0), &cfg)
            .map_err(|e| e.to_string())?;
        ensure(d <= 1e-6, format!("s{i}: deviation {d:e} > 1e-6"))?;
        worst = worst.max(d);
    }
    Ok(format!("max deviation {worst:.2e} over s0..s3 on [1,2]"))
}

fn c11_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_d42sym");
    let run = || {
        Command::new(bin)
            .args(["verify", "--suite", "all", "--seed", "11"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(!a.stdout.is_empty(), "empty report")?;
    serde_json::from_slice::<serde_json::Value>(&a.stdout)
        .map_err(|e| format!("invalid JSON: {e}"))?;
    ensure(a.stdout == b.stdout, "reports differ between runs")?;
    Ok(format!(
        "two runs byte-identical ({} bytes)",
        a.stdout.len()
    ))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Backlund symmetry of s0..s3", c1_backlund),
        ("involutions and relation orders", c2_involutions_and_orders),
        ("invariant divisors", c3_divisors),
        ("translations", c4_translations),
        ("Poisson-exponential formula", c5_adjoint),
        ("principal parts", c6_principal),
        ("K2 transform and first integral", c7_k2),
        ("holomorphy and ansatz", c8_holomorphy),
        ("non-integrals", c9_non_integrals),
        ("numeric symmetry shadow", c10_numeric_symmetry),
        ("determinism", c11_determinism),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
