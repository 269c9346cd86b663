//! Named verification suites producing deterministic [`CheckReport`]s.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::Serialize;

use crate::algebra::{format_scalar, Polynomial, Scalar, Var};
use crate::hamiltonian::{hamiltonian_h, HamiltonianSystem, Parameters};
use crate::holomorphy::{
    ansatz_sample_runs, chart, check_holomorphy, check_holomorphy_unadjusted, y_plus_2p_derivative,
    AnsatzFamily, AnsatzSolution,
};
use crate::numerics::{
    backlund_numeric_check, closed_form_numeric_deviation, closed_form_ode_residual,
    divisor_numeric_check, first_integral_numeric_check, hamiltonian_numeric_drift, linspace,
    IntegratorConfig,
};
use crate::principal::{
    closed_forms_nondegenerate, first_integral_i, first_integral_i_derivative,
    four_t_k1_derivative, k1_solution, k2_tilde, k2_tilde_system, k2_transform, k3_solution,
    verify_closed_form, PrincipalPart,
};
use crate::sampling::ExactSampler;
use crate::weyl::{
    adjoint_series_check, generator, invariant_divisor_check, involution_points,
    is_backlund_symmetry, translation, weyl_relation_order, Alpha2Transform, RelationOrder,
};

/// Environment variable holding the worker count (default 1).
pub const WORKERS_ENV: &str = "D42SYM_WORKERS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check_id: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    fn verdict(id: &str, ok: bool, detail: String) -> Self {
        CheckReport {
            check_id: id.to_string(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail,
            elapsed_ms: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Symmetry,
    Coxeter,
    Divisors,
    Translations,
    Principal,
    Holomorphy,
    Integrals,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = [
        "all",
        "symmetry",
        "coxeter",
        "divisors",
        "translations",
        "principal",
        "holomorphy",
        "integrals",
    ];
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "all" => Suite::All,
            "symmetry" => Suite::Symmetry,
            "coxeter" => Suite::Coxeter,
            "divisors" => Suite::Divisors,
            "translations" => Suite::Translations,
            "principal" => Suite::Principal,
            "holomorphy" => Suite::Holomorphy,
            "integrals" => Suite::Integrals,
            other => return Err(format!("unknown suite `{other}`")),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = [
            Suite::All,
            Suite::Symmetry,
            Suite::Coxeter,
            Suite::Divisors,
            Suite::Translations,
            Suite::Principal,
            Suite::Holomorphy,
            Suite::Integrals,
        ]
        .iter()
        .position(|s| s == self)
        .unwrap();
        f.write_str(Suite::NAMES[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Random points per sampled check (Coxeter orders, involutions) and
    /// the number of ansatz runs is `max(5, samples / 4)`.
    pub samples: usize,
    pub workers: usize,
    pub timings: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 7,
            samples: 20,
            workers: 1,
            timings: false,
        }
    }
}

impl VerifyOptions {
    pub fn ansatz_samples(&self) -> usize {
        (self.samples / 4).max(5)
    }
}

pub fn workers_from_env() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|s| s.parse().ok())
        .filter(|&n: &usize| n >= 1)
        .unwrap_or(1)
}

type Check = (
    String,
    Box<dyn Fn(&VerifyOptions) -> CheckReport + Send + Sync>,
);

fn check(
    id: impl Into<String>,
    f: impl Fn(&str, &VerifyOptions) -> CheckReport + Send + Sync + 'static,
) -> Check {
    let id = id.into();
    let owned = id.clone();
    (id, Box::new(move |o| f(&owned, o)))
}

fn seed_for(opts: &VerifyOptions, salt: u64) -> u64 {
    opts.seed
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(salt)
}

fn vec_str(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(format_scalar).collect();
    format!("({})", parts.join(","))
}

fn symmetry_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for i in 0..4 {
        out.push(check(format!("symmetry.backlund.s{i}"), move |id, _| {
            let r = is_backlund_symmetry(&generator(i), &HamiltonianSystem::d42());
            let detail = if r.holds() {
                "pushforward residual identically zero on x,y,z,w,q,p".to_string()
            } else {
                let bad: Vec<String> = Var::PHASE
                    .iter()
                    .zip(&r.residuals)
                    .filter(|(_, e)| !e.is_zero())
                    .map(|(v, e)| format!("{v}: {e}"))
                    .collect();
                bad.join("; ")
            };
            CheckReport::verdict(id, r.holds(), detail)
        }));
        out.push(check(format!("symmetry.adjoint.s{i}"), move |id, _| {
            let mut ok = true;
            let mut parts = Vec::new();
            for var in Var::PHASE {
                match adjoint_series_check(i, var) {
                    Ok(s) => {
                        let good = s.matches_generator && (i != 2 || s.order <= 2);
                        ok &= good;
                        parts.push(format!(
                            "{var}: order {}{}",
                            s.order,
                            if good { "" } else { " MISMATCH" }
                        ));
                    }
                    Err(e) => {
                        ok = false;
                        parts.push(format!("{var}: {e}"));
                    }
                }
            }
            CheckReport::verdict(id, ok, parts.join(", "))
        }));
        out.push(check(
            format!("symmetry.involution.s{i}"),
            move |id, o| match involution_points(i, o.samples, seed_for(o, 10 + i as u64)) {
                Ok(n) => CheckReport::verdict(id, true, format!("s{i}^2 = id at {n} exact points")),
                Err(e) => CheckReport::verdict(id, false, e),
            },
        ));
        out.push(check(format!("symmetry.numeric.s{i}"), move |id, o| {
            let cfg = IntegratorConfig::default();
            match backlund_numeric_check(i, seed_for(o, 20 + i as u64), (1.0, 2.0), &cfg) {
                Ok(d) => CheckReport::verdict(
                    id,
                    d <= 1e-6,
                    format!("max relative deviation {d:.3e} on [1,2] (tolerance 1e-6)"),
                ),
                Err(e) => CheckReport::verdict(id, false, e.to_string()),
            }
        }));
    }
    out.push(check("symmetry.alpha2_transform", |id, _| {
        let tr = Alpha2Transform::new();
        let w2_is_f2 = tr.forward.image(Var::W).as_polynomial()
            == Some(&crate::weyl::divisor_polynomial(2));
        let symplectic = tr.is_symplectic();
        let round = tr.round_trip();
        let residual = tr.invariance_residual(&HamiltonianSystem::d42());
        CheckReport::verdict(
            id,
            w2_is_f2 && symplectic && round && residual.is_zero(),
            format!(
                "w2 = f2: {w2_is_f2}; symplectic: {symplectic}; invertible: {round}; dw2/dt on w2=0, alpha2=0: {residual}"
            ),
        )
    }));
    out.push(check("symmetry.translations_commute", |id, _| {
        let acts: Vec<_> = (1..=3)
            .map(|k| translation(k).word.param_action())
            .collect();
        let mut ok = true;
        for a in 0..3 {
            for b in a + 1..3 {
                ok &= acts[a].then(&acts[b]) == acts[b].then(&acts[a]);
            }
        }
        CheckReport::verdict(
            id,
            ok,
            format!("pairwise commuting parameter actions: {ok}"),
        )
    }));
    out
}

fn coxeter_checks() -> Vec<Check> {
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    pairs
        .into_iter()
        .map(|(i, j)| {
            check(format!("coxeter.s{i}s{j}"), move |id, o| {
                let salt = 30 + (i * 4 + j) as u64;
                match weyl_relation_order(i, j, o.samples, seed_for(o, salt), 12) {
                    RelationOrder::Order(m) => CheckReport::verdict(
                        id,
                        true,
                        format!("order {m} at {} exact points", o.samples),
                    ),
                    RelationOrder::Unresolved(why) => CheckReport {
                        check_id: id.to_string(),
                        status: Status::Unresolved,
                        detail: why,
                        elapsed_ms: None,
                    },
                }
            })
        })
        .collect()
}

fn divisor_checks() -> Vec<Check> {
    (0..4)
        .map(|i| {
            check(format!("divisors.f{i}"), move |id, o| {
                let r = invariant_divisor_check(i, &HamiltonianSystem::d42());
                let cfg = IntegratorConfig::default();
                let numeric = divisor_numeric_check(i, seed_for(o, 50 + i as u64), &cfg);
                let (num_ok, num_detail) = match numeric {
                    Ok(m) => (m <= 1e-9, format!("max |f{i}| on [1,2] = {m:.3e}")),
                    Err(e) => (false, e.to_string()),
                };
                CheckReport::verdict(
                    id,
                    r.holds() && num_ok,
                    format!(
                        "remainder mod f{i} at alpha{i}=0: {}; {num_detail}",
                        r.residual
                    ),
                )
            })
        })
        .collect()
}

fn translation_checks() -> Vec<Check> {
    (1..=3)
        .map(|k| {
            check(format!("translations.T{k}"), move |id, _| {
                let tr = translation(k);
                let expected: [i64; 4] = match k {
                    1 => [-2, 2, 0, 0],
                    2 => [0, -2, 2, 0],
                    _ => [0, 0, -2, 2],
                };
                let expected = expected.map(crate::algebra::int);
                match tr.vector {
                    Some(v) => CheckReport::verdict(
                        id,
                        v == expected,
                        format!("word {}: alpha -> alpha + {}", tr.word, vec_str(&v)),
                    ),
                    None => CheckReport::verdict(
                        id,
                        false,
                        format!("word {} does not act by a translation", tr.word),
                    ),
                }
            })
        })
        .collect()
}

fn principal_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for part in PrincipalPart::ALL {
        out.push(check(
            format!("principal.restrict.{part:?}"),
            move |id, _| {
                let h = HamiltonianSystem::new(hamiltonian_h());
                let r = h.restrict(&part.zeroed());
                let mut ok = r.hamiltonian() == &part.hamiltonian();
                if let Some(field) = part.displayed_field() {
                    let eom = r.equations_of_motion();
                    let (a, b) = part.pair();
                    for (var, shown) in [a, b].into_iter().zip(field) {
                        ok &= crate::hamiltonian::eliminate_alpha0_poly(eom.component(var))
                            == crate::hamiltonian::eliminate_alpha0_poly(&shown);
                    }
                }
                CheckReport::verdict(
                    id,
                    ok,
                    format!("restricted Hamiltonian: {}", r.hamiltonian()),
                )
            },
        ));
    }
    for (part, name) in [(PrincipalPart::K1, "K1"), (PrincipalPart::K3, "K3")] {
        out.push(check(
            format!("principal.closed_form.{name}"),
            move |id, _| {
                let sol = if part == PrincipalPart::K1 {
                    k1_solution()
                } else {
                    k3_solution()
                };
                let r = verify_closed_form(&sol, part);
                CheckReport::verdict(
                    id,
                    r.holds(),
                    format!("residuals: [{}], [{}]", r.residuals[0], r.residuals[1]),
                )
            },
        ));
        out.push(check(format!("principal.numeric.{name}"), move |id, o| {
            let sol = if part == PrincipalPart::K1 { k1_solution() } else { k3_solution() };
            let mut sampler = ExactSampler::new(seed_for(o, 60 + part as u64));
            let times = linspace(1.0, 2.0, 10);
            let cfg = IntegratorConfig::default();
            let (mut worst_dev, mut worst_res): (f64, f64) = (0.0, 0.0);
            let mut runs = 0;
            while runs < 5 {
                let params = sampler.small_parameters();
                if !closed_forms_nondegenerate(&params) {
                    continue;
                }
                let quarter = crate::algebra::ratio(1, 4);
                let c1 = sampler.rational() * &quarter;
                let c2 = sampler.rational() * &quarter;
                let dev = closed_form_numeric_deviation(part, &sol, &params, (&c1, &c2), &times, &cfg);
                let res = closed_form_ode_residual(part, &sol, &params, (&c1, &c2), &times);
                match (dev, res) {
                    (Ok(d), Ok(r)) => {
                        worst_dev = worst_dev.max(d);
                        worst_res = worst_res.max(r);
                    }
                    (Err(e), _) | (_, Err(e)) => {
                        return CheckReport::verdict(id, false, e.to_string());
                    }
                }
                runs += 1;
            }
            CheckReport::verdict(
                id,
                worst_dev <= 1e-8 && worst_res <= 1e-10,
                format!(
                    "5 parameter points: trajectory deviation {worst_dev:.3e} (tol 1e-8), ODE residual {worst_res:.3e} (tol 1e-10)"
                ),
            )
        }));
    }
    out.push(check("principal.k2_transform", |id, _| {
        let tr = k2_transform();
        let corr_ok = tr.correction
            == Polynomial::var(Var::Z) * Polynomial::var(Var::W) * Polynomial::var_pow(Var::T, -1);
        CheckReport::verdict(
            id,
            tr.matches_closed_form && tr.symplectic && corr_ok,
            format!(
                "derived K2~ = {}; matches 3 z1 (z1 w1^2 + 2 z1 w1 + 2(alpha1+alpha2) w1 + 2 alpha1)/(4t) with the parenthesis closed after 2 alpha1: {}; correction {}; {{w1,z1}} = 1: {}",
                tr.transformed, tr.matches_closed_form, tr.correction, tr.symplectic
            ),
        )
    }));
    out.push(check("principal.first_integral_I", |id, o| {
        let d = first_integral_i_derivative();
        let k1 = four_t_k1_derivative();
        let drift = first_integral_numeric_check(seed_for(o, 70), &IntegratorConfig::default());
        let (num_ok, num_detail) = match drift {
            Ok(x) => (x <= 1e-8, format!("numeric drift of I on [1,2] {x:.3e}")),
            Err(e) => (false, e.to_string()),
        };
        CheckReport::verdict(
            id,
            d.is_zero() && !k1.is_zero() && num_ok,
            format!(
                "dI/dt = {d}; d(4tK1)/dt nonzero: {}; {num_detail}",
                !k1.is_zero()
            ),
        )
    }));
    out
}

fn holomorphy_checks() -> Vec<Check> {
    let mut out = Vec::new();
    for i in 0..4 {
        out.push(check(format!("holomorphy.chart.r{i}"), move |id, _| {
            let r = check_holomorphy(&hamiltonian_h(), i);
            let round = chart(i).round_trip();
            let what = if i == 2 { "H - z" } else { "H" };
            CheckReport::verdict(
                id,
                r.holds() && round,
                format!(
                    "{what} polynomial in r{i}: {}; offending part: {}; chart round trip: {round}",
                    r.holds(),
                    r.offending
                ),
            )
        }));
    }
    out.push(check("holomorphy.chart2_adjustment", |id, _| {
        let r = check_holomorphy_unadjusted(&hamiltonian_h(), 2);
        CheckReport::verdict(
            id,
            !r.holds(),
            format!("unadjusted H in r2 has negative part {}", r.offending),
        )
    }));
    out.push(check("holomorphy.family", |id, _| {
        let member = AnsatzFamily::new().symbolic_member();
        let failures: Vec<String> = (0..4)
            .map(|i| check_holomorphy(&member, i))
            .filter(|r| !r.holds())
            .map(|r| format!("r{}: {}", r.chart, r.offending))
            .collect();
        CheckReport::verdict(
            id,
            failures.is_empty(),
            if failures.is_empty() {
                "H + sum a_k (y+2p)^k polynomial in all four charts for symbolic a1..a4".into()
            } else {
                failures.join("; ")
            },
        )
    }));
    out.push(check("holomorphy.ansatz", |id, o| {
        let summary = AnsatzSummary::run(o.ansatz_samples(), seed_for(o, 80));
        let status = if summary.inconsistent.is_some() {
            Status::Fail
        } else if !summary.dimension_constant {
            Status::Unresolved
        } else if summary.all_contain_family {
            Status::Pass
        } else {
            Status::Fail
        };
        CheckReport {
            check_id: id.to_string(),
            status,
            detail: summary.describe(),
            elapsed_ms: None,
        }
    }));
    out
}

fn integral_checks() -> Vec<Check> {
    vec![
        check("integrals.h_not_conserved", |id, o| {
            let sys = HamiltonianSystem::d42();
            let d = sys.total_time_derivative(sys.hamiltonian());
            let drift = hamiltonian_numeric_drift(seed_for(o, 90), &IntegratorConfig::default());
            let detail = match &drift {
                Ok(x) => format!(
                    "dH/dt has {} terms; numeric relative drift of H on [1,2] {x:.3e}",
                    d.len()
                ),
                Err(e) => e.to_string(),
            };
            CheckReport::verdict(id, !d.is_zero() && drift.is_ok_and(|x| x > 1e-6), detail)
        }),
        check("integrals.y_plus_2p_not_conserved", |id, _| {
            let d = y_plus_2p_derivative();
            CheckReport::verdict(
                id,
                !d.is_zero(),
                format!(
                    "d(y+2p)/dt under H + sum a_k (y+2p)^k has {} terms",
                    d.len()
                ),
            )
        }),
        check("integrals.search_degree2", |id, o| {
            search_report(id, o, (-3, 3))
        }),
        check("integrals.search_degree2_nonnegative_t", |id, o| {
            search_report(id, o, (0, 3))
        }),
        check("integrals.search_k2_tilde", |id, o| {
            let mut sampler = ExactSampler::new(seed_for(o, 110));
            let params = sampler.generic_parameters();
            let sys = k2_tilde_system().specialize(&params);
            let i = first_integral_i()
                .specialize(&params.assignment())
                .expect("polynomial");
            match sys.first_integral_search(4, (-1, 1), 10_000_000) {
                Ok(b) => CheckReport::verdict(
                    id,
                    b.contains(&i),
                    format!(
                        "K2~ = {}: solution dimension {}; contains 4tK2~: {}",
                        k2_tilde(),
                        b.dimension(),
                        b.contains(&i)
                    ),
                ),
                Err(e) => CheckReport::verdict(id, false, e.to_string()),
            }
        }),
    ]
}

/// Degree-2 first-integral search at generic parameters; passes iff only
/// constants are found.
fn search_report(id: &str, o: &VerifyOptions, window: (i32, i32)) -> CheckReport {
    let mut sampler = ExactSampler::new(seed_for(o, 100));
    let params = sampler.generic_parameters();
    let sys = HamiltonianSystem::d42().specialize(&params);
    match sys.first_integral_search(2, window, 10_000_000) {
        Ok(b) => {
            let found: Vec<String> = b.integrals.iter().map(|g| g.to_string()).collect();
            CheckReport::verdict(
                id,
                b.constants_only(),
                format!(
                    "alpha = {}, t-exponents {}..={}: {} unknowns, {} equations, solution dimension {}; basis: [{}]",
                    vec_str(params.alpha()),
                    window.0,
                    window.1,
                    b.basis.len(),
                    b.equations,
                    b.dimension(),
                    found.join("; ")
                ),
            )
        }
        Err(e) => CheckReport::verdict(id, false, e.to_string()),
    }
}

fn checks_for(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::All => [
            symmetry_checks(),
            coxeter_checks(),
            divisor_checks(),
            translation_checks(),
            principal_checks(),
            holomorphy_checks(),
            integral_checks(),
        ]
        .into_iter()
        .flatten()
        .collect(),
        Suite::Symmetry => symmetry_checks(),
        Suite::Coxeter => coxeter_checks(),
        Suite::Divisors => divisor_checks(),
        Suite::Translations => translation_checks(),
        Suite::Principal => principal_checks(),
        Suite::Holomorphy => holomorphy_checks(),
        Suite::Integrals => integral_checks(),
    }
}

/// Check identifiers of a suite, sorted.
pub fn check_ids(suite: Suite) -> Vec<String> {
    let mut ids: Vec<String> = checks_for(suite).into_iter().map(|(id, _)| id).collect();
    ids.sort();
    ids
}

/// Runs a suite on `opts.workers` threads; reports are sorted by id.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<CheckReport> {
    let checks = checks_for(suite);
    let next = AtomicUsize::new(0);
    let results = Mutex::new(Vec::with_capacity(checks.len()));
    let workers = opts.workers.clamp(1, checks.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::SeqCst);
                let Some((_, run)) = checks.get(k) else { break };
                let start = Instant::now();
                let mut report = run(opts);
                if opts.timings {
                    report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
                }
                results.lock().unwrap().push(report);
            });
        }
    });
    let mut reports = results.into_inner().unwrap();
    reports.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    reports
}

pub fn all_pass(reports: &[CheckReport]) -> bool {
    reports
        .iter()
        .all(|r| matches!(r.status, Status::Pass | Status::Skipped))
}

/// One ansatz run in serializable form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnsatzRunSummary {
    pub t0: String,
    pub alpha: [String; 4],
    pub unknowns: usize,
    pub equations: usize,
    pub dimension: usize,
    pub contains_h: bool,
    pub contains_directions: [bool; 4],
    pub contains_constant: bool,
    pub family_spans_solutions: bool,
}

impl From<&AnsatzSolution> for AnsatzRunSummary {
    fn from(s: &AnsatzSolution) -> Self {
        AnsatzRunSummary {
            t0: format_scalar(&s.t0),
            alpha: s.params.alpha().clone().map(|a| format_scalar(&a)),
            unknowns: s.monomials.len(),
            equations: s.constraints.len(),
            dimension: s.dimension,
            contains_h: s.contains_h,
            contains_directions: s.contains_direction,
            contains_constant: s.contains_constant,
            family_spans_solutions: s.family_spans_kernel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnsatzSummary {
    pub seed: u64,
    pub runs: Vec<AnsatzRunSummary>,
    pub dimension_constant: bool,
    pub all_contain_family: bool,
    /// Set when some sample produced an inconsistent constraint system.
    pub inconsistent: Option<usize>,
}

impl AnsatzSummary {
    pub fn run(samples: usize, seed: u64) -> Self {
        let results = ansatz_sample_runs(samples, seed);
        let inconsistent = results.iter().position(|r| r.is_err());
        let runs: Vec<AnsatzRunSummary> = results
            .iter()
            .filter_map(|r| r.as_ref().ok())
            .map(AnsatzRunSummary::from)
            .collect();
        let dimension_constant = runs.windows(2).all(|w| w[0].dimension == w[1].dimension);
        let all_contain_family = !runs.is_empty()
            && runs
                .iter()
                .all(|r| r.contains_h && r.contains_directions.iter().all(|&b| b));
        AnsatzSummary {
            seed,
            runs,
            dimension_constant,
            all_contain_family,
            inconsistent,
        }
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistent.is_none() && self.dimension_constant && self.all_contain_family
    }

    pub fn describe(&self) -> String {
        if let Some(k) = self.inconsistent {
            return format!("sample {k}: chart constraints inconsistent");
        }
        let dims: Vec<String> = self.runs.iter().map(|r| r.dimension.to_string()).collect();
        let spans = self.runs.iter().all(|r| r.family_spans_solutions);
        format!(
            "{} samples; solution-space dimensions [{}]; H and H+(y+2p)^k (k=1..4) in every solution set: {}; constant direction present: {}; constant plus four directions span all solutions: {}",
            self.runs.len(),
            dims.join(","),
            self.all_contain_family,
            self.runs.iter().all(|r| r.contains_constant),
            spans
        )
    }
}

/// Parameters as exact decimal-free strings, for reports.
pub fn describe_parameters(p: &Parameters) -> String {
    vec_str(p.alpha())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().to_string(), name);
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn ids_are_unique() {
        let ids = check_ids(Suite::All);
        let mut dedup = ids.clone();
        dedup.dedup();
        assert_eq!(ids, dedup);
        assert_eq!(check_ids(Suite::Divisors).len(), 4);
        assert_eq!(check_ids(Suite::Translations).len(), 3);
    }

    #[test]
    fn translations_suite_passes() {
        let reports = run_suite(Suite::Translations, &VerifyOptions::default());
        assert!(all_pass(&reports));
        assert!(reports[0].detail.ends_with("(-2,2,0,0)"));
    }

    #[test]
    fn parallel_and_serial_agree() {
        let serial = run_suite(Suite::Divisors, &VerifyOptions::default());
        let parallel = run_suite(
            Suite::Divisors,
            &VerifyOptions {
                workers: 3,
                ..Default::default()
            },
        );
        assert_eq!(serial, parallel);
    }
}
