//! Double-precision integration of the flow with an adaptive Dormand-Prince
//! 5(4) pair, and numeric cross-checks of the exact results.

use std::io::{self, Write};

use num_traits::Zero;
use thiserror::Error;

use crate::algebra::{to_f64, Polynomial, RationalExpr, Scalar, Var};
use crate::hamiltonian::{HamiltonianSystem, Parameters};
use crate::principal::{ExpSum, PrincipalError, PrincipalPart};
use crate::sampling::ExactSampler;
use crate::weyl::{divisor_polynomial, generator, BirationalMap};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericError {
    #[error("invalid time span [{t0}, {t1}]: it must be nonempty and avoid t = 0")]
    InvalidSpan { t0: f64, t1: f64 },
    #[error("tolerances must be positive")]
    InvalidTolerance,
    #[error("expression still depends on {0} after specialization")]
    Unspecialized(String),
    #[error("trajectory blew up near t = {t}")]
    Blowup { t: f64 },
    #[error("map denominator vanishes near t = {t}")]
    PoleEncountered { t: f64 },
    #[error(transparent)]
    Principal(#[from] PrincipalError),
}

/// A polynomial in `x, y, z, w, q, p, t` with float coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledPolynomial {
    terms: Vec<(f64, [i32; 7])>,
}

impl CompiledPolynomial {
    pub fn compile(p: &Polynomial) -> Result<Self, NumericError> {
        let mut terms = Vec::with_capacity(p.len());
        for (m, c) in p.terms() {
            let mut exps = [0i32; 7];
            for (var, e) in m.vars() {
                if var == Var::T {
                    exps[6] = e;
                } else if var.is_phase() {
                    exps[var.index()] = e;
                } else {
                    return Err(NumericError::Unspecialized(var.name().into_owned()));
                }
            }
            terms.push((to_f64(c), exps));
        }
        Ok(CompiledPolynomial { terms })
    }

    pub fn eval(&self, u: &[f64; 6], t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                let mut acc = *c;
                for k in 0..6 {
                    if e[k] != 0 {
                        acc *= u[k].powi(e[k]);
                    }
                }
                if e[6] != 0 {
                    acc *= t.powi(e[6]);
                }
                acc
            })
            .sum()
    }

    /// Sum of absolute term values, the natural scale for rounding error.
    pub fn magnitude(&self, u: &[f64; 6], t: f64) -> f64 {
        let abs = CompiledPolynomial {
            terms: self.terms.iter().map(|(c, e)| (c.abs(), *e)).collect(),
        };
        abs.eval(&u.map(f64::abs), t.abs())
    }
}

/// A compiled rational function, evaluated as numerator over denominator.
#[derive(Debug, Clone)]
pub struct CompiledRational {
    pub num: CompiledPolynomial,
    pub den: CompiledPolynomial,
}

impl CompiledRational {
    pub fn compile(r: &RationalExpr, params: &Parameters) -> Result<Self, NumericError> {
        let r = r
            .specialize(&params.assignment())
            .map_err(|e| NumericError::Unspecialized(e.to_string()))?;
        Ok(CompiledRational {
            num: CompiledPolynomial::compile(r.numerator())?,
            den: CompiledPolynomial::compile(&r.denominator())?,
        })
    }

    /// Value and denominator.
    pub fn eval(&self, u: &[f64; 6], t: f64) -> (f64, f64) {
        let d = self.den.eval(u, t);
        (self.num.eval(u, t) / d, d)
    }
}

/// The vector field of a Hamiltonian system at fixed numeric parameters.
#[derive(Debug, Clone)]
pub struct CompiledField {
    pub components: [CompiledPolynomial; 6],
}

impl CompiledField {
    pub fn new(sys: &HamiltonianSystem, params: &Parameters) -> Result<Self, NumericError> {
        let field = sys.specialize(params).equations_of_motion();
        let mut out = Vec::with_capacity(6);
        for c in &field.components {
            out.push(CompiledPolynomial::compile(c)?);
        }
        Ok(CompiledField {
            components: out.try_into().unwrap(),
        })
    }

    pub fn eval(&self, t: f64, u: &[f64; 6]) -> [f64; 6] {
        std::array::from_fn(|k| self.components[k].eval(u, t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericState {
    pub t: f64,
    pub u: [f64; 6],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Completed,
    Blowup { t: f64 },
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<NumericState>,
    pub steps: usize,
    pub rejected: usize,
    /// Largest accepted scaled error estimate (at most 1).
    pub max_error_estimate: f64,
    pub outcome: Outcome,
}

impl Trajectory {
    pub fn last(&self) -> &NumericState {
        self.samples
            .last()
            .expect("trajectory holds the initial state")
    }

    pub fn is_blowup(&self) -> bool {
        matches!(self.outcome, Outcome::Blowup { .. })
    }

    /// Writes `t,x,y,z,w,q,p` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,x,y,z,w,q,p")?;
        for s in &self.samples {
            write!(out, "{:.16e}", s.t)?;
            for x in s.u {
                write!(out, ",{x:.16e}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub blowup_bound: f64,
    pub min_step: f64,
    pub max_steps: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            blowup_bound: 1e8,
            min_step: 1e-12,
            max_steps: 2_000_000,
        }
    }
}

impl IntegratorConfig {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        IntegratorConfig {
            rel_tol,
            abs_tol: rel_tol * 1e-2,
            ..Default::default()
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// fifth-order weights minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn norm_inf(u: &[f64; 6]) -> f64 {
    u.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn validate(t0: f64, t1: f64, config: &IntegratorConfig) -> Result<(), NumericError> {
    if !(config.rel_tol > 0.0 && config.abs_tol > 0.0) {
        return Err(NumericError::InvalidTolerance);
    }
    let ok = t0.is_finite()
        && t1.is_finite()
        && t0 != 0.0
        && t1 != 0.0
        && t0 != t1
        && t0.signum() == t1.signum();
    if ok {
        Ok(())
    } else {
        Err(NumericError::InvalidSpan { t0, t1 })
    }
}

/// Integrates from `initial` to `t_end`, landing exactly on every time in
/// `stops` (which must lie in the span, ordered in the direction of travel).
/// Returns the trajectory of accepted steps and the states at the stops
/// reached.
pub fn integrate_with_stops(
    field: &CompiledField,
    initial: NumericState,
    t_end: f64,
    stops: &[f64],
    config: &IntegratorConfig,
) -> Result<(Trajectory, Vec<NumericState>), NumericError> {
    validate(initial.t, t_end, config)?;
    let dir = (t_end - initial.t).signum();
    let span = (t_end - initial.t).abs();
    let mut t = initial.t;
    let mut u = initial.u;
    let mut samples = vec![initial];
    let mut at_stops = Vec::with_capacity(stops.len());
    let mut stop_iter = stops.iter().copied().peekable();
    while let Some(&s) = stop_iter.peek() {
        if s == t {
            at_stops.push(initial);
            stop_iter.next();
        } else {
            break;
        }
    }
    let (mut steps, mut rejected) = (0usize, 0usize);
    let mut max_err: f64 = 0.0;

    let mut k: [[f64; 6]; 7] = [[0.0; 6]; 7];
    k[0] = field.eval(t, &u);
    let d0 = norm_inf(&u);
    let d1 = norm_inf(&k[0]);
    let mut h = if d0 > 1e-5 && d1 > 1e-5 {
        0.01 * d0 / d1
    } else {
        1e-4
    };
    h = h.min(span).max(config.min_step);

    let blowup = |t: f64, samples: Vec<NumericState>, at_stops, steps, rejected, max_err| {
        Ok((
            Trajectory {
                samples,
                steps,
                rejected,
                max_error_estimate: max_err,
                outcome: Outcome::Blowup { t },
            },
            at_stops,
        ))
    };

    while (t_end - t) * dir > 0.0 {
        if steps + rejected >= config.max_steps || h < config.min_step {
            return blowup(t, samples, at_stops, steps, rejected, max_err);
        }
        let target = stop_iter.peek().copied().unwrap_or(t_end);
        let remaining = (target - t).abs();
        let (step, lands) = if h >= remaining {
            (remaining, true)
        } else {
            (h, false)
        };
        let hs = step * dir;

        for s in 1..7 {
            let mut y = u;
            for j in 0..s {
                if A[s][j] != 0.0 {
                    for (yi, kj) in y.iter_mut().zip(k[j].iter()) {
                        *yi += hs * A[s][j] * kj;
                    }
                }
            }
            k[s] = field.eval(t + C[s] * hs, &y);
        }
        let mut y5 = u;
        for j in 0..6 {
            for (yi, kj) in y5.iter_mut().zip(k[j].iter()) {
                *yi += hs * A[6][j] * kj;
            }
        }
        let mut err_sq = 0.0;
        for i in 0..6 {
            let e: f64 = (0..7).map(|j| E[j] * k[j][i]).sum::<f64>() * hs;
            let sc = config.abs_tol + config.rel_tol * u[i].abs().max(y5[i].abs());
            err_sq += (e / sc).powi(2);
        }
        let err = (err_sq / 6.0).sqrt();
        let finite = err.is_finite() && y5.iter().all(|x| x.is_finite());
        if finite && err <= 1.0 {
            steps += 1;
            max_err = max_err.max(err);
            t = if lands { target } else { t + hs };
            u = y5;
            let state = NumericState { t, u };
            samples.push(state);
            if lands && stop_iter.peek().is_some() {
                at_stops.push(state);
                stop_iter.next();
            }
            if norm_inf(&u) > config.blowup_bound {
                return blowup(t, samples, at_stops, steps, rejected, max_err);
            }
            k[0] = k[6];
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            // a step clamped to a stop says nothing about the natural size
            h = if lands { h.max(step * fac) } else { step * fac };
        } else {
            rejected += 1;
            let fac = if finite {
                (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
            } else {
                0.25
            };
            h = step * fac;
        }
    }
    Ok((
        Trajectory {
            samples,
            steps,
            rejected,
            max_error_estimate: max_err,
            outcome: Outcome::Completed,
        },
        at_stops,
    ))
}

pub fn integrate(
    field: &CompiledField,
    initial: NumericState,
    t_end: f64,
    config: &IntegratorConfig,
) -> Result<Trajectory, NumericError> {
    integrate_with_stops(field, initial, t_end, &[], config).map(|(tr, _)| tr)
}

/// States at each of `times` (the first may equal the initial time).
pub fn integrate_to_times(
    field: &CompiledField,
    initial: NumericState,
    times: &[f64],
    config: &IntegratorConfig,
) -> Result<Vec<NumericState>, NumericError> {
    let t_end = *times.last().expect("at least one time");
    let (traj, at) = integrate_with_stops(field, initial, t_end, times, config)?;
    if let Outcome::Blowup { t } = traj.outcome {
        return Err(NumericError::Blowup { t });
    }
    Ok(at)
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect()
}

fn rel_dev(a: &[f64; 6], b: &[f64; 6]) -> f64 {
    let diff: [f64; 6] = std::array::from_fn(|k| a[k] - b[k]);
    norm_inf(&diff) / norm_inf(b).max(f64::MIN_POSITIVE)
}

/// Compiled map of phase coordinates at fixed numeric parameters.
pub struct CompiledMap {
    images: Vec<CompiledRational>,
}

impl CompiledMap {
    pub fn new(map: &BirationalMap, params: &Parameters) -> Result<Self, NumericError> {
        let images = map
            .images
            .iter()
            .map(|r| CompiledRational::compile(r, params))
            .collect::<Result<_, _>>()?;
        Ok(CompiledMap { images })
    }

    /// Image of a state; errors when a denominator is (numerically) zero.
    pub fn apply(&self, s: &NumericState) -> Result<[f64; 6], NumericError> {
        let mut out = [0.0; 6];
        for (o, img) in out.iter_mut().zip(&self.images) {
            let (val, den) = img.eval(&s.u, s.t);
            if den.abs() <= 1e-8 * img.den.magnitude(&s.u, s.t).max(1.0) || !val.is_finite() {
                return Err(NumericError::PoleEncountered { t: s.t });
            }
            *o = val;
        }
        Ok(out)
    }
}

/// Largest relative deviation between `map` applied along a trajectory and
/// the trajectory of the image system started at the image point.
pub fn backlund_numeric_deviation(
    map: &BirationalMap,
    params: &Parameters,
    initial: [f64; 6],
    t_span: (f64, f64),
    samples: usize,
    config: &IntegratorConfig,
) -> Result<f64, NumericError> {
    let sys = HamiltonianSystem::d42();
    let times = linspace(t_span.0, t_span.1, samples);
    let field = CompiledField::new(&sys, params)?;
    let start = NumericState {
        t: t_span.0,
        u: initial,
    };
    let orig = integrate_to_times(&field, start, &times, config)?;

    let image_params = Parameters::new(map.params.apply(params.alpha()))
        .expect("parameter actions preserve the sum");
    let compiled = CompiledMap::new(map, params)?;
    let image_start = NumericState {
        t: t_span.0,
        u: compiled.apply(&start)?,
    };
    let image_field = CompiledField::new(&sys, &image_params)?;
    let image = integrate_to_times(&image_field, image_start, &times, config)?;

    let mut worst: f64 = 0.0;
    for (a, b) in orig.iter().zip(&image) {
        worst = worst.max(rel_dev(&compiled.apply(a)?, &b.u));
    }
    Ok(worst)
}

/// [`backlund_numeric_deviation`] for `s_i`, resampling initial data (from
/// `seed`) until the run is pole-free and bounded.
pub fn backlund_numeric_check(
    i: usize,
    seed: u64,
    t_span: (f64, f64),
    config: &IntegratorConfig,
) -> Result<f64, NumericError> {
    let mut sampler = ExactSampler::new(seed);
    let map = generator(i);
    let mut last = NumericError::InvalidTolerance;
    for _ in 0..50 {
        let params = sampler.small_parameters();
        let initial: [f64; 6] = std::array::from_fn(|_| sampler.uniform(-0.5, 0.5));
        match backlund_numeric_deviation(&map, &params, initial, t_span, 10, config) {
            Ok(d) => return Ok(d),
            Err(e @ (NumericError::PoleEncountered { .. } | NumericError::Blowup { .. })) => {
                last = e
            }
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

/// `max |Q(t) - Q(t0)| / |Q(t0)|` along a trajectory.
pub fn quantity_drift(
    quantity: &Polynomial,
    params: &Parameters,
    trajectory: &[NumericState],
) -> Result<f64, NumericError> {
    let q = CompiledPolynomial::compile(
        &quantity
            .specialize(&params.assignment())
            .map_err(|e| NumericError::Unspecialized(e.to_string()))?,
    )?;
    let first = trajectory.first().expect("nonempty trajectory");
    let q0 = q.eval(&first.u, first.t);
    let worst = trajectory
        .iter()
        .map(|s| (q.eval(&s.u, s.t) - q0).abs())
        .fold(0.0, f64::max);
    if q0 == 0.0 {
        Ok(worst)
    } else {
        Ok(worst / q0.abs())
    }
}

/// Drift of `I = 4 t K2~` along a generic `K2~` trajectory on `[1, 2]`.
pub fn first_integral_numeric_check(
    seed: u64,
    config: &IntegratorConfig,
) -> Result<f64, NumericError> {
    let mut sampler = ExactSampler::new(seed);
    let sys = crate::principal::k2_tilde_system();
    let i = crate::principal::first_integral_i();
    let mut last = NumericError::InvalidTolerance;
    for _ in 0..50 {
        let params = sampler.small_parameters();
        let mut u = [0.0; 6];
        u[Var::Z.index()] = sampler.uniform(-1.0, 1.0);
        u[Var::W.index()] = sampler.uniform(-1.0, 1.0);
        let field = CompiledField::new(&sys, &params)?;
        let traj = integrate(&field, NumericState { t: 1.0, u }, 2.0, config)?;
        if let Outcome::Blowup { t } = traj.outcome {
            last = NumericError::Blowup { t };
            continue;
        }
        return quantity_drift(&i, &params, &traj.samples);
    }
    Err(last)
}

/// Drift of `H` along a generic full trajectory on `[1, 2]`.
pub fn hamiltonian_numeric_drift(
    seed: u64,
    config: &IntegratorConfig,
) -> Result<f64, NumericError> {
    let mut sampler = ExactSampler::new(seed);
    let sys = HamiltonianSystem::d42();
    let mut last = NumericError::InvalidTolerance;
    for _ in 0..50 {
        let params = sampler.small_parameters();
        let u: [f64; 6] = std::array::from_fn(|_| sampler.uniform(-0.5, 0.5));
        let field = CompiledField::new(&sys, &params)?;
        let traj = integrate(&field, NumericState { t: 1.0, u }, 2.0, config)?;
        if let Outcome::Blowup { t } = traj.outcome {
            last = NumericError::Blowup { t };
            continue;
        }
        return quantity_drift(sys.hamiltonian(), &params, &traj.samples);
    }
    Err(last)
}

/// Parameters with `alpha_i = 0` (compensated in `alpha0`, or in `alpha1`
/// when `i = 0`).
pub fn parameters_on_locus(i: usize, sampler: &mut ExactSampler) -> Parameters {
    let mut alpha = sampler.small_parameters().alpha().clone();
    alpha[i] = Scalar::zero();
    let fix = if i == 0 { 1 } else { 0 };
    let others: Scalar = (0..4).filter(|&k| k != fix).map(|k| alpha[k].clone()).sum();
    alpha[fix] = Scalar::from_integer(1.into()) - others;
    Parameters::new(alpha).expect("sum fixed")
}

/// Initial data on `f_i = 0` by solving for the divisor's linear variable.
pub fn point_on_divisor(i: usize, u: [f64; 6], t: f64) -> [f64; 6] {
    let mut u = u;
    let (x, y, z, q, p) = (u[0], u[1], u[2], u[4], u[5]);
    match i {
        0 => u[1] = -z * z / 4.0,
        1 => u[3] = 0.0,
        2 => u[3] = -(p + y / 2.0 + x * z / 2.0 - z * q / 4.0 + t),
        3 => u[5] = 0.0,
        _ => panic!("divisor index {i} outside 0..=3"),
    }
    u
}

/// `max |f_i|` over `[1, 2]` for a trajectory started on `f_i = 0` with
/// `alpha_i = 0`.
pub fn divisor_numeric_check(
    i: usize,
    seed: u64,
    config: &IntegratorConfig,
) -> Result<f64, NumericError> {
    let mut sampler = ExactSampler::new(seed);
    let sys = HamiltonianSystem::d42();
    let f = CompiledPolynomial::compile(&divisor_polynomial(i))?;
    let mut last = NumericError::InvalidTolerance;
    for _ in 0..50 {
        let params = parameters_on_locus(i, &mut sampler);
        let u = point_on_divisor(i, std::array::from_fn(|_| sampler.uniform(-0.5, 0.5)), 1.0);
        let field = CompiledField::new(&sys, &params)?;
        let traj = integrate(&field, NumericState { t: 1.0, u }, 2.0, config)?;
        if let Outcome::Blowup { t } = traj.outcome {
            last = NumericError::Blowup { t };
            continue;
        }
        return Ok(traj
            .samples
            .iter()
            .map(|s| f.eval(&s.u, s.t).abs())
            .fold(0.0, f64::max));
    }
    Err(last)
}

fn subsystem_state(part: PrincipalPart, a: f64, b: f64) -> [f64; 6] {
    let (va, vb) = part.pair();
    let mut u = [0.0; 6];
    u[va.index()] = a;
    u[vb.index()] = b;
    u
}

fn specialized_pair(
    solution: &(ExpSum, ExpSum),
    params: &Parameters,
    c1: &Scalar,
    c2: &Scalar,
) -> Result<[Vec<(Scalar, Scalar)>; 2], NumericError> {
    Ok([
        solution.0.specialize(params, c1, c2)?,
        solution.1.specialize(params, c1, c2)?,
    ])
}

/// Largest relative deviation on `times` between the integrated subsystem
/// and its closed form.
pub fn closed_form_numeric_deviation(
    part: PrincipalPart,
    solution: &(ExpSum, ExpSum),
    params: &Parameters,
    constants: (&Scalar, &Scalar),
    times: &[f64],
    config: &IntegratorConfig,
) -> Result<f64, NumericError> {
    let spec = specialized_pair(solution, params, constants.0, constants.1)?;
    let exact = |t: f64| {
        subsystem_state(
            part,
            ExpSum::evaluate_specialized(&spec[0], t),
            ExpSum::evaluate_specialized(&spec[1], t),
        )
    };
    let field = CompiledField::new(&part.system(), params)?;
    let start = NumericState {
        t: times[0],
        u: exact(times[0]),
    };
    let states = integrate_to_times(&field, start, times, config)?;
    Ok(states
        .iter()
        .map(|s| rel_dev(&s.u, &exact(s.t)))
        .fold(0.0, f64::max))
}

/// Largest relative residual of the subsystem equations evaluated on the
/// closed form in floating point.
pub fn closed_form_ode_residual(
    part: PrincipalPart,
    solution: &(ExpSum, ExpSum),
    params: &Parameters,
    constants: (&Scalar, &Scalar),
    times: &[f64],
) -> Result<f64, NumericError> {
    let spec = specialized_pair(solution, params, constants.0, constants.1)?;
    let deriv = specialized_pair(
        &(solution.0.derivative(), solution.1.derivative()),
        params,
        constants.0,
        constants.1,
    )?;
    let field = CompiledField::new(&part.system(), params)?;
    let (va, vb) = part.pair();
    let mut worst: f64 = 0.0;
    for &t in times {
        let u = subsystem_state(
            part,
            ExpSum::evaluate_specialized(&spec[0], t),
            ExpSum::evaluate_specialized(&spec[1], t),
        );
        let lhs = [
            ExpSum::evaluate_specialized(&deriv[0], t),
            ExpSum::evaluate_specialized(&deriv[1], t),
        ];
        for (l, var) in lhs.iter().zip([va, vb]) {
            let comp = &field.components[var.index()];
            let rhs = comp.eval(&u, t);
            let scale = comp.magnitude(&u, t).max(l.abs()).max(f64::MIN_POSITIVE);
            worst = worst.max((l - rhs).abs() / scale);
        }
    }
    Ok(worst)
}

/// Largest relative gap between compiled and exact evaluation of the vector
/// field at random rational points, measured against the sum of absolute
/// term values.
pub fn compiled_agreement(samples: usize, seed: u64) -> Result<f64, NumericError> {
    let mut sampler = ExactSampler::new(seed);
    let sys = HamiltonianSystem::d42();
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let params = sampler.generic_parameters();
        let exact_field = sys.specialize(&params).equations_of_motion();
        let field = CompiledField::new(&sys, &params)?;
        let point = sampler.phase_point();
        let t = sampler.time();
        let mut a = crate::algebra::Assignment::new();
        for (v, s) in Var::PHASE.iter().zip(&point) {
            a.insert(*v, s.clone());
        }
        a.insert(Var::T, t.clone());
        let u = point.clone().map(|s| to_f64(&s));
        let tf = to_f64(&t);
        for k in 0..6 {
            let exact = to_f64(
                &exact_field.components[k]
                    .evaluate(&a)
                    .map_err(|e| NumericError::Unspecialized(e.to_string()))?,
            );
            let got = field.components[k].eval(&u, tf);
            let scale = field.components[k].magnitude(&u, tf).max(f64::MIN_POSITIVE);
            worst = worst.max((got - exact).abs() / scale);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, ratio};
    use crate::principal::k1_solution;

    fn k1_field(params: &Parameters) -> CompiledField {
        CompiledField::new(&PrincipalPart::K1.system(), params).unwrap()
    }

    #[test]
    fn exponential_decay_is_accurate() {
        // K = -x y / t  gives  x' = -x / t, so x = x0 / t
        let h =
            -(Polynomial::var(Var::X) * Polynomial::var(Var::Y) * Polynomial::var_pow(Var::T, -1));
        let sys = HamiltonianSystem::with_active(h, vec![Var::X, Var::Y]);
        let params = Parameters::from_tail(int(0), int(0), int(0));
        let field = CompiledField::new(&sys, &params).unwrap();
        let mut u = [0.0; 6];
        u[0] = 3.0;
        let traj = integrate(
            &field,
            NumericState { t: 1.0, u },
            4.0,
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert_eq!(traj.outcome, Outcome::Completed);
        assert!((traj.last().u[0] - 0.75).abs() < 1e-11);
        assert!(traj.samples.windows(2).all(|w| w[1].t > w[0].t));
        assert_eq!(traj.last().t, 4.0);
    }

    #[test]
    fn equilibrium_stays_put() {
        let params = Parameters::from_tail(ratio(1, 3), ratio(1, 5), ratio(1, 7));
        let traj = integrate(
            &k1_field(&params),
            NumericState {
                t: 1.0,
                u: [0.0; 6],
            },
            2.0,
            &IntegratorConfig::default(),
        )
        .unwrap();
        // x' = 3 y (y + 4t) / (4t) - ... vanishes at x = y = 0
        assert!(traj.samples.iter().all(|s| s.u == [0.0; 6]));
    }

    #[test]
    fn invalid_spans_are_rejected() {
        let params = Parameters::from_tail(ratio(1, 3), ratio(1, 5), ratio(1, 7));
        let f = k1_field(&params);
        let s = NumericState {
            t: -1.0,
            u: [0.0; 6],
        };
        assert!(matches!(
            integrate(&f, s, 1.0, &IntegratorConfig::default()),
            Err(NumericError::InvalidSpan { .. })
        ));
        let s = NumericState {
            t: 1.0,
            u: [0.0; 6],
        };
        assert!(integrate(&f, s, 1.0, &IntegratorConfig::default()).is_err());
        assert!(matches!(
            integrate(
                &f,
                s,
                2.0,
                &IntegratorConfig {
                    rel_tol: 0.0,
                    ..Default::default()
                }
            ),
            Err(NumericError::InvalidTolerance)
        ));
    }

    #[test]
    fn riccati_blowup_is_reported() {
        // K = -x y^2 gives y' = y^2, which blows up at t = 1 + 1/y0
        let h = -(Polynomial::var(Var::X) * Polynomial::var(Var::Y).pow_u(2));
        let sys = HamiltonianSystem::with_active(h, vec![Var::X, Var::Y]);
        let params = Parameters::from_tail(int(0), int(0), int(0));
        let field = CompiledField::new(&sys, &params).unwrap();
        let mut u = [0.0; 6];
        u[1] = 2.0;
        let traj = integrate(
            &field,
            NumericState { t: 1.0, u },
            3.0,
            &IntegratorConfig::default(),
        )
        .unwrap();
        // y' = -dK/dx = y^2
        match traj.outcome {
            Outcome::Blowup { t } => assert!((t - 1.5).abs() < 1e-3, "{t}"),
            Outcome::Completed => panic!("expected blowup"),
        }
    }

    #[test]
    fn k1_matches_closed_form() {
        let params = Parameters::from_tail(ratio(1, 3), ratio(1, 5), ratio(1, 7));
        let times = linspace(1.0, 2.0, 10);
        let dev = closed_form_numeric_deviation(
            PrincipalPart::K1,
            &k1_solution(),
            &params,
            (&ratio(1, 2), &ratio(-1, 3)),
            &times,
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert!(dev < 1e-8, "{dev}");
        let res = closed_form_ode_residual(
            PrincipalPart::K1,
            &k1_solution(),
            &params,
            (&ratio(1, 2), &ratio(-1, 3)),
            &times,
        )
        .unwrap();
        assert!(res < 1e-10, "{res}");
    }

    #[test]
    fn tighter_tolerance_reduces_error() {
        let params = Parameters::from_tail(ratio(1, 3), ratio(1, 5), ratio(1, 7));
        let times = linspace(1.0, 2.0, 4);
        let run = |tol| {
            closed_form_numeric_deviation(
                PrincipalPart::K1,
                &k1_solution(),
                &params,
                (&ratio(1, 2), &ratio(-1, 3)),
                &times,
                &IntegratorConfig::with_rel_tol(tol),
            )
            .unwrap()
        };
        assert!(run(1e-10) < run(1e-6));
    }

    #[test]
    fn compiled_field_agrees_with_exact() {
        assert!(compiled_agreement(20, 3).unwrap() < 1e-13);
    }

    #[test]
    fn csv_format() {
        let traj = Trajectory {
            samples: vec![NumericState {
                t: 1.0,
                u: [0.1, 0.0, 0.0, 0.0, 0.0, -2.5],
            }],
            steps: 0,
            rejected: 0,
            max_error_estimate: 0.0,
            outcome: Outcome::Completed,
        };
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let s = String::from_utf8(buf).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("t,x,y,z,w,q,p"));
        let row = lines.next().unwrap();
        assert!(row.starts_with("1.0000000000000000e0,1.0000000000000001e-1,"));
        assert_eq!(row.split(',').count(), 7);
    }

    #[test]
    fn identity_map_has_no_deviation() {
        let params = Parameters::from_tail(ratio(1, 3), ratio(1, 5), ratio(1, 7));
        let d = backlund_numeric_deviation(
            &BirationalMap::identity(),
            &params,
            [0.1, -0.2, 0.3, 0.1, -0.1, 0.2],
            (1.0, 2.0),
            5,
            &IntegratorConfig::default(),
        )
        .unwrap();
        assert_eq!(d, 0.0);
    }
}
