//! Polynomiality of Hamiltonians in the four charts `r0..r3` and the
//! degree-4 characterization of the admissible family
//! `H + sum_k a_k (y + 2p)^k`.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{
    c, frac, ratio, solve_affine, v, AffineSolution, Assignment, Bindings, Monomial, Polynomial,
    RationalExpr, Scalar, SparseRow, Var,
};
use crate::hamiltonian::{
    eliminate_alpha0_poly, hamiltonian_h, monomials_up_to, HamiltonianSystem, Parameters,
};
use crate::sampling::ExactSampler;

/// `num / s^shift` for a single chart variable `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartLaurent {
    pub num: Polynomial,
    pub shift: u32,
    pub var: Var,
}

impl ChartLaurent {
    fn polynomial(num: Polynomial, var: Var) -> Self {
        ChartLaurent { num, shift: 0, var }
    }

    fn inverse_power(var: Var, shift: u32) -> Self {
        ChartLaurent {
            num: Polynomial::one(),
            shift,
            var,
        }
    }

    fn lift(&self, shift: u32) -> Polynomial {
        &self.num * &Polynomial::var_pow(self.var, (shift - self.shift) as i32)
    }

    pub fn add(&self, other: &ChartLaurent) -> ChartLaurent {
        let shift = self.shift.max(other.shift);
        ChartLaurent {
            num: &self.lift(shift) + &other.lift(shift),
            shift,
            var: self.var,
        }
    }

    pub fn mul(&self, other: &ChartLaurent) -> ChartLaurent {
        ChartLaurent {
            num: &self.num * &other.num,
            shift: self.shift + other.shift,
            var: self.var,
        }
    }

    pub fn pow_u(&self, e: u32) -> ChartLaurent {
        ChartLaurent {
            num: self.num.pow_u(e),
            shift: self.shift * e,
            var: self.var,
        }
    }

    fn map_num(&self, f: impl Fn(&Polynomial) -> Polynomial) -> ChartLaurent {
        ChartLaurent {
            num: f(&self.num),
            shift: self.shift,
            var: self.var,
        }
    }

    /// Terms with a negative power of the chart variable, each keyed by its
    /// true (possibly negative) exponent vector.
    pub fn negative_terms(&self) -> Vec<(Monomial, Scalar)> {
        let s = self.shift as i32;
        self.num
            .terms()
            .iter()
            .filter(|(m, _)| m.exp(self.var) < s)
            .map(|(m, c)| (m.with_exp(self.var, m.exp(self.var) - s), c.clone()))
            .collect()
    }

    /// The negative part as a rational expression.
    pub fn negative_part(&self) -> RationalExpr {
        let s = self.shift as i32;
        let num = Polynomial::from_terms(
            self.num
                .terms()
                .iter()
                .filter(|(m, _)| m.exp(self.var) < s)
                .cloned(),
        );
        crate::algebra::frac(num, Polynomial::var_pow(self.var, s))
    }

    pub fn to_rational(&self) -> RationalExpr {
        crate::algebra::frac(
            self.num.clone(),
            Polynomial::var_pow(self.var, self.shift as i32),
        )
    }
}

/// Chart `r_i`.  Chart coordinates reuse the slots of `x, y, z, w, q, p`.
#[derive(Debug, Clone)]
pub struct Chart {
    pub index: usize,
    /// Chart coordinates in terms of the original ones.
    pub forward: [RationalExpr; 6],
    /// Original coordinates as Laurent polynomials in the chart ones.
    pub inverse: [ChartLaurent; 6],
    /// The variable whose negative powers may appear.
    pub singular: Var,
}

pub fn chart(i: usize) -> Chart {
    let (x, y, z, w, q, p, t) = (
        v(Var::X),
        v(Var::Y),
        v(Var::Z),
        v(Var::W),
        v(Var::Q),
        v(Var::P),
        v(Var::T),
    );
    let a = v(Var::alpha(i));
    let r = |p: &Polynomial| RationalExpr::from(p.clone());
    let inv = |var: Var| frac(Polynomial::one(), v(var));
    let mut forward = Var::PHASE.map(RationalExpr::var);
    let singular = [Var::X, Var::Z, Var::Z, Var::Q][i];
    let lp = |p: Polynomial| ChartLaurent::polynomial(p, singular);
    let s_inv = ChartLaurent::inverse_power(singular, 1);
    let mut inverse = Var::PHASE.map(|var| lp(v(var)));
    match i {
        0 => {
            let f0 = &y + &(c(1, 4) * z.pow_u(2));
            forward[0] = inv(Var::X);
            forward[1] = r(&-((&f0 * &x + &a) * &x));
            forward[3] = r(&(&w + &(c(1, 2) * &x * &z)));
            inverse[0] = s_inv.clone();
            inverse[1] = lp(-(&y * x.pow_u(2)) - &a * &x - c(1, 4) * z.pow_u(2));
            inverse[3] = lp(w.clone()).add(&s_inv.map_num(|n| n * &(c(-1, 2) * &z)));
        }
        1 => {
            forward[2] = inv(Var::Z);
            forward[3] = r(&-((&w * &z + &a) * &z));
            inverse[2] = s_inv.clone();
            inverse[3] = lp(-((&w * &z + &a) * &z));
        }
        2 => {
            let f2 = crate::weyl::divisor_polynomial(2);
            forward = [
                r(&(&x - &(c(1, 2) * &z))),
                r(&(&y + &(c(1, 4) * z.pow_u(2)))),
                inv(Var::Z),
                r(&-((&f2 * &z + &a) * &z)),
                r(&(&q - &z)),
                r(&(&p - &(c(1, 8) * z.pow_u(2)))),
            ];
            let scaled = |k: Scalar, e: u32| {
                ChartLaurent::inverse_power(singular, e).map_num(|n| n.scale(&k))
            };
            let xo = lp(x.clone()).add(&scaled(ratio(1, 2), 1));
            let yo = lp(y.clone()).add(&scaled(ratio(-1, 4), 2));
            let qo = lp(q.clone()).add(&s_inv);
            let po = lp(p.clone()).add(&scaled(ratio(1, 8), 2));
            let f2o = lp(-(&w * z.pow_u(2)) - &a * &z);
            let half = |e: &ChartLaurent, k: (i64, i64)| e.map_num(|n| &c(k.0, k.1) * n);
            let wo = f2o
                .add(&half(&po, (-1, 1)))
                .add(&half(&yo, (-1, 2)))
                .add(&half(&xo.mul(&s_inv), (-1, 2)))
                .add(&half(&s_inv.mul(&qo), (1, 4)))
                .add(&lp(-t));
            inverse = [xo, yo, s_inv.clone(), wo, qo, po];
        }
        3 => {
            forward[4] = inv(Var::Q);
            forward[5] = r(&-((&p * &q + &a) * &q));
            inverse[4] = s_inv.clone();
            inverse[5] = lp(-((&p * &q + &a) * &q));
        }
        _ => panic!("chart index {i} outside 0..=3"),
    }
    Chart {
        index: i,
        forward,
        inverse,
        singular,
    }
}

impl Chart {
    /// The function that must become polynomial: `K`, or `K - z` in chart 2.
    pub fn adjusted(&self, k: &Polynomial) -> Polynomial {
        if self.index == 2 {
            k - &v(Var::Z)
        } else {
            k.clone()
        }
    }

    fn inverse_bindings(&self) -> Bindings {
        Var::PHASE
            .iter()
            .zip(&self.inverse)
            .map(|(v, p)| (*v, p.to_rational()))
            .collect()
    }

    fn forward_bindings(&self) -> Bindings {
        Var::PHASE
            .iter()
            .zip(&self.forward)
            .map(|(v, p)| (*v, p.clone()))
            .collect()
    }

    /// Both compositions of `forward` and `inverse` are the identity.
    pub fn round_trip(&self) -> bool {
        let inv = self.inverse_bindings();
        let fwd = self.forward_bindings();
        Var::PHASE.iter().enumerate().all(|(k, var)| {
            let id = RationalExpr::var(*var);
            let a = self.forward[k].substitute(&inv).ok();
            let b = self.inverse[k].to_rational().substitute(&fwd).ok();
            a.as_ref() == Some(&id) && b.as_ref() == Some(&id)
        })
    }

    /// A polynomial in the original variables rewritten in chart
    /// coordinates, with `alpha0` eliminated.
    pub fn pull_back(&self, k: &Polynomial) -> ChartLaurent {
        laurent_compose(k, &self.inverse).map_num(eliminate_alpha0_poly)
    }
}

/// Substitutes chart expressions for the phase variables.
fn laurent_compose(k: &Polynomial, images: &[ChartLaurent; 6]) -> ChartLaurent {
    let var = images[0].var;
    let mut cache: HashMap<(usize, i32), ChartLaurent> = HashMap::new();
    let mut out = ChartLaurent::polynomial(Polynomial::zero(), var);
    for (m, coef) in k.terms() {
        let mut acc = ChartLaurent::polynomial(
            Polynomial::term(coef.clone(), m.restrict_to(|var| !var.is_phase())),
            var,
        );
        for (v, e) in m.vars() {
            if !v.is_phase() {
                continue;
            }
            let idx = v.index();
            let pw = cache
                .entry((idx, e))
                .or_insert_with(|| images[idx].pow_u(e as u32));
            acc = acc.mul(pw);
        }
        out = out.add(&acc);
    }
    out
}

/// Outcome of a polynomiality test in one chart.
#[derive(Debug, Clone)]
pub struct HolomorphyReport {
    pub chart: usize,
    /// Terms of the chart expression with a negative power of the chart's
    /// singular variable.
    pub offending: RationalExpr,
}

impl HolomorphyReport {
    pub fn holds(&self) -> bool {
        self.offending.is_zero()
    }
}

/// Tests `K` (with the chart-2 adjustment) for polynomiality in chart `i`.
pub fn check_holomorphy(k: &Polynomial, i: usize) -> HolomorphyReport {
    let ch = chart(i);
    HolomorphyReport {
        chart: i,
        offending: ch.pull_back(&ch.adjusted(k)).negative_part(),
    }
}

/// The same test without the chart-2 adjustment.
pub fn check_holomorphy_unadjusted(k: &Polynomial, i: usize) -> HolomorphyReport {
    HolomorphyReport {
        chart: i,
        offending: chart(i).pull_back(k).negative_part(),
    }
}

/// `H + sum_{k=1..4} a_k (y + 2p)^k` with symbolic `a_k`.
#[derive(Debug, Clone)]
pub struct AnsatzFamily {
    pub base: Polynomial,
    pub directions: [Polynomial; 4],
}

impl AnsatzFamily {
    pub fn new() -> Self {
        AnsatzFamily {
            base: hamiltonian_h(),
            directions: std::array::from_fn(|k| direction(k as u32 + 1)),
        }
    }

    pub fn symbolic_member(&self) -> Polynomial {
        self.directions
            .iter()
            .enumerate()
            .fold(self.base.clone(), |acc, (k, d)| {
                acc + d * &v(Var::ansatz(k + 1))
            })
    }

    pub fn member(&self, coefficients: &[Scalar; 4]) -> Polynomial {
        self.directions
            .iter()
            .zip(coefficients)
            .fold(self.base.clone(), |acc, (d, a)| acc + d.scale(a))
    }
}

impl Default for AnsatzFamily {
    fn default() -> Self {
        Self::new()
    }
}

/// `(y + 2p)^k`.
pub fn direction(k: u32) -> Polynomial {
    (v(Var::Y) + c(2, 1) * v(Var::P)).pow_u(k)
}

/// `d/dt (y + 2p)` under the symbolic family member.
pub fn y_plus_2p_derivative() -> Polynomial {
    HamiltonianSystem::new(AnsatzFamily::new().symbolic_member())
        .total_time_derivative(&direction(1))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("the chart constraints are inconsistent")]
pub struct AnsatzInconsistent;

/// Exact solution set of the chart constraints on degree-4 polynomials at a
/// fixed `(t0, alpha)`.
#[derive(Debug, Clone)]
pub struct AnsatzSolution {
    pub t0: Scalar,
    pub params: Parameters,
    pub monomials: Vec<Monomial>,
    pub constraints: Vec<(SparseRow, Scalar)>,
    pub solution: AffineSolution,
    pub contains_h: bool,
    /// Whether `H + (y+2p)^k` solves the constraints, `k = 1..4`.
    pub contains_direction: [bool; 4],
    pub contains_constant: bool,
    /// Kernel dimension.
    pub dimension: usize,
    /// Whether the constant and the four directions span the kernel.
    pub family_spans_kernel: bool,
}

impl AnsatzSolution {
    /// Whether a polynomial (specialized, degree <= 4) satisfies every
    /// constraint.
    pub fn satisfies(&self, g: &Polynomial, homogeneous: bool) -> bool {
        let index: BTreeMap<Monomial, usize> = self
            .monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (*m, i))
            .collect();
        let mut coeffs = vec![Scalar::zero(); self.monomials.len()];
        for (m, c) in g.terms() {
            match index.get(m) {
                Some(&i) => coeffs[i] = c.clone(),
                None => return false,
            }
        }
        self.constraints.iter().all(|(row, rhs)| {
            let lhs = row.dot(&coeffs);
            if homogeneous {
                lhs.is_zero()
            } else {
                lhs == *rhs
            }
        })
    }
}

fn specialize_with_t(p: &Polynomial, t0: &Scalar, params: &Parameters) -> Polynomial {
    let mut a = params.assignment();
    a.insert(Var::T, t0.clone());
    p.specialize(&a).expect("t0 is nonzero")
}

pub fn ansatz_solve(
    t0: &Scalar,
    params: &Parameters,
) -> Result<AnsatzSolution, AnsatzInconsistent> {
    assert!(!t0.is_zero(), "t0 must be nonzero");
    let monomials = monomials_up_to(&Var::PHASE, 4);
    let mut constraints = Vec::new();
    for i in 0..4 {
        let ch = chart(i);
        let inverse = ch
            .inverse
            .clone()
            .map(|e| e.map_num(|p| specialize_with_t(p, t0, params)));
        let mut rows: BTreeMap<Monomial, SparseRow> = BTreeMap::new();
        for (col, m) in monomials.iter().enumerate() {
            let image = laurent_compose(&Polynomial::term(Scalar::one(), *m), &inverse);
            for (mu, coef) in image.negative_terms() {
                rows.entry(mu).or_default().push(col, coef);
            }
        }
        let rhs: BTreeMap<Monomial, Scalar> = if i == 2 {
            laurent_compose(&v(Var::Z), &inverse)
                .negative_terms()
                .into_iter()
                .collect()
        } else {
            BTreeMap::new()
        };
        for mu in rhs.keys() {
            rows.entry(*mu).or_default();
        }
        for (mu, row) in rows {
            let b = rhs.get(&mu).cloned().unwrap_or_else(Scalar::zero);
            constraints.push((row, b));
        }
    }
    let solution = solve_affine(&constraints, monomials.len()).map_err(|_| AnsatzInconsistent)?;
    let h = specialize_with_t(&hamiltonian_h(), t0, params);
    let mut out = AnsatzSolution {
        t0: t0.clone(),
        params: params.clone(),
        monomials,
        constraints,
        dimension: solution.dimension(),
        solution,
        contains_h: false,
        contains_direction: [false; 4],
        contains_constant: false,
        family_spans_kernel: false,
    };
    out.contains_h = out.satisfies(&h, false);
    for k in 0..4 {
        out.contains_direction[k] = out.satisfies(&(&h + &direction(k as u32 + 1)), false);
    }
    out.contains_constant = out.satisfies(&Polynomial::one(), true);
    let family_in_kernel =
        out.contains_constant && (1..=4).all(|k| out.satisfies(&direction(k), true));
    // the five family vectors are independent (distinct top degrees), so
    // equal dimension means equal span
    out.family_spans_kernel = family_in_kernel && out.dimension == 5;
    Ok(out)
}

/// Runs [`ansatz_solve`] at `samples` random `(t0, alpha)` drawn from `seed`.
pub fn ansatz_sample_runs(
    samples: usize,
    seed: u64,
) -> Vec<Result<AnsatzSolution, AnsatzInconsistent>> {
    let mut sampler = ExactSampler::new(seed);
    (0..samples)
        .map(|_| {
            let t0 = sampler.nonzero_rational();
            let params = sampler.generic_parameters();
            ansatz_solve(&t0, &params)
        })
        .collect()
}

/// Convenience for reports: the specialization map used by a run.
pub fn run_assignment(run: &AnsatzSolution) -> Assignment {
    let mut a = run.params.assignment();
    a.insert(Var::T, run.t0.clone());
    a
}
