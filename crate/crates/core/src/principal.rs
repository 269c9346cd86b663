//! The three subsystems obtained by zeroing complementary blocks of `H`:
//! closed-form solutions for `K1` and `K3`, the time-dependent change of
//! variables for `K2`, and the first integral `I = 4 t K2~`.
//!
//! Solutions are sums `sum c_k t^(e_k)` with symbolic exponents that are
//! affine in the parameters; exponents are compared after `alpha0` has been
//! eliminated via the sum constraint.

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{
    c, frac, to_f64, v, AlgebraError, Assignment, Monomial, Polynomial, RationalExpr, Scalar, Var,
};
use crate::hamiltonian::{
    eliminate_alpha0, eliminate_alpha0_poly, HamiltonianSystem, Parameters, PoissonStructure,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PrincipalError {
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),
    #[error("exponent `{0}` is not affine in the parameters")]
    NotAffine(String),
}

/// An exponent `c + sum_i k_i alpha_i`, kept in `alpha0`-free normal form.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineForm(Polynomial);

impl AffineForm {
    pub fn new(p: Polynomial) -> Result<Self, PrincipalError> {
        let p = eliminate_alpha0_poly(&p);
        let ok = p
            .terms()
            .iter()
            .all(|(m, _)| m.degree() <= 1 && m.vars().all(|(v, _)| Var::ALPHA.contains(&v)));
        if ok {
            Ok(AffineForm(p))
        } else {
            Err(PrincipalError::NotAffine(p.to_string()))
        }
    }

    pub fn constant(n: Scalar) -> Self {
        AffineForm(Polynomial::constant(n))
    }

    pub fn polynomial(&self) -> &Polynomial {
        &self.0
    }

    fn add(&self, other: &AffineForm) -> AffineForm {
        AffineForm(&self.0 + &other.0)
    }

    fn shift(&self, by: i64) -> AffineForm {
        AffineForm(&self.0 + &Polynomial::int(by))
    }

    pub fn evaluate(&self, alpha: &Assignment) -> Result<Scalar, AlgebraError> {
        self.0.evaluate(alpha)
    }
}

impl fmt::Display for AffineForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite sum `sum c t^e`.  Coefficients are rational functions of
/// `C1, C2` and the parameters; exponents are [`AffineForm`]s.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExpSum {
    terms: Vec<(RationalExpr, AffineForm)>,
}

impl ExpSum {
    pub fn zero() -> Self {
        ExpSum::default()
    }

    pub fn term(coefficient: RationalExpr, exponent: AffineForm) -> Self {
        ExpSum::zero().with_term(coefficient, exponent)
    }

    pub fn constant(coefficient: RationalExpr) -> Self {
        ExpSum::term(coefficient, AffineForm::constant(Scalar::zero()))
    }

    fn with_term(mut self, coefficient: RationalExpr, exponent: AffineForm) -> Self {
        self.push(coefficient, exponent);
        self
    }

    fn push(&mut self, coefficient: RationalExpr, exponent: AffineForm) {
        let coefficient = eliminate_alpha0(&coefficient);
        if let Some(i) = self.terms.iter().position(|(_, e)| *e == exponent) {
            let sum = eliminate_alpha0(&(&self.terms[i].0 + &coefficient));
            if sum.is_zero() {
                self.terms.remove(i);
            } else {
                self.terms[i].0 = sum;
            }
        } else if !coefficient.is_zero() {
            self.terms.push((coefficient, exponent));
        }
    }

    pub fn terms(&self) -> &[(RationalExpr, AffineForm)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `t^e` (zero when absent).
    pub fn coefficient_of(&self, exponent: &AffineForm) -> RationalExpr {
        self.terms
            .iter()
            .find(|(_, e)| e == exponent)
            .map(|(c, _)| c.clone())
            .unwrap_or_else(RationalExpr::zero)
    }

    pub fn scale(&self, by: &RationalExpr) -> ExpSum {
        let mut out = ExpSum::zero();
        for (c, e) in &self.terms {
            out.push(c * by, e.clone());
        }
        out
    }

    pub fn mul_t_power(&self, k: i64) -> ExpSum {
        ExpSum {
            terms: self
                .terms
                .iter()
                .map(|(c, e)| (c.clone(), e.shift(k)))
                .collect(),
        }
    }

    pub fn add(&self, other: &ExpSum) -> ExpSum {
        let mut out = self.clone();
        for (c, e) in &other.terms {
            out.push(c.clone(), e.clone());
        }
        out
    }

    pub fn sub(&self, other: &ExpSum) -> ExpSum {
        self.add(&other.scale(&RationalExpr::constant(-Scalar::one())))
    }

    pub fn mul(&self, other: &ExpSum) -> ExpSum {
        let mut out = ExpSum::zero();
        for (a, ea) in &self.terms {
            for (b, eb) in &other.terms {
                out.push(a * b, ea.add(eb));
            }
        }
        out
    }

    /// `d/dt`: `(c, e) -> (c e, e - 1)`.
    pub fn derivative(&self) -> ExpSum {
        let mut out = ExpSum::zero();
        for (c, e) in &self.terms {
            out.push(c * &RationalExpr::from(e.0.clone()), e.shift(-1));
        }
        out
    }

    /// Substitutes `C1, C2` and the parameters, failing when a coefficient
    /// denominator vanishes.
    pub fn specialize(
        &self,
        params: &Parameters,
        c1: &Scalar,
        c2: &Scalar,
    ) -> Result<Vec<(Scalar, Scalar)>, PrincipalError> {
        let mut a = params.assignment();
        a.insert(Var::C1, c1.clone());
        a.insert(Var::C2, c2.clone());
        self.terms
            .iter()
            .map(|(coef, e)| {
                let cv = coef.evaluate(&a).map_err(|err| match err {
                    AlgebraError::PoleAtPoint(f) => PrincipalError::DegenerateParameters(f),
                    other => PrincipalError::DegenerateParameters(other.to_string()),
                })?;
                let ev = e
                    .evaluate(&a)
                    .map_err(|err| PrincipalError::DegenerateParameters(err.to_string()))?;
                Ok((cv, ev))
            })
            .collect()
    }

    /// Floating-point value at `t > 0` of a specialized sum.
    pub fn evaluate_specialized(terms: &[(Scalar, Scalar)], t: f64) -> f64 {
        terms
            .iter()
            .map(|(c, e)| to_f64(c) * t.powf(to_f64(e)))
            .sum()
    }
}

impl fmt::Display for ExpSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(c, e)| format!("[{c}] t^({e})"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The three restrictions of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrincipalPart {
    K1,
    K2,
    K3,
}

impl PrincipalPart {
    pub const ALL: [PrincipalPart; 3] = [PrincipalPart::K1, PrincipalPart::K2, PrincipalPart::K3];

    pub fn zeroed(self) -> [Var; 4] {
        match self {
            PrincipalPart::K1 => [Var::Z, Var::W, Var::Q, Var::P],
            PrincipalPart::K2 => [Var::X, Var::Y, Var::Q, Var::P],
            PrincipalPart::K3 => [Var::X, Var::Y, Var::Z, Var::W],
        }
    }

    /// The surviving canonical pair `(position, momentum)`.
    pub fn pair(self) -> (Var, Var) {
        match self {
            PrincipalPart::K1 => (Var::X, Var::Y),
            PrincipalPart::K2 => (Var::Z, Var::W),
            PrincipalPart::K3 => (Var::Q, Var::P),
        }
    }

    /// The Hamiltonian as written out for the subsystem.
    pub fn hamiltonian(self) -> Polynomial {
        let ti = Polynomial::var_pow(Var::T, -1);
        let (a1, a2, a3) = (v(Var::ALPHA1), v(Var::ALPHA2), v(Var::ALPHA3));
        let k = Polynomial::int;
        match self {
            PrincipalPart::K1 => {
                let (x, y) = (v(Var::X), v(Var::Y));
                c(1, 4) * &ti * y.pow_u(3)
                    + c(3, 2) * y.pow_u(2)
                    + (k(3) * &a3 - k(1)) * &ti * &x * &y
            }
            PrincipalPart::K2 => {
                let (z, w) = (v(Var::Z), v(Var::W));
                c(3, 4) * &ti * z.pow_u(2) * w.pow_u(2)
                    + c(3, 2) * z.pow_u(2) * &w
                    + (k(3) * &a1 + k(3) * &a2 - k(2)) * c(1, 2) * &ti * &z * &w
                    + c(3, 2) * &a1 * &z
            }
            PrincipalPart::K3 => {
                let (q, p, t) = (v(Var::Q), v(Var::P), v(Var::T));
                -(k(4) * &ti * p.pow_u(3))
                    - k(6) * p.pow_u(2)
                    - (k(3) * &a1 + k(3) * &a2 + k(3) * &a3 - k(2)) * &ti * &q * &p
                    - k(6) * &t * &p
            }
        }
    }

    pub fn system(self) -> HamiltonianSystem {
        let (a, b) = self.pair();
        HamiltonianSystem::with_active(self.hamiltonian(), vec![a, b])
    }

    /// Right-hand sides as written out for `K1` and `K3` (with `alpha0`
    /// present); `None` for `K2`, which has no displayed field.
    pub fn displayed_field(self) -> Option<[Polynomial; 2]> {
        let ti = Polynomial::var_pow(Var::T, -1);
        let a: Vec<Polynomial> = Var::ALPHA.iter().map(|x| v(*x)).collect();
        let t = v(Var::T);
        match self {
            PrincipalPart::K1 => {
                let (x, y) = (v(Var::X), v(Var::Y));
                let e = &a[0] + &a[1] + &a[2] - Polynomial::int(2) * &a[3];
                let dx = (Polynomial::int(3) * &y * (&y + &(Polynomial::int(4) * &t))
                    - Polynomial::int(4) * &e * &x)
                    * c(1, 4)
                    * &ti;
                let dy = &e * &y * &ti;
                Some([dx, dy])
            }
            PrincipalPart::K3 => {
                let (q, p) = (v(Var::Q), v(Var::P));
                let e = Polynomial::int(2) * &a[0] - &a[1] - &a[2] - &a[3];
                let dq = -((Polynomial::int(12) * &p * (&p + &t) - &e * &q
                    + Polynomial::int(6) * t.pow_u(2))
                    * &ti);
                let dp = -(&e * &p * &ti);
                Some([dq, dp])
            }
            PrincipalPart::K2 => None,
        }
    }
}

/// `(position(t), momentum(t))` for `K1`.
pub fn k1_solution() -> (ExpSum, ExpSum) {
    let a: Vec<Polynomial> = Var::ALPHA.iter().map(|x| v(*x)).collect();
    let s = &a[0] + &a[1] + &a[2];
    let c1 = v(Var::C1);
    let aff = |p: Polynomial| AffineForm::new(p).expect("affine exponent");
    let x = ExpSum::term(
        frac(c1.clone(), &s - &a[3]),
        aff(Polynomial::int(3) * &s - Polynomial::int(1)),
    )
    .with_term(
        frac(
            c1.pow_u(2),
            Polynomial::int(4) * (&s - &(Polynomial::int(2) * &a[3])),
        ),
        aff(Polynomial::int(6) * &s - Polynomial::int(4)),
    )
    .with_term(
        RationalExpr::var(Var::C2),
        aff(Polynomial::int(2) - Polynomial::int(3) * &s),
    );
    let y = ExpSum::term(
        RationalExpr::var(Var::C1),
        aff(&s - &(Polynomial::int(2) * &a[3])),
    );
    (x, y)
}

/// `(position(t), momentum(t))` for `K3`.
pub fn k3_solution() -> (ExpSum, ExpSum) {
    let a: Vec<Polynomial> = Var::ALPHA.iter().map(|x| v(*x)).collect();
    let r = &a[1] + &a[2] + &a[3];
    let c1 = v(Var::C1);
    let k = Polynomial::int;
    let aff = |p: Polynomial| AffineForm::new(p).expect("affine exponent");
    let q = ExpSum::term(frac(k(-2), r.clone()), aff(k(2)))
        .with_term(frac(k(-4) * &c1, &r - &a[0]), aff(k(2) - k(3) * &a[0]))
        .with_term(
            frac(k(-4) * c1.pow_u(2), &r - &(k(2) * &a[0])),
            aff(k(2) - k(6) * &a[0]),
        )
        .with_term(RationalExpr::var(Var::C2), aff(k(3) * &a[0] - k(1)));
    let p = ExpSum::term(RationalExpr::var(Var::C1), aff(-(k(2) * &a[0] - &r)));
    (q, p)
}

/// Substitutes `ExpSum`s for the phase variables of a polynomial whose other
/// variables are `t` and the parameters.
pub fn compose_polynomial(poly: &Polynomial, values: &[(Var, ExpSum)]) -> ExpSum {
    let mut powers: HashMap<(Var, i32), ExpSum> = HashMap::new();
    let mut out = ExpSum::zero();
    for (m, coef) in poly.terms() {
        let mut acc = ExpSum::constant(RationalExpr::one());
        let mut rest = Monomial::one();
        for (var, e) in m.vars() {
            if let Some((_, val)) = values.iter().find(|(x, _)| *x == var) {
                assert!(e >= 0, "negative power of a substituted variable");
                let pw = powers.entry((var, e)).or_insert_with(|| {
                    (0..e).fold(ExpSum::constant(RationalExpr::one()), |a, _| a.mul(val))
                });
                acc = acc.mul(pw);
            } else if var != Var::T {
                rest = rest.mul(&Monomial::var_pow(var, e));
            }
        }
        let coefficient = RationalExpr::from(Polynomial::term(coef.clone(), rest));
        out = out.add(&acc.scale(&coefficient).mul_t_power(m.exp(Var::T) as i64));
    }
    out
}

/// Residuals `d/dt u - F_u(u(t))` for the two components.
#[derive(Debug, Clone)]
pub struct ClosedFormReport {
    pub residuals: [ExpSum; 2],
}

impl ClosedFormReport {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(ExpSum::is_zero)
    }
}

pub fn verify_closed_form(solution: &(ExpSum, ExpSum), part: PrincipalPart) -> ClosedFormReport {
    let sys = part.system();
    let field = sys.equations_of_motion();
    let (a, b) = part.pair();
    let values = [(a, solution.0.clone()), (b, solution.1.clone())];
    let residual = |u: &ExpSum, var: Var| {
        u.derivative()
            .sub(&compose_polynomial(field.component(var), &values))
    };
    ClosedFormReport {
        residuals: [residual(&solution.0, a), residual(&solution.1, b)],
    }
}

/// `K2` in the variables `z1 = t z`, `w1 = w / t` (stored in the `z, w`
/// slots), together with the additive correction from the time dependence.
#[derive(Debug, Clone)]
pub struct K2Transform {
    /// `K2(z1/t, t w1)`.
    pub substituted: Polynomial,
    /// Correction derived from the chain rule.
    pub correction: Polynomial,
    /// `substituted + correction`.
    pub transformed: Polynomial,
    pub matches_closed_form: bool,
    pub symplectic: bool,
}

/// `(3/(4t)) z1 (z1 w1^2 + 2 z1 w1 + 2(alpha1+alpha2) w1 + 2 alpha1)`.
pub fn k2_tilde() -> Polynomial {
    let (z, w) = (v(Var::Z), v(Var::W));
    let (a1, a2) = (v(Var::ALPHA1), v(Var::ALPHA2));
    let k = Polynomial::int;
    let inner = &z * w.pow_u(2) + k(2) * &z * &w + k(2) * (&a1 + &a2) * &w + k(2) * &a1;
    c(3, 4) * Polynomial::var_pow(Var::T, -1) * z * inner
}

pub fn k2_transform() -> K2Transform {
    let (z, w, t) = (v(Var::Z), v(Var::W), v(Var::T));
    let ti = Polynomial::var_pow(Var::T, -1);
    let k2 = PrincipalPart::K2.hamiltonian();
    let forward = [&t * &z, &w * &ti];
    let inverse = crate::algebra::Bindings::from([
        (Var::Z, RationalExpr::from(&z * &ti)),
        (Var::W, RationalExpr::from(&t * &w)),
    ]);
    let to_new = |p: &Polynomial| {
        p.substitute(&inverse)
            .expect("monomial substitution")
            .as_polynomial()
            .expect("Laurent in t")
            .clone()
    };
    let old = HamiltonianSystem::with_active(k2.clone(), vec![Var::Z, Var::W]);
    let dz1 = to_new(&old.total_time_derivative(&forward[0]));
    let dw1 = to_new(&old.total_time_derivative(&forward[1]));
    let substituted = to_new(&k2);

    // dz1/dt = d/dw1 (G + R),  dw1/dt = -d/dz1 (G + R)
    let r_w = &dz1 - &substituted.derive(Var::W);
    let mut correction = r_w.integrate(Var::W).expect("no w^-1 terms");
    let r_z = -(&dw1 + &substituted.derive(Var::Z));
    let leftover = &r_z - &correction.derive(Var::Z);
    correction = &correction + &leftover.integrate(Var::Z).expect("no z^-1 terms");

    let transformed = &substituted + &correction;
    let symplectic = PoissonStructure.bracket(&forward[1], &forward[0]).is_one();
    K2Transform {
        matches_closed_form: eliminate_alpha0_poly(&transformed) == k2_tilde(),
        substituted,
        correction,
        transformed,
        symplectic,
    }
}

/// The `K2~` subsystem on the `(z, w)` slots.
pub fn k2_tilde_system() -> HamiltonianSystem {
    HamiltonianSystem::with_active(k2_tilde(), vec![Var::Z, Var::W])
}

/// `4 t K2~`.
pub fn first_integral_i() -> Polynomial {
    Polynomial::int(4) * v(Var::T) * k2_tilde()
}

/// `{K2~, I} + dI/dt`; zero exactly when `I` is conserved.
pub fn first_integral_i_derivative() -> Polynomial {
    k2_tilde_system().total_time_derivative(&first_integral_i())
}

pub fn first_integral_i_check() -> bool {
    first_integral_i_derivative().is_zero()
}

/// `d/dt (4 t K1)` along the `K1` flow, which does not vanish.
pub fn four_t_k1_derivative() -> Polynomial {
    let k1 = PrincipalPart::K1.hamiltonian();
    PrincipalPart::K1
        .system()
        .total_time_derivative(&(Polynomial::int(4) * v(Var::T) * k1))
}

/// Checks that a parameter point keeps every closed-form coefficient finite.
pub fn closed_forms_nondegenerate(params: &Parameters) -> bool {
    let one = Scalar::one();
    let (x, y) = k1_solution();
    let (q, p) = k3_solution();
    [x, y, q, p]
        .iter()
        .all(|s| s.specialize(params, &one, &one).is_ok())
}

/// Numeric integration data: exact constants and the initial state at `t0`.
pub fn closed_form_initial(
    solution: &(ExpSum, ExpSum),
    params: &Parameters,
    c1: &Scalar,
    c2: &Scalar,
    t0: f64,
) -> Result<(f64, f64), PrincipalError> {
    let a = solution.0.specialize(params, c1, c2)?;
    let b = solution.1.specialize(params, c1, c2)?;
    Ok((
        ExpSum::evaluate_specialized(&a, t0),
        ExpSum::evaluate_specialized(&b, t0),
    ))
}

/// Largest `|exponent|` of a specialized sum, to keep sampled data tame.
pub fn max_abs_exponent(terms: &[(Scalar, Scalar)]) -> Scalar {
    terms
        .iter()
        .map(|(_, e)| e.abs())
        .max()
        .unwrap_or_else(Scalar::zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, ratio};
    use crate::hamiltonian::hamiltonian_h;

    fn aff(p: Polynomial) -> AffineForm {
        AffineForm::new(p).unwrap()
    }

    #[test]
    fn exponents_compare_modulo_the_constraint() {
        let a: Vec<Polynomial> = Var::ALPHA.iter().map(|x| v(*x)).collect();
        let lhs = aff(Polynomial::int(-1) + Polynomial::int(3) * (&a[0] + &a[1] + &a[2]));
        let rhs = aff(Polynomial::int(2) - Polynomial::int(3) * &a[3]);
        assert_eq!(lhs, rhs);
        assert!(AffineForm::new(&a[1] * &a[2]).is_err());
    }

    #[test]
    fn k1_solution_shape() {
        let (x, y) = k1_solution();
        let a: Vec<Polynomial> = Var::ALPHA.iter().map(|x| v(*x)).collect();
        assert_eq!(y.terms().len(), 1);
        assert_eq!(
            y.terms()[0].1,
            aff(&a[0] + &a[1] + &a[2] - Polynomial::int(2) * &a[3])
        );
        let middle = x.coefficient_of(&aff(
            Polynomial::int(6) * (&a[0] + &a[1] + &a[2]) - Polynomial::int(4)
        ));
        let expected = frac(
            v(Var::C1).pow_u(2),
            Polynomial::int(4) * (&a[0] + &a[1] + &a[2] - Polynomial::int(2) * &a[3]),
        );
        assert_eq!(middle, eliminate_alpha0(&expected));
    }

    #[test]
    fn k1_with_vanishing_c1_is_a_single_power() {
        let (x, _) = k1_solution();
        let params = Parameters::from_tail(ratio(1, 3), ratio(1, 5), ratio(1, 7));
        let special = x.specialize(&params, &int(0), &int(2)).unwrap();
        let nonzero: Vec<_> = special.iter().filter(|(c, _)| !c.is_zero()).collect();
        assert_eq!(nonzero.len(), 1);
        let expected_exp = int(2) - int(3) * (int(1) - ratio(1, 7));
        assert_eq!(nonzero[0], &(int(2), expected_exp));
    }

    #[test]
    fn k3_trivial_constants() {
        let (q, p) = k3_solution();
        let params = Parameters::from_tail(ratio(1, 3), ratio(1, 5), ratio(1, 7));
        let special = q.specialize(&params, &int(0), &int(0)).unwrap();
        let nonzero: Vec<_> = special.iter().filter(|(c, _)| !c.is_zero()).collect();
        let sum = ratio(1, 3) + ratio(1, 5) + ratio(1, 7);
        assert_eq!(nonzero, vec![&(int(-2) / sum, int(2))]);
        let special = p.specialize(&params, &int(0), &int(0)).unwrap();
        assert!(special.iter().all(|(c, _)| c.is_zero()));
    }

    #[test]
    fn degenerate_parameters_are_rejected() {
        let (x, _) = k1_solution();
        let params = Parameters::from_tail(ratio(1, 3), ratio(1, 5), ratio(1, 2));
        assert!(matches!(
            x.specialize(&params, &int(1), &int(1)),
            Err(PrincipalError::DegenerateParameters(_))
        ));
    }

    #[test]
    fn closed_forms_solve_their_systems() {
        assert!(verify_closed_form(&k1_solution(), PrincipalPart::K1).holds());
        assert!(verify_closed_form(&k3_solution(), PrincipalPart::K3).holds());
    }

    #[test]
    fn perturbed_closed_form_is_caught() {
        let (x, y) = k1_solution();
        let a: Vec<Polynomial> = Var::ALPHA.iter().map(|x| v(*x)).collect();
        let bumped = x.add(&ExpSum::term(
            RationalExpr::one(),
            aff(Polynomial::int(6) * (&a[0] + &a[1] + &a[2]) - Polynomial::int(4)),
        ));
        assert!(!verify_closed_form(&(bumped, y), PrincipalPart::K1).holds());
    }

    #[test]
    fn restrictions_reproduce_the_subsystems() {
        let h = HamiltonianSystem::new(hamiltonian_h());
        for part in PrincipalPart::ALL {
            let restricted = h.restrict(&part.zeroed());
            assert_eq!(restricted.hamiltonian(), &part.hamiltonian(), "{part:?}");
            if let Some(field) = part.displayed_field() {
                let eom = restricted.equations_of_motion();
                let (a, b) = part.pair();
                for (var, shown) in [a, b].into_iter().zip(field) {
                    assert_eq!(
                        eliminate_alpha0_poly(eom.component(var)),
                        eliminate_alpha0_poly(&shown)
                    );
                }
            }
        }
    }

    #[test]
    fn k2_transform_reproduces_k2_tilde() {
        let tr = k2_transform();
        assert!(tr.matches_closed_form);
        assert!(tr.symplectic);
        let expected = v(Var::Z) * v(Var::W) * Polynomial::var_pow(Var::T, -1);
        assert_eq!(tr.correction, expected);
    }

    #[test]
    fn i_is_conserved() {
        assert!(first_integral_i_check());
        assert!(first_integral_i().min_exp(Var::T) >= 0);
        assert!(first_integral_i().degree_in(Var::T) <= 0);
        assert!(!four_t_k1_derivative().is_zero());
        assert!(k2_tilde_system()
            .total_time_derivative(&Polynomial::int(5))
            .is_zero());
    }

    #[test]
    fn product_rule() {
        let (x, y) = k1_solution();
        let lhs = x.mul(&y).derivative();
        let rhs = x.derivative().mul(&y).add(&x.mul(&y.derivative()));
        assert!(lhs.sub(&rhs).is_zero());
    }

    #[test]
    fn constants_have_zero_derivative() {
        assert!(ExpSum::constant(RationalExpr::var(Var::C1))
            .derivative()
            .is_zero());
    }
}
