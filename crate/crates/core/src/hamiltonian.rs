//! The Hamiltonian system: `H`, the canonical Poisson structure, equations of
//! motion, principal-part restrictions and first-integral checks.
//!
//! Sign convention: `{f, g} = f_y g_x - f_x g_y + f_w g_z - f_z g_w + f_p g_q - f_q g_p`,
//! so `{y, x} = 1` and the flow is `dg/dt = {H, g} + dg/dt|explicit`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{
    c, solve_affine, v, Assignment, Bindings, Monomial, Polynomial, RationalExpr, Scalar,
    SparseRow, Var,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParameterError {
    #[error("parameters must satisfy alpha0 + alpha1 + alpha2 + alpha3 = 1 (sum is {0})")]
    SumNotOne(String),
}

/// Numeric parameters on the constraint hyperplane `sum(alpha) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parameters {
    alpha: [Scalar; 4],
}

impl Parameters {
    pub fn new(alpha: [Scalar; 4]) -> Result<Self, ParameterError> {
        let sum: Scalar = alpha.iter().sum();
        if !sum.is_one() {
            return Err(ParameterError::SumNotOne(crate::algebra::format_scalar(
                &sum,
            )));
        }
        Ok(Parameters { alpha })
    }

    /// Fixes `alpha0` from the constraint.
    pub fn from_tail(a1: Scalar, a2: Scalar, a3: Scalar) -> Self {
        let a0 = Scalar::one() - &a1 - &a2 - &a3;
        Parameters {
            alpha: [a0, a1, a2, a3],
        }
    }

    pub fn alpha(&self) -> &[Scalar; 4] {
        &self.alpha
    }

    pub fn assignment(&self) -> Assignment {
        Var::ALPHA
            .iter()
            .zip(self.alpha.iter())
            .map(|(v, a)| (*v, a.clone()))
            .collect()
    }
}

/// Substitution `alpha0 -> 1 - alpha1 - alpha2 - alpha3`.
pub fn alpha0_elimination() -> Bindings {
    let mut b = Bindings::new();
    b.insert(
        Var::ALPHA0,
        (Polynomial::one() - v(Var::ALPHA1) - v(Var::ALPHA2) - v(Var::ALPHA3)).into(),
    );
    b
}

pub fn eliminate_alpha0_poly(p: &Polynomial) -> Polynomial {
    p.substitute(&alpha0_elimination())
        .ok()
        .and_then(|r| r.as_polynomial().cloned())
        .expect("polynomial substitution stays polynomial")
}

pub fn eliminate_alpha0(r: &RationalExpr) -> RationalExpr {
    r.substitute(&alpha0_elimination())
        .expect("alpha0 elimination introduces no poles")
}

/// Bindings placing the system on the locus `alpha_i = 0` of the constraint
/// hyperplane (alpha0 is eliminated, or solved through alpha1 when `i = 0`).
pub fn alpha_zero_locus(i: usize) -> Bindings {
    let mut b = Bindings::new();
    if i == 0 {
        b.insert(Var::ALPHA0, RationalExpr::zero());
        b.insert(
            Var::ALPHA1,
            (Polynomial::one() - v(Var::ALPHA2) - v(Var::ALPHA3)).into(),
        );
    } else {
        let rest = (1..4)
            .filter(|&j| j != i)
            .fold(Polynomial::one(), |acc, j| acc - v(Var::alpha(j)));
        b.insert(Var::ALPHA0, rest.into());
        b.insert(Var::alpha(i), RationalExpr::zero());
    }
    b
}

/// Canonical pairs `(position, momentum)` with `{momentum, position} = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PoissonStructure;

impl PoissonStructure {
    pub const PAIRS: [(Var, Var); 3] = [(Var::X, Var::Y), (Var::Z, Var::W), (Var::Q, Var::P)];

    pub fn bracket(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero();
        for (pos, mom) in Self::PAIRS {
            acc = acc + f.derive(mom) * g.derive(pos) - f.derive(pos) * g.derive(mom);
        }
        acc
    }

    pub fn bracket_rational(&self, f: &RationalExpr, g: &RationalExpr) -> RationalExpr {
        let mut acc = RationalExpr::zero();
        for (pos, mom) in Self::PAIRS {
            acc = acc + f.derive(mom) * g.derive(pos) - f.derive(pos) * g.derive(mom);
        }
        acc
    }
}

/// Components `(x', y', z', w', q', p')` of the flow; `t' = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    pub components: [Polynomial; 6],
}

impl VectorField {
    pub fn component(&self, var: Var) -> &Polynomial {
        assert!(var.is_phase());
        &self.components[var.index()]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error(
        "linear system of {unknowns} unknowns x {equations} equations exceeds the size budget"
    )]
    TooLarge { unknowns: usize, equations: usize },
    #[error("first-integral search requires specialized parameters")]
    SymbolicParameters,
}

/// A polynomial Hamiltonian (Laurent in `t`) evolving a subset of the phase
/// variables under the canonical structure.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSystem {
    hamiltonian: Polynomial,
    active: Vec<Var>,
}

impl HamiltonianSystem {
    pub fn new(hamiltonian: Polynomial) -> Self {
        HamiltonianSystem {
            hamiltonian,
            active: Var::PHASE.to_vec(),
        }
    }

    pub fn with_active(hamiltonian: Polynomial, active: Vec<Var>) -> Self {
        HamiltonianSystem {
            hamiltonian,
            active,
        }
    }

    /// The system with symbolic parameters.
    pub fn d42() -> Self {
        Self::new(hamiltonian_h())
    }

    pub fn hamiltonian(&self) -> &Polynomial {
        &self.hamiltonian
    }

    pub fn active_variables(&self) -> &[Var] {
        &self.active
    }

    pub fn structure(&self) -> PoissonStructure {
        PoissonStructure
    }

    pub fn phase_degree(&self) -> i32 {
        self.hamiltonian.phase_degree()
    }

    pub fn specialize(&self, params: &Parameters) -> Self {
        self.map_hamiltonian(|h| {
            h.specialize(&params.assignment())
                .expect("no poles in alpha")
        })
    }

    pub fn map_hamiltonian(&self, f: impl FnOnce(&Polynomial) -> Polynomial) -> Self {
        HamiltonianSystem {
            hamiltonian: f(&self.hamiltonian),
            active: self.active.clone(),
        }
    }

    pub fn is_symbolic(&self) -> bool {
        Var::ALPHA.iter().any(|a| self.hamiltonian.contains_var(*a))
    }

    /// `x' = H_y, y' = -H_x, z' = H_w, w' = -H_z, q' = H_p, p' = -H_q`.
    pub fn equations_of_motion(&self) -> VectorField {
        let h = &self.hamiltonian;
        VectorField {
            components: [
                h.derive(Var::Y),
                -h.derive(Var::X),
                h.derive(Var::W),
                -h.derive(Var::Z),
                h.derive(Var::P),
                -h.derive(Var::Q),
            ],
        }
    }

    /// Equations of motion with `alpha0` eliminated, the canonical report form.
    pub fn equations_of_motion_reduced(&self) -> VectorField {
        let vf = self.equations_of_motion();
        VectorField {
            components: vf.components.map(|c| eliminate_alpha0_poly(&c)),
        }
    }

    /// Sets the listed phase variables to zero; the remaining canonical pairs
    /// stay active.
    pub fn restrict(&self, zeroed: &[Var]) -> Self {
        let values: Assignment = zeroed.iter().map(|v| (*v, Scalar::zero())).collect();
        let hamiltonian = self
            .hamiltonian
            .specialize(&values)
            .expect("phase variables carry no negative powers");
        let active = self
            .active
            .iter()
            .copied()
            .filter(|v| !zeroed.contains(v) && !v.conjugate().is_some_and(|c| zeroed.contains(&c)))
            .collect();
        HamiltonianSystem {
            hamiltonian,
            active,
        }
    }

    /// `{H, g} + dg/dt` for a polynomial observable.
    pub fn total_time_derivative(&self, g: &Polynomial) -> Polynomial {
        PoissonStructure.bracket(&self.hamiltonian, g) + g.derive(Var::T)
    }

    pub fn total_time_derivative_rational(&self, g: &RationalExpr) -> RationalExpr {
        let h: RationalExpr = self.hamiltonian.clone().into();
        PoissonStructure.bracket_rational(&h, g) + g.derive(Var::T)
    }

    /// Exact nullspace of `g -> {H, g} + dg/dt` on polynomials in the active
    /// variables of degree `<= phase_degree_bound` with coefficients
    /// `sum_k c_k t^k`, `k` in `t_range`.
    pub fn first_integral_search(
        &self,
        phase_degree_bound: u32,
        t_range: (i32, i32),
        budget: usize,
    ) -> Result<FirstIntegralBasis, SearchError> {
        if self.is_symbolic() {
            return Err(SearchError::SymbolicParameters);
        }
        let mut basis = Vec::new();
        for m in monomials_up_to(&self.active, phase_degree_bound) {
            for k in t_range.0..=t_range.1 {
                basis.push(m.mul(&Monomial::var_pow(Var::T, k)));
            }
        }
        let images: Vec<Polynomial> = basis
            .iter()
            .map(|m| self.total_time_derivative(&Polynomial::term(Scalar::one(), *m)))
            .collect();
        let mut row_of: BTreeMap<Monomial, Vec<(usize, Scalar)>> = BTreeMap::new();
        for (col, img) in images.iter().enumerate() {
            for (m, c) in img.terms() {
                row_of.entry(*m).or_default().push((col, c.clone()));
            }
        }
        let (unknowns, equations) = (basis.len(), row_of.len());
        if unknowns.saturating_mul(equations) > budget {
            return Err(SearchError::TooLarge {
                unknowns,
                equations,
            });
        }
        let rows: Vec<(SparseRow, Scalar)> = row_of
            .into_values()
            .map(|entries| (SparseRow { entries }, Scalar::zero()))
            .collect();
        let sol = solve_affine(&rows, unknowns).expect("homogeneous systems are consistent");
        let integrals = sol
            .kernel
            .iter()
            .map(|k| Polynomial::from_terms(basis.iter().zip(k).map(|(m, c)| (*m, c.clone()))))
            .collect();
        Ok(FirstIntegralBasis {
            basis,
            integrals,
            equations,
        })
    }
}

/// Result of a bounded first-integral search.
#[derive(Debug, Clone)]
pub struct FirstIntegralBasis {
    /// The ansatz monomials (phase monomial times a power of `t`).
    pub basis: Vec<Monomial>,
    /// A basis of the solution space.
    pub integrals: Vec<Polynomial>,
    pub equations: usize,
}

impl FirstIntegralBasis {
    pub fn dimension(&self) -> usize {
        self.integrals.len()
    }

    /// True iff the solution space is spanned by the constant function.
    pub fn constants_only(&self) -> bool {
        self.integrals.len() == 1 && self.integrals[0].as_constant().is_some()
    }

    /// Whether `g` lies in the span of the found integrals.
    pub fn contains(&self, g: &Polynomial) -> bool {
        if g.terms().iter().any(|(m, _)| !self.basis.contains(m)) {
            return false;
        }
        let rows: Vec<(SparseRow, Scalar)> = self
            .basis
            .iter()
            .map(|m| {
                let mut row = SparseRow::default();
                for (j, f) in self.integrals.iter().enumerate() {
                    row.push(j, f.coefficient(m));
                }
                (row, g.coefficient(m))
            })
            .collect();
        solve_affine(&rows, self.integrals.len()).is_ok()
    }
}

/// All monomials of degree `<= bound` in the given variables, graded order.
pub fn monomials_up_to(vars: &[Var], bound: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![(Monomial::one(), 0usize)];
    for _ in 0..bound {
        let mut next = Vec::new();
        for (m, start) in &frontier {
            for (i, v) in vars.iter().enumerate().skip(*start) {
                next.push((m.mul(&Monomial::var(*v)), i));
            }
        }
        out.extend(next.iter().map(|(m, _)| *m));
        frontier = next;
    }
    out
}

/// The polynomial Hamiltonian `H` with symbolic `alpha1..alpha3`.
pub fn hamiltonian_h() -> Polynomial {
    let (x, y, z, w, q, p, t) = (
        v(Var::X),
        v(Var::Y),
        v(Var::Z),
        v(Var::W),
        v(Var::Q),
        v(Var::P),
        v(Var::T),
    );
    let (a1, a2, a3) = (v(Var::ALPHA1), v(Var::ALPHA2), v(Var::ALPHA3));
    let ti = Polynomial::var_pow(Var::T, -1);
    let k = |n: i64| Polynomial::int(n);

    let quartic = k(8) * &x * &y * &q * &p - k(4) * &z * &w * &q * &p + k(8) * &x * &z * &w * &p
        - k(8) * x.pow_u(2) * &y * &p
        + k(2) * z.pow_u(2) * &w * &p
        + &y * z.pow_u(2) * &w
        - k(2) * &y * q.pow_u(2) * &p
        + k(8) * w.pow_u(2) * &p
        - k(4) * &y * p.pow_u(2)
        + k(4) * &y * w.pow_u(2)
        + k(4) * y.pow_u(2) * &w
        + k(8) * &y * &w * &p
        - k(8) * &x * &p
        + k(8) * &t * &y * &w;

    c(1, 4) * &ti * y.pow_u(3)
        + c(3, 2) * y.pow_u(2)
        + (k(3) * &a3 - k(1)) * &ti * &x * &y
        + c(3, 4) * &ti * z.pow_u(2) * w.pow_u(2)
        + c(3, 2) * z.pow_u(2) * &w
        + (k(3) * &a1 + k(3) * &a2 - k(2)) * c(1, 2) * &ti * &z * &w
        + c(3, 2) * &a1 * &z
        - k(4) * &ti * p.pow_u(3)
        - k(6) * p.pow_u(2)
        - (k(3) * &a1 + k(3) * &a2 + k(3) * &a3 - k(2)) * &ti * &q * &p
        - k(6) * &t * &p
        + c(3, 4) * &ti * &a1 * (k(8) * &x * &p + k(2) * &z * &p + &y * &z)
        + k(6) * &ti * &a2 * &x * &p
        + c(3, 2) * &ti * &a3 * (k(4) * &x * &p - &y * &q)
        + c(3, 4) * &ti * quartic
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, ratio};

    fn mono(pairs: &[(Var, i32)]) -> Monomial {
        Monomial::from_pairs(pairs.iter().copied())
    }

    #[test]
    fn coefficients_of_h() {
        let h = hamiltonian_h();
        assert_eq!(
            h.coefficient(&mono(&[(Var::Y, 3), (Var::T, -1)])),
            ratio(1, 4)
        );
        assert_eq!(
            h.coefficient(&mono(&[
                (Var::X, 1),
                (Var::Y, 1),
                (Var::Q, 1),
                (Var::P, 1),
                (Var::T, -1)
            ])),
            ratio(6, 1)
        );
        assert_eq!(h.phase_degree(), 4);
    }

    #[test]
    fn bracket_relations() {
        let ps = PoissonStructure;
        assert_eq!(ps.bracket(&v(Var::Y), &v(Var::X)), Polynomial::one());
        assert_eq!(ps.bracket(&v(Var::W), &v(Var::Z)), Polynomial::one());
        assert_eq!(ps.bracket(&v(Var::P), &v(Var::Q)), Polynomial::one());
        assert_eq!(ps.bracket(&v(Var::X), &v(Var::Y)), Polynomial::int(-1));
        assert!(ps.bracket(&v(Var::X), &v(Var::X)).is_zero());
        assert!(ps.bracket(&v(Var::X), &v(Var::W)).is_zero());
        let f2 = crate::weyl::divisor_polynomial(2);
        assert_eq!(ps.bracket(&f2, &v(Var::Y)), c(-1, 2) * v(Var::Z));
    }

    #[test]
    fn flow_of_zero_hamiltonian_vanishes() {
        let sys = HamiltonianSystem::new(Polynomial::zero());
        assert!(sys
            .equations_of_motion()
            .components
            .iter()
            .all(|c| c.is_zero()));
    }

    #[test]
    fn restriction_drops_conjugate_pairs() {
        let k1 = HamiltonianSystem::d42().restrict(&[Var::Z, Var::W, Var::Q, Var::P]);
        assert_eq!(k1.active_variables(), &[Var::X, Var::Y]);
    }

    #[test]
    fn scalar_is_a_first_integral() {
        let sys = HamiltonianSystem::d42();
        assert!(sys.total_time_derivative(&Polynomial::int(7)).is_zero());
    }

    #[test]
    fn degree_zero_search_is_constants() {
        let sys = HamiltonianSystem::d42().specialize(&Parameters::from_tail(
            ratio(1, 3),
            ratio(2, 7),
            ratio(-1, 5),
        ));
        let found = sys.first_integral_search(0, (-3, 3), 1 << 24).unwrap();
        assert!(found.constants_only());
    }

    #[test]
    fn search_refuses_symbolic_parameters() {
        assert_eq!(
            HamiltonianSystem::d42()
                .first_integral_search(1, (0, 0), 1 << 20)
                .unwrap_err(),
            SearchError::SymbolicParameters
        );
    }

    #[test]
    fn search_respects_budget() {
        let sys = HamiltonianSystem::d42().specialize(&Parameters::from_tail(
            ratio(1, 3),
            ratio(2, 7),
            ratio(-1, 5),
        ));
        assert!(matches!(
            sys.first_integral_search(2, (-3, 3), 10),
            Err(SearchError::TooLarge { .. })
        ));
    }

    #[test]
    fn parameters_validate_the_constraint() {
        assert!(Parameters::new([int(1), int(0), int(0), int(0)]).is_ok());
        assert!(Parameters::new([int(1), int(1), int(0), int(0)]).is_err());
    }

    #[test]
    fn monomial_enumeration_counts() {
        assert_eq!(monomials_up_to(&Var::PHASE, 4).len(), 210);
        assert_eq!(monomials_up_to(&Var::PHASE, 2).len(), 28);
    }
}
