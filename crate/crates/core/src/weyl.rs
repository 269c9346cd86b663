//! Backlund transformations `s0..s3`, their words, and the checks that they
//! are symmetries of the system: pushforward identity, exponential-adjoint
//! series, Coxeter orders, invariant divisors and translations.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::{
    c, frac, v, AlgebraError, Assignment, Bindings, Polynomial, RationalExpr, Scalar, Var,
};
use crate::hamiltonian::{
    alpha_zero_locus, eliminate_alpha0, eliminate_alpha0_poly, HamiltonianSystem, Parameters,
    PoissonStructure,
};
use crate::sampling::ExactSampler;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("composed expression exceeds the budget of {budget} numerator terms")]
    BudgetExceeded { budget: usize },
    #[error("adjoint series for s{index} did not terminate within {depth} brackets")]
    SeriesDiverges { index: usize, depth: usize },
    #[error("unknown generator token `{0}` (expected s0, s1, s2 or s3)")]
    BadToken(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Affine action `alpha -> M alpha + b` on `(alpha0, .., alpha3)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamAction {
    pub matrix: [[Scalar; 4]; 4],
    pub offset: [Scalar; 4],
}

impl ParamAction {
    pub fn identity() -> Self {
        ParamAction {
            matrix: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    if i == j {
                        Scalar::one()
                    } else {
                        Scalar::zero()
                    }
                })
            }),
            offset: std::array::from_fn(|_| Scalar::zero()),
        }
    }

    fn from_int_rows(rows: [[i64; 4]; 4]) -> Self {
        ParamAction {
            matrix: rows.map(|r| r.map(crate::algebra::int)),
            offset: std::array::from_fn(|_| Scalar::zero()),
        }
    }

    pub fn apply(&self, alpha: &[Scalar; 4]) -> [Scalar; 4] {
        std::array::from_fn(|i| {
            (0..4).fold(self.offset[i].clone(), |acc, j| {
                acc + &self.matrix[i][j] * &alpha[j]
            })
        })
    }

    /// `other` after `self`.
    pub fn then(&self, other: &ParamAction) -> ParamAction {
        let matrix = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                (0..4).fold(Scalar::zero(), |acc, k| {
                    acc + &other.matrix[i][k] * &self.matrix[k][j]
                })
            })
        });
        let offset = other.apply(&self.offset);
        ParamAction { matrix, offset }
    }

    /// The images `alpha_i'` as affine polynomials in the symbols.
    pub fn images(&self) -> [Polynomial; 4] {
        std::array::from_fn(|i| {
            (0..4).fold(Polynomial::constant(self.offset[i].clone()), |acc, j| {
                acc + Polynomial::var(Var::alpha(j)).scale(&self.matrix[i][j])
            })
        })
    }

    /// Whether the action fixes `alpha0 + alpha1 + alpha2 + alpha3` identically.
    pub fn preserves_sum(&self) -> bool {
        let sum_before = Var::ALPHA.iter().fold(Polynomial::zero(), |a, x| a + v(*x));
        let sum_after = self.images().iter().fold(Polynomial::zero(), |a, x| a + x);
        sum_before == sum_after
    }

    /// `action(alpha) - alpha` on the constraint hyperplane, when it is a
    /// constant vector.
    pub fn translation_vector(&self) -> Option<[Scalar; 4]> {
        let images = self.images();
        let mut out: [Scalar; 4] = std::array::from_fn(|_| Scalar::zero());
        for i in 0..4 {
            let diff = eliminate_alpha0_poly(&(&images[i] - &v(Var::alpha(i))));
            out[i] = diff.as_constant()?;
        }
        Some(out)
    }
}

/// A map on `(x, y, z, w, q, p; alpha)` with `t` fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct BirationalMap {
    pub images: [RationalExpr; 6],
    pub params: ParamAction,
}

impl BirationalMap {
    pub fn identity() -> Self {
        BirationalMap {
            images: Var::PHASE.map(RationalExpr::var),
            params: ParamAction::identity(),
        }
    }

    pub fn image(&self, var: Var) -> &RationalExpr {
        &self.images[var.index()]
    }

    /// Substitution realising the map (phase variables and parameters).
    pub fn bindings(&self) -> Bindings {
        let mut b: Bindings = Var::PHASE
            .iter()
            .zip(self.images.iter())
            .map(|(v, e)| (*v, e.clone()))
            .collect();
        for (a, img) in Var::ALPHA.iter().zip(self.params.images()) {
            b.insert(*a, img.into());
        }
        b
    }

    /// `self` first, then `next`, symbolically.
    pub fn then(&self, next: &BirationalMap, budget: usize) -> Result<BirationalMap, WeylError> {
        let b = self.bindings();
        let mut images = Vec::with_capacity(6);
        for img in &next.images {
            let composed = img.substitute(&b)?;
            if composed.num_terms() > budget {
                return Err(WeylError::BudgetExceeded { budget });
            }
            images.push(composed);
        }
        Ok(BirationalMap {
            images: images.try_into().unwrap(),
            params: self.params.then(&next.params),
        })
    }

    /// Exact image of a point; `point` holds `(x, y, z, w, q, p)`.
    pub fn apply_point(
        &self,
        point: &[Scalar; 6],
        t: &Scalar,
        alpha: &[Scalar; 4],
    ) -> Result<([Scalar; 6], [Scalar; 4]), AlgebraError> {
        let assignment = point_assignment(point, t, alpha);
        let mut out: [Scalar; 6] = std::array::from_fn(|_| Scalar::zero());
        for (o, img) in out.iter_mut().zip(&self.images) {
            *o = img.evaluate(&assignment)?;
        }
        Ok((out, self.params.apply(alpha)))
    }
}

pub fn point_assignment(point: &[Scalar; 6], t: &Scalar, alpha: &[Scalar; 4]) -> Assignment {
    let mut a: Assignment = Var::PHASE
        .iter()
        .zip(point.iter())
        .map(|(v, s)| (*v, s.clone()))
        .collect();
    a.insert(Var::T, t.clone());
    for (v, s) in Var::ALPHA.iter().zip(alpha.iter()) {
        a.insert(*v, s.clone());
    }
    a
}

/// The invariant divisor `f_i` and the variable it is solved for.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantDivisor {
    pub index: usize,
    pub poly: Polynomial,
    pub solved_var: Var,
}

pub fn divisor_polynomial(i: usize) -> Polynomial {
    let (x, y, z, w, q, p, t) = (
        v(Var::X),
        v(Var::Y),
        v(Var::Z),
        v(Var::W),
        v(Var::Q),
        v(Var::P),
        v(Var::T),
    );
    match i {
        0 => &y + &(c(1, 4) * z.pow_u(2)),
        1 => w,
        2 => &w + &p + c(1, 2) * &y + c(1, 2) * &x * &z - c(1, 4) * &z * &q + t,
        3 => p,
        _ => panic!("divisor index {i} outside 0..=3"),
    }
}

pub fn invariant_divisor(i: usize) -> InvariantDivisor {
    let solved_var = [Var::Y, Var::W, Var::W, Var::P][i];
    InvariantDivisor {
        index: i,
        poly: divisor_polynomial(i),
        solved_var,
    }
}

/// The Backlund generator `s_i`.
pub fn generator(i: usize) -> BirationalMap {
    let (x, y, z, w, q, p) = (
        v(Var::X),
        v(Var::Y),
        v(Var::Z),
        v(Var::W),
        v(Var::Q),
        v(Var::P),
    );
    let a = v(Var::alpha(i));
    let f = divisor_polynomial(i);
    let r = |p: &Polynomial| RationalExpr::from(p.clone());
    let mut images = Var::PHASE.map(RationalExpr::var);
    let params;
    match i {
        0 => {
            images[0] = r(&x) + frac(a.clone(), f.clone());
            images[3] = r(&w) - frac(&a * &z, f.scale(&crate::algebra::int(2)));
            params = [[-1, 0, 0, 0], [2, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];
        }
        1 => {
            images[2] = r(&z) + frac(a.clone(), w.clone());
            params = [[1, 1, 0, 0], [0, -1, 0, 0], [0, 1, 1, 0], [0, 0, 0, 1]];
        }
        2 => {
            let f2sq = f.pow_u(2);
            let a_sq = a.pow_u(2);
            images[0] = r(&x) + frac(c(1, 2) * &a, f.clone());
            images[1] =
                r(&y) - frac(c(1, 2) * &a * &z, f.clone()) - frac(c(1, 4) * &a_sq, f2sq.clone());
            images[2] = r(&z) + frac(a.clone(), f.clone());
            images[3] = r(&w) + frac(c(1, 4) * &a * (&q - &(c(2, 1) * &x)), f.clone());
            images[4] = r(&q) + frac(a.clone(), f.clone());
            images[5] = r(&p) + frac(c(1, 4) * &a * &z, f.clone()) + frac(c(1, 8) * &a_sq, f2sq);
            params = [[1, 0, 0, 0], [0, 1, 1, 0], [0, 0, -1, 0], [0, 0, 1, 1]];
        }
        3 => {
            images[4] = r(&q) + frac(a.clone(), p.clone());
            params = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 2], [0, 0, 0, -1]];
        }
        _ => panic!("generator index {i} outside 0..=3"),
    }
    let _ = y;
    BirationalMap {
        images,
        params: ParamAction::from_int_rows(params),
    }
}

/// A word `s_{i1} s_{i2} ...`, applied left to right (the first letter acts
/// on the point first).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneratorWord(pub Vec<usize>);

impl GeneratorWord {
    pub fn translation(k: usize) -> GeneratorWord {
        let t1 = vec![1, 2, 3, 2, 1, 0];
        let word = match k {
            1 => t1,
            2 => [vec![1], t1, vec![1]].concat(),
            3 => [vec![2, 1], t1, vec![1, 2]].concat(),
            _ => panic!("translation index {k} outside 1..=3"),
        };
        GeneratorWord(word)
    }

    pub fn param_action(&self) -> ParamAction {
        self.0.iter().fold(ParamAction::identity(), |acc, &i| {
            acc.then(&generator(i).params)
        })
    }

    /// Applies the generators one after another to an exact point.
    pub fn apply_point(
        &self,
        point: &[Scalar; 6],
        t: &Scalar,
        alpha: &[Scalar; 4],
    ) -> Result<([Scalar; 6], [Scalar; 4]), AlgebraError> {
        let mut state = (point.clone(), alpha.clone());
        for &i in &self.0 {
            state = generator(i).apply_point(&state.0, t, &state.1)?;
        }
        Ok(state)
    }
}

impl FromStr for GeneratorWord {
    type Err = WeylError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split_whitespace()
            .map(|tok| match tok {
                "s0" => Ok(0),
                "s1" => Ok(1),
                "s2" => Ok(2),
                "s3" => Ok(3),
                other => Err(WeylError::BadToken(other.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(GeneratorWord)
    }
}

impl fmt::Display for GeneratorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self.0.iter().map(|i| format!("s{i}")).collect();
        f.write_str(&toks.join(" "))
    }
}

/// Symbolic composition of a word, subject to a numerator-size budget.
pub fn compose(word: &GeneratorWord, budget: usize) -> Result<BirationalMap, WeylError> {
    word.0
        .iter()
        .try_fold(BirationalMap::identity(), |acc, &i| {
            acc.then(&generator(i), budget)
        })
}

/// Per-coordinate residuals of the pushforward identity.
#[derive(Debug, Clone)]
pub struct SymmetryReport {
    pub residuals: [RationalExpr; 6],
}

impl SymmetryReport {
    pub fn holds(&self) -> bool {
        self.residuals.iter().all(|r| r.is_zero())
    }

    pub fn max_residual_terms(&self) -> usize {
        self.residuals
            .iter()
            .map(|r| r.num_terms())
            .max()
            .unwrap_or(0)
    }
}

/// Residuals of `d/dt m(u) = F_target(m(u); m(alpha))` along the source flow,
/// with `alpha0` eliminated.
pub fn pushforward_residuals(
    map: &BirationalMap,
    source: &HamiltonianSystem,
    target: &HamiltonianSystem,
) -> SymmetryReport {
    let field = source.equations_of_motion();
    let target_field = target.equations_of_motion();
    let bindings = map.bindings();
    let residuals = std::array::from_fn(|j| {
        let image = &map.images[j];
        let mut lhs = image.derive(Var::T);
        for (k, var) in Var::PHASE.iter().enumerate() {
            let partial = image.derive(*var);
            if !partial.is_zero() && !field.components[k].is_zero() {
                lhs = lhs + partial * RationalExpr::from(field.components[k].clone());
            }
        }
        let rhs = target_field.components[j]
            .substitute(&bindings)
            .expect("images have nonzero denominators");
        eliminate_alpha0(&(lhs - rhs))
    });
    SymmetryReport { residuals }
}

pub fn is_backlund_symmetry(map: &BirationalMap, sys: &HamiltonianSystem) -> SymmetryReport {
    pushforward_residuals(map, sys, sys)
}

/// Outcome of summing `exp(alpha_i / f_i * ad_{f_i}) g`.
#[derive(Debug, Clone)]
pub struct AdjointSeries {
    pub value: RationalExpr,
    /// Highest nonzero bracket order.
    pub order: usize,
    pub matches_generator: bool,
}

pub const ADJOINT_MAX_DEPTH: usize = 8;

pub fn adjoint_series_check(i: usize, g: Var) -> Result<AdjointSeries, WeylError> {
    assert!(
        g.is_phase(),
        "adjoint series is checked on phase coordinates"
    );
    let f = divisor_polynomial(i);
    let ratio = frac(v(Var::alpha(i)), f.clone());
    let mut term = v(g);
    let mut value = RationalExpr::zero();
    let mut coeff = RationalExpr::one();
    let mut order = 0;
    for n in 0..=ADJOINT_MAX_DEPTH {
        if term.is_zero() {
            let matches_generator = value == *generator(i).image(g);
            return Ok(AdjointSeries {
                value,
                order,
                matches_generator,
            });
        }
        order = n;
        value = value + &coeff * &RationalExpr::from(term.clone());
        coeff = (&coeff * &ratio).scale(&Scalar::new(1.into(), ((n + 1) as i64).into()));
        term = PoissonStructure.bracket(&f, &term);
    }
    Err(WeylError::SeriesDiverges {
        index: i,
        depth: ADJOINT_MAX_DEPTH,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationOrder {
    Order(usize),
    Unresolved(String),
}

/// Order of `s_i s_j` found by iterating exact random points.
pub fn weyl_relation_order(
    i: usize,
    j: usize,
    samples: usize,
    seed: u64,
    cap: usize,
) -> RelationOrder {
    assert_ne!(i, j);
    let mut sampler = ExactSampler::new(seed);
    let word = GeneratorWord(vec![i, j]);
    let mut found = None;
    let mut done = 0;
    let mut attempts = 0;
    while done < samples {
        attempts += 1;
        if attempts > samples * 20 {
            return RelationOrder::Unresolved("too many sampled points hit poles".into());
        }
        let params = sampler.generic_parameters();
        let start = (sampler.phase_point(), params.alpha().clone());
        let t = sampler.time();
        let mut state = start.clone();
        let mut order = None;
        let mut pole = false;
        for n in 1..=cap {
            match word.apply_point(&state.0, &t, &state.1) {
                Ok(next) => state = next,
                Err(_) => {
                    pole = true;
                    break;
                }
            }
            if state == start {
                order = Some(n);
                break;
            }
        }
        if pole {
            continue;
        }
        let Some(n) = order else {
            return RelationOrder::Unresolved(format!("no return within {cap} iterations"));
        };
        match found {
            None => found = Some(n),
            Some(m) if m != n => {
                return RelationOrder::Unresolved(format!("points disagree: {m} vs {n}"))
            }
            _ => {}
        }
        done += 1;
    }
    found.map_or(
        RelationOrder::Unresolved("no samples".into()),
        RelationOrder::Order,
    )
}

/// Check that `s_i` squares to the identity at exact random points.
pub fn involution_points(i: usize, samples: usize, seed: u64) -> Result<usize, String> {
    let mut sampler = ExactSampler::new(seed);
    let word = GeneratorWord(vec![i, i]);
    let mut checked = 0;
    let mut attempts = 0;
    while checked < samples {
        attempts += 1;
        if attempts > samples * 20 {
            return Err("too many poles".into());
        }
        let point = sampler.phase_point();
        let alpha = sampler.generic_parameters().alpha().clone();
        let t = sampler.time();
        match word.apply_point(&point, &t, &alpha) {
            Ok((p, a)) if p == point && a == alpha => checked += 1,
            Ok(_) => return Err(format!("s{i}^2 moved a point")),
            Err(_) => continue,
        }
    }
    Ok(checked)
}

#[derive(Debug, Clone)]
pub struct DivisorReport {
    pub index: usize,
    /// Flow derivative of `f_i` on `alpha_i = 0`, reduced modulo `f_i`.
    pub residual: Polynomial,
}

impl DivisorReport {
    pub fn holds(&self) -> bool {
        self.residual.is_zero()
    }
}

pub fn invariant_divisor_check(i: usize, sys: &HamiltonianSystem) -> DivisorReport {
    let div = invariant_divisor(i);
    let derivative = sys.total_time_derivative(&div.poly);
    let on_locus = derivative
        .substitute(&alpha_zero_locus(i))
        .expect("parameter substitution is polynomial");
    let on_locus = on_locus.as_polynomial().expect("polynomial").clone();
    let residual = on_locus
        .reduce_mod(&div.poly, div.solved_var)
        .expect("divisors are linear in their solved variable");
    DivisorReport { index: i, residual }
}

/// The symplectic change of variables making `f2` a coordinate.
#[derive(Debug, Clone)]
pub struct Alpha2Transform {
    pub forward: BirationalMap,
    pub inverse: BirationalMap,
}

impl Alpha2Transform {
    pub fn new() -> Self {
        let (x, y, z, w, q, p, t) = (
            v(Var::X),
            v(Var::Y),
            v(Var::Z),
            v(Var::W),
            v(Var::Q),
            v(Var::P),
            v(Var::T),
        );
        let forward = [
            &x - &(c(1, 2) * &z),
            &y + &(c(1, 4) * z.pow_u(2)),
            z.clone(),
            divisor_polynomial(2),
            &q - &z,
            &p - &(c(1, 8) * z.pow_u(2)),
        ];
        let xi = &x + &(c(1, 2) * &z);
        let yi = &y - &(c(1, 4) * z.pow_u(2));
        let qi = &q + &z;
        let pi = &p + &(c(1, 8) * z.pow_u(2));
        let wi = &w - &pi - c(1, 2) * &yi - c(1, 2) * &xi * &z + c(1, 4) * &z * &qi - t;
        let inverse = [xi, yi, z, wi, qi, pi];
        Alpha2Transform {
            forward: BirationalMap {
                images: forward.map(RationalExpr::from),
                params: ParamAction::identity(),
            },
            inverse: BirationalMap {
                images: inverse.map(RationalExpr::from),
                params: ParamAction::identity(),
            },
        }
    }

    /// Brackets of image pairs reproduce the canonical relations.
    pub fn is_symplectic(&self) -> bool {
        canonical_relations_hold(&self.forward.images)
    }

    pub fn round_trip(&self) -> bool {
        let a = self.forward.then(&self.inverse, usize::MAX);
        let b = self.inverse.then(&self.forward, usize::MAX);
        matches!((a, b), (Ok(a), Ok(b)) if a.images == BirationalMap::identity().images
            && b.images == BirationalMap::identity().images)
    }

    /// `dw2/dt` at `alpha2 = 0`, in transformed coordinates, restricted to
    /// `w2 = 0`.
    pub fn invariance_residual(&self, sys: &HamiltonianSystem) -> Polynomial {
        let w2 = self.forward.image(Var::W).as_polynomial().unwrap().clone();
        let derivative = sys
            .total_time_derivative(&w2)
            .substitute(&alpha_zero_locus(2))
            .unwrap();
        let in_new = derivative
            .substitute(&self.inverse.bindings_phase_only())
            .unwrap();
        let in_new = in_new
            .as_polynomial()
            .expect("triangular map keeps polynomials");
        let at_zero: Assignment = [(Var::W, Scalar::zero())].into_iter().collect();
        in_new.specialize(&at_zero).unwrap()
    }
}

impl Default for Alpha2Transform {
    fn default() -> Self {
        Self::new()
    }
}

impl BirationalMap {
    fn bindings_phase_only(&self) -> Bindings {
        Var::PHASE
            .iter()
            .zip(self.images.iter())
            .map(|(v, e)| (*v, e.clone()))
            .collect()
    }
}

/// `{Y,X} = {W,Z} = {P,Q} = 1` and all other image brackets vanish.
pub fn canonical_relations_hold(images: &[RationalExpr; 6]) -> bool {
    let ps = PoissonStructure;
    for a in 0..6 {
        for b in 0..6 {
            let expected = match (Var::PHASE[a], Var::PHASE[b]) {
                (Var::Y, Var::X) | (Var::W, Var::Z) | (Var::P, Var::Q) => Scalar::one(),
                (Var::X, Var::Y) | (Var::Z, Var::W) | (Var::Q, Var::P) => -Scalar::one(),
                _ => Scalar::zero(),
            };
            if ps.bracket_rational(&images[a], &images[b]) != RationalExpr::constant(expected) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone)]
pub struct Translation {
    pub index: usize,
    pub word: GeneratorWord,
    pub vector: Option<[Scalar; 4]>,
}

pub fn translation(k: usize) -> Translation {
    let word = GeneratorWord::translation(k);
    let vector = word.param_action().translation_vector();
    Translation {
        index: k,
        word,
        vector,
    }
}

/// Specialised parameters of the image system under a word.
pub fn transformed_parameters(word: &GeneratorWord, params: &Parameters) -> [Scalar; 4] {
    word.param_action().apply(params.alpha())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, ratio};

    #[test]
    fn generator_images_match_formulas() {
        assert_eq!(
            *generator(1).image(Var::Z),
            RationalExpr::var(Var::Z) + frac(v(Var::ALPHA1), v(Var::W))
        );
        assert_eq!(
            *generator(3).image(Var::Q),
            RationalExpr::var(Var::Q) + frac(v(Var::ALPHA3), v(Var::P))
        );
        let f0 = divisor_polynomial(0);
        assert_eq!(
            *generator(0).image(Var::W),
            RationalExpr::var(Var::W) - frac(&v(Var::ALPHA0) * &v(Var::Z), f0.scale(&int(2)))
        );
    }

    #[test]
    fn parameter_actions_preserve_sum() {
        for i in 0..4 {
            assert!(generator(i).params.preserves_sum());
        }
    }

    #[test]
    fn empty_word_is_identity() {
        assert_eq!(
            compose(&GeneratorWord(vec![]), 100).unwrap(),
            BirationalMap::identity()
        );
    }

    #[test]
    fn s1_squared_is_identity_symbolically() {
        let m = compose(&GeneratorWord(vec![1, 1]), 10_000).unwrap();
        assert_eq!(m.images, BirationalMap::identity().images);
        assert_eq!(m.params, ParamAction::identity());
    }

    #[test]
    fn t1_translates_parameters() {
        assert_eq!(
            translation(1).vector,
            Some([int(-2), int(2), int(0), int(0)])
        );
    }

    #[test]
    fn word_parsing() {
        let w: GeneratorWord = "s1 s2  s0".parse().unwrap();
        assert_eq!(w.0, vec![1, 2, 0]);
        assert_eq!(w.to_string(), "s1 s2 s0");
        assert!("s1 s4".parse::<GeneratorWord>().is_err());
    }

    #[test]
    fn adjoint_series_examples() {
        let s = adjoint_series_check(2, Var::X).unwrap();
        assert_eq!(s.order, 1);
        assert!(s.matches_generator);
        let s = adjoint_series_check(2, Var::Y).unwrap();
        assert_eq!(s.order, 2);
        assert!(s.matches_generator);
        let s = adjoint_series_check(1, Var::X).unwrap();
        assert_eq!(s.order, 0);
        assert_eq!(s.value, RationalExpr::var(Var::X));
    }

    #[test]
    fn s1_moves_z_by_alpha_over_w() {
        let point = [int(0), int(0), int(3), int(2), int(0), int(0)];
        let alpha = [int(0), int(1), int(0), int(0)];
        let (img, a) = generator(1).apply_point(&point, &int(1), &alpha).unwrap();
        assert_eq!(img[2], int(3) + ratio(1, 2));
        assert_eq!(a, [int(1), int(-1), int(1), int(0)]);
    }

    #[test]
    fn pole_is_reported() {
        let point = [int(0), int(0), int(3), int(0), int(0), int(0)];
        let alpha = [int(0), int(1), int(0), int(0)];
        assert!(matches!(
            generator(1).apply_point(&point, &int(1), &alpha),
            Err(AlgebraError::PoleAtPoint(_))
        ));
    }

    #[test]
    fn wrong_map_is_not_a_symmetry() {
        let mut m = BirationalMap::identity();
        m.images[2] = RationalExpr::var(Var::Z) + RationalExpr::one();
        let report = is_backlund_symmetry(&m, &HamiltonianSystem::d42());
        assert!(!report.holds());
        assert!(
            is_backlund_symmetry(&BirationalMap::identity(), &HamiltonianSystem::d42()).holds()
        );
    }

    #[test]
    fn alpha2_transform_properties() {
        let tr = Alpha2Transform::new();
        assert_eq!(
            tr.forward.image(Var::W).as_polynomial(),
            Some(&divisor_polynomial(2))
        );
        assert!(tr.is_symplectic());
        assert!(tr.round_trip());
        assert!(tr.invariance_residual(&HamiltonianSystem::d42()).is_zero());
    }
}
