use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::poly::{leading_positive, Assignment, Polynomial};
use super::scalar::Scalar;
use super::var::Var;
use super::AlgebraError;

/// Simultaneous substitution `var -> expression`.
pub type Bindings = BTreeMap<Var, RationalExpr>;

/// Quotient of polynomials with a factored denominator.
///
/// The denominator is kept as `monomial * prod(factor^exp)` where every factor
/// is primitive, has a positive leading coefficient, carries no monomial
/// content and no scalar. Powers of `t` never appear in the denominator: they
/// are moved into the numerator as Laurent exponents. Cancellation is limited
/// to monomial content and trial division by the known factors; there is no
/// general multivariate gcd.
#[derive(Clone)]
pub struct RationalExpr {
    num: Polynomial,
    den_mono: Monomial,
    factors: Vec<(Polynomial, u32)>,
}

/// Splits `p` as `scalar * monomial * primitive`, with the primitive part's
/// leading coefficient positive and its monomial content trivial.
fn decompose(p: &Polynomial) -> (Scalar, Monomial, Polynomial) {
    debug_assert!(!p.is_zero());
    let mono = p.monomial_content();
    let mut content = p.content();
    if !leading_positive(p) {
        content = -content;
    }
    let inv = content.recip();
    let prim = p
        .exact_divide(&Polynomial::term(Scalar::one(), mono))
        .unwrap();
    (content, mono, prim.scale(&inv))
}

fn push_factor(factors: &mut Vec<(Polynomial, u32)>, mut p: Polynomial, e: u32) {
    if e == 0 || p.is_one() {
        return;
    }
    if let Some(slot) = factors.iter_mut().find(|(f, _)| *f == p) {
        slot.1 += e;
        return;
    }
    // peel off known factors hidden inside the new one
    for (f, mult) in factors.iter_mut() {
        while let Some(q) = p.exact_divide(f) {
            *mult += e;
            let (_, _, prim) = decompose(&q);
            p = prim;
            if p.is_one() {
                return;
            }
        }
    }
    factors.push((p, e));
}

fn expand_den(mono: &Monomial, factors: &[(Polynomial, u32)]) -> Polynomial {
    factors
        .iter()
        .fold(Polynomial::term(Scalar::one(), *mono), |acc, (f, e)| {
            &acc * &f.pow_u(*e)
        })
}

fn split_t(m: &Monomial) -> (Monomial, Monomial) {
    let t = Monomial::var_pow(Var::T, m.exp(Var::T));
    (m.div(&t), t)
}

impl RationalExpr {
    pub fn zero() -> Self {
        Polynomial::zero().into()
    }

    pub fn one() -> Self {
        Polynomial::one().into()
    }

    pub fn constant(c: Scalar) -> Self {
        Polynomial::constant(c).into()
    }

    pub fn var(v: Var) -> Self {
        Polynomial::var(v).into()
    }

    /// `num / den`; fails when `den` is the zero polynomial.
    pub fn ratio(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(&RationalExpr::from(num) * &RationalExpr::from(den).inverse_unchecked())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    /// The denominator multiplied out.
    pub fn denominator(&self) -> Polynomial {
        expand_den(&self.den_mono, &self.factors)
    }

    pub fn denominator_monomial(&self) -> &Monomial {
        &self.den_mono
    }

    pub fn denominator_factors(&self) -> &[(Polynomial, u32)] {
        &self.factors
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True iff the denominator is a scalar times a power of `t`.
    pub fn is_polynomial(&self) -> bool {
        self.den_mono.is_one() && self.factors.is_empty()
    }

    pub fn as_polynomial(&self) -> Option<&Polynomial> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn as_constant(&self) -> Option<Scalar> {
        self.as_polynomial().and_then(|p| p.as_constant())
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            return RationalExpr::zero();
        }
        let common = self
            .num
            .monomial_content()
            .gcd(&self.den_mono)
            .with_exp(Var::T, 0);
        if !common.is_one() {
            self.num = self.num.mul_monomial(&common.pow(-1));
            self.den_mono = self.den_mono.div(&common);
        }
        for (f, e) in self.factors.iter_mut() {
            while *e > 0 {
                match self.num.exact_divide(f) {
                    Some(q) => {
                        self.num = q;
                        *e -= 1;
                    }
                    None => break,
                }
            }
        }
        self.factors.retain(|(_, e)| *e > 0);
        self
    }

    /// `1/self` without a zero check (caller guarantees `self != 0`).
    fn inverse_unchecked(&self) -> Self {
        let (content, mono, prim) = decompose(&self.num);
        let (mono_rest, tpow) = split_t(&mono);
        let num = self
            .denominator()
            .mul_monomial(&tpow.pow(-1))
            .scale(&content.recip());
        let mut factors = Vec::new();
        push_factor(&mut factors, prim, 1);
        RationalExpr {
            num,
            den_mono: mono_rest,
            factors,
        }
        .normalized()
    }

    pub fn inverse(&self) -> Result<Self, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Ok(self.inverse_unchecked())
    }

    pub fn pow(&self, e: i32) -> Result<Self, AlgebraError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RationalExpr {
            num: base.num.pow_u(k),
            den_mono: base.den_mono.pow(k as i32),
            factors: base
                .factors
                .iter()
                .map(|(f, x)| (f.clone(), x * k))
                .collect(),
        })
    }

    fn lcm_den(&self, other: &Self) -> (Monomial, Vec<(Polynomial, u32)>) {
        let mono = self.den_mono.lcm(&other.den_mono);
        let mut factors = self.factors.clone();
        for (f, e) in &other.factors {
            match factors.iter_mut().find(|(g, _)| g == f) {
                Some(slot) => slot.1 = slot.1.max(*e),
                None => factors.push((f.clone(), *e)),
            }
        }
        (mono, factors)
    }

    /// Numerator rescaled to the (larger) denominator `mono * factors`.
    fn lift(&self, mono: &Monomial, factors: &[(Polynomial, u32)]) -> Polynomial {
        let mut out = self.num.mul_monomial(&mono.div(&self.den_mono));
        for (f, e) in factors {
            let have = self
                .factors
                .iter()
                .find(|(g, _)| g == f)
                .map_or(0, |(_, x)| *x);
            if *e > have {
                out = &out * &f.pow_u(e - have);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return RationalExpr::zero();
        }
        RationalExpr {
            num: self.num.scale(c),
            den_mono: self.den_mono,
            factors: self.factors.clone(),
        }
    }

    /// Formal partial derivative (quotient rule on the factored denominator).
    pub fn derive(&self, v: Var) -> Self {
        let mut atoms: Vec<(Polynomial, u32, Polynomial)> = Vec::new();
        let mono_exp = self.den_mono.exp(v);
        if mono_exp > 0 {
            atoms.push((Polynomial::var(v), mono_exp as u32, Polynomial::one()));
        }
        for (f, e) in &self.factors {
            let df = f.derive(v);
            if !df.is_zero() {
                atoms.push((f.clone(), *e, df));
            }
        }
        let dnum = self.num.derive(v);
        if atoms.is_empty() {
            return RationalExpr {
                num: dnum,
                den_mono: self.den_mono,
                factors: self.factors.clone(),
            }
            .normalized();
        }
        let radical = atoms
            .iter()
            .fold(Polynomial::one(), |acc, (f, _, _)| &acc * f);
        let mut correction = Polynomial::zero();
        for (k, (_, e, df)) in atoms.iter().enumerate() {
            let others = atoms
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .fold(Polynomial::one(), |acc, (_, (f, _, _))| &acc * f);
            correction = correction + (&others * df).scale(&Scalar::from_integer((*e).into()));
        }
        let num = &dnum * &radical - &self.num * &correction;
        let mut den_mono = self.den_mono;
        if mono_exp > 0 {
            den_mono = den_mono.mul(&Monomial::var(v));
        }
        let factors = self
            .factors
            .iter()
            .map(|(f, e)| {
                let bump = atoms.iter().any(|(g, _, _)| g == f) as u32;
                (f.clone(), e + bump)
            })
            .collect();
        RationalExpr {
            num,
            den_mono,
            factors,
        }
        .normalized()
    }

    pub fn substitute(&self, bindings: &Bindings) -> Result<Self, AlgebraError> {
        let mut out = self.num.substitute(bindings)?;
        let den = Polynomial::term(Scalar::one(), self.den_mono).substitute(bindings)?;
        out = out.checked_div(&den)?;
        for (f, e) in &self.factors {
            let fs = f.substitute(bindings)?;
            out = out.checked_div(&fs.pow(*e as i32)?)?;
        }
        Ok(out)
    }

    pub fn specialize(&self, values: &Assignment) -> Result<Self, AlgebraError> {
        let bindings: Bindings = values
            .iter()
            .map(|(v, c)| (*v, RationalExpr::constant(c.clone())))
            .collect();
        self.substitute(&bindings)
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, AlgebraError> {
        Ok(self * &other.inverse()?)
    }

    /// Exact value at a point; names the vanishing factor on a pole.
    pub fn evaluate(&self, point: &Assignment) -> Result<Scalar, AlgebraError> {
        let mut den = Polynomial::term(Scalar::one(), self.den_mono).evaluate(point)?;
        if den.is_zero() {
            return Err(AlgebraError::PoleAtPoint(self.den_mono.to_string()));
        }
        for (f, e) in &self.factors {
            let val = f.evaluate(point)?;
            if val.is_zero() {
                return Err(AlgebraError::PoleAtPoint(f.to_string()));
            }
            den *= num_traits::Pow::pow(&val, *e);
        }
        Ok(self.num.evaluate(point)? / den)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.num.contains_var(v)
            || self.den_mono.exp(v) != 0
            || self.factors.iter().any(|(f, _)| f.contains_var(v))
    }

    /// Terms of the numerator.
    pub fn num_terms(&self) -> usize {
        self.num.len()
    }
}

impl From<Polynomial> for RationalExpr {
    fn from(num: Polynomial) -> Self {
        RationalExpr {
            num,
            den_mono: Monomial::one(),
            factors: Vec::new(),
        }
    }
}

impl From<Var> for RationalExpr {
    fn from(v: Var) -> Self {
        RationalExpr::var(v)
    }
}

impl PartialEq for RationalExpr {
    fn eq(&self, other: &Self) -> bool {
        let (mono, factors) = self.lcm_den(other);
        self.lift(&mono, &factors) == other.lift(&mono, &factors)
    }
}

impl Add<&RationalExpr> for &RationalExpr {
    type Output = RationalExpr;
    fn add(self, rhs: &RationalExpr) -> RationalExpr {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        let (mono, factors) = self.lcm_den(rhs);
        let num = self.lift(&mono, &factors) + rhs.lift(&mono, &factors);
        RationalExpr {
            num,
            den_mono: mono,
            factors,
        }
        .normalized()
    }
}

impl Neg for &RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        RationalExpr {
            num: -&self.num,
            den_mono: self.den_mono,
            factors: self.factors.clone(),
        }
    }
}

impl Sub<&RationalExpr> for &RationalExpr {
    type Output = RationalExpr;
    fn sub(self, rhs: &RationalExpr) -> RationalExpr {
        self + &(-rhs)
    }
}

impl Mul<&RationalExpr> for &RationalExpr {
    type Output = RationalExpr;
    fn mul(self, rhs: &RationalExpr) -> RationalExpr {
        if self.is_zero() || rhs.is_zero() {
            return RationalExpr::zero();
        }
        // cancel across before multiplying out
        let a = RationalExpr {
            num: self.num.clone(),
            den_mono: rhs.den_mono,
            factors: rhs.factors.clone(),
        }
        .normalized();
        let b = RationalExpr {
            num: rhs.num.clone(),
            den_mono: self.den_mono,
            factors: self.factors.clone(),
        }
        .normalized();
        let mut factors = a.factors;
        for (f, e) in b.factors {
            match factors.iter_mut().find(|(g, _)| *g == f) {
                Some(slot) => slot.1 += e,
                None => factors.push((f, e)),
            }
        }
        RationalExpr {
            num: &a.num * &b.num,
            den_mono: a.den_mono.mul(&b.den_mono),
            factors,
        }
    }
}

impl Div<&RationalExpr> for &RationalExpr {
    type Output = RationalExpr;
    /// Panics on division by zero; use `checked_div` for fallible division.
    fn div(self, rhs: &RationalExpr) -> RationalExpr {
        self.checked_div(rhs)
            .expect("division by zero rational expression")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: RationalExpr) -> RationalExpr {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&RationalExpr> for RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: &RationalExpr) -> RationalExpr {
                (&self).$method(rhs)
            }
        }
        impl $tr<RationalExpr> for &RationalExpr {
            type Output = RationalExpr;
            fn $method(self, rhs: RationalExpr) -> RationalExpr {
                self.$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for RationalExpr {
    type Output = RationalExpr;
    fn neg(self) -> RationalExpr {
        -&self
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / (", self.num)?;
        let mut first = true;
        if !self.den_mono.is_one() {
            write!(f, "{}", self.den_mono)?;
            first = false;
        }
        for (p, e) in &self.factors {
            if !first {
                f.write_str(" * ")?;
            }
            first = false;
            write!(f, "({p})^{e}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalExpr({self})")
    }
}

/// A binding raised to a power, with its denominator expressed against a
/// shared factor registry.
struct PowerAtom {
    num: Polynomial,
    mono: Monomial,
    factors: Vec<(usize, u32)>,
}

#[derive(Default)]
struct FactorRegistry {
    polys: Vec<Polynomial>,
}

impl FactorRegistry {
    fn id(&mut self, p: &Polynomial) -> usize {
        match self.polys.iter().position(|f| f == p) {
            Some(i) => i,
            None => {
                self.polys.push(p.clone());
                self.polys.len() - 1
            }
        }
    }
}

impl Polynomial {
    /// Simultaneous substitution of rational expressions for variables.
    ///
    /// Terms are grouped by their denominator so that each distinct
    /// denominator ratio is multiplied out once.
    pub fn substitute(&self, bindings: &Bindings) -> Result<RationalExpr, AlgebraError> {
        if self.is_zero() {
            return Ok(RationalExpr::zero());
        }
        if bindings.is_empty()
            || !self
                .terms()
                .iter()
                .any(|(m, _)| m.vars().any(|(v, _)| bindings.contains_key(&v)))
        {
            return Ok(self.clone().into());
        }
        let mut registry = FactorRegistry::default();
        let mut bases: HashMap<(Var, bool), RationalExpr> = HashMap::new();
        let mut atoms: HashMap<(Var, i32), PowerAtom> = HashMap::new();

        for (m, _) in self.terms() {
            for (v, e) in m.vars() {
                let Some(b) = bindings.get(&v) else { continue };
                if atoms.contains_key(&(v, e)) {
                    continue;
                }
                let positive = e > 0;
                if let Entry::Vacant(slot) = bases.entry((v, positive)) {
                    slot.insert(if positive { b.clone() } else { b.inverse()? });
                }
                let base = &bases[&(v, positive)];
                let k = e.unsigned_abs();
                let factors = base
                    .factors
                    .iter()
                    .map(|(f, x)| (registry.id(f), x * k))
                    .collect();
                atoms.insert(
                    (v, e),
                    PowerAtom {
                        num: base.num.pow_u(k),
                        mono: base.den_mono.pow(k as i32),
                        factors,
                    },
                );
            }
        }

        // group terms by their denominator exponent vector
        type DenKey = (Monomial, Vec<u32>);
        let mut groups: BTreeMap<Vec<i64>, (DenKey, Polynomial)> = BTreeMap::new();
        let nf = registry.polys.len();
        for (m, c) in self.terms() {
            let mut free = *m;
            let mut num = Polynomial::constant(c.clone());
            let mut dmono = Monomial::one();
            let mut dexp = vec![0u32; nf];
            for (v, e) in m.vars() {
                if let Some(atom) = atoms.get(&(v, e)) {
                    free = free.with_exp(v, 0);
                    num = &num * &atom.num;
                    dmono = dmono.mul(&atom.mono);
                    for (id, x) in &atom.factors {
                        dexp[*id] += x;
                    }
                }
            }
            let num = num.mul_monomial(&free);
            let mut key: Vec<i64> = (0..crate::algebra::NVARS)
                .map(|i| dmono.exp(Var::from_index(i).unwrap()) as i64)
                .collect();
            key.extend(dexp.iter().map(|x| *x as i64));
            let slot = groups
                .entry(key)
                .or_insert_with(|| ((dmono, dexp.clone()), Polynomial::zero()));
            slot.1 = &slot.1 + &num;
        }

        let mut lcm_mono = Monomial::one();
        let mut lcm_exp = vec![0u32; nf];
        for ((dmono, dexp), _) in groups.values() {
            lcm_mono = lcm_mono.lcm(dmono);
            for (a, b) in lcm_exp.iter_mut().zip(dexp) {
                *a = (*a).max(*b);
            }
        }
        let mut power_cache: HashMap<(usize, u32), Polynomial> = HashMap::new();
        let mut total = Polynomial::zero();
        for ((dmono, dexp), num) in groups.into_values() {
            if num.is_zero() {
                continue;
            }
            let mut lifted = num.mul_monomial(&lcm_mono.div(&dmono));
            for (id, (have, want)) in dexp.iter().zip(&lcm_exp).enumerate() {
                if want > have {
                    let k = want - have;
                    let pw = power_cache
                        .entry((id, k))
                        .or_insert_with(|| registry.polys[id].pow_u(k));
                    lifted = &lifted * &*pw;
                }
            }
            total = total + lifted;
        }
        let (tless, tpow) = split_t(&lcm_mono);
        Ok(RationalExpr {
            num: total.mul_monomial(&tpow.pow(-1)),
            den_mono: tless,
            factors: registry
                .polys
                .into_iter()
                .zip(lcm_exp)
                .filter(|(_, e)| *e > 0)
                .collect(),
        }
        .normalized())
    }
}

/// Convenience: `num/den` with both sides polynomial; panics on zero `den`.
pub fn frac(num: Polynomial, den: Polynomial) -> RationalExpr {
    RationalExpr::ratio(num, den).expect("zero denominator")
}

/// Sign helper used by normal-form checks.
pub fn denominator_leading_positive(r: &RationalExpr) -> bool {
    leading_positive(&r.denominator())
        && r.factors
            .iter()
            .all(|(f, _)| f.leading().is_some_and(|(_, c)| c.is_positive()))
}
