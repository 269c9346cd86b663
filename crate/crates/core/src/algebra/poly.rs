use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::scalar::{format_scalar, int, parse_scalar, rational_gcd, Scalar};
use super::var::Var;
use super::AlgebraError;

/// Exact values for some variables; used by `evaluate` and `specialize`.
pub type Assignment = BTreeMap<Var, Scalar>;

/// Sparse multivariate polynomial with rational coefficients.
///
/// Terms are kept sorted by descending graded-lex order with no zero
/// coefficients, so structural equality is mathematical equality. Only `t`
/// may carry negative exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    terms: Vec<(Monomial, Scalar)>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn int(n: i64) -> Self {
        Self::constant(int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::term(Scalar::one(), Monomial::var(v))
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        Self::term(Scalar::one(), Monomial::var_pow(v, e))
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        debug_assert!(!m.has_negative_outside_t(), "negative exponent in {m}");
        if c.is_zero() {
            Self::zero()
        } else {
            Polynomial {
                terms: vec![(m, c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, Scalar> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert_with(Scalar::zero) += c;
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, Scalar>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by_key(|a| std::cmp::Reverse(a.0));
        Polynomial { terms }
    }

    fn from_sorted(terms: Vec<(Monomial, Scalar)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[(Monomial, Scalar)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The scalar value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.as_slice() {
            [] => Some(Scalar::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &Scalar)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, Scalar)> {
        self.terms.first()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms
            .binary_search_by(|(k, _)| m.cmp(k))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| Scalar::zero())
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial::from_sorted(self.terms.iter().map(|(m, k)| (*m, k * c)).collect())
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial::from_sorted(
            self.terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        )
    }

    /// Integer power; negative exponents are only defined for monomials.
    pub fn pow(&self, e: i32) -> Result<Polynomial, AlgebraError> {
        if e < 0 {
            let (m, c) = self
                .as_monomial()
                .ok_or(AlgebraError::UnsupportedPower { exp: e })?;
            let inv = m.pow(e);
            if inv.has_negative_outside_t() {
                return Err(AlgebraError::UnsupportedPower { exp: e });
            }
            return Ok(Polynomial::term(c.recip().pow(-e), inv));
        }
        Ok(self.pow_u(e as u32))
    }

    pub fn pow_u(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derive(&self, v: Var) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exp(v);
            (e != 0).then(|| (m.with_exp(v, e - 1), c * int(e as i64)))
        }))
    }

    /// Antiderivative in `v`; fails on a `v^-1` term.
    pub fn integrate(&self, v: Var) -> Result<Polynomial, AlgebraError> {
        let mut out = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            let e = m.exp(v);
            if e == -1 {
                return Err(AlgebraError::UnsupportedPower { exp: -1 });
            }
            out.push((m.with_exp(v, e + 1), c / int(e as i64 + 1)));
        }
        Ok(Polynomial::from_terms(out))
    }

    pub fn degree_in(&self, v: Var) -> i32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).max().unwrap_or(0)
    }

    pub fn min_exp(&self, v: Var) -> i32 {
        self.terms.iter().map(|(m, _)| m.exp(v)).min().unwrap_or(0)
    }

    pub fn phase_degree(&self) -> i32 {
        self.terms
            .iter()
            .map(|(m, _)| m.phase_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.terms.iter().any(|(m, _)| m.exp(v) != 0)
    }

    /// Positive rational gcd of all coefficients (zero for the zero polynomial).
    pub fn content(&self) -> Scalar {
        self.terms
            .iter()
            .fold(Scalar::zero(), |g, (_, c)| rational_gcd(&g, c))
    }

    /// Exponent-wise minimum over all terms.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        match it.next() {
            None => Monomial::one(),
            Some((first, _)) => it.fold(*first, |g, (m, _)| g.gcd(m)),
        }
    }

    /// Splits into monomials over the kept variables, each with a polynomial
    /// coefficient in the remaining variables.
    pub fn collect_by(&self, keep: impl Fn(Var) -> bool) -> BTreeMap<Monomial, Polynomial> {
        let mut groups: BTreeMap<Monomial, Vec<(Monomial, Scalar)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let kept = m.restrict_to(&keep);
            groups
                .entry(kept)
                .or_default()
                .push((m.div(&kept), c.clone()));
        }
        groups
            .into_iter()
            .map(|(k, ts)| (k, Polynomial::from_terms(ts)))
            .collect()
    }

    /// Substitutes exact values for some variables, keeping the rest symbolic.
    pub fn specialize(&self, values: &Assignment) -> Result<Polynomial, AlgebraError> {
        let mut out = Vec::with_capacity(self.len());
        for (m, c) in &self.terms {
            let mut coef = c.clone();
            let mut rest = *m;
            for (v, e) in m.vars() {
                if let Some(val) = values.get(&v) {
                    coef *= scalar_pow(val, e, v)?;
                    rest = rest.with_exp(v, 0);
                }
            }
            out.push((rest, coef));
        }
        Ok(Polynomial::from_terms(out))
    }

    pub fn evaluate(&self, point: &Assignment) -> Result<Scalar, AlgebraError> {
        let mut acc = Scalar::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.vars() {
                let val = point
                    .get(&v)
                    .ok_or_else(|| AlgebraError::Unbound(v.name().into_owned()))?;
                term *= scalar_pow(val, e, v)?;
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Exact quotient `self / den`, or `None` when `den` does not divide.
    ///
    /// `t` is treated as a unit: both sides are shifted to non-negative
    /// `t` exponents, after which graded-lex division is a terminating
    /// exact test because `t` does not divide the shifted divisor.
    pub fn exact_divide(&self, den: &Polynomial) -> Option<Polynomial> {
        assert!(!den.is_zero(), "exact_divide by zero polynomial");
        if self.is_zero() {
            return Some(Polynomial::zero());
        }
        if let Some((dm, dc)) = den.as_monomial() {
            if !dm.divides_laurent_t(&self.monomial_content()) {
                return None;
            }
            let inv = dc.recip();
            return Some(Polynomial::from_sorted(
                self.terms
                    .iter()
                    .map(|(m, c)| (m.div(dm), c * &inv))
                    .collect(),
            ));
        }
        let num_shift = Monomial::var_pow(Var::T, self.min_exp(Var::T));
        let den_shift = Monomial::var_pow(Var::T, den.min_exp(Var::T));
        let divisor: Vec<(Monomial, Scalar)> = den
            .terms
            .iter()
            .map(|(m, c)| (m.div(&den_shift), c.clone()))
            .collect();
        let (lead_m, lead_c) = divisor[0].clone();
        let lead_inv = lead_c.recip();

        let mut rem: BTreeMap<std::cmp::Reverse<Monomial>, Scalar> = self
            .terms
            .iter()
            .map(|(m, c)| (std::cmp::Reverse(m.div(&num_shift)), c.clone()))
            .collect();
        let mut quotient = Vec::new();
        while let Some((std::cmp::Reverse(m), c)) = rem.pop_first() {
            let qm = m.div(&lead_m);
            if qm.has_negative() {
                return None;
            }
            let qc = &c * &lead_inv;
            for (dm, dc) in divisor.iter().skip(1) {
                let key = std::cmp::Reverse(dm.mul(&qm));
                let delta = dc * &qc;
                match rem.entry(key) {
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        *o.get_mut() -= delta;
                        if o.get().is_zero() {
                            o.remove();
                        }
                    }
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(-delta);
                    }
                }
            }
            quotient.push((qm, qc));
        }
        let shift = num_shift.div(&den_shift);
        Some(Polynomial::from_terms(
            quotient.into_iter().map(|(m, c)| (m.mul(&shift), c)),
        ))
    }

    /// Eliminates `var` using `divisor = 0`, where `divisor` is linear in `var`
    /// with a nonzero scalar coefficient. The result is zero iff `self` lies
    /// in the principal ideal generated by `divisor`.
    pub fn reduce_mod(&self, divisor: &Polynomial, var: Var) -> Result<Polynomial, AlgebraError> {
        let not_linear = || AlgebraError::NotLinear {
            var: var.name().into_owned(),
        };
        let parts = divisor.collect_by(|v| v == var);
        if parts.keys().any(|m| m.exp(var) > 1 || m.exp(var) < 0) {
            return Err(not_linear());
        }
        let lead = parts
            .get(&Monomial::var(var))
            .and_then(|p| p.as_constant())
            .filter(|c| !c.is_zero())
            .ok_or_else(not_linear)?;
        let rest = parts.get(&Monomial::one()).cloned().unwrap_or_default();
        let solved = rest.scale(&(-lead.recip()));

        let by_power = self.collect_by(|v| v == var);
        let max = by_power.keys().map(|m| m.exp(var)).max().unwrap_or(0);
        let mut powers = vec![Polynomial::one()];
        for k in 1..=max as usize {
            let next = &powers[k - 1] * &solved;
            powers.push(next);
        }
        let mut acc = Polynomial::zero();
        for (m, coef) in by_power {
            acc = acc + &coef * &powers[m.exp(var) as usize];
        }
        Ok(acc)
    }

    pub fn map_coefficients(&self, f: impl Fn(&Scalar) -> Scalar) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    /// Canonical text: terms in descending graded-lex order, coefficient always
    /// explicit, every variable with an explicit exponent.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str) -> Result<Polynomial, AlgebraError> {
        let err = |msg: &str| AlgebraError::Parse(format!("{msg} in {text:?}"));
        let text = text.trim();
        if text == "0" {
            return Ok(Polynomial::zero());
        }
        let mut terms = Vec::new();
        for raw in text.split('+') {
            let raw = raw.trim();
            if raw.is_empty() {
                return Err(err("empty term"));
            }
            let mut coef = Scalar::one();
            let mut mono = Monomial::one();
            for (i, factor) in raw.split('*').enumerate() {
                let factor = factor.trim();
                let numeric = factor
                    .chars()
                    .next()
                    .is_some_and(|c| c.is_ascii_digit() || c == '-');
                if i == 0 && numeric {
                    coef = parse_scalar(factor).ok_or_else(|| err("bad coefficient"))?;
                    continue;
                }
                let (name, exp) = match factor.split_once('^') {
                    Some((n, e)) => (n, e.parse::<i32>().map_err(|_| err("bad exponent"))?),
                    None => (factor, 1),
                };
                let v = Var::from_name(name).ok_or_else(|| err("unknown variable"))?;
                if exp < 0 && v != Var::T {
                    return Err(AlgebraError::NegativeExponent(v.name().into_owned()));
                }
                mono = mono.mul(&Monomial::var_pow(v, exp));
            }
            terms.push((mono, coef));
        }
        Ok(Polynomial::from_terms(terms))
    }
}

fn scalar_pow(val: &Scalar, e: i32, v: Var) -> Result<Scalar, AlgebraError> {
    if e < 0 && val.is_zero() {
        return Err(AlgebraError::PoleAtPoint(v.name().into_owned()));
    }
    Ok(num_traits::Pow::pow(val, e))
}

fn merge(a: &[(Monomial, Scalar)], b: &[(Monomial, Scalar)], negate_b: bool) -> Polynomial {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend(
        b[j..]
            .iter()
            .map(|(m, c)| (*m, if negate_b { -c } else { c.clone() })),
    );
    Polynomial::from_sorted(out)
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        merge(&self.terms, &rhs.terms, false)
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        merge(&self.terms, &rhs.terms, true)
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        if let Some((m, c)) = rhs.as_monomial() {
            return self.mul_monomial(m).scale(c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return rhs.mul_monomial(m).scale(c);
        }
        let mut acc: HashMap<Monomial, Scalar> =
            HashMap::with_capacity(self.len().saturating_mul(rhs.len()).min(1 << 20));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let prod = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut o) => *o.get_mut() += prod,
                    std::collections::hash_map::Entry::Vacant(v) => {
                        v.insert(prod);
                    }
                }
            }
        }
        Polynomial::from_map(acc)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_sorted(self.terms.iter().map(|(m, c)| (*m, -c)).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: &Polynomial) -> Polynomial {
                (&self).$method(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $method(self, rhs: Polynomial) -> Polynomial {
                self.$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

impl From<Var> for Polynomial {
    fn from(v: Var) -> Self {
        Polynomial::var(v)
    }
}

impl From<Scalar> for Polynomial {
    fn from(c: Scalar) -> Self {
        Polynomial::constant(c)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&format_scalar(c))?;
            if !m.is_one() {
                write!(f, "*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

/// Short-hand for `Polynomial::var`.
pub fn v(var: Var) -> Polynomial {
    Polynomial::var(var)
}

/// Short-hand for a rational constant polynomial.
pub fn c(n: i64, d: i64) -> Polynomial {
    Polynomial::constant(super::scalar::ratio(n, d))
}

/// Sign of the leading coefficient, `true` when positive.
pub fn leading_positive(p: &Polynomial) -> bool {
    p.leading().is_none_or(|(_, c)| c.is_positive())
}
