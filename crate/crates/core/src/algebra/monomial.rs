use std::cmp::Ordering;
use std::fmt;

use super::var::{Var, NVARS};

/// A power product over the variable universe.
///
/// Only the `t` slot may hold a negative exponent in stored polynomials;
/// intermediate quotients are allowed to go negative anywhere.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial([i16; NVARS]);

impl Default for Monomial {
    fn default() -> Self {
        Monomial::one()
    }
}

impl Monomial {
    pub const fn one() -> Self {
        Monomial([0; NVARS])
    }

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, e: i32) -> Self {
        let mut m = Self::one();
        m.0[v.index()] = e as i16;
        m
    }

    pub fn from_pairs<I: IntoIterator<Item = (Var, i32)>>(pairs: I) -> Self {
        let mut m = Self::one();
        for (v, e) in pairs {
            m.0[v.index()] += e as i16;
        }
        m
    }

    #[inline]
    pub fn exp(&self, v: Var) -> i32 {
        self.0[v.index()] as i32
    }

    pub fn with_exp(mut self, v: Var, e: i32) -> Self {
        self.0[v.index()] = e as i16;
        self
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Sum of all exponents, `t` included.
    pub fn degree(&self) -> i32 {
        self.0.iter().map(|&e| e as i32).sum()
    }

    /// Degree in the six phase variables only.
    pub fn phase_degree(&self) -> i32 {
        self.0[..6].iter().map(|&e| e as i32).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| (Var::from_index(i).unwrap(), e as i32))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a += *b;
        }
        out
    }

    /// Exponent-wise difference; may produce negative exponents.
    pub fn div(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a -= *b;
        }
        out
    }

    pub fn pow(&self, e: i32) -> Monomial {
        let mut out = *self;
        for a in out.0.iter_mut() {
            *a = (*a as i32 * e) as i16;
        }
        out
    }

    /// Divisibility in the ring where `t` is a unit.
    pub fn divides_laurent_t(&self, other: &Monomial) -> bool {
        self.0
            .iter()
            .zip(other.0.iter())
            .enumerate()
            .all(|(i, (a, b))| i == Var::T.index() || a <= b)
    }

    /// Exponent-wise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a = (*a).min(*b);
        }
        out
    }

    /// Exponent-wise maximum.
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a = (*a).max(*b);
        }
        out
    }

    /// The part of the monomial living in the given variables.
    pub fn restrict_to(&self, keep: impl Fn(Var) -> bool) -> Monomial {
        let mut out = Monomial::one();
        for (v, e) in self.vars() {
            if keep(v) {
                out.0[v.index()] = e as i16;
            }
        }
        out
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&e| e < 0)
    }

    pub fn has_negative_outside_t(&self) -> bool {
        self.0
            .iter()
            .enumerate()
            .any(|(i, &e)| e < 0 && i != Var::T.index())
    }
}

/// Graded lexicographic: total degree first, then the earliest differing slot.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in self.vars() {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{v}^{e}")?;
        }
        Ok(())
    }
}
