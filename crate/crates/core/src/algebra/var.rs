use std::borrow::Cow;
use std::fmt;

/// Number of exponent slots carried by every monomial.
pub const NVARS: usize = 20;

/// Number of slots reserved for ansatz unknowns `a1, a2, ...`.
pub const MAX_ANSATZ: usize = NVARS - 13;

/// A variable of the fixed universe, identified by its slot index.
///
/// Slots are ordered `x y z w q p | t | alpha0..alpha3 | C1 C2 | a1..`.
/// The ordering is total and fixed; it drives the graded-lex term order.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var(u8);

impl Var {
    pub const X: Var = Var(0);
    pub const Y: Var = Var(1);
    pub const Z: Var = Var(2);
    pub const W: Var = Var(3);
    pub const Q: Var = Var(4);
    pub const P: Var = Var(5);
    pub const T: Var = Var(6);
    pub const ALPHA0: Var = Var(7);
    pub const ALPHA1: Var = Var(8);
    pub const ALPHA2: Var = Var(9);
    pub const ALPHA3: Var = Var(10);
    pub const C1: Var = Var(11);
    pub const C2: Var = Var(12);

    pub const PHASE: [Var; 6] = [Var::X, Var::Y, Var::Z, Var::W, Var::Q, Var::P];
    pub const ALPHA: [Var; 4] = [Var::ALPHA0, Var::ALPHA1, Var::ALPHA2, Var::ALPHA3];

    /// The `m`-th ansatz unknown (1-based, as in `a1..a4`).
    pub fn ansatz(m: usize) -> Var {
        assert!(
            (1..=MAX_ANSATZ).contains(&m),
            "ansatz index {m} outside 1..={MAX_ANSATZ}"
        );
        Var((12 + m) as u8)
    }

    pub fn alpha(i: usize) -> Var {
        Var::ALPHA[i]
    }

    pub fn from_index(index: usize) -> Option<Var> {
        (index < NVARS).then_some(Var(index as u8))
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_phase(self) -> bool {
        self.0 < 6
    }

    pub fn name(self) -> Cow<'static, str> {
        const FIXED: [&str; 13] = [
            "x", "y", "z", "w", "q", "p", "t", "alpha0", "alpha1", "alpha2", "alpha3", "C1", "C2",
        ];
        match FIXED.get(self.index()) {
            Some(name) => Cow::Borrowed(name),
            None => Cow::Owned(format!("a{}", self.index() - 12)),
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        (0..NVARS).map(|i| Var(i as u8)).find(|v| v.name() == name)
    }

    /// Canonical conjugate partner under the pairing (x,y), (z,w), (q,p).
    pub fn conjugate(self) -> Option<Var> {
        match self {
            Var::X => Some(Var::Y),
            Var::Y => Some(Var::X),
            Var::Z => Some(Var::W),
            Var::W => Some(Var::Z),
            Var::Q => Some(Var::P),
            Var::P => Some(Var::Q),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for i in 0..NVARS {
            let v = Var::from_index(i).unwrap();
            assert_eq!(Var::from_name(&v.name()), Some(v));
        }
        assert_eq!(Var::ansatz(4).name(), "a4");
    }
}
