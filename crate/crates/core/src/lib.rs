//! Exact verification engine and numeric simulator for the six-dimensional
//! polynomial Hamiltonian system with affine Weyl group symmetry of type
//! D4(2).
//!
//! The phase variables are `x, y, z, w, q, p`, paired canonically as
//! `(x,y)`, `(z,w)`, `(q,p)` with `{y,x} = {w,z} = {p,q} = 1`. Time `t` is a
//! deformation parameter with singular locus `t = 0`; the parameters
//! `alpha0..alpha3` satisfy `alpha0 + alpha1 + alpha2 + alpha3 = 1`.

pub mod algebra;
pub mod hamiltonian;
pub mod holomorphy;
pub mod numerics;
pub mod principal;
pub mod sampling;
pub mod verify;
pub mod weyl;

pub use algebra::{AlgebraError, Polynomial, RationalExpr, Scalar, Var};
pub use hamiltonian::{HamiltonianSystem, Parameters};
pub use weyl::{BirationalMap, GeneratorWord};
