//! Exact computational toolkit around genus-2 curves with split Jacobians.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactnum`]: big integers and rationals, primes, Smith normal form and
//!   integer lattice membership.
//! * [`elliptic`]: curves `y^2 = x(x-a)(x-b)`, general Weierstrass models,
//!   point counting and the group law over prime fields.
//! * [`reduction`]: Tate's algorithm, conductors, actual and potential
//!   reduction types.
//! * [`genus2`]: binary sextics, discriminants, Igusa-Clebsch invariants and
//!   point counts of `lambda*y^2 = S(x)`.
//! * [`scholten`]: the curves `C_{a,b,c,d}`, their families and split Jacobian
//!   certificates.
//! * [`checkers`]: decidable hypothesis predicates and prime filters.
//! * [`pontryagin`]: augmentation filtration of group rings of finite abelian
//!   groups.
//! * [`kgroup`]: formal symbol sums with Weil reciprocity and bilinearity
//!   relation lattices.

pub mod checkers;
pub mod elliptic;
pub mod error;
pub mod exactnum;
pub mod genus2;
pub mod kgroup;
pub mod pontryagin;
pub mod reduction;
pub mod scholten;

pub use error::{Error, Result};
