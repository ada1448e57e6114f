//! Exact computational algebra for coalgebras, Hopf algebras, finite dual
//! coalgebras, rational pairings, and smash-product duality over commutative
//! coefficient rings (Z, Z/n, Q, F_p).
//!
//! Everything is computed with arbitrary-precision arithmetic; there are no
//! floating-point numbers anywhere in the crate. Infinite algebras such as
//! polynomial and Laurent polynomial rings are handled through their cofinite
//! ideal truncations, which are free of finite rank and therefore amenable to
//! structure-constant methods.

pub mod ring;
pub mod matrix;
pub mod normal_form;
pub mod modules;
pub mod poly;
pub mod algebra;
pub mod families;
pub mod hopf;
pub mod dual;
pub mod rational;

pub use matrix::RMatrix;
pub use ring::{Coeff, CoeffRing};
