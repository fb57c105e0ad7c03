//! Exact arithmetic: rationals, Laurent polynomials, small matrices, the Weyl
//! action on `X0..Xn`, and prime-power cyclotomic fields.

pub mod cyclotomic;
pub mod laurent;
pub mod matrix;
pub mod prime;
pub mod rational;
pub mod weyl;

pub use cyclotomic::Cyclotomic;
pub use laurent::{LaurentPoly, Monomial};
pub use matrix::PolyMatrix;
pub use prime::{Prime, SQRT_P};
pub use rational::Rational;
pub use weyl::{is_weyl_invariant, weyl_action, x_name, x_var, WeylGen};
