//! Exact computations with Jacobi and Siegel Eisenstein series, Hecke
//! operators, Satake images and Euler factors, together with checkers for the
//! linear relations and polynomial identities connecting them.

pub mod error;
pub mod arith;
pub mod exactalg;
pub mod lfun;
pub mod qexp;
pub mod relations;
pub mod report;
pub mod satake;

pub use error::{Error, Result};
