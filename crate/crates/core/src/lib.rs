//! Exact lattice and discriminant-form computations for Heegner divisors on
//! covers of period spaces of polarized hyperkähler manifolds of K3^[m] type.

pub mod checks;
pub mod cli;
pub mod disc_form;
pub mod error;
pub mod hperp;
pub mod lattice;
pub mod moduli;
pub mod reflection;
pub mod report;

pub use error::{Error, Result};
