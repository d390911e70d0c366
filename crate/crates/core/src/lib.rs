//! Constructive generators for abelian extensions.
//!
//! Exact side (over cyclotomic fields): universal trace generators,
//! universal norm generators and normal elements. Numeric side: a
//! multiprecision engine for eta, Siegel, Weierstrass and Fricke
//! functions, and a Shimura-reciprocity layer for ray class fields of
//! imaginary quadratic fields with class number one.

pub mod arith;
pub mod cyclotomic;
pub mod error;

pub use error::{CftError, Result};
pub mod coprime;
pub mod report;
pub mod trace_gen;
pub mod norm_gen;
pub mod abelian;
pub mod modfunc;
pub mod bigcomplex;
pub mod cm;
pub mod normal_elem;
pub mod acceptance;
