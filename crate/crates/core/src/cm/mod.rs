//! Imaginary quadratic fields of class number one: ray class field
//! Galois actions through W_{K,N}, numeric conjugates of CM values and
//! integer recognition.

mod field;

pub use field::*;
mod eval;
pub use eval::*;
mod recognize;
pub use recognize::*;
mod examples;
pub use examples::*;
