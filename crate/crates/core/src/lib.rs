//! Exact subfield lattices and complete decompositions of univariate
//! rational functions over the rationals and finite fields.

pub mod arith;
pub mod decomp;
pub mod factor;
pub mod lattice;
pub mod linalg;
pub mod oracle;
pub mod poly;
pub mod ratfun;
pub mod report;
pub mod subfields;

pub use arith::{make_extension, ArithError, Elem, Field, FieldElement};
pub use poly::{parse::parse_ratfun, BiPoly, RatFun, RatPolyX, UniPoly};
