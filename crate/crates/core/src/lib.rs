//! Gauss sums and generalized Jacobi sums over `Z / p^m Z`.
//!
//! Every sum can be computed by direct summation and, where available, by a
//! closed form. Closed forms return [`ExactValue`]s of the shape
//! `p^(h/2) * e(a / b)`, so two routes can be compared exactly.

pub mod arith;
pub mod bench;
pub mod character;
pub mod error;
pub mod gauss;
pub mod jacobi;
pub mod options;
pub mod parse;
pub mod unit_group;
pub mod value;
pub mod verify;

pub use character::{enumerate_characters, make_character, Character};
pub use error::{Error, Result};
pub use gauss::{gauss_brute, gauss_closed, gauss_closed_with_j, gauss_eval, minimal_j, GaussMethod};
pub use jacobi::{
    jacobi_brute, jacobi_closed, jacobi_direct_k2, jacobi_eval, jacobi_top_case, jacobi_via_gauss,
    normalize_b, JacobiMethod, JacobiQuery,
};
pub use options::EvalOptions;
pub use unit_group::{epsilon, find_primitive_root, PrimePowerModulus, UnitGroupContext, UnitLog};
pub use value::{approx_equal, ExactValue, Method, Phase, SumResult, Value};
