//! Operators on the four truncated representation spaces: ladders, fields,
//! Weyl/Wick quantization, trigonometric exponentials and star products.

mod exponential;
mod ladder;
mod operator;
mod space;
mod weyl;

pub use exponential::*;
pub use ladder::{field_operators, ladder_operators, FieldOperators, Ladders};
pub use operator::{contract, CMatrix, OperatorJson, TruncatedOperator};
pub use space::{Rep, RepSpace, Space};
pub use weyl::{involution, normal_ordered, weyl_quantize, weyl_quantize_recursive, weyl_quantize_scaled, wick_quantize};
