//! Exact rational exterior algebra: boundary operators on the `Λᵖ` fibre and
//! every fibre trace entering the heat coefficients.

pub mod bracket;
pub mod fiber;
pub mod operators;
pub mod sff;
pub mod value;

pub use bracket::{
    a3_bracket_trace, bracket_terms, coefficient_matrix, extract_quadratic_coefficients,
    extract_quadratic_coefficients_seeded, fiber_rank, trace_chi, trace_s_coefficient,
    verify_section4_tables, verify_section4_tables_with, A3IntegrandCoefficients, BracketTerms,
    CoefficientMatrix, TableReport, TableRow, Weitzenbock,
};
pub use fiber::{binomial, ext, int_mul, FiberBasis, FiberOperator};
pub use operators::{build_fiber_operators, BoundaryOperators};
pub use sff::SecondFundamentalForm;
pub use value::{int, parse_rational, rat, rational_to_f64, ExactJson, ExactValue, Rational, RationalJson};
