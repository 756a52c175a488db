//! Exact rational and Gaussian-rational arithmetic, univariate polynomials
//! over the rationals, Sturm sequences and real-root isolation.
//!
//! Nothing in here touches floating point. Every decision (sign, root count,
//! interlacing, divisibility) is made on exact values.

pub mod linalg;
mod number;
mod poly;
mod roots;

pub use number::{
    format_gaussian, format_rational, gaussian, int, is_zero_gaussian, parse_gaussian, parse_rational, pow2, rat, rational_sqrt, sign,
    GaussianRational, Rational,
};
pub use poly::{poly_arith, poly_gcd_lcm, Poly, PolyOp};
pub use roots::{
    cauchy_index, count_distinct_roots, count_roots_with_multiplicity, has_real_simple_roots, isolate_real_roots, isolate_real_roots_with,
    strict_interlace, IsolatedRoot, RootSet, SturmChain, DEFAULT_ISOLATION_WIDTH_LOG2,
};
