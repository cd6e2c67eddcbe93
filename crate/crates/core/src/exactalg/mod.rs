//! Exact commutative arithmetic: Laurent polynomials, fractions with factored
//! denominators, and cyclotomic specialization.

mod cyclo;
mod frac;
mod lpoly;

pub use cyclo::{specialize_cyclotomic, specialize_poly, Cyclo, CycloField};
pub use frac::{frac_arith, frac_equal, shift_substitute, Factor, Frac, FracOp};
pub use lpoly::{
    cyclotomic, degree, euler_phi, exps_add, exps_neg, exps_scale, exps_sub, grlex_cmp, poly_arith,
    Exps, LPoly, PolyOp, MAX_VARS, ZERO_EXPS,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgError {
    #[error("variable context mismatch ({left} vs {right} variables)")]
    ContextMismatch { left: usize, right: usize },
    #[error("inversion of zero")]
    DivisionByZero,
    #[error("denominator factor {0} specializes to zero")]
    ZeroDenominator(alloc::string::String),
    #[error("cyclotomic fields of different order ({0} vs {1})")]
    FieldMismatch(u32, u32),
    #[error("invalid cyclotomic order {0}: need an odd p >= 3")]
    BadOrder(u32),
    #[error("missing value for variable {0}")]
    MissingValue(usize),
}
