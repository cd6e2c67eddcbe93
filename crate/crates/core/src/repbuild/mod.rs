//! Root-of-unity representations of the even subalgebra, classical shadows and unicity checks.

mod cmatrix;
mod linalg;
mod rep;
mod shadow;

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::embed::EmbedError;
use crate::exactalg::AlgError;
use crate::sausage::SausageError;

pub use cmatrix::CMatrix;
pub use linalg::{rank_of, Echelon, SparseRow};
pub use rep::{build_rep, eval_element, genericity_check, Genericity, Rep, RepParams};
pub use shadow::{
    chebyshev_t, classical_shadow, commutant_dimension, find_intertwiner, intertwiner_space,
    irreducibility_commutant, verify_cshadow,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepError {
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Sausage(#[from] SausageError),
    #[error("expected {expected} parameters, got {got}")]
    ParamCount { expected: usize, got: usize },
    #[error("parameter `{0}` is zero")]
    ZeroParameter(String),
    #[error("parameters are for p = {rep} but the field has p = {field}")]
    FieldMismatch { rep: u32, field: u32 },
    #[error("shadow parameters are not generic: {0:?}")]
    NotGeneric(Vec<String>),
    #[error("element and representation live on different graphs")]
    GraphMismatch,
    #[error("element is outside the even subalgebra: {0}")]
    NotInSubalgebra(String),
    #[error("singular coefficient: {0}")]
    Singular(String),
    #[error("Chebyshev image of `{0}` is not scalar")]
    NotScalar(String),
    #[error("intertwiner space has dimension {0} with no invertible element")]
    Reducible(usize),
}
