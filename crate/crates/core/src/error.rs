use thiserror::Error;

use crate::types::SimpleType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("undeclared constant `{0}`")]
    UndeclaredConstant(String),
    #[error("undeclared base type `{0}`")]
    UndeclaredBase(String),
    #[error("ill-typed application: `{fun}` has type {fun_ty}, argument has type {arg_ty}")]
    IllTyped {
        fun: String,
        fun_ty: SimpleType,
        arg_ty: SimpleType,
    },
    #[error("type mismatch: {0} vs {1}")]
    TypeMismatch(SimpleType, SimpleType),
    #[error("constant `{0}` is not of function type")]
    NotAFunction(String),
    #[error("name `{0}` collides with the reserved fresh-constant namespace")]
    ReservedName(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid theory: {0}")]
    InvalidTheory(String),
    #[error("carrier of size {size} exceeds the cap of {cap}")]
    CarrierTooLarge { size: usize, cap: usize },
    #[error("cell budget exceeded at type {ty}: {cells} cells > {budget}")]
    CellBudget { ty: SimpleType, cells: u128, budget: u64 },
    #[error("type {ty} has order {order}, above the cap of {cap}")]
    TypeOrderCap { ty: SimpleType, order: usize, cap: usize },
    #[error("extension hypothesis violated: {0}")]
    Hypothesis(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
