use thiserror::Error;

use crate::field::FieldSpec;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: duplicate {kind} name `{name}`")]
    DuplicateName {
        kind: &'static str,
        name: String,
        line: usize,
    },
    #[error("line {line}: undeclared {kind} `{name}`")]
    DanglingName {
        kind: &'static str,
        name: String,
        line: usize,
    },
    #[error("line {line}: relation path is not composable: {detail}")]
    NonComposable { line: usize, detail: String },
    #[error("line {line}: relation mixes paths of different {what}")]
    MixedRelation { line: usize, what: &'static str },
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("coefficient {coefficient} does not exist in {field}")]
    CoefficientNotInField {
        coefficient: String,
        field: FieldSpec,
    },
    #[error("relation `{relation}` is not a monomial of length 2")]
    NotQuadraticMonomial { relation: String },
    #[error("relation `{relation}` is not quadratic")]
    NotQuadratic { relation: String },
    #[error("{what}: no certificate within cap {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("inconsistent relations: {0}")]
    InconsistentRelation(String),
    #[error("elements belong to different algebras")]
    AlgebraMismatch,
    #[error("size guard: dimension {dim} exceeds limit {limit}")]
    SizeGuard { dim: usize, limit: usize },
    #[error("not a skew-gentle triple: {0}")]
    InvalidTriple(String),
    #[error("{check} failed: {witness}")]
    Witness { check: &'static str, witness: String },
    #[error("invalid generator configuration: {0}")]
    InvalidConfig(String),
    #[error("retry budget exhausted after {attempts} attempts")]
    RetryBudget { attempts: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
