use thiserror::Error;

use crate::model::{Diagnostic, Kind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("kind mismatch: expected {expected}, found {found}")]
    KindMismatch { expected: String, found: String },

    #[error("state `{0}` is outside the relation carrier")]
    OutsideCarrier(String),

    #[error("pair ({0}, {1}) is not contained in the declared carriers")]
    PairOutsideCarrier(String, String),

    #[error("support of size {size} exceeds the subset-oracle cap of {cap}")]
    SupportCap { size: usize, cap: usize },

    #[error("order `{order}` is not applicable to {kind} systems")]
    OrderMismatch { order: String, kind: Kind },

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("bundle is outside the declared universe")]
    OutsideUniverse,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("enumeration would produce {count} systems, over the cap of {cap}")]
    EnumerationCap { count: u128, cap: usize },

    #[error("invalid system:\n{}", render_diagnostics(.0))]
    Invalid(Vec<Diagnostic>),

    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("relation carriers do not match the compared systems")]
    CarrierMismatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown property `{0}`")]
    UnknownProperty(String),

    #[error("invalid generator parameters: {0}")]
    GenParams(String),
}

fn render_diagnostics(diags: &[Diagnostic]) -> String {
    diags.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n")
}

pub type Result<T> = std::result::Result<T, Error>;
