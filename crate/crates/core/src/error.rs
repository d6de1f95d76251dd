// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("variable count {0} is outside the supported range {1}..={2}")]
    VariableCount(usize, usize, usize),

    #[error("invalid hex digit {digit:?} in {text:?}")]
    InvalidHexDigit { text: String, digit: char },

    #[error("hex string {text:?} has {digits} digits, at most {max} allowed for {vars} variables")]
    HexTooLong {
        text: String,
        digits: usize,
        max: usize,
        vars: usize,
    },

    #[error("empty function text")]
    EmptyFunction,

    #[error("invalid minterm list {0:?}")]
    InvalidMintermList(String),

    #[error("minterm {index} out of range for {vars} variables")]
    MintermOutOfRange { index: usize, vars: usize },

    #[error("variable index {index} out of range 1..={vars}")]
    VariableOutOfRange { index: usize, vars: usize },

    #[error("bitvector width mismatch: {0} vs {1} variables")]
    WidthMismatch(usize, usize),

    #[error("output {output} overlaps the don't-care set at minterm {minterm}")]
    OverlappingDontCare { output: usize, minterm: usize },

    #[error("at least one output function is required")]
    NoOutputs,

    #[error("unknown gate kind {0:?}")]
    UnknownGateKind(String),

    #[error("unknown connectivity {0:?}")]
    UnknownConnectivity(String),

    #[error("invalid architecture: {0}")]
    InvalidArchitecture(String),

    #[error("architecture does not match specification: {0}")]
    ArchitectureMismatch(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("assignment is not one-hot for {0}")]
    NotOneHot(String),

    #[error("assignment has {got} values, model has {expected} variables")]
    AssignmentLength { got: usize, expected: usize },

    #[error("search space of {count} assignments exceeds the oracle guard of {guard}")]
    SearchSpaceTooLarge { count: u128, guard: u128 },

    #[error("cannot emit GAMS: {0}")]
    GamsUnsupported(String),

    #[error("invalid problem file field `{field}`: {message}")]
    ProblemField { field: String, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
