//! Parsing and emission of the TFC and REAL circuit formats and the
//! truth-table specification format. All files are UTF-8; `#` starts a
//! comment line.

mod real;
mod specfile;
mod tfc;

pub use real::{emit_real, parse_real};
pub use specfile::{emit_spec, parse_spec, SpecFile};
pub use tfc::{emit_tfc, parse_tfc};

use thiserror::Error;

use crate::gate::GateError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: unknown variable '{name}'")]
    UnknownVariable { line: usize, name: String },
    #[error("line {line}: malformed gate '{text}'")]
    MalformedGate { line: usize, text: String },
    #[error("line {line}: unsupported gate kind '{kind}'")]
    UnsupportedGateKind { line: usize, kind: String },
    #[error("line {line}: malformed directive '{text}'")]
    MalformedHeader { line: usize, text: String },
    #[error("missing {0} header")]
    MissingHeader(&'static str),
    #[error("variable count {declared} declared, {found} variables listed")]
    NumvarsMismatch { declared: usize, found: usize },
    #[error("expected {expected} specification rows, found {found}")]
    RowCountMismatch { expected: usize, found: usize },
    #[error("line {line}: bad symbol '{symbol}'")]
    BadSymbol { line: usize, symbol: char },
    #[error(transparent)]
    Gate(#[from] GateError),
}

/// Names every line: stored metadata first, then `x1..xn`.
pub(crate) fn line_names(c: &crate::circuit::Circuit) -> Vec<String> {
    match &c.metadata().names {
        Some(names) if names.len() == c.lines() => names.clone(),
        _ => (1..=c.lines()).map(|i| format!("x{i}")).collect(),
    }
}

/// Derives the per-line garbage markers from the output list.
pub(crate) fn garbage_from_outputs(lines: usize, outputs: &[usize]) -> Vec<bool> {
    (1..=lines).map(|l| !outputs.contains(&l)).collect()
}
