//! Graph documents, DOT export and graph family generators.

use thiserror::Error;

mod dot;
mod generate;
mod text;

pub use dot::export_dot;
pub use generate::{generate, parse_states, Family};
pub use text::{parse_document, parse_graph, serialize_document, serialize_graph, GraphDocument};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: {message}")]
    Invariant { line: usize, message: String },
    #[error("{0}")]
    BadParameters(String),
}
