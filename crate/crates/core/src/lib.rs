//! Causal graph dynamics on port graphs.
#![allow(clippy::result_large_err)]

pub mod graph;
pub mod io;
pub mod iso;
pub mod name;
pub mod engine;
pub mod rules;
pub mod verify;

pub use graph::{Conflict, Direction, Disk, EdgeRecord, Graph, GraphError, PointedGraph, Signature};
pub use iso::{find_isomorphism, isomorphic, isomorphic_with_guard};
pub use name::{sym, vn, NameError, Port, Renaming, Symbol, VertexName};
pub use rules::{Domain, LocalRule, Rule, RuleError, RuleSpec};
pub use engine::{compose, compose_at_radius, lift_radius_one, Dynamics, EngineError, Evaluation, Lift, Provenance};
pub use io::{export_dot, generate, parse_document, parse_graph, serialize_graph, Family, GraphDocument, IoError};
pub use verify::{Property, Report, Suite, Verdict, VerifyError};
