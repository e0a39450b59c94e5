//! Local rules: functions from disks to graphs.
//!
//! A rule sees the envelope of one vertex and returns a small graph. Output
//! names are names of the disk, possibly extended by suffix segments, so
//! disks with disjoint names always produce images with disjoint names.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{Disk, Graph, GraphError, Signature};
use crate::name::{Symbol, VertexName};

mod ca;
mod grid;
mod identity;
pub mod mutants;
mod permutation;
mod spec;

pub use ca::{xor_ca_rule, CellularAutomatonRule, XOR_TABLE};
pub use grid::{inflating_grid_rule, GridVariant, InflatingGridRule, BLACK, GREY, WHITE};
pub use identity::{identity_rule, IdentityRule};
pub use permutation::{state_permutation_rule, StatePermutationRule};
pub use spec::RuleSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("malformed disk around {center}: {reason}")]
    MalformedDisk { center: String, reason: String },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("radius {0} is not a power of two")]
    RadiusNotPowerOfTwo(usize),
    #[error("lifted degree {needed} exceeds the port limit {limit}")]
    PortBudgetExceeded { needed: u64, limit: u64 },
    #[error("bad rule parameters: {0}")]
    BadParameters(String),
    #[error("unknown rule {0:?}")]
    UnknownRule(String),
    #[error("inner evaluation failed: {0}")]
    Inner(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl RuleError {
    pub(crate) fn malformed(center: &VertexName, reason: impl Into<String>) -> Self {
        RuleError::MalformedDisk {
            center: center.to_string(),
            reason: reason.into(),
        }
    }
}

/// The family of graphs a rule is designed for. Samplers and enumerators use
/// it to produce inputs the rule accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Domain {
    /// Any port graph over the rule's signature.
    PortGraphs,
    /// Open and closed lines: `x:2 -> y:1` chains of degree 2.
    Lines,
    /// Graphs of `inner` encoded for a radius-one lift with `levels` counters.
    Lifted { inner: Box<Domain>, levels: u32 },
}

/// A consistent, bounded function from disks of a fixed radius to graphs.
pub trait LocalRule: Send + Sync + fmt::Debug {
    fn name(&self) -> String;

    /// Radius the rule claims to read.
    fn radius(&self) -> usize;

    /// Radius of the disks the engine hands to [`LocalRule::apply`]. Only a
    /// deliberately broken rule makes this differ from [`LocalRule::radius`].
    fn evaluation_radius(&self) -> usize {
        self.radius()
    }

    /// Maximum number of vertices in any image.
    fn bound(&self) -> usize;

    /// Maximum number of suffix segments an output name adds to a disk name.
    fn suffix_depth(&self) -> usize {
        1
    }

    fn signature(&self) -> &Signature;

    fn domain(&self) -> Domain;

    fn apply(&self, disk: &Disk) -> Result<Graph, RuleError>;
}

/// Shared handle to a rule.
pub type Rule = Arc<dyn LocalRule>;

/// The unique center of a single-vertex disk.
pub(crate) fn center_of(disk: &Disk) -> Result<&VertexName, RuleError> {
    disk.center().ok_or_else(|| RuleError::MalformedDisk {
        center: format!("{:?}", disk.pointers()),
        reason: "disk must have exactly one pointer".into(),
    })
}

/// Copies the center of a disk with its incident edges, replacing its state.
pub(crate) fn center_with_stubs(
    disk: &Disk,
    center: &VertexName,
    state: Option<Symbol>,
) -> Result<Graph, RuleError> {
    let g = disk.graph();
    let mut out = g.induced_subgraph(std::iter::once(center));
    match state {
        Some(s) => out.set_state(center, s)?,
        None => {
            out.clear_state(center);
        }
    }
    Ok(out)
}
