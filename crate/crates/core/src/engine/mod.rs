//! Global dynamics induced by a local rule.
//!
//! `F(G)` is the union of the images of every disk `G^r_v`. Images are
//! computed independently, optionally in parallel, and merged in name order
//! so the result never depends on scheduling.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{Conflict, Graph, GraphError};
use crate::name::VertexName;
use crate::rules::{Rule, RuleError};

mod compose;
mod lift;

pub use compose::{compose, compose_at_radius, composed_radius, ComposedRule};
pub use lift::{lift_radius_one, lift_radius_one_with_limit, lifted_degree, Lift, LiftedRule, DEFAULT_PORT_LIMIT, STAR};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("input is not a graph over the rule's signature: {0}")]
    InvalidInput(GraphError),
    #[error("input vertex {0} has no state")]
    Unstated(VertexName),
    #[error("input name {0} is a prefix of input name {1}")]
    PrefixClash(VertexName, VertexName),
    #[error("rule failed at {center}: {source}")]
    Rule { center: VertexName, source: RuleError },
    #[error("images of {first} and {second} are inconsistent: {conflict}")]
    InconsistentUnion {
        first: VertexName,
        second: VertexName,
        conflict: Conflict,
    },
    #[error("{0} is not an output vertex")]
    UnknownVertex(VertexName),
    #[error("step {step}: {source}")]
    Step { step: usize, source: Box<EngineError> },
}

/// Output vertices mapped to the input centers they derive from.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Provenance {
    map: BTreeMap<VertexName, BTreeSet<VertexName>>,
}

impl Provenance {
    pub fn antecedents(&self, v: &VertexName) -> Result<&BTreeSet<VertexName>, EngineError> {
        self.map
            .get(v)
            .ok_or_else(|| EngineError::UnknownVertex(v.clone()))
    }

    /// Output vertices with `v` among their antecedents.
    pub fn descendants(&self, v: &VertexName) -> BTreeSet<VertexName> {
        self.map
            .iter()
            .filter(|(_, a)| a.contains(v))
            .map(|(o, _)| o.clone())
            .collect()
    }

    /// Output vertices without any antecedent.
    pub fn orphans(&self) -> impl Iterator<Item = &VertexName> {
        self.map.iter().filter(|(_, a)| a.is_empty()).map(|(v, _)| v)
    }

    /// Number of outputs per antecedent.
    pub fn fan_out(&self) -> BTreeMap<VertexName, usize> {
        let mut out = BTreeMap::new();
        for a in self.map.values() {
            for v in a {
                *out.entry(v.clone()).or_default() += 1;
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexName, &BTreeSet<VertexName>)> {
        self.map.iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub graph: Graph,
    pub provenance: Provenance,
}

/// An evaluatable global dynamics.
#[derive(Clone, Debug)]
pub struct Dynamics {
    rule: Rule,
    provenance: bool,
    parallel: bool,
}

impl Dynamics {
    pub fn new(rule: Rule) -> Self {
        Self {
            rule,
            provenance: true,
            parallel: false,
        }
    }

    pub fn with_provenance(mut self, on: bool) -> Self {
        self.provenance = on;
        self
    }

    pub fn with_parallel(mut self, on: bool) -> Self {
        self.parallel = on;
        self
    }

    pub fn rule(&self) -> &Rule {
        &self.rule
    }

    pub fn radius(&self) -> usize {
        self.rule.radius()
    }

    pub fn bound(&self) -> usize {
        self.rule.bound()
    }

    /// Checks that `g` is a valid, prefix-free graph over the signature.
    pub fn validate(&self, g: &Graph) -> Result<(), EngineError> {
        g.check_invariants().map_err(EngineError::InvalidInput)?;
        self.rule
            .signature()
            .admits(g)
            .map_err(EngineError::InvalidInput)?;
        if let Some(v) = g.vertices().find(|v| g.state(v).is_none()) {
            return Err(EngineError::Unstated(v.clone()));
        }
        if let Some((a, b)) = g.prefix_clash() {
            return Err(EngineError::PrefixClash(a, b));
        }
        Ok(())
    }

    pub fn evaluate(&self, g: &Graph) -> Result<Evaluation, EngineError> {
        let order: Vec<&VertexName> = g.vertices().collect();
        self.evaluate_in_order(g, &order)
    }

    /// Like [`Dynamics::evaluate`] but computing images in the given order.
    /// The result is the same for every order.
    pub fn evaluate_in_order(&self, g: &Graph, order: &[&VertexName]) -> Result<Evaluation, EngineError> {
        self.validate(g)?;
        let radius = self.rule.evaluation_radius();
        let image = |v: &&VertexName| {
            self.rule
                .apply(&g.disk_at(v, radius))
                .map(|img| ((*v).clone(), img))
                .map_err(|source| EngineError::Rule {
                    center: (*v).clone(),
                    source,
                })
        };
        let mut images: Vec<(VertexName, Graph)> = if self.parallel {
            order.par_iter().map(image).collect::<Result<_, _>>()?
        } else {
            order.iter().map(image).collect::<Result<_, _>>()?
        };
        images.sort_by(|a, b| a.0.cmp(&b.0));
        merge_images(&images, self.provenance, g.degree())
    }

    pub fn step(&self, g: &Graph) -> Result<Graph, EngineError> {
        Ok(self.evaluate(g)?.graph)
    }

    /// The trajectory `[G, F(G), …, F^steps(G)]`.
    pub fn run(&self, g: &Graph, steps: usize) -> Result<Vec<Graph>, EngineError> {
        let mut out = Vec::with_capacity(steps + 1);
        out.push(g.clone());
        for step in 1..=steps {
            let next = self.step(out.last().expect("nonempty")).map_err(|e| EngineError::Step {
                step,
                source: Box::new(e),
            })?;
            out.push(next);
        }
        Ok(out)
    }
}

/// Unites per-center images, sorted by center.
fn merge_images(
    images: &[(VertexName, Graph)],
    provenance: bool,
    degree: u32,
) -> Result<Evaluation, EngineError> {
    let degree = images.first().map_or(degree, |(_, img)| img.degree());
    let mut out = Graph::new(degree);
    let mut owner: BTreeMap<VertexName, VertexName> = BTreeMap::new();
    let mut prov: BTreeMap<VertexName, BTreeSet<VertexName>> = BTreeMap::new();
    for (center, img) in images {
        if let Err(conflict) = out.merge(img) {
            let first = conflict
                .vertex()
                .and_then(|v| owner.get(v))
                .cloned()
                .unwrap_or_else(|| center.clone());
            return Err(EngineError::InconsistentUnion {
                first,
                second: center.clone(),
                conflict,
            });
        }
        for v in img.vertices() {
            owner.entry(v.clone()).or_insert_with(|| center.clone());
            if provenance {
                let entry = prov.entry(v.clone()).or_default();
                if center.is_prefix_of(v) {
                    entry.insert(center.clone());
                }
            }
        }
    }
    Ok(Evaluation {
        graph: out,
        provenance: Provenance { map: prov },
    })
}
