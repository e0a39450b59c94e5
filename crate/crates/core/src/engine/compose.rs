//! Composition of local rules.
//!
//! The composite reads a disk `N` of radius `r''` around `v`. It first
//! rebuilds the part of `F1(G)` that `N` determines, then applies the second
//! rule around every output of the first rule that derives from `v`.

use std::sync::Arc;

use crate::graph::{Disk, Graph, Signature};
use crate::rules::{center_of, Domain, LocalRule, Rule, RuleError};

/// `2 r1 r2 + r1 + r2`.
pub fn composed_radius(r1: usize, r2: usize) -> usize {
    2 * r1 * r2 + r1 + r2
}

#[derive(Debug, Clone)]
pub struct ComposedRule {
    first: Rule,
    second: Rule,
    radius: usize,
}

/// The rule inducing `F2 ∘ F1`.
pub fn compose(first: Rule, second: Rule) -> Result<Rule, RuleError> {
    let radius = composed_radius(first.radius(), second.radius());
    compose_at_radius(first, second, radius)
}

/// Like [`compose`] with an explicit radius, for pairs of rules known to need
/// less than the general bound.
pub fn compose_at_radius(first: Rule, second: Rule, radius: usize) -> Result<Rule, RuleError> {
    if first.signature() != second.signature() {
        return Err(RuleError::AlphabetMismatch(format!(
            "{} produces {:?}, {} reads {:?}",
            first.name(),
            first.signature(),
            second.name(),
            second.signature()
        )));
    }
    if radius < first.evaluation_radius() {
        return Err(RuleError::BadParameters(format!(
            "radius {radius} is below the first rule's radius {}",
            first.evaluation_radius()
        )));
    }
    Ok(Arc::new(ComposedRule {
        first,
        second,
        radius,
    }))
}

impl ComposedRule {
    pub fn parts(&self) -> (&Rule, &Rule) {
        (&self.first, &self.second)
    }
}

impl LocalRule for ComposedRule {
    fn name(&self) -> String {
        format!("({} ; {})", self.first.name(), self.second.name())
    }

    fn radius(&self) -> usize {
        self.radius
    }

    fn bound(&self) -> usize {
        self.first.bound() * self.second.bound()
    }

    fn suffix_depth(&self) -> usize {
        self.first.suffix_depth() + self.second.suffix_depth()
    }

    fn signature(&self) -> &Signature {
        self.first.signature()
    }

    fn domain(&self) -> Domain {
        self.first.domain()
    }

    fn apply(&self, disk: &Disk) -> Result<Graph, RuleError> {
        let v = center_of(disk)?;
        let n = disk.graph();
        let r1 = self.first.evaluation_radius();
        let r2 = self.second.evaluation_radius();
        let inner_err = |e: RuleError| RuleError::Inner(e.to_string());

        let mut inner = Graph::new(n.degree());
        let mut own = Graph::new(n.degree());
        for u in n.neighbors(std::iter::once(v), self.radius - r1) {
            let img = self.first.apply(&n.disk_at(&u, r1)).map_err(inner_err)?;
            if u == *v {
                own = img.clone();
            }
            inner.merge(&img).map_err(|c| {
                RuleError::Inner(format!("first rule is inconsistent near {u}: {c}"))
            })?;
        }
        if inner.is_empty() {
            inner = Graph::new(self.second.signature().degree);
        }

        let mut out: Option<Graph> = None;
        for w in own.vertices().filter(|w| v.is_prefix_of(w)) {
            let img = self.second.apply(&inner.disk_at(w, r2)).map_err(inner_err)?;
            match &mut out {
                None => out = Some(img),
                Some(acc) => acc.merge(&img).map_err(|c| {
                    RuleError::Inner(format!("second rule is inconsistent near {w}: {c}"))
                })?,
            }
        }
        Ok(out.unwrap_or_else(|| Graph::new(self.second.signature().degree)))
    }
}
