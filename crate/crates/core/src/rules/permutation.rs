use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::graph::{Disk, Graph, Signature};
use crate::name::{sym, Symbol, DEFAULT_EDGE_STATE};
use crate::rules::{center_of, center_with_stubs, Domain, LocalRule, Rule, RuleError};

/// Radius-zero rule relabelling vertex states by a bijection and leaving
/// names and edges unchanged.
#[derive(Debug, Clone)]
pub struct StatePermutationRule {
    map: BTreeMap<Symbol, Symbol>,
    signature: Signature,
}

impl StatePermutationRule {
    pub fn new(map: BTreeMap<Symbol, Symbol>, degree: u32) -> Result<Self, RuleError> {
        let domain: BTreeSet<&Symbol> = map.keys().collect();
        let range: BTreeSet<&Symbol> = map.values().collect();
        if map.is_empty() || domain != range {
            return Err(RuleError::BadParameters(
                "state map must be a permutation of its alphabet".into(),
            ));
        }
        if degree == 0 {
            return Err(RuleError::BadParameters("degree must be at least 1".into()));
        }
        let signature = Signature::new(map.keys().cloned(), [sym(DEFAULT_EDGE_STATE)], degree);
        Ok(Self { map, signature })
    }

    /// Parses `a:b,c:d`.
    pub fn parse_map(text: &str) -> Result<BTreeMap<Symbol, Symbol>, RuleError> {
        let mut map = BTreeMap::new();
        for entry in text.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let bad = || RuleError::BadParameters(format!("bad map entry {entry:?}"));
            let (a, b) = entry.split_once(':').ok_or_else(bad)?;
            let a = Symbol::new(a.trim()).map_err(|_| bad())?;
            let b = Symbol::new(b.trim()).map_err(|_| bad())?;
            if map.insert(a, b).is_some() {
                return Err(bad());
            }
        }
        Ok(map)
    }

    pub fn map(&self) -> &BTreeMap<Symbol, Symbol> {
        &self.map
    }

    pub fn inverse(&self) -> StatePermutationRule {
        let map = self.map.iter().map(|(a, b)| (b.clone(), a.clone())).collect();
        StatePermutationRule {
            map,
            signature: self.signature.clone(),
        }
    }
}

pub fn state_permutation_rule(map: BTreeMap<Symbol, Symbol>, degree: u32) -> Result<Rule, RuleError> {
    Ok(Arc::new(StatePermutationRule::new(map, degree)?))
}

impl LocalRule for StatePermutationRule {
    fn name(&self) -> String {
        "state-perm".into()
    }

    fn radius(&self) -> usize {
        0
    }

    fn bound(&self) -> usize {
        1 + self.signature.degree as usize
    }

    fn suffix_depth(&self) -> usize {
        0
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn domain(&self) -> Domain {
        Domain::PortGraphs
    }

    fn apply(&self, disk: &Disk) -> Result<Graph, RuleError> {
        let center = center_of(disk)?;
        let state = disk
            .graph()
            .state(center)
            .ok_or_else(|| RuleError::malformed(center, "vertex has no state"))?;
        let image = self
            .map
            .get(state)
            .ok_or_else(|| RuleError::malformed(center, format!("state {state} is not permuted")))?;
        center_with_stubs(disk, center, Some(image.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::vn;

    #[test]
    fn rejects_non_bijections() {
        let m = StatePermutationRule::parse_map("0:1,1:1").unwrap();
        assert!(StatePermutationRule::new(m, 2).is_err());
        assert!(StatePermutationRule::parse_map("0-1").is_err());
    }

    #[test]
    fn inverse_undoes_the_relabelling() {
        let m = StatePermutationRule::parse_map("a:b,b:c,c:a").unwrap();
        let rule = StatePermutationRule::new(m, 2).unwrap();
        let inv = rule.inverse();
        let mut g = Graph::new(2);
        g.add_stated(vn("v"), sym("a"));
        let once = rule.apply(&g.disk_at(&vn("v"), 0)).unwrap();
        assert_eq!(once.state(&vn("v")), Some(&sym("b")));
        let back = inv.apply(&once.disk_at(&vn("v"), 0)).unwrap();
        assert_eq!(back, g);
    }
}
