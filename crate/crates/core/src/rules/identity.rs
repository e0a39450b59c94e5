use crate::graph::{Disk, Graph, Signature};
use crate::rules::{center_of, center_with_stubs, Domain, LocalRule, Rule, RuleError};

use std::sync::Arc;

/// Radius-zero rule returning the center, its state and its incident edges.
#[derive(Debug, Clone)]
pub struct IdentityRule {
    signature: Signature,
}

pub fn identity_rule(signature: Signature) -> Rule {
    Arc::new(IdentityRule { signature })
}

impl LocalRule for IdentityRule {
    fn name(&self) -> String {
        "identity".into()
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
        let state = disk.graph().state(center).cloned();
        center_with_stubs(disk, center, state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::{sym, vn, Port};

    #[test]
    fn single_vertex_disk_maps_to_itself() {
        let sig = Signature::new([sym("a")], [sym("e")], 2);
        let mut g = Graph::new(2);
        g.add_stated(vn("v"), sym("a"));
        let rule = identity_rule(sig);
        assert_eq!(rule.apply(&g.disk_at(&vn("v"), 0)).unwrap(), g);
    }

    #[test]
    fn keeps_incident_stubs_only() {
        let sig = Signature::new([sym("a")], [sym("e")], 2);
        let mut g = Graph::new(2);
        for n in ["x", "y", "z"] {
            g.add_stated(vn(n), sym("a"));
        }
        g.add_edge(Port::new(vn("x"), 2), Port::new(vn("y"), 1), sym("e"))
            .unwrap();
        g.add_edge(Port::new(vn("y"), 2), Port::new(vn("z"), 1), sym("e"))
            .unwrap();
        let img = identity_rule(sig).apply(&g.disk_at(&vn("x"), 0)).unwrap();
        assert_eq!(img.len(), 2);
        assert_eq!(img.edge_count(), 1);
        assert!(img.state(&vn("y")).is_none());
    }
}
