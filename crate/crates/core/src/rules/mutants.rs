//! Deliberately broken rules, each violating exactly one requirement. The
//! verifier is expected to catch all of them.

use std::sync::Arc;

use crate::graph::{Direction, Disk, Graph, Signature};
use crate::name::{sym, VertexName, DEFAULT_EDGE_STATE};
use crate::rules::{center_of, center_with_stubs, Domain, LocalRule, Rule, RuleError};

fn binary_lines() -> Signature {
    Signature::new([sym("0"), sym("1")], [sym(DEFAULT_EDGE_STATE)], 2)
}

/// Identity plus a vertex named `x` in every image, so disjoint inputs share
/// an output name.
#[derive(Debug, Clone)]
pub struct ConstantNameRule {
    signature: Signature,
}

pub fn constant_name_rule() -> Rule {
    Arc::new(ConstantNameRule {
        signature: binary_lines(),
    })
}

impl LocalRule for ConstantNameRule {
    fn name(&self) -> String {
        "mutant-constant-name".into()
    }

    fn radius(&self) -> usize {
        0
    }

    fn bound(&self) -> usize {
        2 + self.signature.degree as usize
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn domain(&self) -> Domain {
        Domain::PortGraphs
    }

    fn apply(&self, disk: &Disk) -> Result<Graph, RuleError> {
        let center = center_of(disk)?;
        let mut out = center_with_stubs(disk, center, disk.graph().state(center).cloned())?;
        out.add_stated(VertexName::new("x").expect("valid name"), sym("0"));
        Ok(out)
    }
}

/// Copies each cell and writes its own state onto its neighbours, so two
/// adjacent cells in different states disagree.
#[derive(Debug, Clone)]
pub struct BoundaryConflictRule {
    signature: Signature,
}

pub fn boundary_conflict_rule() -> Rule {
    Arc::new(BoundaryConflictRule {
        signature: binary_lines(),
    })
}

impl LocalRule for BoundaryConflictRule {
    fn name(&self) -> String {
        "mutant-boundary-conflict".into()
    }

    fn radius(&self) -> usize {
        1
    }

    fn bound(&self) -> usize {
        3
    }

    fn suffix_depth(&self) -> usize {
        0
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn domain(&self) -> Domain {
        Domain::Lines
    }

    fn apply(&self, disk: &Disk) -> Result<Graph, RuleError> {
        let center = center_of(disk)?;
        let state = disk
            .graph()
            .state(center)
            .cloned()
            .ok_or_else(|| RuleError::malformed(center, "cell has no state"))?;
        let mut out = center_with_stubs(disk, center, Some(state.clone()))?;
        for w in disk.graph().adjacent(center) {
            out.set_state(&w, state.clone())?;
        }
        Ok(out)
    }
}

/// Claims radius 1 but copies the state found two cells to the right.
#[derive(Debug, Clone)]
pub struct RadiusCheatRule {
    signature: Signature,
}

pub fn radius_cheat_rule() -> Rule {
    Arc::new(RadiusCheatRule {
        signature: binary_lines(),
    })
}

impl RadiusCheatRule {
    fn right_of<'a>(g: &'a Graph, v: &VertexName) -> Option<&'a VertexName> {
        g.ports_of(v)
            .find(|(i, att)| *i == 2 && att.direction == Direction::Outgoing)
            .map(|(_, att)| &att.partner.vertex)
    }
}

impl LocalRule for RadiusCheatRule {
    fn name(&self) -> String {
        "mutant-radius-cheat".into()
    }

    fn radius(&self) -> usize {
        1
    }

    fn evaluation_radius(&self) -> usize {
        2
    }

    fn bound(&self) -> usize {
        3
    }

    fn suffix_depth(&self) -> usize {
        0
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn domain(&self) -> Domain {
        Domain::Lines
    }

    fn apply(&self, disk: &Disk) -> Result<Graph, RuleError> {
        let center = center_of(disk)?;
        let g = disk.graph();
        let far = Self::right_of(g, center)
            .and_then(|r| Self::right_of(g, r))
            .and_then(|rr| g.state(rr))
            .cloned()
            .unwrap_or_else(|| sym("0"));
        center_with_stubs(disk, center, Some(far))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::{vn, Port};

    fn line(states: &str) -> Graph {
        let mut g = Graph::new(2);
        for (i, c) in states.chars().enumerate() {
            g.add_stated(vn(&format!("c{i}")), sym(&c.to_string()));
            if i > 0 {
                g.add_edge(
                    Port::new(vn(&format!("c{}", i - 1)), 2),
                    Port::new(vn(&format!("c{i}")), 1),
                    sym("e"),
                )
                .unwrap();
            }
        }
        g
    }

    #[test]
    fn constant_name_appears_everywhere() {
        let g = line("01");
        let rule = constant_name_rule();
        for v in g.vertices() {
            assert!(rule.apply(&g.disk_at(v, 0)).unwrap().contains(&vn("x")));
        }
    }

    #[test]
    fn boundary_conflict_on_mixed_line() {
        let g = line("01");
        let rule = boundary_conflict_rule();
        let a = rule.apply(&g.disk_at(&vn("c0"), 1)).unwrap();
        let b = rule.apply(&g.disk_at(&vn("c1"), 1)).unwrap();
        assert!(a.consistent(&b).is_err());
        let g = line("11");
        let a = rule.apply(&g.disk_at(&vn("c0"), 1)).unwrap();
        let b = rule.apply(&g.disk_at(&vn("c1"), 1)).unwrap();
        assert!(a.consistent(&b).is_ok());
    }

    #[test]
    fn radius_cheat_reads_two_cells_away() {
        let g = line("001");
        let rule = radius_cheat_rule();
        let img = rule.apply(&g.disk_at(&vn("c0"), 2)).unwrap();
        assert_eq!(img.state(&vn("c0")), Some(&sym("1")));
    }
}
