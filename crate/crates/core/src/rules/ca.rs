//! One-dimensional finite unbounded cellular automata on line graphs.
//!
//! A configuration is a line `x:2 -> y:1`, port 1 facing left and port 2
//! facing right. Cell `n` produces `n.0`, the successor of cell `n` computed
//! from its left context. The rightmost cell additionally produces `n.1`
//! for the cell to its right when that cell leaves the quiescent state.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::graph::{Direction, Disk, Graph, Signature};
use crate::name::{sym, Port, Symbol, DEFAULT_EDGE_STATE};
use crate::rules::{center_of, Domain, LocalRule, Rule, RuleError};

/// `h(a, b) = (a + b) mod 2` over `{0, 1}`.
pub const XOR_TABLE: &str = "00:0,01:1,10:1,11:0";

#[derive(Debug, Clone)]
pub struct CellularAutomatonRule {
    table: BTreeMap<(Symbol, Symbol), Symbol>,
    quiescent: Symbol,
    signature: Signature,
    edge: Symbol,
}

impl CellularAutomatonRule {
    /// Builds the rule from a total table over its alphabet with `h(q, q) = q`.
    pub fn new(table: BTreeMap<(Symbol, Symbol), Symbol>, quiescent: Symbol) -> Result<Self, RuleError> {
        let mut alphabet: BTreeSet<Symbol> = BTreeSet::new();
        for ((a, b), c) in &table {
            alphabet.extend([a.clone(), b.clone(), c.clone()]);
        }
        alphabet.insert(quiescent.clone());
        for a in &alphabet {
            for b in &alphabet {
                if !table.contains_key(&(a.clone(), b.clone())) {
                    return Err(RuleError::BadParameters(format!(
                        "local function undefined at ({a}, {b})"
                    )));
                }
            }
        }
        if table[&(quiescent.clone(), quiescent.clone())] != quiescent {
            return Err(RuleError::BadParameters(format!(
                "h({q}, {q}) must be the quiescent state {q}",
                q = quiescent
            )));
        }
        let edge = sym(DEFAULT_EDGE_STATE);
        Ok(Self {
            signature: Signature::new(alphabet, [edge.clone()], 2),
            table,
            quiescent,
            edge,
        })
    }

    /// Parses a table written as `ab:c` entries separated by commas. Entries
    /// over multi-character symbols use `a|b:c`.
    pub fn parse_table(text: &str) -> Result<BTreeMap<(Symbol, Symbol), Symbol>, RuleError> {
        let bad = |entry: &str| RuleError::BadParameters(format!("bad table entry {entry:?}"));
        let mut table = BTreeMap::new();
        for entry in text.split(',').map(str::trim).filter(|e| !e.is_empty()) {
            let (key, value) = entry.rsplit_once(':').ok_or_else(|| bad(entry))?;
            let (a, b) = match key.split_once('|') {
                Some(pair) => pair,
                None => {
                    let mut chars = key.char_indices();
                    match (chars.next(), chars.next(), chars.next()) {
                        (Some(_), Some((i, _)), None) => key.split_at(i),
                        _ => return Err(bad(entry)),
                    }
                }
            };
            let parse = |s: &str| Symbol::new(s).map_err(|_| bad(entry));
            let prev = table.insert((parse(a)?, parse(b)?), parse(value)?);
            if prev.is_some() {
                return Err(RuleError::BadParameters(format!("duplicate entry for {key:?}")));
            }
        }
        Ok(table)
    }

    pub fn quiescent(&self) -> &Symbol {
        &self.quiescent
    }

    pub fn local(&self, left: &Symbol, right: &Symbol) -> &Symbol {
        &self.table[&(left.clone(), right.clone())]
    }
}

pub fn xor_ca_rule() -> Rule {
    let table = CellularAutomatonRule::parse_table(XOR_TABLE).expect("valid table");
    Arc::new(CellularAutomatonRule::new(table, sym("0")).expect("valid rule"))
}

impl LocalRule for CellularAutomatonRule {
    fn name(&self) -> String {
        "ca".into()
    }

    fn radius(&self) -> usize {
        1
    }

    fn bound(&self) -> usize {
        3
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
        let own = g
            .state(center)
            .ok_or_else(|| RuleError::malformed(center, "cell has no state"))?;
        let mut left = None;
        let mut right = None;
        for (index, att) in g.ports_of(center) {
            match (index, att.direction, att.partner.index) {
                (1, Direction::Incoming, 2) => left = Some(att.partner.vertex.clone()),
                (2, Direction::Outgoing, 1) => right = Some(att.partner.vertex.clone()),
                _ => {
                    return Err(RuleError::malformed(
                        center,
                        format!("port {index} is not wired as a line"),
                    ))
                }
            }
        }
        let state_of = |v: &crate::name::VertexName| {
            g.state(v)
                .ok_or_else(|| RuleError::malformed(center, format!("neighbour {v} has no state")))
        };
        let left_state = match &left {
            Some(l) => state_of(l)?,
            None => &self.quiescent,
        };

        let me = center.child(0);
        let mut out = Graph::new(2);
        out.add_stated(me.clone(), self.local(left_state, own).clone());
        if let Some(l) = &left {
            out.ensure_edge(Port::new(l.child(0), 2), Port::new(me.clone(), 1), self.edge.clone())?;
        }
        match &right {
            Some(r) => {
                out.ensure_edge(Port::new(me, 2), Port::new(r.child(0), 1), self.edge.clone())?;
            }
            None => {
                let grown = self.local(own, &self.quiescent);
                if *grown != self.quiescent {
                    let next = center.child(1);
                    out.add_stated(next.clone(), grown.clone());
                    out.add_edge(Port::new(me, 2), Port::new(next, 1), self.edge.clone())?;
                }
            }
        }
        Ok(out)
    }
}
