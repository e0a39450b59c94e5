//! Simulation of a radius `2^l` rule by a radius-one rule in `l + 1` steps.
//!
//! Lifted vertices carry `σ@c`, the original state and a step counter. While
//! `c < l` each vertex joins every pair of its neighbours by an ancillary `*`
//! edge, so after `c` steps every pair of vertices at distance at most `2^c`
//! is adjacent. At `c = l` each vertex sees its whole original disk of radius
//! `2^l` at distance one, rebuilds it, applies the original rule and drops
//! the ancillary edges.
//!
//! A `*` edge stands for a walk of the original graph. The port it uses at
//! either end packs the exit ports of the walk read from that end, so ports
//! stay monogamous and the walk can be recovered from the two ports.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::graph::{Direction, Disk, Graph, Signature};
use crate::name::{Port, Symbol, VertexName};
use crate::rules::{center_of, Domain, LocalRule, Rule, RuleError};

/// State of the ancillary edges.
pub const STAR: &str = "*";

/// Largest lifted degree accepted unless another limit is given.
pub const DEFAULT_PORT_LIMIT: u64 = 1 << 16;

/// `π + π² + … + π^r`, the number of exit sequences of length 1 to `r`.
pub fn lifted_degree(pi: u32, r: usize) -> Option<u64> {
    let mut total: u64 = 0;
    let mut power: u64 = 1;
    for _ in 0..r {
        power = power.checked_mul(pi as u64)?;
        total = total.checked_add(power)?;
    }
    Some(total)
}

type Walk = Vec<(u32, u32)>;

fn pack(exits: impl ExactSizeIterator<Item = u32>, pi: u32) -> u32 {
    let k = exits.len();
    let pi = pi as u64;
    let offset: u64 = (1..k as u32).map(|j| pi.pow(j)).sum();
    let index = exits.fold(0u64, |acc, d| acc * pi + (d as u64 - 1));
    (offset + index + 1) as u32
}

fn unpack(port: u32, pi: u32) -> Vec<u32> {
    let (pi64, mut rest) = (pi as u64, port as u64 - 1);
    let mut k = 1u32;
    while rest >= pi64.pow(k) {
        rest -= pi64.pow(k);
        k += 1;
    }
    let mut out = vec![0; k as usize];
    for slot in out.iter_mut().rev() {
        *slot = (rest % pi64) as u32 + 1;
        rest /= pi64;
    }
    out
}

fn reversed(w: &Walk) -> Walk {
    w.iter().rev().map(|&(e, n)| (n, e)).collect()
}

#[derive(Debug, Clone)]
pub struct LiftedRule {
    inner: Rule,
    levels: u32,
    pi: u32,
    degree: u32,
    signature: Signature,
    star: Symbol,
}

/// A lifted rule with its encoding.
#[derive(Debug, Clone)]
pub struct Lift {
    rule: Arc<LiftedRule>,
}

pub fn lift_radius_one(inner: Rule) -> Result<Lift, RuleError> {
    lift_radius_one_with_limit(inner, DEFAULT_PORT_LIMIT)
}

pub fn lift_radius_one_with_limit(inner: Rule, port_limit: u64) -> Result<Lift, RuleError> {
    let r = inner.evaluation_radius();
    if !r.is_power_of_two() {
        return Err(RuleError::RadiusNotPowerOfTwo(r));
    }
    let levels = r.trailing_zeros();
    let sig = inner.signature();
    let pi = sig.degree;
    let needed = lifted_degree(pi, r).unwrap_or(u64::MAX);
    if needed > port_limit || needed > u32::MAX as u64 {
        return Err(RuleError::PortBudgetExceeded {
            needed,
            limit: port_limit,
        });
    }
    let star = Symbol::new(STAR).expect("valid symbol");
    if sig.edge_states.contains(&star) {
        return Err(RuleError::AlphabetMismatch(format!(
            "edge alphabet already contains {STAR}"
        )));
    }
    if let Some(s) = sig.vertex_states.iter().find(|s| s.as_str().contains('@')) {
        return Err(RuleError::AlphabetMismatch(format!("state {s} contains '@'")));
    }
    let states = sig.vertex_states.iter().flat_map(|s| {
        (0..=levels).map(move |c| Symbol::new(&format!("{s}@{c}")).expect("valid symbol"))
    });
    let edges = sig.edge_states.iter().cloned().chain([star.clone()]);
    let signature = Signature::new(states, edges, needed as u32);
    Ok(Lift {
        rule: Arc::new(LiftedRule {
            inner,
            levels,
            pi,
            degree: needed as u32,
            signature,
            star,
        }),
    })
}

impl Lift {
    pub fn rule(&self) -> Rule {
        self.rule.clone()
    }

    pub fn inner(&self) -> &Rule {
        &self.rule.inner
    }

    pub fn levels(&self) -> u32 {
        self.rule.levels
    }

    /// Lifted steps per original step.
    pub fn steps(&self) -> usize {
        self.rule.levels as usize + 1
    }

    pub fn degree(&self) -> u32 {
        self.rule.degree
    }

    /// Pads states with a zero counter and widens the degree.
    pub fn encode(&self, g: &Graph) -> Result<Graph, RuleError> {
        if g.degree() != self.rule.pi {
            return Err(RuleError::AlphabetMismatch(format!(
                "graph of degree {} for a rule of degree {}",
                g.degree(),
                self.rule.pi
            )));
        }
        let mut out = g.with_degree(self.rule.degree)?;
        for (v, s) in g.states() {
            out.set_state(v, counter_state(s, 0))?;
        }
        Ok(out)
    }

    /// Strips counters and ancillary edges.
    pub fn decode(&self, g: &Graph) -> Result<Graph, RuleError> {
        let mut out = Graph::new(self.rule.pi);
        for v in g.vertices() {
            match g.state(v) {
                Some(s) => out.add_stated(v.clone(), split_state(v, s)?.0),
                None => {
                    out.add_vertex(v.clone());
                }
            }
        }
        for e in g.edges().filter(|e| *e.state != self.rule.star) {
            out.add_edge(e.source.clone(), e.target.clone(), e.state.clone())?;
        }
        Ok(out)
    }
}

fn counter_state(s: &Symbol, c: u32) -> Symbol {
    Symbol::new(&format!("{s}@{c}")).expect("valid symbol")
}

fn split_state(v: &VertexName, s: &Symbol) -> Result<(Symbol, u32), RuleError> {
    let bad = || RuleError::malformed(v, format!("state {s} has no counter"));
    let (base, c) = s.as_str().rsplit_once('@').ok_or_else(bad)?;
    let base = Symbol::new(base).map_err(|_| bad())?;
    Ok((base, c.parse().map_err(|_| bad())?))
}

impl LiftedRule {
    /// The walks leaving `u`, paired with their far endpoints.
    fn walks(&self, g: &Graph, u: &VertexName) -> Result<Vec<(VertexName, Walk)>, RuleError> {
        let mut out = Vec::new();
        for (p, att) in g.ports_of(u) {
            let walk = if *att.state == self.star {
                let exits = unpack(p, self.pi);
                let back = unpack(att.partner.index, self.pi);
                if exits.len() != back.len() {
                    return Err(RuleError::malformed(u, format!("ancillary edge at port {p} is not a walk")));
                }
                exits.into_iter().zip(back.into_iter().rev()).collect()
            } else {
                if p > self.pi || att.partner.index > self.pi {
                    return Err(RuleError::malformed(u, format!("edge at port {p} exceeds degree {}", self.pi)));
                }
                vec![(p, att.partner.index)]
            };
            out.push((att.partner.vertex.clone(), walk));
        }
        Ok(out)
    }

    fn widen(&self, disk: &Disk, u: &VertexName, counter: u32) -> Result<Graph, RuleError> {
        let g = disk.graph();
        let (s, _) = split_state(u, g.state(u).expect("checked by caller"))?;
        let mut out = g.induced_subgraph(std::iter::once(u));
        for v in out.vertex_set().clone() {
            out.clear_state(&v);
        }
        out.set_state(u, counter_state(&s, counter + 1))?;

        let walks = self.walks(g, u)?;
        for (x, w1) in &walks {
            for (y, w2) in &walks {
                if x >= y {
                    continue;
                }
                let mut a = reversed(w1);
                let mut b: Walk = w2.iter().rev().copied().collect();
                while let (Some(last), Some(first)) = (a.last(), b.last()) {
                    if last.1 != first.0 {
                        break;
                    }
                    a.pop();
                    b.pop();
                }
                a.extend(b.into_iter().rev());
                if a.len() < 2 {
                    continue;
                }
                let px = pack(a.iter().map(|s| s.0), self.pi);
                let py = pack(reversed(&a).iter().map(|s| s.0), self.pi);
                let (src, dst) = if (px, x) < (py, y) {
                    (Port::new(x.clone(), px), Port::new(y.clone(), py))
                } else {
                    (Port::new(y.clone(), py), Port::new(x.clone(), px))
                };
                out.ensure_edge(src, dst, self.star.clone())?;
            }
        }
        Ok(out)
    }

    fn finish(&self, disk: &Disk, u: &VertexName) -> Result<Graph, RuleError> {
        let g = disk.graph();
        let mut original = Graph::new(self.pi);
        let stated: BTreeSet<&VertexName> = g.states().map(|(v, _)| v).collect();
        for &x in &stated {
            let s = g.state(x).expect("stated");
            original.add_stated(x.clone(), split_state(x, s)?.0);
        }
        for &x in &stated {
            for (p, att) in g.ports_of(x) {
                if *att.state == self.star {
                    continue;
                }
                if p > self.pi || att.partner.index > self.pi {
                    return Err(RuleError::malformed(x, format!("edge at port {p} exceeds degree {}", self.pi)));
                }
                let here = Port::new(x.clone(), p);
                let (s, t) = match att.direction {
                    Direction::Outgoing => (here, att.partner.clone()),
                    Direction::Incoming => (att.partner.clone(), here),
                };
                original.ensure_edge(s, t, att.state.clone())?;
            }
        }
        let r = 1usize << self.levels;
        let img = self
            .inner
            .apply(&original.disk_at(u, r))
            .map_err(|e| RuleError::Inner(e.to_string()))?;
        let mut out = img.with_degree(self.degree)?;
        for (v, s) in img.states() {
            out.set_state(v, counter_state(s, 0))?;
        }
        Ok(out)
    }
}

impl LocalRule for LiftedRule {
    fn name(&self) -> String {
        format!("lift({})", self.inner.name())
    }

    fn radius(&self) -> usize {
        1
    }

    fn bound(&self) -> usize {
        self.inner.bound().max(1 + self.degree as usize)
    }

    fn suffix_depth(&self) -> usize {
        self.inner.suffix_depth()
    }

    fn signature(&self) -> &Signature {
        &self.signature
    }

    fn domain(&self) -> Domain {
        Domain::Lifted {
            inner: Box::new(self.inner.domain()),
            levels: self.levels,
        }
    }

    fn apply(&self, disk: &Disk) -> Result<Graph, RuleError> {
        let u = center_of(disk)?;
        let s = disk
            .graph()
            .state(u)
            .ok_or_else(|| RuleError::malformed(u, "vertex has no state"))?;
        let (_, counter) = split_state(u, s)?;
        if counter < self.levels {
            self.widen(disk, u, counter)
        } else if counter == self.levels {
            self.finish(disk, u)
        } else {
            Err(RuleError::malformed(u, format!("counter {counter} exceeds {}", self.levels)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::tests::line;
    use crate::engine::{compose_at_radius, Dynamics};
    use crate::name::{sym, vn};
    use crate::rules::{identity_rule, inflating_grid_rule, xor_ca_rule, GridVariant};

    #[test]
    fn packing_round_trips() {
        assert_eq!(pack([2].into_iter(), 2), 2);
        assert_eq!(pack([1, 1].into_iter(), 2), 3);
        assert_eq!(pack([2, 2].into_iter(), 2), 6);
        for pi in 1..5u32 {
            let max = lifted_degree(pi, 3).unwrap() as u32;
            for p in 1..=max {
                let w = unpack(p, pi);
                assert!(w.len() <= 3 && w.iter().all(|&d| d >= 1 && d <= pi));
                assert_eq!(pack(w.into_iter(), pi), p);
            }
        }
    }

    #[test]
    fn degree_and_guards() {
        assert_eq!(lifted_degree(2, 2), Some(6));
        assert_eq!(lifted_degree(4, 1), Some(4));
        assert!(matches!(
            lift_radius_one(compose_at_radius(identity_rule(xor_ca_rule().signature().clone()), xor_ca_rule(), 3).unwrap()),
            Err(RuleError::RadiusNotPowerOfTwo(3))
        ));
        let r4 = compose_at_radius(inflating_grid_rule(GridVariant::Plain), inflating_grid_rule(GridVariant::Plain), 4)
            .unwrap();
        assert!(matches!(
            lift_radius_one_with_limit(r4, 100),
            Err(RuleError::PortBudgetExceeded { needed: 340, limit: 100 })
        ));
    }

    #[test]
    fn level_zero_is_the_rule_itself() {
        let lift = lift_radius_one(xor_ca_rule()).unwrap();
        assert_eq!(lift.steps(), 1);
        let f = Dynamics::new(xor_ca_rule());
        let lf = Dynamics::new(lift.rule());
        let g = line("10011");
        let out = lf.step(&lift.encode(&g).unwrap()).unwrap();
        assert_eq!(lift.decode(&out).unwrap(), f.step(&g).unwrap());
    }

    #[test]
    fn radius_two_in_two_steps() {
        let rule = compose_at_radius(xor_ca_rule(), xor_ca_rule(), 2).unwrap();
        let f = Dynamics::new(rule.clone());
        let lift = lift_radius_one(rule).unwrap();
        assert_eq!(lift.degree(), 6);
        let lf = Dynamics::new(lift.rule());
        for s in ["10011", "1", "01", "1101001"] {
            let g = line(s);
            let run = lf.run(&lift.encode(&g).unwrap(), 2).unwrap();
            assert_eq!(lift.decode(run.last().unwrap()).unwrap(), f.step(&g).unwrap(), "on {s}");
        }
    }

    #[test]
    fn stars_join_vertices_at_distance_two() {
        let rule = compose_at_radius(
            identity_rule(xor_ca_rule().signature().clone()),
            xor_ca_rule(),
            2,
        )
        .unwrap();
        let lift = lift_radius_one(rule).unwrap();
        let lf = Dynamics::new(lift.rule());
        let g = line("10110");
        let after = lf.step(&lift.encode(&g).unwrap()).unwrap();
        let stars: Vec<_> = after.edges().filter(|e| e.state.as_str() == STAR).collect();
        assert_eq!(stars.len(), 3);
        for e in &stars {
            let d = g.distances([&e.source.vertex], None)[&e.target.vertex];
            assert_eq!(d, 2);
        }
        assert!(after.states().all(|(_, s)| s.as_str().ends_with("@1")));
    }

    #[test]
    fn grid_radius_two() {
        let plain = || inflating_grid_rule(GridVariant::Plain);
        let id = identity_rule(plain().signature().clone());
        let rule = compose_at_radius(id, plain(), 2).unwrap();
        let f = Dynamics::new(rule.clone());
        let lift = lift_radius_one(rule).unwrap();
        let lf = Dynamics::new(lift.rule());
        let mut g = Graph::new(4);
        g.add_stated(vn("v"), sym("1"));
        let g = Dynamics::new(plain()).run(&g, 2).unwrap().pop().unwrap();
        let run = lf.run(&lift.encode(&g).unwrap(), 2).unwrap();
        assert_eq!(lift.decode(run.last().unwrap()).unwrap(), f.step(&g).unwrap());
    }
}
