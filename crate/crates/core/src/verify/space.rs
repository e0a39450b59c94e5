//! Exhaustive enumeration of small graphs over a fixed name pool.

use std::fmt;
use std::str::FromStr;

use crate::engine::lifted_degree;
use crate::graph::{Graph, Signature};
use crate::name::{Port, Symbol, VertexName};
use crate::rules::{Domain, LocalRule};
use crate::verify::VerifyError;

/// Default cap on the number of graphs a space may hold.
pub const DEFAULT_SPACE_LIMIT: u64 = 100_000;

/// Overrides parsed from `n=3,sigma=2,pi=2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SpaceOptions {
    pub n: Option<usize>,
    pub sigma: Option<usize>,
    pub pi: Option<u32>,
}

impl FromStr for SpaceOptions {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = SpaceOptions::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || VerifyError::BadSpace(format!("bad space bound {part:?}"));
            let (k, v) = part.split_once('=').ok_or_else(bad)?;
            let v: usize = v.trim().parse().map_err(|_| bad())?;
            match k.trim() {
                "n" => out.n = Some(v),
                "sigma" if v >= 1 => out.sigma = Some(v),
                "pi" if v >= 1 => out.pi = Some(v as u32),
                _ => return Err(bad()),
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Shape {
    PortGraphs,
    Lines,
}

/// Every graph over the names `v1 … vn` within the bounds: each vertex subset,
/// each total state map, each oriented partial matching of ports `1..=pi`
/// and each edge state assignment. Line spaces hold only open and closed
/// lines `v1 … vk`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpace {
    shape: Shape,
    n: usize,
    sigma: Vec<Symbol>,
    delta: Vec<Symbol>,
    pi: u32,
    degree: u32,
    /// Lifted spaces encode states as `σ@0`.
    lifted: bool,
}

impl GraphSpace {
    pub fn port_graphs(n: usize, signature: &Signature, pi: u32) -> Self {
        Self {
            shape: Shape::PortGraphs,
            n,
            sigma: signature.vertex_states.iter().cloned().collect(),
            delta: signature.edge_states.iter().cloned().collect(),
            pi: pi.min(signature.degree),
            degree: signature.degree,
            lifted: false,
        }
    }

    pub fn lines(n: usize, signature: &Signature) -> Self {
        Self {
            shape: Shape::Lines,
            n,
            sigma: signature.vertex_states.iter().cloned().collect(),
            delta: signature.edge_states.iter().take(1).cloned().collect(),
            pi: 2,
            degree: signature.degree,
            lifted: false,
        }
    }

    /// The space matching a rule's domain, with the default bounds: lines of
    /// up to 4 cells, port graphs on 3 vertices for degree at most 2 and on
    /// 2 vertices above.
    pub fn for_rule(rule: &dyn LocalRule, options: SpaceOptions) -> Result<Self, VerifyError> {
        let sig = rule.signature();
        let mut space = match rule.domain() {
            Domain::Lines => Self::lines(options.n.unwrap_or(4), sig),
            Domain::PortGraphs => {
                let n = options.n.unwrap_or(if sig.degree <= 2 { 3 } else { 2 });
                Self::port_graphs(n, sig, options.pi.unwrap_or(sig.degree))
            }
            Domain::Lifted { inner, levels } => {
                let (base, pi) = unlift(sig, levels)?;
                let mut s = match *inner {
                    Domain::Lines => Self::lines(options.n.unwrap_or(3), &base),
                    _ => Self::port_graphs(options.n.unwrap_or(2), &base, options.pi.unwrap_or(pi)),
                };
                s.degree = sig.degree;
                s.lifted = true;
                s
            }
        };
        if let Some(k) = options.sigma {
            space.sigma.truncate(k);
        }
        if let Some(pi) = options.pi {
            space.pi = space.pi.min(pi);
        }
        Ok(space)
    }

    /// Number of graphs in the space, saturating.
    pub fn size(&self) -> u64 {
        let s = self.sigma.len() as u64;
        let mut total: u64 = 1;
        match self.shape {
            Shape::Lines => {
                for k in 1..=self.n as u32 {
                    total = total.saturating_add(s.saturating_pow(k).saturating_mul(2));
                }
            }
            Shape::PortGraphs => {
                for k in 1..=self.n {
                    let subsets = binomial(self.n as u64, k as u64);
                    let per = s
                        .saturating_pow(k as u32)
                        .saturating_mul(matchings(k as u64 * self.pi as u64, self.delta.len() as u64));
                    total = total.saturating_add(subsets.saturating_mul(per));
                }
            }
        }
        total
    }

    pub fn enumerate(&self) -> Result<Vec<Graph>, VerifyError> {
        self.enumerate_with_limit(DEFAULT_SPACE_LIMIT)
    }

    pub fn enumerate_with_limit(&self, limit: u64) -> Result<Vec<Graph>, VerifyError> {
        let size = self.size();
        if size > limit {
            return Err(VerifyError::SpaceTooLarge { size, limit });
        }
        let names: Vec<VertexName> = (1..=self.n)
            .map(|i| VertexName::new(&format!("v{i}")).expect("valid name"))
            .collect();
        let mut out = Vec::with_capacity(size as usize);
        out.push(Graph::new(self.degree));
        match self.shape {
            Shape::Lines => {
                for k in 1..=self.n {
                    for closed in [false, true] {
                        let mut g = Graph::new(self.degree);
                        for v in &names[..k] {
                            g.add_vertex(v.clone());
                        }
                        let links = if closed { k } else { k - 1 };
                        for i in 0..links {
                            g.add_edge(
                                Port::new(names[i].clone(), 2),
                                Port::new(names[(i + 1) % k].clone(), 1),
                                self.delta[0].clone(),
                            )
                            .expect("line wiring");
                        }
                        self.with_all_states(&g, &names[..k], &mut out);
                    }
                }
            }
            Shape::PortGraphs => {
                for mask in 1u32..(1 << self.n) {
                    let chosen: Vec<VertexName> = (0..self.n)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| names[i].clone())
                        .collect();
                    let mut base = Graph::new(self.degree);
                    for v in &chosen {
                        base.add_vertex(v.clone());
                    }
                    let ports: Vec<Port> = chosen
                        .iter()
                        .flat_map(|v| (1..=self.pi).map(move |i| Port::new(v.clone(), i)))
                        .collect();
                    let mut wirings = Vec::new();
                    self.wire(&mut base, &ports, 0, &mut wirings);
                    for g in &wirings {
                        self.with_all_states(g, &chosen, &mut out);
                    }
                }
            }
        }
        Ok(out)
    }

    /// All oriented partial matchings of `ports[from..]`, added to `g`.
    fn wire(&self, g: &mut Graph, ports: &[Port], from: usize, out: &mut Vec<Graph>) {
        let Some(p) = ports.get(from) else {
            out.push(g.clone());
            return;
        };
        if g.attachment(p).is_some() {
            return self.wire(g, ports, from + 1, out);
        }
        self.wire(g, ports, from + 1, out);
        for q in &ports[from + 1..] {
            if g.attachment(q).is_some() {
                continue;
            }
            for (s, t) in [(p, q), (q, p)] {
                for d in &self.delta {
                    let mut h = g.clone();
                    h.add_edge(s.clone(), t.clone(), d.clone()).expect("free ports");
                    self.wire(&mut h, ports, from + 1, out);
                }
            }
        }
    }

    fn with_all_states(&self, g: &Graph, names: &[VertexName], out: &mut Vec<Graph>) {
        let s = self.sigma.len();
        let total = s.pow(names.len() as u32);
        for mut code in 0..total {
            let mut h = g.clone();
            for v in names {
                let state = &self.sigma[code % s];
                code /= s;
                let state = if self.lifted {
                    Symbol::new(&format!("{state}@0")).expect("valid symbol")
                } else {
                    state.clone()
                };
                h.set_state(v, state).expect("vertex exists");
            }
            out.push(h);
        }
    }
}

impl fmt::Display for GraphSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let shape = match self.shape {
            Shape::Lines => "lines",
            Shape::PortGraphs => "port graphs",
        };
        write!(
            f,
            "{shape} n<={} sigma={} delta={} pi={}",
            self.n,
            self.sigma.len(),
            self.delta.len(),
            self.pi
        )
    }
}

/// The unlifted signature and degree behind a lifted signature.
pub(crate) fn unlift(sig: &Signature, levels: u32) -> Result<(Signature, u32), VerifyError> {
    let r = 1usize << levels;
    let pi = (1..=sig.degree)
        .find(|&p| lifted_degree(p, r) == Some(sig.degree as u64))
        .ok_or_else(|| VerifyError::BadSpace(format!("degree {} is not a lifted degree", sig.degree)))?;
    let states = sig
        .vertex_states
        .iter()
        .filter_map(|s| s.as_str().strip_suffix("@0"))
        .map(|s| Symbol::new(s).expect("valid symbol"));
    let edges = sig.edge_states.iter().filter(|e| e.as_str() != crate::engine::STAR).cloned();
    Ok((Signature::new(states, edges, pi), pi))
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Oriented partial matchings of `m` points with `d` edge states.
fn matchings(m: u64, d: u64) -> u64 {
    let mut total: u64 = 0;
    let mut j = 0;
    while 2 * j <= m {
        let pairs = binomial(m, 2 * j).saturating_mul((1..=j).fold(1u64, |a, i| a.saturating_mul(2 * i - 1)));
        total = total.saturating_add(pairs.saturating_mul((2 * d).saturating_pow(j as u32)));
        j += 1;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::name::sym;

    fn sig(states: &[&str], degree: u32) -> Signature {
        Signature::new(states.iter().map(|s| sym(s)), [sym("e")], degree)
    }

    #[test]
    fn counts_match_enumeration() {
        for (n, s, pi) in [(1, 1, 2), (2, 2, 2), (3, 2, 2), (2, 1, 3)] {
            let names: Vec<String> = (0..s).map(|i| i.to_string()).collect();
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            let space = GraphSpace::port_graphs(n, &sig(&refs, pi), pi);
            let all = space.enumerate().unwrap();
            assert_eq!(all.len() as u64, space.size(), "n={n} s={s} pi={pi}");
            let distinct: std::collections::HashSet<_> = all.iter().collect();
            assert_eq!(distinct.len(), all.len());
            for g in &all {
                g.check_invariants().unwrap();
                assert!(g.is_total());
            }
        }
    }

    #[test]
    fn known_sizes() {
        assert_eq!(matchings(2, 1), 3);
        assert_eq!(matchings(4, 1), 25);
        assert_eq!(matchings(6, 1), 331);
        let space = GraphSpace::port_graphs(3, &sig(&["0", "1"], 2), 2);
        assert_eq!(space.size(), 1 + 3 * 2 * 3 + 3 * 4 * 25 + 8 * 331);
    }

    #[test]
    fn lines() {
        let space = GraphSpace::lines(4, &sig(&["0", "1"], 2));
        let all = space.enumerate().unwrap();
        assert_eq!(all.len(), 1 + 2 * (2 + 4 + 8 + 16));
        assert_eq!(all.len() as u64, space.size());
    }

    #[test]
    fn guard() {
        let space = GraphSpace::port_graphs(3, &sig(&["0", "1"], 4), 4);
        assert!(matches!(space.enumerate(), Err(VerifyError::SpaceTooLarge { .. })));
    }

    #[test]
    fn options() {
        let o: SpaceOptions = "n=3,sigma=2,pi=2".parse().unwrap();
        assert_eq!((o.n, o.sigma, o.pi), (Some(3), Some(2), Some(2)));
        assert!("n=x".parse::<SpaceOptions>().is_err());
        assert!("q=1".parse::<SpaceOptions>().is_err());
    }
}
