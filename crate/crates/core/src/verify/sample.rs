use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{Graph, Signature};
use crate::name::{Port, Renaming, Symbol, VertexName};
use crate::rules::{Domain, LocalRule};
use crate::verify::space::unlift;
use crate::verify::VerifyError;

/// Default largest sampled graph.
pub const DEFAULT_MAX_VERTICES: usize = 8;

#[derive(Clone, Debug)]
enum Shape {
    PortGraphs,
    Lines,
}

/// Seeded random graphs from a rule's domain.
#[derive(Clone, Debug)]
pub struct Sampler {
    rng: ChaCha8Rng,
    shape: Shape,
    sigma: Vec<Symbol>,
    delta: Vec<Symbol>,
    pi: u32,
    degree: u32,
    lifted: bool,
    max_vertices: usize,
    pool: Option<usize>,
}

impl Sampler {
    pub fn for_rule(rule: &dyn LocalRule, seed: u64) -> Result<Self, VerifyError> {
        let sig = rule.signature();
        let (shape, base, pi, lifted) = match rule.domain() {
            Domain::PortGraphs => (Shape::PortGraphs, sig.clone(), sig.degree, false),
            Domain::Lines => (Shape::Lines, sig.clone(), 2, false),
            Domain::Lifted { inner, levels } => {
                let (base, pi) = unlift(sig, levels)?;
                let shape = match *inner {
                    Domain::Lines => Shape::Lines,
                    _ => Shape::PortGraphs,
                };
                (shape, base, pi, true)
            }
        };
        Ok(Self::with_signature(&base, shape, pi, sig.degree, lifted, seed))
    }

    fn with_signature(sig: &Signature, shape: Shape, pi: u32, degree: u32, lifted: bool, seed: u64) -> Self {
        let mut delta: Vec<Symbol> = sig.edge_states.iter().cloned().collect();
        if matches!(shape, Shape::Lines) {
            delta.truncate(1);
        }
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            shape,
            sigma: sig.vertex_states.iter().cloned().collect(),
            delta,
            pi,
            degree,
            lifted,
            max_vertices: DEFAULT_MAX_VERTICES,
            pool: None,
        }
    }

    pub fn with_max_vertices(mut self, n: usize) -> Self {
        self.max_vertices = n.max(1);
        self
    }

    /// Draws names from the fixed pool `p0 … p{size-1}` instead of fresh
    /// random bases, so that separate graphs share names.
    pub fn with_pool(mut self, size: usize) -> Self {
        self.pool = Some(size.max(self.max_vertices));
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// A state drawn from the domain's vertex alphabet, encoded when lifted.
    pub fn state(&mut self) -> Symbol {
        let s = self.sigma.choose(&mut self.rng).expect("nonempty alphabet").clone();
        if self.lifted {
            Symbol::new(&format!("{s}@0")).expect("valid symbol")
        } else {
            s
        }
    }

    /// A name with a random base, and a path of length at most one.
    pub fn fresh_name(&mut self) -> VertexName {
        let base = format!("n{}", self.rng.gen::<u32>());
        let path: Vec<u32> = if self.rng.gen_bool(0.3) {
            vec![self.rng.gen_range(0..4)]
        } else {
            Vec::new()
        };
        VertexName::with_path(&base, &path).expect("valid name")
    }

    /// `k` distinct names whose bases are pairwise distinct.
    pub fn names(&mut self, k: usize) -> Vec<VertexName> {
        match self.pool {
            Some(size) => {
                let picks = rand::seq::index::sample(&mut self.rng, size, k);
                picks
                    .into_iter()
                    .map(|i| VertexName::new(&format!("p{i}")).expect("valid name"))
                    .collect()
            }
            None => {
                let mut seen = BTreeSet::new();
                let mut out = Vec::with_capacity(k);
                while out.len() < k {
                    let v = self.fresh_name();
                    if seen.insert(v.base().to_string()) {
                        out.push(v);
                    }
                }
                out
            }
        }
    }

    /// An injective renaming of `names` onto fresh names.
    pub fn fresh_renaming<'a, I>(&mut self, names: I) -> Renaming
    where
        I: IntoIterator<Item = &'a VertexName>,
    {
        let names: Vec<&VertexName> = names.into_iter().collect();
        let targets = self.names_without_pool(names.len());
        Renaming::from_pairs(names.into_iter().cloned().zip(targets)).expect("fresh targets")
    }

    fn names_without_pool(&mut self, k: usize) -> Vec<VertexName> {
        let pool = self.pool.take();
        let out = self.names(k);
        self.pool = pool;
        out
    }

    /// A nonempty random graph from the domain.
    pub fn graph(&mut self) -> Graph {
        let n = self.rng.gen_range(1..=self.max_vertices);
        let names = self.names(n);
        let mut g = Graph::new(self.degree);
        for v in &names {
            let s = self.state();
            g.add_stated(v.clone(), s);
        }
        match self.shape {
            Shape::Lines => {
                let closed = self.rng.gen_bool(0.2);
                let links = if closed { n } else { n - 1 };
                for i in 0..links {
                    g.add_edge(
                        Port::new(names[i].clone(), 2),
                        Port::new(names[(i + 1) % n].clone(), 1),
                        self.delta[0].clone(),
                    )
                    .expect("line wiring");
                }
            }
            Shape::PortGraphs => {
                let ports: Vec<Port> = names
                    .iter()
                    .flat_map(|v| (1..=self.pi).map(move |i| Port::new(v.clone(), i)))
                    .collect();
                let attempts = ports.len();
                for _ in 0..attempts {
                    let a = ports.choose(&mut self.rng).expect("ports").clone();
                    let b = ports.choose(&mut self.rng).expect("ports").clone();
                    if a == b || g.attachment(&a).is_some() || g.attachment(&b).is_some() {
                        continue;
                    }
                    let d = self.delta.choose(&mut self.rng).expect("edge alphabet").clone();
                    g.add_edge(a, b, d).expect("free ports");
                }
            }
        }
        g
    }

    /// A random vertex of a nonempty graph.
    pub fn vertex(&mut self, g: &Graph) -> VertexName {
        let all: Vec<&VertexName> = g.vertices().collect();
        (*all.choose(&mut self.rng).expect("nonempty graph")).clone()
    }
}
