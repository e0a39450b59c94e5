//! Port graphs with partial vertex and edge states.
//!
//! A [`Graph`] stores a vertex set, a partial state map on vertices and a set
//! of oriented edges between ports. Each port carries at most one edge, in
//! either direction. Every edge endpoint is a vertex of the graph; disks and
//! induced subgraphs keep boundary vertices as stateless members of the
//! vertex set.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::name::{Port, Renaming, Symbol, VertexName};

/// The alphabets and degree a graph is valued over.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub vertex_states: BTreeSet<Symbol>,
    pub edge_states: BTreeSet<Symbol>,
    pub degree: u32,
}

impl Signature {
    pub fn new<V, E>(vertex_states: V, edge_states: E, degree: u32) -> Self
    where
        V: IntoIterator<Item = Symbol>,
        E: IntoIterator<Item = Symbol>,
    {
        Self {
            vertex_states: vertex_states.into_iter().collect(),
            edge_states: edge_states.into_iter().collect(),
            degree,
        }
    }

    /// Checks that `graph` only uses states and ports from this signature.
    pub fn admits(&self, graph: &Graph) -> Result<(), GraphError> {
        if graph.degree() != self.degree {
            return Err(GraphError::DegreeMismatch {
                expected: self.degree,
                found: graph.degree(),
            });
        }
        for (v, s) in graph.states() {
            if !self.vertex_states.contains(s) {
                return Err(GraphError::UnknownState {
                    vertex: v.clone(),
                    state: s.clone(),
                });
            }
        }
        for e in graph.edges() {
            if !self.edge_states.contains(e.state) {
                return Err(GraphError::UnknownEdgeState {
                    port: e.source.clone(),
                    state: e.state.clone(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexName),
    #[error("port {port} is outside 1..{degree}")]
    PortOutOfRange { port: Port, degree: u32 },
    #[error("port {0} already carries an edge")]
    PortInUse(Port),
    #[error("an edge cannot join port {0} to itself")]
    SelfPort(Port),
    #[error("graphs of degree {expected} and {found} cannot be combined")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("vertex {vertex} has state {state} outside the alphabet")]
    UnknownState { vertex: VertexName, state: Symbol },
    #[error("edge from {port} has state {state} outside the alphabet")]
    UnknownEdgeState { port: Port, state: Symbol },
    #[error("union of inconsistent graphs: {0}")]
    InconsistentUnion(Conflict),
    #[error("renaming sends both {first} and {second} to {image}")]
    NonInjectiveRenaming {
        first: VertexName,
        second: VertexName,
        image: VertexName,
    },
    #[error("isomorphism search limited to {limit} vertices, graph has {size}")]
    SizeGuardExceeded { size: usize, limit: usize },
}

/// Orientation of an edge as seen from one of its ports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    Outgoing,
    Incoming,
}

/// A borrowed view of one edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeRef<'a> {
    pub source: &'a Port,
    pub target: &'a Port,
    pub state: &'a Symbol,
}

/// What a used port is attached to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Attachment<'a> {
    pub partner: &'a Port,
    pub direction: Direction,
    pub state: &'a Symbol,
}

/// An owned edge, used in conflict witnesses.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EdgeRecord {
    pub source: Port,
    pub target: Port,
    pub state: Symbol,
}

impl fmt::Display for EdgeRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} [{}]", self.source, self.target, self.state)
    }
}

impl fmt::Debug for EdgeRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The first disagreement found between two graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Conflict {
    Degree { left: u32, right: u32 },
    VertexState {
        vertex: VertexName,
        left: Symbol,
        right: Symbol,
    },
    Port {
        port: Port,
        left: Box<EdgeRecord>,
        right: Box<EdgeRecord>,
    },
}

impl Conflict {
    /// The vertex the conflict is located at, if any.
    pub fn vertex(&self) -> Option<&VertexName> {
        match self {
            Conflict::Degree { .. } => None,
            Conflict::VertexState { vertex, .. } => Some(vertex),
            Conflict::Port { port, .. } => Some(&port.vertex),
        }
    }
}

impl fmt::Display for Conflict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Conflict::Degree { left, right } => write!(f, "degree {left} vs {right}"),
            Conflict::VertexState {
                vertex,
                left,
                right,
            } => write!(f, "vertex {vertex} has state {left} vs {right}"),
            Conflict::Port { port, left, right } => {
                write!(f, "port {port} carries {left} vs {right}")
            }
        }
    }
}

/// A port graph of fixed degree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    degree: u32,
    vertices: BTreeSet<VertexName>,
    states: BTreeMap<VertexName, Symbol>,
    /// Keyed by source port.
    edges: BTreeMap<Port, (Port, Symbol)>,
    /// Every used port mapped to the port at the other end of its edge.
    partners: BTreeMap<Port, Port>,
}

impl Graph {
    pub fn new(degree: u32) -> Self {
        assert!(degree >= 1, "graph degree must be at least 1");
        Self {
            degree,
            vertices: BTreeSet::new(),
            states: BTreeMap::new(),
            edges: BTreeMap::new(),
            partners: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, v: &VertexName) -> bool {
        self.vertices.contains(v)
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = &VertexName> + Clone {
        self.vertices.iter()
    }

    pub fn vertex_set(&self) -> &BTreeSet<VertexName> {
        &self.vertices
    }

    pub fn state(&self, v: &VertexName) -> Option<&Symbol> {
        self.states.get(v)
    }

    pub fn states(&self) -> impl Iterator<Item = (&VertexName, &Symbol)> {
        self.states.iter()
    }

    /// Edges in order of their source port.
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef<'_>> {
        self.edges.iter().map(|(s, (t, d))| EdgeRef {
            source: s,
            target: t,
            state: d,
        })
    }

    /// True when every vertex carries a state.
    pub fn is_total(&self) -> bool {
        self.states.len() == self.vertices.len()
    }

    pub fn add_vertex(&mut self, v: VertexName) -> bool {
        self.vertices.insert(v)
    }

    /// Adds a vertex carrying `state`, replacing any previous state.
    pub fn add_stated(&mut self, v: VertexName, state: Symbol) {
        self.vertices.insert(v.clone());
        self.states.insert(v, state);
    }

    pub fn set_state(&mut self, v: &VertexName, state: Symbol) -> Result<(), GraphError> {
        if !self.vertices.contains(v) {
            return Err(GraphError::UnknownVertex(v.clone()));
        }
        self.states.insert(v.clone(), state);
        Ok(())
    }

    pub fn clear_state(&mut self, v: &VertexName) -> Option<Symbol> {
        self.states.remove(v)
    }

    /// Adds the oriented edge `source -> target`. Both owners must be
    /// vertices and both ports must be free.
    pub fn add_edge(&mut self, source: Port, target: Port, state: Symbol) -> Result<(), GraphError> {
        for p in [&source, &target] {
            if p.index == 0 || p.index > self.degree {
                return Err(GraphError::PortOutOfRange {
                    port: p.clone(),
                    degree: self.degree,
                });
            }
            if !self.vertices.contains(&p.vertex) {
                return Err(GraphError::UnknownVertex(p.vertex.clone()));
            }
            if self.partners.contains_key(p) {
                return Err(GraphError::PortInUse(p.clone()));
            }
        }
        if source == target {
            return Err(GraphError::SelfPort(source));
        }
        self.partners.insert(source.clone(), target.clone());
        self.partners.insert(target.clone(), source.clone());
        self.edges.insert(source, (target, state));
        Ok(())
    }

    /// Adds an edge, creating missing endpoint vertices without states.
    pub fn add_edge_with_stubs(
        &mut self,
        source: Port,
        target: Port,
        state: Symbol,
    ) -> Result<(), GraphError> {
        self.vertices.insert(source.vertex.clone());
        self.vertices.insert(target.vertex.clone());
        self.add_edge(source, target, state)
    }

    /// Adds `source -> target` with stub endpoints unless that exact edge is
    /// already present.
    pub fn ensure_edge(&mut self, source: Port, target: Port, state: Symbol) -> Result<(), GraphError> {
        if let Some((t, d)) = self.edges.get(&source) {
            if *t == target && *d == state {
                return Ok(());
            }
        }
        self.add_edge_with_stubs(source, target, state)
    }

    /// The edge attached to `port`, if any.
    pub fn attachment(&self, port: &Port) -> Option<Attachment<'_>> {
        let partner = self.partners.get(port)?;
        if let Some((target, state)) = self.edges.get(port) {
            Some(Attachment {
                partner: target,
                direction: Direction::Outgoing,
                state,
            })
        } else {
            let (_, state) = &self.edges[partner];
            Some(Attachment {
                partner,
                direction: Direction::Incoming,
                state,
            })
        }
    }

    /// Used ports of `v` with their attachments, by increasing port index.
    pub fn ports_of<'a>(
        &'a self,
        v: &VertexName,
    ) -> impl Iterator<Item = (u32, Attachment<'a>)> + 'a {
        let lo = Port::new(v.clone(), 0);
        let hi = Port::new(v.clone(), u32::MAX);
        self.partners.range(lo..=hi).map(move |(p, _)| {
            let att = self.attachment(p).expect("partner map and edge map agree");
            (p.index, att)
        })
    }

    /// The edge at `port` as an owned record.
    pub fn edge_at(&self, port: &Port) -> Option<EdgeRecord> {
        let att = self.attachment(port)?;
        Some(match att.direction {
            Direction::Outgoing => EdgeRecord {
                source: port.clone(),
                target: att.partner.clone(),
                state: att.state.clone(),
            },
            Direction::Incoming => EdgeRecord {
                source: att.partner.clone(),
                target: port.clone(),
                state: att.state.clone(),
            },
        })
    }

    /// Vertices adjacent to `v` through any edge, regardless of orientation.
    pub fn adjacent(&self, v: &VertexName) -> BTreeSet<VertexName> {
        self.ports_of(v)
            .map(|(_, att)| att.partner.vertex.clone())
            .collect()
    }

    /// Vertices within undirected distance `radius` of `centers`, the
    /// centers included.
    pub fn neighbors<'a, I>(&self, centers: I, radius: usize) -> BTreeSet<VertexName>
    where
        I: IntoIterator<Item = &'a VertexName>,
    {
        self.distances(centers, Some(radius)).into_keys().collect()
    }

    /// Breadth-first distances from `centers`, optionally cut at `limit`.
    pub fn distances<'a, I>(&self, centers: I, limit: Option<usize>) -> BTreeMap<VertexName, usize>
    where
        I: IntoIterator<Item = &'a VertexName>,
    {
        let mut dist = BTreeMap::new();
        let mut queue = VecDeque::new();
        for c in centers {
            if self.vertices.contains(c) && !dist.contains_key(c) {
                dist.insert(c.clone(), 0);
                queue.push_back(c.clone());
            }
        }
        while let Some(u) = queue.pop_front() {
            let d = dist[&u];
            if limit.is_some_and(|l| d >= l) {
                continue;
            }
            for (_, att) in self.ports_of(&u) {
                let w = &att.partner.vertex;
                if !dist.contains_key(w) {
                    dist.insert(w.clone(), d + 1);
                    queue.push_back(w.clone());
                }
            }
        }
        dist
    }

    /// The induced subgraph around `set`: vertices within distance one of
    /// `set ∩ V`, states on `set ∩ V` only, edges touching `set ∩ V`.
    pub fn induced_subgraph<'a, I>(&self, set: I) -> Graph
    where
        I: IntoIterator<Item = &'a VertexName>,
    {
        let core: BTreeSet<&VertexName> =
            set.into_iter().filter(|v| self.vertices.contains(*v)).collect();
        let mut out = Graph::new(self.degree);
        for &v in &core {
            out.vertices.insert(v.clone());
            if let Some(s) = self.states.get(v) {
                out.states.insert(v.clone(), s.clone());
            }
            for (index, att) in self.ports_of(v) {
                out.vertices.insert(att.partner.vertex.clone());
                let here = Port::new(v.clone(), index);
                let (source, target) = match att.direction {
                    Direction::Outgoing => (here, att.partner.clone()),
                    Direction::Incoming => (att.partner.clone(), here),
                };
                if !out.edges.contains_key(&source) {
                    out.partners.insert(source.clone(), target.clone());
                    out.partners.insert(target.clone(), source.clone());
                    out.edges.insert(source, (target, att.state.clone()));
                }
            }
        }
        out
    }

    /// The plain subgraph on `set ∩ V`: all of its states and the edges with
    /// both endpoints inside.
    pub fn restrict_to(&self, set: &BTreeSet<VertexName>) -> Graph {
        let mut out = Graph::new(self.degree);
        for v in self.vertices.intersection(set) {
            out.vertices.insert(v.clone());
            if let Some(s) = self.states.get(v) {
                out.states.insert(v.clone(), s.clone());
            }
        }
        for (s, (t, d)) in &self.edges {
            if out.vertices.contains(&s.vertex) && out.vertices.contains(&t.vertex) {
                out.partners.insert(s.clone(), t.clone());
                out.partners.insert(t.clone(), s.clone());
                out.edges.insert(s.clone(), (t.clone(), d.clone()));
            }
        }
        out
    }

    /// The envelope of radius `radius` around `centers`.
    pub fn disk<'a, I>(&self, centers: I, radius: usize) -> Disk
    where
        I: IntoIterator<Item = &'a VertexName> + Clone,
    {
        let reach = self.neighbors(centers.clone(), radius);
        let pointers = centers
            .into_iter()
            .filter(|v| self.vertices.contains(*v))
            .cloned()
            .collect();
        Disk {
            pointed: PointedGraph {
                graph: self.induced_subgraph(&reach),
                pointers,
            },
            radius,
        }
    }

    /// The envelope of radius `radius` around one vertex.
    pub fn disk_at(&self, center: &VertexName, radius: usize) -> Disk {
        self.disk(std::iter::once(center), radius)
    }

    /// Checks that the two graphs agree wherever both are defined. The
    /// witness is the first disagreement under the vertex order, looking at
    /// a vertex's state before its ports.
    pub fn consistent(&self, other: &Graph) -> Result<(), Conflict> {
        if self.degree != other.degree {
            return Err(Conflict::Degree {
                left: self.degree,
                right: other.degree,
            });
        }
        let (small, large, swapped) = if self.vertices.len() <= other.vertices.len() {
            (self, other, false)
        } else {
            (other, self, true)
        };
        let orient = |a: EdgeRecord, b: EdgeRecord| if swapped { (b, a) } else { (a, b) };
        for v in small.vertices.iter().filter(|v| large.vertices.contains(*v)) {
            if let (Some(a), Some(b)) = (small.states.get(v), large.states.get(v)) {
                if a != b {
                    let (left, right) = if swapped {
                        (b.clone(), a.clone())
                    } else {
                        (a.clone(), b.clone())
                    };
                    return Err(Conflict::VertexState {
                        vertex: v.clone(),
                        left,
                        right,
                    });
                }
            }
            for (index, _) in small.ports_of(v) {
                let port = Port::new(v.clone(), index);
                if let Some(theirs) = large.edge_at(&port) {
                    let mine = small.edge_at(&port).expect("port is used");
                    if mine != theirs {
                        let (left, right) = orient(mine, theirs);
                        return Err(Conflict::Port {
                            port,
                            left: Box::new(left),
                            right: Box::new(right),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Merges `other` into `self` after checking consistency. On conflict
    /// `self` is left unchanged.
    pub fn merge(&mut self, other: &Graph) -> Result<(), Conflict> {
        self.consistent(other)?;
        self.vertices.extend(other.vertices.iter().cloned());
        for (v, s) in &other.states {
            self.states.entry(v.clone()).or_insert_with(|| s.clone());
        }
        for (s, (t, d)) in &other.edges {
            if !self.edges.contains_key(s) {
                self.partners.insert(s.clone(), t.clone());
                self.partners.insert(t.clone(), s.clone());
                self.edges.insert(s.clone(), (t.clone(), d.clone()));
            }
        }
        Ok(())
    }

    pub fn union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let (mut base, extra) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        base.merge(extra).map_err(GraphError::InconsistentUnion)?;
        Ok(base)
    }

    /// Applies a renaming to every vertex, state and edge.
    pub fn rename(&self, renaming: &Renaming) -> Result<Graph, GraphError> {
        if let Some((first, second, image)) = renaming.collision(self.vertices.iter()) {
            return Err(GraphError::NonInjectiveRenaming {
                first,
                second,
                image,
            });
        }
        Ok(self.map_names(|v| renaming.apply(v)))
    }

    /// The induced action on derived names: `v.2` under `{v -> w}` becomes `w.2`.
    pub fn rename_conjugate(&self, renaming: &Renaming) -> Graph {
        self.map_names(|v| renaming.apply_conjugate(v))
    }

    /// Renames with a function the caller knows to be injective on `V(self)`.
    pub(crate) fn map_names(&self, f: impl Fn(&VertexName) -> VertexName) -> Graph {
        let port = |p: &Port| Port::new(f(&p.vertex), p.index);
        let mut out = Graph::new(self.degree);
        out.vertices = self.vertices.iter().map(&f).collect();
        out.states = self.states.iter().map(|(v, s)| (f(v), s.clone())).collect();
        for (s, (t, d)) in &self.edges {
            let (s, t) = (port(s), port(t));
            out.partners.insert(s.clone(), t.clone());
            out.partners.insert(t.clone(), s.clone());
            out.edges.insert(s, (t, d.clone()));
        }
        out
    }

    /// Same graph with a different degree. Fails if a used port exceeds it.
    pub fn with_degree(&self, degree: u32) -> Result<Graph, GraphError> {
        if let Some(p) = self.partners.keys().find(|p| p.index > degree) {
            return Err(GraphError::PortOutOfRange {
                port: p.clone(),
                degree,
            });
        }
        let mut out = self.clone();
        out.degree = degree;
        Ok(out)
    }

    /// Drops the state of every vertex.
    pub fn without_states(&self) -> Graph {
        let mut out = self.clone();
        out.states.clear();
        out
    }

    /// First pair of names where one is a proper prefix of the other.
    pub fn prefix_clash(&self) -> Option<(VertexName, VertexName)> {
        let mut iter = self.vertices.iter();
        let mut prev = iter.next()?;
        for v in iter {
            if prev.is_prefix_of(v) {
                return Some((prev.clone(), v.clone()));
            }
            prev = v;
        }
        None
    }

    /// Checks the structural invariants: endpoints are vertices, ports are
    /// in range and each port is used at most once.
    pub fn check_invariants(&self) -> Result<(), GraphError> {
        let mut seen = BTreeSet::new();
        for (s, (t, _)) in &self.edges {
            for p in [s, t] {
                if p.index == 0 || p.index > self.degree {
                    return Err(GraphError::PortOutOfRange {
                        port: p.clone(),
                        degree: self.degree,
                    });
                }
                if !self.vertices.contains(&p.vertex) {
                    return Err(GraphError::UnknownVertex(p.vertex.clone()));
                }
                if !seen.insert(p.clone()) {
                    return Err(GraphError::PortInUse(p.clone()));
                }
            }
        }
        if let Some(v) = self.states.keys().find(|v| !self.vertices.contains(*v)) {
            return Err(GraphError::UnknownVertex(v.clone()));
        }
        Ok(())
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Graph(degree {}) {{", self.degree)?;
        for v in &self.vertices {
            match self.states.get(v) {
                Some(s) => writeln!(f, "  {v} {s}")?,
                None => writeln!(f, "  {v}")?,
            }
        }
        for e in self.edges() {
            writeln!(f, "  {} -> {} {}", e.source, e.target, e.state)?;
        }
        write!(f, "}}")
    }
}

/// A graph with a distinguished set of its vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PointedGraph {
    pub graph: Graph,
    pub pointers: BTreeSet<VertexName>,
}

impl PointedGraph {
    pub fn new(graph: Graph, pointers: BTreeSet<VertexName>) -> Result<Self, GraphError> {
        if let Some(v) = pointers.iter().find(|v| !graph.contains(v)) {
            return Err(GraphError::UnknownVertex(v.clone()));
        }
        Ok(Self { graph, pointers })
    }

    pub fn rename(&self, renaming: &Renaming) -> Result<Self, GraphError> {
        Ok(Self {
            graph: self.graph.rename(renaming)?,
            pointers: self.pointers.iter().map(|v| renaming.apply(v)).collect(),
        })
    }
}

/// An envelope `G^r_A`: a pointed induced subgraph with its radius.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Disk {
    pub pointed: PointedGraph,
    pub radius: usize,
}

impl Disk {
    pub fn graph(&self) -> &Graph {
        &self.pointed.graph
    }

    pub fn pointers(&self) -> &BTreeSet<VertexName> {
        &self.pointed.pointers
    }

    /// The single center of a disk built around one vertex.
    pub fn center(&self) -> Option<&VertexName> {
        let mut it = self.pointed.pointers.iter();
        match (it.next(), it.next()) {
            (Some(c), None) => Some(c),
            _ => None,
        }
    }

    pub fn rename(&self, renaming: &Renaming) -> Result<Self, GraphError> {
        Ok(Self {
            pointed: self.pointed.rename(renaming)?,
            radius: self.radius,
        })
    }

    /// Recomputes the envelope from the disk's own graph.
    pub fn recompute(&self) -> Disk {
        self.graph().disk(self.pointers().iter(), self.radius)
    }
}
