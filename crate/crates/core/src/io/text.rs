//! Line-oriented graph documents.
//!
//! ```text
//! # the 10011 line
//! degree 2
//! sigma 0 1
//! delta e
//! vertex v0 1
//! vertex v1 0
//! edge v0:2 -> v1:1 e
//! pointer v0
//! ```
//!
//! Header lines are optional. Without `degree` the largest port index used
//! is taken. An edge without a state gets the single `delta` symbol, or `e`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::graph::{Graph, PointedGraph, Signature};
use crate::io::IoError;
use crate::name::{Port, Symbol, VertexName, DEFAULT_EDGE_STATE};

/// A parsed document: the graph, its pointers and any declared alphabets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDocument {
    pub graph: Graph,
    pub pointers: BTreeSet<VertexName>,
    pub sigma: Option<BTreeSet<Symbol>>,
    pub delta: Option<BTreeSet<Symbol>>,
}

impl GraphDocument {
    pub fn pointed(&self) -> PointedGraph {
        PointedGraph::new(self.graph.clone(), self.pointers.clone()).expect("pointers checked by parser")
    }

    /// The declared signature, falling back to the alphabets in use.
    pub fn signature(&self) -> Signature {
        let sigma = self
            .sigma
            .clone()
            .unwrap_or_else(|| self.graph.states().map(|(_, s)| s.clone()).collect());
        let delta = self
            .delta
            .clone()
            .unwrap_or_else(|| self.graph.edges().map(|e| e.state.clone()).collect());
        Signature::new(sigma, delta, self.graph.degree())
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain([(line.len(), ' ')]) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

struct VertexRec {
    line: usize,
    name: VertexName,
    state: Option<Symbol>,
}

struct EdgeRec {
    line: usize,
    source: Port,
    target: Port,
    state: Option<Symbol>,
}

pub fn parse_document(text: &str) -> Result<GraphDocument, IoError> {
    let mut degree: Option<(usize, u32)> = None;
    let mut sigma: Option<BTreeSet<Symbol>> = None;
    let mut delta: Option<BTreeSet<Symbol>> = None;
    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    let mut pointers = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim_start();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let toks = tokens(raw);
        let err = |tok: &Token, message: String| IoError::Parse {
            line,
            column: tok.column,
            message,
        };
        let end = |message: &str| IoError::Parse {
            line,
            column: raw.chars().count() + 1,
            message: message.to_string(),
        };
        let symbol = |tok: &Token| Symbol::new(tok.text).map_err(|e| err(tok, e.to_string()));
        let name = |tok: &Token| tok.text.parse::<VertexName>().map_err(|e| err(tok, e.to_string()));
        let port = |tok: &Token| tok.text.parse::<Port>().map_err(|e| err(tok, e.to_string()));
        let expect_len = |min: usize, max: usize| {
            if toks.len() < min {
                Err(end("record is incomplete"))
            } else if toks.len() > max {
                Err(err(&toks[max], format!("unexpected {:?}", toks[max].text)))
            } else {
                Ok(())
            }
        };

        match toks[0].text {
            "degree" => {
                expect_len(2, 2)?;
                let d: u32 = toks[1]
                    .text
                    .parse()
                    .ok()
                    .filter(|d| *d >= 1)
                    .ok_or_else(|| err(&toks[1], "degree must be a positive integer".into()))?;
                if degree.is_some() {
                    return Err(err(&toks[0], "degree declared twice".into()));
                }
                degree = Some((line, d));
            }
            kw @ ("sigma" | "delta") => {
                let set = toks[1..].iter().map(symbol).collect::<Result<BTreeSet<_>, _>>()?;
                let slot = if kw == "sigma" { &mut sigma } else { &mut delta };
                if slot.replace(set).is_some() {
                    return Err(err(&toks[0], format!("{kw} declared twice")));
                }
            }
            "vertex" => {
                expect_len(2, 3)?;
                vertices.push(VertexRec {
                    line,
                    name: name(&toks[1])?,
                    state: toks.get(2).map(symbol).transpose()?,
                });
            }
            "edge" => {
                expect_len(4, 5)?;
                if toks[2].text != "->" {
                    return Err(err(&toks[2], format!("expected \"->\", got {:?}", toks[2].text)));
                }
                edges.push(EdgeRec {
                    line,
                    source: port(&toks[1])?,
                    target: port(&toks[3])?,
                    state: toks.get(4).map(symbol).transpose()?,
                });
            }
            "pointer" => {
                expect_len(2, 2)?;
                pointers.push((line, name(&toks[1])?));
            }
            other => return Err(err(&toks[0], format!("unknown record {other:?}"))),
        }
    }

    let degree = match degree {
        Some((_, d)) => d,
        None => edges
            .iter()
            .flat_map(|e| [e.source.index, e.target.index])
            .max()
            .unwrap_or(1)
            .max(1),
    };
    let default_edge = match &delta {
        Some(d) if d.len() == 1 => d.iter().next().cloned().expect("one symbol"),
        _ => Symbol::new(DEFAULT_EDGE_STATE).expect("valid symbol"),
    };
    let violation = |line: usize, message: String| IoError::Invariant { line, message };

    let mut graph = Graph::new(degree);
    for v in vertices {
        if graph.contains(&v.name) {
            return Err(violation(v.line, format!("vertex {} declared twice", v.name)));
        }
        match v.state {
            Some(s) => {
                if let Some(sig) = &sigma {
                    if !sig.contains(&s) {
                        return Err(violation(v.line, format!("state {s} of {} is not in sigma", v.name)));
                    }
                }
                graph.add_stated(v.name, s);
            }
            None => {
                graph.add_vertex(v.name);
            }
        }
    }
    for e in edges {
        let state = e.state.unwrap_or_else(|| default_edge.clone());
        if let Some(d) = &delta {
            if !d.contains(&state) {
                return Err(violation(e.line, format!("edge state {state} is not in delta")));
            }
        }
        graph
            .add_edge(e.source.clone(), e.target.clone(), state)
            .map_err(|g| violation(e.line, format!("edge {} -> {}: {g}", e.source, e.target)))?;
    }
    let mut pointer_set = BTreeSet::new();
    for (line, p) in pointers {
        if !graph.contains(&p) {
            return Err(violation(line, format!("pointer {p} is not a vertex")));
        }
        pointer_set.insert(p);
    }
    Ok(GraphDocument {
        graph,
        pointers: pointer_set,
        sigma,
        delta,
    })
}

pub fn parse_graph(text: &str) -> Result<Graph, IoError> {
    Ok(parse_document(text)?.graph)
}

/// Canonical form: header, then vertices, edges and pointers in name order.
pub fn serialize_graph(g: &Graph) -> String {
    serialize_with(g, None, &BTreeSet::new())
}

pub fn serialize_document(doc: &GraphDocument) -> String {
    let sig = Signature::new(
        doc.sigma.clone().unwrap_or_default(),
        doc.delta.clone().unwrap_or_default(),
        doc.graph.degree(),
    );
    let sig = (doc.sigma.is_some() || doc.delta.is_some()).then_some(sig);
    serialize_with(&doc.graph, sig.as_ref(), &doc.pointers)
}

fn serialize_with(g: &Graph, signature: Option<&Signature>, pointers: &BTreeSet<VertexName>) -> String {
    let mut out = String::new();
    writeln!(out, "degree {}", g.degree()).unwrap();
    if let Some(sig) = signature {
        let join = |s: &BTreeSet<Symbol>| s.iter().map(Symbol::as_str).collect::<Vec<_>>().join(" ");
        if !sig.vertex_states.is_empty() {
            writeln!(out, "sigma {}", join(&sig.vertex_states)).unwrap();
        }
        if !sig.edge_states.is_empty() {
            writeln!(out, "delta {}", join(&sig.edge_states)).unwrap();
        }
    }
    for v in g.vertices() {
        match g.state(v) {
            Some(s) => writeln!(out, "vertex {v} {s}").unwrap(),
            None => writeln!(out, "vertex {v}").unwrap(),
        }
    }
    for e in g.edges() {
        writeln!(out, "edge {} -> {} {}", e.source, e.target, e.state).unwrap();
    }
    for p in pointers {
        writeln!(out, "pointer {p}").unwrap();
    }
    out
}
