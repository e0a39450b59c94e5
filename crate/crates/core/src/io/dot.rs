use std::fmt::Write as _;

use crate::graph::Graph;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Graphviz rendering. Vertices are labelled `name/state`, edges carry their
/// ports as tail and head labels and their state as the label.
pub fn export_dot(g: &Graph) -> String {
    let mut out = String::from("digraph G {\n  node [shape=circle];\n");
    for v in g.vertices() {
        let label = match g.state(v) {
            Some(s) => format!("{v}/{s}"),
            None => v.to_string(),
        };
        writeln!(out, "  {} [label={}];", quote(&v.to_string()), quote(&label)).unwrap();
    }
    for e in g.edges() {
        writeln!(
            out,
            "  {} -> {} [taillabel=\"{}\", headlabel=\"{}\", label={}];",
            quote(&e.source.vertex.to_string()),
            quote(&e.target.vertex.to_string()),
            e.source.index,
            e.target.index,
            quote(e.state.as_str())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
