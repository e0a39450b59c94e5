use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::graph::{Disk, Graph};
use crate::io::{serialize_document, serialize_graph, GraphDocument};

/// A graph attached to a failing verdict, in document form so it can be
/// saved and replayed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub label: String,
    pub graph: String,
}

impl Witness {
    pub fn new(label: impl Into<String>, graph: &Graph) -> Self {
        Self {
            label: label.into(),
            graph: serialize_graph(graph),
        }
    }

    /// A disk, written with its pointer.
    pub fn disk(label: impl Into<String>, disk: &Disk) -> Self {
        let doc = GraphDocument {
            graph: disk.graph().clone(),
            pointers: disk.pointers().clone(),
            sigma: None,
            delta: None,
        };
        Self {
            label: label.into(),
            graph: serialize_document(&doc),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail {
        reason: String,
        counterexample: Vec<Witness>,
    },
    Inconclusive {
        reason: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub property: String,
    pub samples: usize,
    pub verdict: Verdict,
    pub seed: Option<u64>,
    pub notes: Vec<String>,
    pub metrics: BTreeMap<String, u64>,
}

impl Report {
    pub fn new(property: impl Into<String>, seed: Option<u64>) -> Self {
        Self {
            property: property.into(),
            samples: 0,
            verdict: Verdict::Pass,
            seed,
            notes: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }

    pub fn fail(&mut self, reason: impl Into<String>, counterexample: Vec<Witness>) {
        self.verdict = Verdict::Fail {
            reason: reason.into(),
            counterexample,
        };
    }

    pub fn inconclusive(&mut self, reason: impl Into<String>) {
        self.verdict = Verdict::Inconclusive {
            reason: reason.into(),
        };
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn metric(&mut self, key: impl Into<String>, value: u64) {
        self.metrics.insert(key.into(), value);
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        matches!(self.verdict, Verdict::Fail { .. })
    }

    pub fn counterexample(&self) -> &[Witness] {
        match &self.verdict {
            Verdict::Fail { counterexample, .. } => counterexample,
            _ => &[],
        }
    }

    /// One summary line, followed by indented notes and witnesses.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = match &self.verdict {
            Verdict::Pass => "PASS".to_string(),
            Verdict::Fail { reason, .. } => format!("FAIL {reason}"),
            Verdict::Inconclusive { reason } => format!("INCONCLUSIVE {reason}"),
        };
        let seed = self.seed.map(|s| format!(" seed={s}")).unwrap_or_default();
        writeln!(out, "{}: {status} (samples={}{seed})", self.property, self.samples).unwrap();
        for (k, v) in &self.metrics {
            writeln!(out, "  {k} = {v}").unwrap();
        }
        for n in &self.notes {
            writeln!(out, "  note: {n}").unwrap();
        }
        for w in self.counterexample() {
            writeln!(out, "  witness {}:", w.label).unwrap();
            for line in w.graph.lines() {
                writeln!(out, "    {line}").unwrap();
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

/// Reports as text, one block per property.
pub fn render_text(reports: &[Report]) -> String {
    reports.iter().map(Report::to_text).collect()
}

/// Reports as JSON lines, one record per property.
pub fn render_json(reports: &[Report]) -> String {
    reports.iter().map(|r| r.to_json() + "\n").collect()
}
