//! JSON file formats: `.pg.json` plane graphs, `.canvas.json` canvases and
//! colouring files.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::canvas::{validate_canvas, Canvas, CanvasViolation, ListAssignment, SDesignation};
use crate::embed::{Dart, EmbeddedGraph, GraphView, Vertex};
use crate::demtwo::{Solution, SolveOutcome, Violation};
use crate::oracle::Coloring;

/// One outer witness dart, or one per component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OuterSpec {
    One(Dart),
    Many(Vec<Dart>),
}

impl OuterSpec {
    pub fn darts(&self) -> Vec<Dart> {
        match self {
            OuterSpec::One(d) => vec![*d],
            OuterSpec::Many(ds) => ds.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub vertices: Vec<Vertex>,
    pub rotation: BTreeMap<Vertex, Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<OuterSpec>,
}

impl GraphFile {
    pub fn from_graph(g: &EmbeddedGraph) -> Self {
        let w = g.outer_witnesses();
        let outer = match w.len() {
            0 => None,
            1 => Some(OuterSpec::One(w[0])),
            _ => Some(OuterSpec::Many(w.to_vec())),
        };
        GraphFile { vertices: g.vertex_list(), rotation: g.rotation_table().clone(), outer }
    }

    pub fn to_graph(&self) -> Result<EmbeddedGraph, HarnessError> {
        let mut rotation = self.rotation.clone();
        for &v in &self.vertices {
            rotation.entry(v).or_default();
        }
        let listed: BTreeSet<Vertex> = self.vertices.iter().copied().collect();
        if let Some(v) = rotation.keys().find(|v| !listed.contains(v)) {
            return Err(HarnessError::Format(format!("vertex {v} has a rotation but is not listed")));
        }
        let witnesses = self.outer.as_ref().map(OuterSpec::darts).unwrap_or_default();
        Ok(EmbeddedGraph::from_rotation(rotation, witnesses)?)
    }
}

/// The graph fields of [`GraphFile`] plus lists and S. Spelled out rather
/// than flattened, since serde's flatten cannot read integer map keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanvasFile {
    pub vertices: Vec<Vertex>,
    pub rotation: BTreeMap<Vertex, Vec<Vertex>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<OuterSpec>,
    pub lists: ListAssignment,
    #[serde(rename = "S", default)]
    pub s: SDesignation,
}

impl CanvasFile {
    pub fn new(g: &EmbeddedGraph, s: &SDesignation, lists: &ListAssignment) -> Self {
        let GraphFile { vertices, rotation, outer } = GraphFile::from_graph(g);
        CanvasFile { vertices, rotation, outer, lists: lists.clone(), s: s.clone() }
    }

    pub fn graph_file(&self) -> GraphFile {
        GraphFile { vertices: self.vertices.clone(), rotation: self.rotation.clone(), outer: self.outer.clone() }
    }

    pub fn from_canvas(c: &Canvas) -> Self {
        Self::new(&c.graph, &c.s, &c.lists)
    }

    /// The raw parts, without checking canvas conditions.
    pub fn parts(&self) -> Result<(EmbeddedGraph, SDesignation, ListAssignment), HarnessError> {
        Ok((self.graph_file().to_graph()?, self.s.clone(), self.lists.clone()))
    }

    pub fn to_canvas(&self) -> Result<Result<Canvas, CanvasViolation>, HarnessError> {
        let (g, s, lists) = self.parts()?;
        Ok(validate_canvas(&g, &s, &lists))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub coloring: Coloring,
}

/// `{"outcome", "coloring"?, "certificate"?, "violation"?, "trace"}`.
pub fn solution_json(solution: &Solution) -> serde_json::Value {
    let mut out = serde_json::Map::new();
    let outcome = match &solution.outcome {
        SolveOutcome::Colored(c) => {
            out.insert("coloring".into(), serde_json::to_value(c).expect("colourings serialize"));
            "colored"
        }
        SolveOutcome::Exception(cert) => {
            out.insert("certificate".into(), serde_json::to_value(cert).expect("certificates serialize"));
            "exception"
        }
        SolveOutcome::Violation(v) => {
            out.insert("violation".into(), violation_json(v));
            "violation"
        }
    };
    out.insert("outcome".into(), outcome.into());
    out.insert("trace".into(), serde_json::to_value(&solution.trace).expect("traces serialize"));
    serde_json::Value::Object(out)
}

/// `{"kind", "message"}` for a hypothesis violation.
pub fn violation_json(v: &Violation) -> serde_json::Value {
    serde_json::json!({ "kind": v.kind(), "message": v.to_string() })
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| HarnessError::Format(format!("{}: {e}", path.display())))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), HarnessError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| HarnessError::Format(e.to_string()))?;
    std::fs::write(path, text + "\n").map_err(|e| HarnessError::Io(format!("{}: {e}", path.display())))
}
