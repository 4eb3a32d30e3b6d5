//! JSON and Graphviz serialization of trees.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::notation::{parse_address, parse_itinerary};
use crate::partition::Partition;
use crate::treebuild::{AbstractHubbardTree, TreeParts, Vertex, VertexKind};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeJson {
    base: String,
    kneading: String,
    vertices: Vec<VertexJson>,
    edges: Vec<[usize; 2]>,
    dynamics: BTreeMap<usize, usize>,
    singular_point: usize,
    sectors: BTreeMap<i64, Vec<usize>>,
    cyclic_order: BTreeMap<usize, Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct VertexJson {
    id: usize,
    itinerary: String,
    kind: String,
}

pub fn to_json(tree: &AbstractHubbardTree) -> String {
    let doc = TreeJson {
        base: tree.base().to_string(),
        kneading: tree.kneading().to_string(),
        vertices: tree
            .vertices()
            .iter()
            .map(|v| VertexJson {
                id: v.id,
                itinerary: v.itinerary.to_string(),
                kind: v.kind.as_str().to_string(),
            })
            .collect(),
        edges: tree.edges().iter().map(|&(a, b)| [a, b]).collect(),
        dynamics: (0..tree.len()).map(|v| (v, tree.dynamics(v))).collect(),
        singular_point: tree.singular_point(),
        sectors: tree.sectors().clone(),
        cyclic_order: tree.cyclic_order().clone(),
    };
    serde_json::to_string_pretty(&doc).expect("tree JSON is always serializable")
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    start + column.saturating_sub(1)
}

/// Reads a tree back and checks every invariant, including that the stored
/// kneading sequence belongs to the stored base.
pub fn from_json(text: &str) -> Result<AbstractHubbardTree> {
    let doc: TreeJson = serde_json::from_str(text).map_err(|e| Error::Parse {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })?;
    let base = parse_address(&doc.base)?;
    let kneading = match parse_itinerary(&doc.kneading)? {
        crate::itinerary::Itinerary::Plain(seq) => seq,
        other => return Err(Error::InvariantViolation(format!("kneading sequence {other} contains *"))),
    };
    if *Partition::new(base.clone())?.kneading() != kneading {
        return Err(Error::InvariantViolation(format!(
            "kneading sequence {kneading} does not belong to base {base}"
        )));
    }
    let vertices = doc
        .vertices
        .into_iter()
        .map(|v| {
            let kind = VertexKind::parse(&v.kind)
                .ok_or_else(|| Error::InvariantViolation(format!("unknown vertex kind {}", v.kind)))?;
            Ok(Vertex {
                id: v.id,
                itinerary: parse_itinerary(&v.itinerary)?,
                kind,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = vertices.len();
    if doc.dynamics.len() != n || doc.dynamics.keys().copied().ne(0..n) {
        return Err(Error::InvariantViolation("dynamics must map every vertex id".into()));
    }
    let tree = AbstractHubbardTree::from_parts(TreeParts {
        base,
        kneading,
        vertices,
        edges: doc.edges.into_iter().map(|[a, b]| (a, b)).collect(),
        dynamics: doc.dynamics.into_values().collect(),
        singular_point: doc.singular_point,
        sectors: doc.sectors,
        cyclic_order: doc.cyclic_order,
    })?;
    tree.verify()?;
    Ok(tree)
}

/// Graphviz rendering: tree edges undirected, dynamics as dashed arrows.
pub fn to_dot(tree: &AbstractHubbardTree) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph hubbard_tree {{");
    let _ = writeln!(out, "  label=\"base {}\";", tree.base());
    for v in tree.vertices() {
        let shape = match v.kind {
            VertexKind::SingularPoint => "doublecircle",
            VertexKind::BranchExtra => "box",
            _ => "ellipse",
        };
        let _ = writeln!(out, "  v{} [label=\"{}\", shape={shape}];", v.id, v.itinerary);
    }
    for &(a, b) in tree.edges() {
        let _ = writeln!(out, "  v{a} -> v{b} [dir=none];");
    }
    for v in 0..tree.len() {
        let _ = writeln!(
            out,
            "  v{v} -> v{} [style=dashed, color=gray40, constraint=false];",
            tree.dynamics(v)
        );
    }
    out.push_str("}\n");
    out
}
