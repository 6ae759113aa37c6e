use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{Label, MarkedTree, TreeError};

/// Version written into every JSON document produced by this crate.
pub const FORMAT_VERSION: u32 = 1;

fn default_version() -> u32 {
    FORMAT_VERSION
}

/// JSON form of a marked tree. Vertex ids are the canonical ones when
/// written; any numbering is accepted when read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeJson {
    #[serde(default = "default_version")]
    pub version: u32,
    /// Number of leaf labels.
    pub labels: usize,
    pub edges: Vec<[usize; 2]>,
    /// Vertex id (as a string key) to leaf label.
    pub leaf_labels: BTreeMap<String, Label>,
}

impl From<&MarkedTree> for TreeJson {
    fn from(t: &MarkedTree) -> Self {
        let mut leaf_labels = BTreeMap::new();
        for v in 0..t.vertex_count() {
            if let Some(l) = t.label_of(v) {
                leaf_labels.insert(v.to_string(), l);
            }
        }
        TreeJson {
            version: FORMAT_VERSION,
            labels: t.leaf_count(),
            edges: t.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            leaf_labels,
        }
    }
}

impl TreeJson {
    pub fn to_tree(&self) -> Result<MarkedTree, TreeError> {
        if self.version != FORMAT_VERSION {
            return Err(TreeError::Invalid(format!(
                "unsupported format version {}",
                self.version
            )));
        }
        let mut labels = BTreeMap::new();
        for (k, &l) in &self.leaf_labels {
            let v: usize = k
                .parse()
                .map_err(|_| TreeError::Invalid(format!("vertex key {k:?} is not an integer")))?;
            labels.insert(v, l);
        }
        let vertex_count = self
            .edges
            .iter()
            .flat_map(|e| e.iter().copied())
            .chain(labels.keys().copied())
            .max()
            .map_or(0, |m| m + 1);
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        let tree = MarkedTree::from_edges(vertex_count, &edges, &labels)?;
        if tree.leaf_count() != self.labels {
            return Err(TreeError::Invalid(format!(
                "declared {} labels but the tree has {} leaves",
                self.labels,
                tree.leaf_count()
            )));
        }
        Ok(tree)
    }
}

/// Graphviz rendering; leaves are boxes showing their label.
pub fn to_dot(t: &MarkedTree) -> String {
    let mut s = String::from("graph tree {\n");
    for v in 0..t.vertex_count() {
        match t.label_of(v) {
            Some(l) => writeln!(s, "  v{v} [shape=box, label=\"{l}\"];").unwrap(),
            None => writeln!(s, "  v{v} [shape=point];").unwrap(),
        }
    }
    for (u, v) in t.edges() {
        writeln!(s, "  v{u} -- v{v};").unwrap();
    }
    s.push_str("}\n");
    s
}
