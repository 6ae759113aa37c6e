use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{edge_order, ModuliError, StableCurve, Work};
use crate::proj::ProjPoint;
use crate::scalar::Scalar;
use crate::tree::{TreeJson, FORMAT_VERSION};

/// One point of a configuration; `edge` indexes the `edges` array.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigEntry {
    pub edge: usize,
    pub point: String,
}

/// JSON form of a curve: the tree document plus, for each vertex of valency
/// at least four, one point per incident edge. Configurations are written in
/// canonical frame but may be given in any frame when read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveJson {
    #[serde(flatten)]
    pub tree: TreeJson,
    #[serde(default)]
    pub configs: BTreeMap<String, Vec<ConfigEntry>>,
}

impl<T: Scalar> From<&StableCurve<T>> for CurveJson {
    fn from(c: &StableCurve<T>) -> Self {
        let tree = TreeJson::from(c.tree());
        let edge_index = |u: usize, v: usize| {
            let key = [u.min(v), u.max(v)];
            tree.edges.iter().position(|e| *e == key).expect("edge of the tree")
        };
        let configs = c
            .configs()
            .iter()
            .map(|(&v, cfg)| {
                let entries = edge_order(c.tree(), v)
                    .into_iter()
                    .zip(cfg.points())
                    .map(|(w, p)| ConfigEntry {
                        edge: edge_index(v, w),
                        point: p.to_string(),
                    })
                    .collect();
                (v.to_string(), entries)
            })
            .collect();
        CurveJson { tree, configs }
    }
}

impl CurveJson {
    pub fn to_curve<T: Scalar>(&self) -> Result<StableCurve<T>, ModuliError> {
        if self.tree.version != FORMAT_VERSION {
            return Err(ModuliError::Invalid(format!(
                "unsupported format version {}",
                self.tree.version
            )));
        }
        // validates the tree part
        self.tree.to_tree()?;
        let mut graph = crate::tree::Graph::default();
        let count = self
            .tree
            .edges
            .iter()
            .flat_map(|e| e.iter().copied())
            .max()
            .map_or(0, |m| m + 1)
            .max(self.tree.leaf_labels.len());
        for _ in 0..count {
            graph.add_vertex(None);
        }
        for (k, &l) in &self.tree.leaf_labels {
            let v: usize = k.parse().map_err(|_| invalid(format!("vertex key {k:?}")))?;
            if v >= count {
                return Err(invalid(format!("label on unknown vertex {v}")));
            }
            graph.leaf[v] = Some(l);
        }
        for e in &self.tree.edges {
            graph.add_edge(e[0], e[1]);
        }
        let mut work = Work::new(graph);
        for (k, entries) in &self.configs {
            let v: usize = k.parse().map_err(|_| invalid(format!("vertex key {k:?}")))?;
            if v >= count || work.graph.adj[v].len() < 4 || work.graph.leaf[v].is_some() {
                return Err(invalid(format!(
                    "configuration on vertex {v}, which is not an internal vertex of valency 4 or more"
                )));
            }
            for entry in entries {
                let [a, b] = *self
                    .tree
                    .edges
                    .get(entry.edge)
                    .ok_or_else(|| invalid(format!("unknown edge {}", entry.edge)))?;
                let w = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    return Err(invalid(format!("edge {} does not touch vertex {v}", entry.edge)));
                };
                let p: ProjPoint<T> = entry.point.parse()?;
                if work.points.insert((v, w), p).is_some() {
                    return Err(invalid(format!("edge {} listed twice at vertex {v}", entry.edge)));
                }
            }
        }
        work.finish()
    }
}

fn invalid(msg: String) -> ModuliError {
    ModuliError::Invalid(msg)
}

impl<T: Scalar> StableCurve<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&CurveJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self, ModuliError> {
        let doc: CurveJson =
            serde_json::from_str(s).map_err(|e| ModuliError::Invalid(format!("json: {e}")))?;
        doc.to_curve()
    }
}
