//! Text input shared by the command-line tool: trees given as Newick or JSON,
//! and fill tuples.

use serde::{Deserialize, Serialize};

use crate::moduli::{CurveJson, ModuliError, StableCurve};
use crate::scalar::Scalar;
use crate::tree::{parse_newick, MarkedTree, ParseError, TreeError, TreeJson, FORMAT_VERSION};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("json: {0}")]
    Json(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Moduli(#[from] ModuliError),
    #[error("unsupported format version {0}")]
    Version(u32),
}

impl InputError {
    /// Whether the input text itself is malformed, as opposed to describing
    /// an invalid object.
    pub fn is_syntax(&self) -> bool {
        matches!(self, InputError::Parse(_) | InputError::Json(_) | InputError::Version(_))
    }
}

fn json<'a, D: Deserialize<'a>>(s: &'a str) -> Result<D, InputError> {
    serde_json::from_str(s).map_err(|e| InputError::Json(e.to_string()))
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

/// A tree given either as a Newick string or as a JSON tree document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TreeEntry {
    Newick(String),
    Json(TreeJson),
}

impl TreeEntry {
    pub fn to_tree(&self) -> Result<MarkedTree, InputError> {
        match self {
            TreeEntry::Newick(s) => Ok(parse_newick(s)?),
            TreeEntry::Json(j) => Ok(j.to_tree()?),
        }
    }
}

/// `{"version": 1, "entries": [...]}`: the tuple `(x_0, ..., x_n)` in order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeTupleJson {
    #[serde(default = "default_version")]
    pub version: u32,
    pub entries: Vec<TreeEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveTupleJson {
    #[serde(default = "default_version")]
    pub version: u32,
    pub entries: Vec<CurveJson>,
}

fn check_version(v: u32) -> Result<(), InputError> {
    if v == FORMAT_VERSION {
        Ok(())
    } else {
        Err(InputError::Version(v))
    }
}

/// Reads one tree, as JSON if the text starts with `{` and as Newick otherwise.
pub fn read_tree(text: &str) -> Result<MarkedTree, InputError> {
    let t = text.trim();
    if t.starts_with('{') {
        let doc: TreeJson = json(t)?;
        check_version(doc.version)?;
        Ok(doc.to_tree()?)
    } else {
        Ok(parse_newick(t)?)
    }
}

/// Reads a tree tuple: a JSON tuple document, or one Newick tree per line.
pub fn read_tree_tuple(text: &str) -> Result<Vec<MarkedTree>, InputError> {
    let t = text.trim();
    if t.starts_with('{') {
        let doc: TreeTupleJson = json(t)?;
        check_version(doc.version)?;
        doc.entries.iter().map(TreeEntry::to_tree).collect()
    } else {
        t.lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| Ok(parse_newick(l.trim())?))
            .collect()
    }
}

pub fn write_tree_tuple(entries: &[MarkedTree]) -> String {
    let doc = TreeTupleJson {
        version: FORMAT_VERSION,
        entries: entries
            .iter()
            .map(|t| TreeEntry::Newick(t.canonical_form().to_owned()))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

pub fn read_curve_tuple<T: Scalar>(text: &str) -> Result<Vec<StableCurve<T>>, InputError> {
    let doc: CurveTupleJson = json(text.trim())?;
    check_version(doc.version)?;
    Ok(doc.entries.iter().map(CurveJson::to_curve).collect::<Result<_, _>>()?)
}

/// Reads one curve document.
pub fn read_curve<T: Scalar>(text: &str) -> Result<StableCurve<T>, InputError> {
    let doc: CurveJson = json(text.trim())?;
    check_version(doc.tree.version)?;
    Ok(doc.to_curve()?)
}

pub fn write_curve_tuple<T: Scalar>(entries: &[StableCurve<T>]) -> String {
    let doc = CurveTupleJson {
        version: FORMAT_VERSION,
        entries: entries.iter().map(CurveJson::from).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}
