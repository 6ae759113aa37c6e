//! Unrooted trees without bivalent vertices whose leaves carry distinct labels.
//!
//! A [`MarkedTree`] is always stored in canonical form: vertices are numbered
//! in preorder from the leaf with the smallest label, children visited in the
//! order of their canonical encodings. Two trees are equal exactly when their
//! encodings are equal, and the encoding doubles as the Newick rendering.
//!
//! Label-level operations ([`MarkedTree::erase`], [`MarkedTree::attach`]) work
//! on arbitrary label sets. The numeric face maps of the Δ-set, which shift
//! labels above the erased one down by one, live in [`MarkedTree::face`] and
//! in [`TreeFamily`].

mod enumerate;
mod fill;
mod format;
mod newick;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

pub use enumerate::{enumerate, enumerate_labelled, tree_count, Budget, DEFAULT_BUDGET};
pub use fill::{
    fill, fill_labelled, fill_labelled_with, is_compatible_labelled, numeric_to_labelled,
    reconstruct_pair, Fill, FillCase,
};
pub use format::{to_dot, TreeJson, FORMAT_VERSION};
pub use newick::{parse_newick, ParseError};

use crate::delta::{DeltaError, DeltaSet};

/// Leaf label.
pub type Label = u32;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("invalid tree: {0}")]
    Invalid(String),
    #[error("label {0} is not a leaf of the tree")]
    MissingLabel(Label),
    #[error("label {0} is already present in the tree")]
    DuplicateLabel(Label),
    #[error("attach site {0:?} does not exist in the tree")]
    StaleSite(AttachSite),
    #[error("cannot erase the only leaf of a tree")]
    EraseLastLeaf,
    #[error("face index {index} out of range for a tree with {leaves} leaves")]
    IndexOutOfRange { index: usize, leaves: usize },
    #[error("trees do not share a common core: {0}")]
    Inconsistent(String),
    #[error("tuple is not compatible: {0}")]
    Incompatible(String),
    #[error("no tree has the given faces")]
    NoFill,
    #[error("{0} distinct trees have the given faces")]
    MultipleFills(usize),
    #[error("unique filling needs dimension at least 5, got {0}")]
    DimensionTooSmall(usize),
    #[error("|T_{n}| is about {estimate}, over the budget of {budget}")]
    BudgetExceeded { n: usize, estimate: u128, budget: u128 },
}

impl From<DeltaError> for TreeError {
    fn from(e: DeltaError) -> Self {
        match e {
            DeltaError::IndexOutOfRange { index, dim } => TreeError::IndexOutOfRange {
                index,
                leaves: dim + 1,
            },
            other => TreeError::Invalid(other.to_string()),
        }
    }
}

/// A place where a new leaf can be attached: an internal vertex or the
/// interior of an edge. Vertex ids refer to the canonical numbering of the
/// host tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AttachSite {
    Vertex(usize),
    Edge(usize, usize),
}

/// Mutable working graph. Removed vertices keep their slot with an empty
/// adjacency list and no label.
#[derive(Debug, Clone, Default)]
pub(crate) struct Graph {
    pub(crate) adj: Vec<Vec<usize>>,
    pub(crate) leaf: Vec<Option<Label>>,
    pub(crate) alive: Vec<bool>,
}

impl Graph {
    pub(crate) fn add_vertex(&mut self, label: Option<Label>) -> usize {
        self.adj.push(Vec::new());
        self.leaf.push(label);
        self.alive.push(true);
        self.adj.len() - 1
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].push(v);
        self.adj[v].push(u);
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].retain(|&w| w != v);
        self.adj[v].retain(|&w| w != u);
    }

    pub(crate) fn remove_vertex(&mut self, v: usize) {
        for w in std::mem::take(&mut self.adj[v]) {
            self.adj[w].retain(|&x| x != v);
        }
        self.leaf[v] = None;
        self.alive[v] = false;
    }

    pub(crate) fn vertex_of(&self, label: Label) -> Option<usize> {
        self.leaf.iter().position(|&l| l == Some(label))
    }

    /// Removes a bivalent unlabelled vertex, joining its two neighbours.
    /// Returns the two neighbours.
    pub(crate) fn smooth(&mut self, v: usize) -> (usize, usize) {
        debug_assert_eq!(self.adj[v].len(), 2);
        let (x, y) = (self.adj[v][0], self.adj[v][1]);
        self.remove_vertex(v);
        self.add_edge(x, y);
        (x, y)
    }

    /// Subdivides edge `(u, v)` with a new unlabelled vertex.
    pub(crate) fn subdivide(&mut self, u: usize, v: usize) -> usize {
        self.remove_edge(u, v);
        let w = self.add_vertex(None);
        self.add_edge(u, w);
        self.add_edge(w, v);
        w
    }

    fn alive_count(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count()
    }

    fn validate(&self) -> Result<(), TreeError> {
        let live: Vec<usize> = (0..self.adj.len()).filter(|&v| self.alive[v]).collect();
        if live.is_empty() {
            return Err(TreeError::Invalid("tree has no vertices".into()));
        }
        let edge_ends: usize = live.iter().map(|&v| self.adj[v].len()).sum();
        if edge_ends != 2 * (live.len() - 1) {
            return Err(TreeError::Invalid(format!(
                "{} vertices need {} edges, found {}",
                live.len(),
                live.len() - 1,
                edge_ends / 2
            )));
        }
        for &v in &live {
            let mut ns = self.adj[v].clone();
            ns.sort_unstable();
            if ns.windows(2).any(|w| w[0] == w[1]) || ns.contains(&v) {
                return Err(TreeError::Invalid(format!("vertex {v} has a loop or multi-edge")));
            }
        }
        let mut seen = vec![false; self.adj.len()];
        let mut queue = VecDeque::from([live[0]]);
        seen[live[0]] = true;
        let mut reached = 1;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    queue.push_back(w);
                }
            }
        }
        if reached != live.len() {
            return Err(TreeError::Invalid("graph is not connected".into()));
        }
        let mut labels = BTreeSet::new();
        for &v in &live {
            let deg = self.adj[v].len();
            if deg == 2 {
                return Err(TreeError::Invalid(format!("vertex {v} is bivalent")));
            }
            let is_leaf = deg <= 1;
            match (is_leaf, self.leaf[v]) {
                (true, None) => {
                    return Err(TreeError::Invalid(format!("leaf vertex {v} has no label")))
                }
                (false, Some(l)) => {
                    return Err(TreeError::Invalid(format!(
                        "internal vertex {v} carries label {l}"
                    )))
                }
                (true, Some(l)) => {
                    if !labels.insert(l) {
                        return Err(TreeError::Invalid(format!("label {l} appears twice")));
                    }
                }
                (false, None) => {}
            }
        }
        Ok(())
    }

    /// Canonical encodings of every vertex, rooted at the smallest leaf.
    /// Returns the root leaf and the per-vertex codes of the rooted subtrees.
    fn codes(&self) -> (usize, Vec<String>) {
        let root = (0..self.adj.len())
            .filter(|&v| self.alive[v])
            .filter_map(|v| self.leaf[v].map(|l| (l, v)))
            .min()
            .map(|(_, v)| v)
            .expect("validated tree has a leaf");
        let mut codes = vec![String::new(); self.adj.len()];
        // Iterative postorder so deep caterpillars do not overflow the stack.
        let order = self.preorder_from(root);
        for &(v, parent) in order.iter().rev() {
            if let Some(l) = self.leaf[v] {
                if parent.is_some() || self.adj[v].is_empty() {
                    codes[v] = l.to_string();
                    continue;
                }
            }
            let mut kids: Vec<&str> = self.adj[v]
                .iter()
                .filter(|&&w| Some(w) != parent)
                .map(|&w| codes[w].as_str())
                .collect();
            kids.sort_unstable();
            codes[v] = format!("({})", kids.join(","));
        }
        (root, codes)
    }

    fn preorder_from(&self, root: usize) -> Vec<(usize, Option<usize>)> {
        let mut out = Vec::with_capacity(self.adj.len());
        let mut stack = vec![(root, None)];
        while let Some((v, parent)) = stack.pop() {
            out.push((v, parent));
            for &w in self.adj[v].iter().rev() {
                if Some(w) != parent {
                    stack.push((w, Some(v)));
                }
            }
        }
        out
    }

    /// Validates and renumbers into canonical form. The returned map sends
    /// old vertex ids to new ones (`None` for removed vertices).
    pub(crate) fn canonicalize(&self) -> Result<(MarkedTree, Vec<Option<usize>>), TreeError> {
        self.validate()?;
        let (root, codes) = self.codes();
        let code = if self.adj[root].is_empty() {
            format!("{};", codes[root])
        } else {
            let w = self.adj[root][0];
            let body = if self.leaf[w].is_some() {
                format!("({})", codes[w])
            } else {
                codes[w].clone()
            };
            format!("{}{};", body, self.leaf[root].unwrap())
        };

        let mut map = vec![None; self.adj.len()];
        let mut order = Vec::with_capacity(self.alive_count());
        let mut stack = vec![(root, usize::MAX)];
        while let Some((v, parent)) = stack.pop() {
            map[v] = Some(order.len());
            order.push(v);
            let mut kids: Vec<usize> = self.adj[v].iter().copied().filter(|&w| w != parent).collect();
            kids.sort_by(|&a, &b| codes[a].cmp(&codes[b]));
            for w in kids.into_iter().rev() {
                stack.push((w, v));
            }
        }
        let adj = order
            .iter()
            .map(|&v| {
                let mut ns: Vec<usize> = self.adj[v].iter().map(|&w| map[w].unwrap()).collect();
                ns.sort_unstable();
                ns
            })
            .collect();
        let leaf = order.iter().map(|&v| self.leaf[v]).collect();
        Ok((MarkedTree { adj, leaf, code }, map))
    }
}

/// A tree without bivalent vertices whose leaves carry distinct labels.
#[derive(Clone)]
pub struct MarkedTree {
    adj: Vec<Vec<usize>>,
    leaf: Vec<Option<Label>>,
    code: String,
}

impl PartialEq for MarkedTree {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}

impl Eq for MarkedTree {}

impl Hash for MarkedTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

impl PartialOrd for MarkedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MarkedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code.cmp(&other.code)
    }
}

impl fmt::Debug for MarkedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MarkedTree({})", self.code)
    }
}

impl fmt::Display for MarkedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code)
    }
}

impl MarkedTree {
    /// Builds a tree from an explicit vertex/edge description.
    pub fn from_edges(
        vertex_count: usize,
        edges: &[(usize, usize)],
        leaf_labels: &BTreeMap<usize, Label>,
    ) -> Result<Self, TreeError> {
        let mut g = Graph::default();
        for v in 0..vertex_count {
            g.add_vertex(leaf_labels.get(&v).copied());
        }
        if let Some((&v, _)) = leaf_labels.iter().find(|(&v, _)| v >= vertex_count) {
            return Err(TreeError::Invalid(format!("label on unknown vertex {v}")));
        }
        for &(u, v) in edges {
            if u >= vertex_count || v >= vertex_count {
                return Err(TreeError::Invalid(format!("edge ({u},{v}) has an unknown endpoint")));
            }
            g.add_edge(u, v);
        }
        Ok(g.canonicalize()?.0)
    }

    /// The tree with a single internal vertex carrying every label (or the
    /// degenerate one- and two-leaf trees).
    pub fn star<I: IntoIterator<Item = Label>>(labels: I) -> Result<Self, TreeError> {
        let labels: BTreeSet<Label> = labels.into_iter().collect();
        let mut g = Graph::default();
        match labels.len() {
            0 => return Err(TreeError::Invalid("tree has no vertices".into())),
            1 => {
                g.add_vertex(labels.first().copied());
            }
            2 => {
                let mut it = labels.iter();
                let u = g.add_vertex(it.next().copied());
                let v = g.add_vertex(it.next().copied());
                g.add_edge(u, v);
            }
            _ => {
                let c = g.add_vertex(None);
                for &l in &labels {
                    let v = g.add_vertex(Some(l));
                    g.add_edge(c, v);
                }
            }
        }
        Ok(g.canonicalize()?.0)
    }

    /// Tree with two internal vertices joined by an edge, carrying the leaves
    /// `left` and `right` respectively. Both sides need at least two labels.
    pub fn two_vertex(left: &BTreeSet<Label>, right: &BTreeSet<Label>) -> Result<Self, TreeError> {
        let mut g = Graph::default();
        let u = g.add_vertex(None);
        let v = g.add_vertex(None);
        g.add_edge(u, v);
        for (side, hub) in [(left, u), (right, v)] {
            for &l in side {
                let x = g.add_vertex(Some(l));
                g.add_edge(hub, x);
            }
        }
        Ok(g.canonicalize()?.0)
    }

    pub(crate) fn to_graph(&self) -> Graph {
        Graph {
            adj: self.adj.clone(),
            leaf: self.leaf.clone(),
            alive: vec![true; self.adj.len()],
        }
    }

    /// Canonical encoding; equal trees have equal encodings.
    pub fn canonical_form(&self) -> &str {
        &self.code
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf.iter().filter(|l| l.is_some()).count()
    }

    /// Number of internal vertices.
    pub fn internal_count(&self) -> usize {
        self.adj.len() - self.leaf_count()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn valency(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn label_of(&self, v: usize) -> Option<Label> {
        self.leaf[v]
    }

    pub fn is_internal(&self, v: usize) -> bool {
        self.leaf[v].is_none()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.adj.len())
            .flat_map(|u| self.adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn internal_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.adj.len()).filter(|&v| self.leaf[v].is_none())
    }

    /// The set of leaf labels.
    pub fn labels(&self) -> BTreeSet<Label> {
        self.leaf.iter().flatten().copied().collect()
    }

    pub fn has_label(&self, label: Label) -> bool {
        self.leaf.contains(&Some(label))
    }

    pub fn leaf_vertex(&self, label: Label) -> Result<usize, TreeError> {
        self.leaf
            .iter()
            .position(|&l| l == Some(label))
            .ok_or(TreeError::MissingLabel(label))
    }

    /// The vertex `v(label)` the leaf is attached to. For the one-leaf tree
    /// this is the leaf itself.
    pub fn attachment_vertex(&self, label: Label) -> Result<usize, TreeError> {
        let v = self.leaf_vertex(label)?;
        Ok(self.adj[v].first().copied().unwrap_or(v))
    }

    /// Whether the leaves `alpha` and `beta` are adjacent: they hang off the
    /// same vertex, or off two trivalent vertices joined by an edge.
    pub fn adjacent(&self, alpha: Label, beta: Label) -> Result<bool, TreeError> {
        let va = self.attachment_vertex(alpha)?;
        let vb = self.attachment_vertex(beta)?;
        if alpha == beta {
            return Err(TreeError::Invalid("adjacency needs two distinct labels".into()));
        }
        Ok(va == vb || self.trivalent_neighbours(va, vb))
    }

    /// The weaker relation relevant for stable curves: `v(alpha)` and
    /// `v(beta)` are distinct trivalent vertices joined by an edge.
    pub fn trivalent_adjacent(&self, alpha: Label, beta: Label) -> Result<bool, TreeError> {
        let va = self.attachment_vertex(alpha)?;
        let vb = self.attachment_vertex(beta)?;
        if alpha == beta {
            return Err(TreeError::Invalid("adjacency needs two distinct labels".into()));
        }
        Ok(self.trivalent_neighbours(va, vb))
    }

    fn trivalent_neighbours(&self, va: usize, vb: usize) -> bool {
        va != vb
            && self.is_internal(va)
            && self.is_internal(vb)
            && self.adj[va].len() == 3
            && self.adj[vb].len() == 3
            && self.adj[va].contains(&vb)
    }

    /// Every site where a new leaf can be attached.
    pub fn attach_sites(&self) -> Vec<AttachSite> {
        if self.adj.len() == 1 {
            return vec![AttachSite::Vertex(0)];
        }
        self.internal_vertices()
            .map(AttachSite::Vertex)
            .chain(self.edges().into_iter().map(|(u, v)| AttachSite::Edge(u, v)))
            .collect()
    }

    /// Attaches a new leaf `label` at `site`.
    pub fn attach(&self, site: AttachSite, label: Label) -> Result<Self, TreeError> {
        if self.has_label(label) {
            return Err(TreeError::DuplicateLabel(label));
        }
        let mut g = self.to_graph();
        match site {
            AttachSite::Vertex(v) => {
                let ok = v < self.adj.len() && (self.is_internal(v) || self.adj.len() == 1);
                if !ok {
                    return Err(TreeError::StaleSite(site));
                }
                let x = g.add_vertex(Some(label));
                g.add_edge(v, x);
            }
            AttachSite::Edge(u, v) => {
                if u >= self.adj.len() || !self.adj[u].contains(&v) {
                    return Err(TreeError::StaleSite(site));
                }
                let w = g.subdivide(u, v);
                let x = g.add_vertex(Some(label));
                g.add_edge(w, x);
            }
        }
        Ok(g.canonicalize()?.0)
    }

    /// Deletes the leaf `label`, smoothing the vertex it hung off if that
    /// vertex becomes bivalent. Other labels are unchanged.
    pub fn erase(&self, label: Label) -> Result<Self, TreeError> {
        Ok(self.erase_traced(label)?.0)
    }

    /// [`MarkedTree::erase`] together with the map from old to new vertex ids.
    pub(crate) fn erase_traced(
        &self,
        label: Label,
    ) -> Result<(Self, Vec<Option<usize>>), TreeError> {
        let x = self.leaf_vertex(label)?;
        if self.adj.len() == 1 {
            return Err(TreeError::EraseLastLeaf);
        }
        let mut g = self.to_graph();
        let w = self.adj[x][0];
        g.remove_vertex(x);
        if g.leaf[w].is_none() && g.adj[w].len() == 2 {
            g.smooth(w);
        }
        g.canonicalize()
    }

    /// Applies a label map, which must be injective on the labels present.
    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> Result<Self, TreeError> {
        let mut g = self.to_graph();
        for l in g.leaf.iter_mut().flatten() {
            *l = f(*l);
        }
        Ok(g.canonicalize()?.0)
    }

    /// The numeric face map: erase leaf `i`, then shift labels above `i` down
    /// by one. Expects labels `0..=n`.
    pub fn face(&self, i: usize) -> Result<Self, TreeError> {
        let leaves = self.leaf_count();
        if i >= leaves || leaves < 2 {
            return Err(TreeError::IndexOutOfRange { index: i, leaves });
        }
        let i = i as Label;
        self.erase(i)?.relabel(|l| if l > i { l - 1 } else { l })
    }

    /// All faces `(face(0), ..., face(n))`.
    pub fn faces(&self) -> Result<Vec<Self>, TreeError> {
        (0..self.leaf_count()).map(|i| self.face(i)).collect()
    }

    /// For an internal vertex, the label sets beyond each incident edge,
    /// keyed by neighbour.
    pub fn directions(&self, v: usize) -> Vec<(usize, BTreeSet<Label>)> {
        self.adj[v]
            .iter()
            .map(|&w| (w, self.labels_beyond(v, w)))
            .collect()
    }

    /// Labels reachable from `w` without passing through `v`.
    pub fn labels_beyond(&self, v: usize, w: usize) -> BTreeSet<Label> {
        let mut out = BTreeSet::new();
        let mut stack = vec![(w, v)];
        while let Some((x, from)) = stack.pop() {
            if let Some(l) = self.leaf[x] {
                out.insert(l);
            }
            for &y in &self.adj[x] {
                if y != from {
                    stack.push((y, x));
                }
            }
        }
        out
    }

    /// Number of internal vertices on the path between the leaves.
    pub fn separation(&self, alpha: Label, beta: Label) -> Result<usize, TreeError> {
        let a = self.leaf_vertex(alpha)?;
        let b = self.leaf_vertex(beta)?;
        let mut prev = vec![usize::MAX; self.adj.len()];
        let mut queue = VecDeque::from([a]);
        prev[a] = a;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if prev[w] == usize::MAX {
                    prev[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut count = 0;
        let mut v = prev[b];
        while v != a {
            count += 1;
            v = prev[v];
        }
        Ok(count)
    }
}

/// The Δ-set `T_n`: trees with leaves `0..=n`, faces erase a leaf.
#[derive(Debug, Clone, Copy)]
pub struct TreeFamily {
    pub budget: Budget,
}

impl Default for TreeFamily {
    fn default() -> Self {
        TreeFamily {
            budget: DEFAULT_BUDGET,
        }
    }
}

impl DeltaSet for TreeFamily {
    type Simplex = MarkedTree;
    type Key = String;
    type Error = TreeError;

    fn dimension(&self, x: &MarkedTree) -> usize {
        x.leaf_count() - 1
    }

    fn face(&self, x: &MarkedTree, i: usize) -> Result<MarkedTree, TreeError> {
        x.face(i)
    }

    fn key(&self, x: &MarkedTree) -> String {
        x.canonical_form().to_owned()
    }

    fn enumerate(&self, n: usize) -> Result<Vec<MarkedTree>, TreeError> {
        enumerate(n, self.budget)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> MarkedTree {
        parse_newick(s).unwrap()
    }

    #[test]
    fn star_encoding_matches_newick_convention() {
        let s = MarkedTree::star([0, 1, 2, 3]).unwrap();
        assert_eq!(s.canonical_form(), "(1,2,3)0;");
        assert_eq!(MarkedTree::star([5]).unwrap().canonical_form(), "5;");
        assert_eq!(MarkedTree::star([0, 1]).unwrap().canonical_form(), "(1)0;");
    }

    #[test]
    fn edge_order_does_not_matter() {
        // cherries {0,1} and {2,3}
        let labels: BTreeMap<usize, Label> = [(0, 0), (1, 1), (2, 2), (3, 3)].into();
        let a = MarkedTree::from_edges(6, &[(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)], &labels).unwrap();
        let b = MarkedTree::from_edges(6, &[(5, 3), (5, 2), (5, 4), (4, 1), (4, 0)], &labels).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.canonical_form(), "((2,3),1)0;");
    }

    #[test]
    fn internal_relabelling_invariance() {
        let labels: BTreeMap<usize, Label> = [(1, 0), (2, 1), (3, 2), (4, 3)].into();
        let a = MarkedTree::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)], &labels).unwrap();
        let labels: BTreeMap<usize, Label> = [(0, 3), (1, 0), (2, 1), (3, 2)].into();
        let b = MarkedTree::from_edges(5, &[(4, 1), (4, 2), (4, 3), (4, 0)], &labels).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn validation_errors() {
        let labels: BTreeMap<usize, Label> = [(0, 0), (2, 1)].into();
        let err = MarkedTree::from_edges(3, &[(0, 1), (1, 2)], &labels).unwrap_err();
        assert!(err.to_string().contains("bivalent"), "{err}");

        let labels: BTreeMap<usize, Label> = [(0, 0), (1, 1), (2, 2), (3, 3)].into();
        let err =
            MarkedTree::from_edges(5, &[(0, 4), (1, 4), (0, 1), (2, 3)], &labels).unwrap_err();
        assert!(err.to_string().contains("not connected"), "{err}");

        let labels: BTreeMap<usize, Label> = [(0, 0), (1, 0), (2, 2)].into();
        let err = MarkedTree::from_edges(4, &[(0, 3), (1, 3), (2, 3)], &labels).unwrap_err();
        assert!(err.to_string().contains("twice"), "{err}");

        let labels: BTreeMap<usize, Label> = [(0, 0), (1, 1)].into();
        let err = MarkedTree::from_edges(4, &[(0, 3), (1, 3), (2, 3)], &labels).unwrap_err();
        assert!(err.to_string().contains("no label"), "{err}");

        let labels: BTreeMap<usize, Label> = [(0, 0), (1, 1), (2, 2)].into();
        let err = MarkedTree::from_edges(4, &[(0, 3), (1, 3), (2, 3), (0, 1)], &labels).unwrap_err();
        assert!(err.to_string().contains("edges"), "{err}");
    }

    #[test]
    fn face_of_star_is_star() {
        let s = MarkedTree::star([0, 1, 2, 3]).unwrap();
        assert_eq!(s.face(2).unwrap(), MarkedTree::star([0, 1, 2]).unwrap());
    }

    #[test]
    fn face_smooths_bivalent_vertex() {
        // u carries 0,1; w carries 2,3,4
        let c = t("((2,3,4),1)0;");
        assert_eq!(c.internal_count(), 2);
        let f = c.face(1).unwrap();
        assert_eq!(f, MarkedTree::star([0, 1, 2, 3]).unwrap());
    }

    #[test]
    fn face_index_out_of_range() {
        let s = MarkedTree::star([0, 1, 2]).unwrap();
        assert!(matches!(s.face(3), Err(TreeError::IndexOutOfRange { .. })));
        assert!(matches!(
            MarkedTree::star([0]).unwrap().face(0),
            Err(TreeError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn erase_missing_label() {
        let s = MarkedTree::star([0, 1, 2]).unwrap();
        assert_eq!(s.erase(7), Err(TreeError::MissingLabel(7)));
    }

    #[test]
    fn adjacency_in_star() {
        let s = MarkedTree::star([0, 1, 2, 3]).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    assert!(s.adjacent(a, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn adjacency_in_binary_caterpillar() {
        // cherry {0,1} at v1, leaf 2 at v2, cherry {3,4} at v3
        let c = t("(((3,4),2),1)0;");
        assert_eq!(c.internal_count(), 3);
        assert!(!c.adjacent(0, 3).unwrap());
        assert!(c.adjacent(0, 2).unwrap());
        assert!(c.adjacent(2, 3).unwrap());
        assert!(c.adjacent(0, 1).unwrap());
    }

    #[test]
    fn four_valent_neighbour_breaks_adjacency() {
        // v(0) carries 0,1,2 (valency 4), v(3) carries 3,4 (valency 3)
        let c = t("((3,4),1,2)0;");
        let v0 = c.attachment_vertex(0).unwrap();
        let v3 = c.attachment_vertex(3).unwrap();
        assert_eq!(c.valency(v0), 4);
        assert_eq!(c.valency(v3), 3);
        assert!(c.neighbors(v0).contains(&v3));
        assert!(!c.adjacent(0, 3).unwrap());
        assert!(c.adjacent(3, 4).unwrap());
    }

    #[test]
    fn adjacency_missing_label() {
        let s = MarkedTree::star([0, 1, 2]).unwrap();
        assert_eq!(s.adjacent(0, 9), Err(TreeError::MissingLabel(9)));
    }

    #[test]
    fn attach_at_center_and_edge() {
        let s = MarkedTree::star([0, 1, 2]).unwrap();
        let center = s.internal_vertices().next().unwrap();
        assert_eq!(
            s.attach(AttachSite::Vertex(center), 3).unwrap(),
            MarkedTree::star([0, 1, 2, 3]).unwrap()
        );
        let leaf0 = s.leaf_vertex(0).unwrap();
        let (u, v) = (center.min(leaf0), center.max(leaf0));
        let cherry = s.attach(AttachSite::Edge(u, v), 3).unwrap();
        assert_eq!(cherry, t("((1,2),3)0;"));
    }

    #[test]
    fn attach_errors() {
        let s = MarkedTree::star([0, 1, 2]).unwrap();
        assert_eq!(
            s.attach(AttachSite::Vertex(0), 1),
            Err(TreeError::DuplicateLabel(1))
        );
        let leaf = s.leaf_vertex(1).unwrap();
        assert!(matches!(
            s.attach(AttachSite::Vertex(leaf), 5),
            Err(TreeError::StaleSite(_))
        ));
        assert!(matches!(
            s.attach(AttachSite::Edge(0, 99), 5),
            Err(TreeError::StaleSite(_))
        ));
    }

    #[test]
    fn attach_inverts_erase_on_small_trees() {
        for n in 0..5 {
            for tree in enumerate(n, DEFAULT_BUDGET).unwrap() {
                for site in tree.attach_sites() {
                    let grown = tree.attach(site, 100).unwrap();
                    assert_eq!(grown.erase(100).unwrap(), tree);
                }
            }
        }
    }

    #[test]
    fn separation_counts_internal_vertices() {
        let c = t("(((3,4),2),1)0;");
        assert_eq!(c.separation(0, 1).unwrap(), 1);
        assert_eq!(c.separation(0, 2).unwrap(), 2);
        assert_eq!(c.separation(0, 4).unwrap(), 3);
    }
}
