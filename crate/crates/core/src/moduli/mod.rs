//! Stable rational curves with marked points, as trees decorated by point
//! configurations.
//!
//! A curve is a [`MarkedTree`] (one leaf per mark, one internal vertex per
//! component) in which every internal vertex of valency `k >= 4` carries a
//! configuration of `k` distinct points, one per incident edge. Trivalent
//! vertices carry nothing, since three points on a line have no moduli.
//!
//! Configurations are kept in a canonical Möbius frame. The incident edges of
//! a vertex are ordered by the smallest mark reachable through them and the
//! first three are sent to `0, 1, ∞`. With the tree in canonical form this
//! makes structural equality the same as isomorphism of marked curves.
//!
//! Marks are 0-based everywhere. The one exception is the five-coordinate
//! vector of a 5-marked curve ([`m05_vector`], [`verify_m05`],
//! [`reconstruct_m05`]), whose entry `k = 1..=5` is the coordinate obtained by
//! forgetting mark `k - 1`; in Rust it is the array slot `k - 1`.

mod fill;
mod format;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

pub use fill::{fill_moduli, fill_moduli_labelled};
pub use format::{ConfigEntry, CurveJson};

use crate::delta::{DeltaError, DeltaSet};
use crate::proj::{cross_ratio, Mobius, ProjError, ProjPoint};
use crate::scalar::Scalar;
use crate::tree::{enumerate, Graph, Label, MarkedTree, TreeError, DEFAULT_BUDGET};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ModuliError {
    #[error(transparent)]
    Proj(#[from] ProjError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("mark {0} is not on the curve")]
    InvalidMark(usize),
    #[error("invalid curve: {0}")]
    Invalid(String),
    #[error("invalid coordinates: {0}")]
    InvalidCoordinate(String),
    #[error("faces are inconsistent: {0}")]
    Inconsistent(String),
    #[error("unique filling needs at least 6 marks, got {0}")]
    DimensionTooSmall(usize),
}

impl From<DeltaError> for ModuliError {
    fn from(e: DeltaError) -> Self {
        match e {
            DeltaError::IndexOutOfRange { index, .. } => ModuliError::InvalidMark(index),
            other => ModuliError::Invalid(other.to_string()),
        }
    }
}

/// Points on one component, one per incident edge, in canonical frame.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration<T> {
    points: Vec<ProjPoint<T>>,
}

impl<T: Scalar> Configuration<T> {
    /// Moves `points` (at least four, distinct) into the canonical frame.
    pub fn normalize(points: &[ProjPoint<T>]) -> Result<Self, ModuliError> {
        if points.len() < 4 {
            return Err(ModuliError::Invalid(format!(
                "a configuration needs at least 4 points, got {}",
                points.len()
            )));
        }
        ensure_distinct(points)?;
        let m = Mobius::from_triple(&points[0], &points[1], &points[2])?;
        Ok(Configuration {
            points: points.iter().map(|p| m.apply(p)).collect(),
        })
    }

    /// Wraps points already in canonical frame, checking that they are.
    pub fn from_frame(points: Vec<ProjPoint<T>>) -> Result<Self, ModuliError> {
        let c = Self::normalize(&points)?;
        if c.points != points {
            return Err(ModuliError::Invalid(
                "configuration does not start with 0, 1, inf".into(),
            ));
        }
        Ok(c)
    }

    pub fn points(&self) -> &[ProjPoint<T>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

fn ensure_distinct<T: Scalar>(points: &[ProjPoint<T>]) -> Result<(), ProjError> {
    for (i, p) in points.iter().enumerate() {
        if let Some(j) = points[i + 1..].iter().position(|q| q == p) {
            return Err(ProjError::Degenerate(format!(
                "points {i} and {} coincide at {p}",
                i + 1 + j
            )));
        }
    }
    Ok(())
}

/// Neighbours of `v` ordered by the smallest label reachable through them.
pub(crate) fn edge_order(tree: &MarkedTree, v: usize) -> Vec<usize> {
    let mut ns: Vec<(Label, usize)> = tree
        .neighbors(v)
        .iter()
        .map(|&w| (*tree.labels_beyond(v, w).first().expect("every edge reaches a leaf"), w))
        .collect();
    ns.sort_unstable();
    ns.into_iter().map(|(_, w)| w).collect()
}

/// A stable curve with marked points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StableCurve<T> {
    tree: MarkedTree,
    configs: BTreeMap<usize, Configuration<T>>,
}

/// Curve under surgery: a graph plus a point for every (vertex, neighbour)
/// pair at vertices of valency at least four.
pub(crate) struct Work<T> {
    pub(crate) graph: Graph,
    pub(crate) points: HashMap<(usize, usize), ProjPoint<T>>,
}

impl<T: Scalar> Work<T> {
    pub(crate) fn new(graph: Graph) -> Self {
        Work {
            graph,
            points: HashMap::new(),
        }
    }

    fn erase(&mut self, label: Label) -> Result<(), ModuliError> {
        let g = &mut self.graph;
        let x = g.vertex_of(label).ok_or(ModuliError::InvalidMark(label as usize))?;
        let w = *g.adj[x].first().ok_or_else(|| {
            ModuliError::Invalid("cannot forget the only mark".into())
        })?;
        self.points.remove(&(w, x));
        g.remove_vertex(x);
        if g.leaf[w].is_none() && g.adj[w].len() == 2 {
            let (p, q) = (g.adj[w][0], g.adj[w][1]);
            g.smooth(w);
            if let Some(pt) = self.points.remove(&(p, w)) {
                self.points.insert((p, q), pt);
            }
            if let Some(pt) = self.points.remove(&(q, w)) {
                self.points.insert((q, p), pt);
            }
            self.points.retain(|&(v, _), _| v != w);
        }
        Ok(())
    }

    pub(crate) fn finish(self) -> Result<StableCurve<T>, ModuliError> {
        let (tree, map) = self.graph.canonicalize()?;
        let mut back = vec![usize::MAX; tree.vertex_count()];
        for (old, new) in map.iter().enumerate() {
            if let Some(new) = new {
                back[*new] = old;
            }
        }
        let mut configs = BTreeMap::new();
        for v in tree.internal_vertices() {
            if tree.valency(v) < 4 {
                continue;
            }
            let old_v = back[v];
            let pts = edge_order(&tree, v)
                .into_iter()
                .map(|w| {
                    self.points.get(&(old_v, back[w])).cloned().ok_or_else(|| {
                        ModuliError::Invalid(format!(
                            "vertex of valency {} lacks a point for one of its edges",
                            tree.valency(v)
                        ))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            configs.insert(v, Configuration::normalize(&pts)?);
        }
        Ok(StableCurve { tree, configs })
    }
}

impl<T: Scalar> StableCurve<T> {
    /// Assembles a curve from a tree and configurations already in canonical
    /// frame, keyed by canonical vertex id.
    pub fn new(
        tree: MarkedTree,
        configs: BTreeMap<usize, Configuration<T>>,
    ) -> Result<Self, ModuliError> {
        for v in tree.internal_vertices() {
            let k = tree.valency(v);
            match (k >= 4, configs.get(&v)) {
                (true, None) => {
                    return Err(ModuliError::Invalid(format!(
                        "vertex {v} of valency {k} needs a configuration"
                    )))
                }
                (true, Some(c)) if c.len() != k => {
                    return Err(ModuliError::Invalid(format!(
                        "vertex {v} has valency {k} but {} points",
                        c.len()
                    )))
                }
                (false, Some(_)) => {
                    return Err(ModuliError::Invalid(format!(
                        "trivalent vertex {v} carries a configuration"
                    )))
                }
                _ => {}
            }
        }
        if let Some(v) = configs.keys().find(|&&v| v >= tree.vertex_count() || !tree.is_internal(v)) {
            return Err(ModuliError::Invalid(format!("configuration on non-internal vertex {v}")));
        }
        if tree.leaf_count() < 3 {
            return Err(ModuliError::Invalid("a stable curve needs at least 3 marks".into()));
        }
        Ok(StableCurve { tree, configs })
    }

    /// A curve with no configuration data; every vertex must be trivalent.
    pub fn trivalent(tree: MarkedTree) -> Result<Self, ModuliError> {
        Self::new(tree, BTreeMap::new())
    }

    /// The smooth curve through `points`, mark `i` at `points[i]`.
    pub fn from_points(points: &[ProjPoint<T>]) -> Result<Self, ModuliError> {
        if points.len() < 3 {
            return Err(ModuliError::Invalid(format!(
                "need at least 3 points, got {}",
                points.len()
            )));
        }
        ensure_distinct(points)?;
        let tree = MarkedTree::star(0..points.len() as Label)?;
        let mut configs = BTreeMap::new();
        if points.len() >= 4 {
            let center = tree.internal_vertices().next().expect("star has a center");
            // leaves of a star are ordered by their own labels
            configs.insert(center, Configuration::normalize(points)?);
        }
        Ok(StableCurve { tree, configs })
    }

    pub fn tree(&self) -> &MarkedTree {
        &self.tree
    }

    pub fn configs(&self) -> &BTreeMap<usize, Configuration<T>> {
        &self.configs
    }

    pub fn mark_count(&self) -> usize {
        self.tree.leaf_count()
    }

    pub fn marks(&self) -> BTreeSet<Label> {
        self.tree.labels()
    }

    /// Number of irreducible components.
    pub fn component_count(&self) -> usize {
        self.tree.internal_count()
    }

    pub fn is_smooth(&self) -> bool {
        self.component_count() == 1
    }

    /// Canonical text encoding: tree, then each configuration.
    pub fn canonical_form(&self) -> String {
        let mut s = self.tree.canonical_form().to_owned();
        for (v, c) in &self.configs {
            s.push_str(&format!(
                " v{v}[{}]",
                c.points.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            ));
        }
        s
    }

    pub(crate) fn to_work(&self) -> Work<T> {
        let mut work = Work::new(self.tree.to_graph());
        for (&v, c) in &self.configs {
            for (w, p) in edge_order(&self.tree, v).into_iter().zip(&c.points) {
                work.points.insert((v, w), p.clone());
            }
        }
        work
    }

    /// Forgets the mark `label` without renaming the others, collapsing a
    /// component left with two special points.
    pub fn erase(&self, label: Label) -> Result<Self, ModuliError> {
        if !self.tree.has_label(label) {
            return Err(ModuliError::InvalidMark(label as usize));
        }
        if self.mark_count() < 4 {
            return Err(ModuliError::Invalid(
                "forgetting a mark needs at least 4 marks".into(),
            ));
        }
        let mut work = self.to_work();
        work.erase(label)?;
        work.finish()
    }

    /// Applies an injective renaming of the marks.
    pub fn relabel(&self, f: impl Fn(Label) -> Label) -> Result<Self, ModuliError> {
        let mut work = self.to_work();
        for l in work.graph.leaf.iter_mut().flatten() {
            *l = f(*l);
        }
        work.finish()
    }

    /// The forgetful map: erase mark `i` and shift higher marks down by one.
    pub fn forget(&self, i: usize) -> Result<Self, ModuliError> {
        if i >= self.mark_count() {
            return Err(ModuliError::InvalidMark(i));
        }
        let i = i as Label;
        self.erase(i)?.relabel(|l| if l > i { l - 1 } else { l })
    }

    /// The point of `M̄_{0,4} ≅ P¹` obtained by forgetting every mark outside
    /// `quad`. Smooth results give the cross-ratio of the four points in mark
    /// order; a nodal result gives `∞`, `1` or `0` according to whether the
    /// smallest mark shares a component with the second, third or fourth.
    pub fn quad_coordinate(&self, quad: [Label; 4]) -> Result<ProjPoint<T>, ModuliError> {
        let mut sorted = quad;
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(ModuliError::Invalid(format!("marks {quad:?} are not distinct")));
        }
        for &m in &sorted {
            if !self.tree.has_label(m) {
                return Err(ModuliError::InvalidMark(m as usize));
            }
        }
        let mut work = self.to_work();
        for m in self.marks() {
            if !sorted.contains(&m) {
                work.erase(m)?;
            }
        }
        let c = work.finish()?;
        c.four_point_value()
    }

    /// Value of a 4-marked curve in `P¹`, marks taken in increasing order.
    fn four_point_value(&self) -> Result<ProjPoint<T>, ModuliError> {
        let marks: Vec<Label> = self.marks().into_iter().collect();
        if marks.len() != 4 {
            return Err(ModuliError::Invalid(format!("expected 4 marks, got {}", marks.len())));
        }
        if let Some(c) = self.configs.values().next() {
            let p = c.points();
            return Ok(cross_ratio(&p[0], &p[1], &p[2], &p[3])?);
        }
        let hub = self.tree.attachment_vertex(marks[0])?;
        let partner = self
            .tree
            .neighbors(hub)
            .iter()
            .filter_map(|&w| self.tree.label_of(w))
            .find(|&l| l != marks[0])
            .ok_or_else(|| ModuliError::Invalid("malformed 4-marked curve".into()))?;
        Ok(if partner == marks[1] {
            ProjPoint::infinity()
        } else if partner == marks[2] {
            ProjPoint::one()
        } else {
            ProjPoint::zero()
        })
    }

    /// Every quad coordinate, keyed by the sorted 4-subset of marks.
    pub fn to_coordinates(&self) -> Result<BTreeMap<[Label; 4], ProjPoint<T>>, ModuliError> {
        if self.mark_count() < 4 {
            return Err(ModuliError::Invalid("coordinates need at least 4 marks".into()));
        }
        let marks: Vec<Label> = self.marks().into_iter().collect();
        let mut out = BTreeMap::new();
        for q in four_subsets(&marks) {
            out.insert(q, self.quad_coordinate(q)?);
        }
        Ok(out)
    }

    /// Whether two-face reconstruction at `alpha`, `beta` is ambiguous: the
    /// two marks sit on distinct trivalent components joined by a node.
    pub fn ambiguous_pair(&self, alpha: Label, beta: Label) -> Result<bool, ModuliError> {
        Ok(self.tree.trivalent_adjacent(alpha, beta)?)
    }
}

/// Sorted 4-subsets of `marks` in lexicographic order.
pub fn four_subsets(marks: &[Label]) -> Vec<[Label; 4]> {
    let n = marks.len();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    out.push([marks[a], marks[b], marks[c], marks[d]]);
                }
            }
        }
    }
    out
}

/// The five coordinates of a curve with marks `0..5`; slot `k - 1` holds the
/// coordinate `c_k` obtained by forgetting mark `k - 1`.
pub fn m05_vector<T: Scalar>(c: &StableCurve<T>) -> Result<[ProjPoint<T>; 5], ModuliError> {
    if c.marks() != (0..5).collect() {
        return Err(ModuliError::Invalid("expected marks 0..5".into()));
    }
    let mut out = Vec::with_capacity(5);
    for omit in 0..5 {
        let mut quad = [0; 4];
        let mut k = 0;
        for m in 0..5 {
            if m != omit {
                quad[k] = m;
                k += 1;
            }
        }
        out.push(c.quad_coordinate(quad)?);
    }
    Ok(out.try_into().expect("five entries"))
}

/// Residuals of the three defining equations of `M̄_{0,5}` in `(P¹)^5`.
pub fn m05_residuals<T: Scalar>(c: &[ProjPoint<T>; 5]) -> [T; 3] {
    let a = |k: usize| c[k - 1].a().clone();
    let b = |k: usize| c[k - 1].b().clone();
    let common = a(4) * b(5) - a(5) * b(4);
    [
        a(1) * common.clone() - b(1) * b(5) * (a(4) - b(4)),
        a(2) * common.clone() - b(2) * a(4) * b(5),
        a(3) * common - b(3) * a(4) * (b(5) - a(5)),
    ]
}

/// Whether the five coordinates satisfy all three equations exactly.
pub fn verify_m05<T: Scalar>(c: &[ProjPoint<T>; 5]) -> bool {
    m05_residuals(c).iter().all(|r| r.is_zero())
}

/// The 5-marked curve with the given coordinates.
pub fn reconstruct_m05<T: Scalar>(c: &[ProjPoint<T>; 5]) -> Result<StableCurve<T>, ModuliError> {
    if !verify_m05(c) {
        return Err(ModuliError::InvalidCoordinate(
            "the equations of M_0,5 are not satisfied".into(),
        ));
    }
    let special: Vec<Label> = (0..5).filter(|&m| c[m as usize].is_special()).collect();
    let curve = match special.len() {
        0 => {
            // chart (0, 1, ∞, x, y): c_5 = x, c_4 = y
            let pts = [
                ProjPoint::zero(),
                ProjPoint::one(),
                ProjPoint::infinity(),
                c[4].clone(),
                c[3].clone(),
            ];
            StableCurve::from_points(&pts)
                .map_err(|e| ModuliError::InvalidCoordinate(e.to_string()))?
        }
        3 => {
            // the three marks whose omission gives a nodal quadruple share
            // the 4-valent component
            let pair: Vec<Label> = (0..5).filter(|m| !special.contains(m)).collect();
            let (a, b) = (pair[0], pair[1]);
            let mut g = Graph::default();
            let u = g.add_vertex(None);
            let v = g.add_vertex(None);
            g.add_edge(u, v);
            let mut edge_to = BTreeMap::new();
            for m in 0..5 {
                let x = g.add_vertex(Some(m));
                g.add_edge(if m == a || m == b { u } else { v }, x);
                edge_to.insert(m, x);
            }
            // forgetting `a` smooths u, so b's leaf stands for the node
            let mut quad: Vec<Label> = special.clone();
            quad.push(b);
            quad.sort_unstable();
            let frame = [ProjPoint::zero(), ProjPoint::one(), ProjPoint::infinity(), c[a as usize].clone()];
            let mut work = Work::new(g);
            for (m, p) in quad.iter().zip(frame) {
                let w = if *m == b { u } else { edge_to[m] };
                work.points.insert((v, w), p);
            }
            work.finish()
                .map_err(|e| ModuliError::InvalidCoordinate(e.to_string()))?
        }
        5 => {
            let mut found = Vec::new();
            for t in enumerate(4, DEFAULT_BUDGET)? {
                if t.internal_count() == 3 {
                    let curve = StableCurve::trivalent(t)?;
                    if m05_vector(&curve)? == *c {
                        found.push(curve);
                    }
                }
            }
            match found.len() {
                1 => found.pop().unwrap(),
                k => {
                    return Err(ModuliError::InvalidCoordinate(format!(
                        "{k} three-component curves match the boundary pattern"
                    )))
                }
            }
        }
        k => {
            return Err(ModuliError::InvalidCoordinate(format!(
                "{k} entries lie in {{0, 1, inf}}; expected 0, 3 or 5"
            )))
        }
    };
    if m05_vector(&curve)? != *c {
        return Err(ModuliError::InvalidCoordinate(
            "the pattern of entries in {0, 1, inf} matches no curve".into(),
        ));
    }
    Ok(curve)
}

/// The Δ-set of moduli spaces: `M̄_{0,n}` in dimension `n - 1`, faces are the
/// forgetful maps. Not enumerable.
#[derive(Debug, Clone, Copy, Default)]
pub struct ModuliFamily<T>(std::marker::PhantomData<T>);

impl<T> ModuliFamily<T> {
    pub fn new() -> Self {
        ModuliFamily(std::marker::PhantomData)
    }
}

impl<T: Scalar> DeltaSet for ModuliFamily<T> {
    type Simplex = StableCurve<T>;
    type Key = StableCurve<T>;
    type Error = ModuliError;

    fn dimension(&self, x: &StableCurve<T>) -> usize {
        x.mark_count() - 1
    }

    fn face(&self, x: &StableCurve<T>, i: usize) -> Result<StableCurve<T>, ModuliError> {
        x.forget(i)
    }

    fn key(&self, x: &StableCurve<T>) -> StableCurve<T> {
        x.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::{check_identity, fill_oracle, FillTuple};
    use crate::tree::parse_newick;
    use num_bigint::BigInt;

    type P = ProjPoint<BigInt>;
    type Curve = StableCurve<BigInt>;

    fn p(s: &str) -> P {
        s.parse().unwrap()
    }

    fn pts(s: &str) -> Vec<P> {
        crate::proj::parse_point_list(s).unwrap()
    }

    #[test]
    fn three_points_make_the_point_curve() {
        let c = Curve::from_points(&pts("0,1,inf")).unwrap();
        assert!(c.configs().is_empty());
        assert_eq!(c.tree(), &MarkedTree::star(0..3).unwrap());
        assert_eq!(c, Curve::from_points(&pts("5,7/2,-1")).unwrap());
    }

    #[test]
    fn from_points_is_mobius_invariant() {
        let a = Curve::from_points(&pts("0,1,inf,2,3")).unwrap();
        let m = Mobius::new(BigInt::from(2), BigInt::from(1), BigInt::from(-1), BigInt::from(3)).unwrap();
        let moved: Vec<P> = pts("0,1,inf,2,3").iter().map(|z| m.apply(z)).collect();
        assert_eq!(a, Curve::from_points(&moved).unwrap());
        assert_ne!(a, Curve::from_points(&pts("0,1,inf,2,4")).unwrap());
    }

    #[test]
    fn from_points_rejects_coincidences() {
        let e = Curve::from_points(&pts("0,1,inf,2,2")).unwrap_err();
        assert!(matches!(e, ModuliError::Proj(ProjError::Degenerate(_))));
        assert!(Curve::from_points(&pts("0,1")).is_err());
    }

    #[test]
    fn forgetting_to_three_marks() {
        let c = Curve::from_points(&pts("0,1,inf,7")).unwrap();
        let f = c.forget(3).unwrap();
        assert_eq!(f, Curve::from_points(&pts("0,1,inf")).unwrap());
        assert!(f.forget(0).is_err());
    }

    #[test]
    fn forgetting_collapses_two_pointed_component() {
        // {0,1} on one line, {2,3,4} on the other
        let tree = parse_newick("((2,3,4),1)0;").unwrap();
        let v = tree.attachment_vertex(2).unwrap();
        let mut configs = BTreeMap::new();
        configs.insert(v, Configuration::from_frame(pts("0,1,inf,5")).unwrap());
        let c = Curve::new(tree, configs).unwrap();
        let f = c.forget(0).unwrap();
        assert!(f.is_smooth());
        assert_eq!(f.mark_count(), 4);
        // node edge (reaching mark 0) becomes mark 0 (old 1): same frame
        assert_eq!(f.quad_coordinate([0, 1, 2, 3]).unwrap(), p("5"));
    }

    #[test]
    fn forget_invalid_mark() {
        let c = Curve::from_points(&pts("0,1,inf,2")).unwrap();
        assert_eq!(c.forget(4), Err(ModuliError::InvalidMark(4)));
    }

    #[test]
    fn chart_coordinates() {
        // (0, 1, ∞, x, y) ↦ ((y-1)/(y-x), y/(y-x), y(1-x)/(y-x), y, x)
        let c = Curve::from_points(&pts("0,1,inf,2,3")).unwrap();
        let v = m05_vector(&c).unwrap();
        assert_eq!(v.to_vec(), pts("2,3,-3,3,2"));
        assert_eq!(c.quad_coordinate([1, 2, 3, 4]).unwrap(), p("2"));
        assert!(verify_m05(&v));
    }

    #[test]
    fn chart_formula_on_several_points() {
        for (x, y) in [(2i64, 3i64), (-1, 5), (7, -2), (4, 9)] {
            let c = Curve::from_points(&[P::zero(), P::one(), P::infinity(), P::from_int(x), P::from_int(y)])
                .unwrap();
            let r = |num: i64, den: i64| P::new(num.into(), den.into()).unwrap();
            let want = [
                r(y - 1, y - x),
                r(y, y - x),
                r(y * (1 - x), y - x),
                P::from_int(y),
                P::from_int(x),
            ];
            assert_eq!(m05_vector(&c).unwrap(), want);
        }
    }

    #[test]
    fn perturbed_vector_fails() {
        let v: [P; 5] = pts("2,3,-3,3,5").try_into().unwrap();
        assert!(!verify_m05(&v));
        assert!(matches!(reconstruct_m05(&v), Err(ModuliError::InvalidCoordinate(_))));
    }

    #[test]
    fn boundary_pairing_values() {
        // nodal 4-marked curves: {0,1}|{2,3} ↦ ∞, {0,2}|{1,3} ↦ 1, {0,3}|{1,2} ↦ 0
        for (newick, want) in [("((2,3),1)0;", "inf"), ("((1,3),2)0;", "1"), ("((1,2),3)0;", "0")] {
            let c = Curve::trivalent(parse_newick(newick).unwrap()).unwrap();
            assert_eq!(c.quad_coordinate([0, 1, 2, 3]).unwrap(), p(want), "{newick}");
        }
    }

    #[test]
    fn boundary_values_are_degeneration_limits() {
        // (0, ε, 1, 1+δ): marks 0,1 collide and marks 2,3 collide; the
        // cross-ratio tends to ∞. Likewise for the other pairings.
        let cr = |z: [P; 4]| cross_ratio(&z[0], &z[1], &z[2], &z[3]).unwrap();
        let small = |k: i64| P::new(1.into(), BigInt::from(10).pow(k as u32)).unwrap();
        let shift = |k: i64, by: i64| {
            P::new(BigInt::from(10).pow(k as u32) * by + 1, BigInt::from(10).pow(k as u32)).unwrap()
        };
        for k in [3i64, 6, 9] {
            let v12 = cr([P::zero(), small(k), P::one(), shift(k, 1)]);
            let v13 = cr([P::zero(), P::one(), small(k), shift(k, 1)]);
            let v14 = cr([P::zero(), P::one(), shift(k, 1), small(k)]);
            let big = |z: &P| z.to_ratio().is_none_or(|r| num_traits::Signed::abs(&r) > num_rational::Ratio::from_integer(BigInt::from(10).pow((k / 2) as u32)));
            assert!(big(&v12), "{v12}");
            let near = |z: &P, target: i64| {
                let d = z.to_ratio().unwrap() - num_rational::Ratio::from_integer(BigInt::from(target));
                num_traits::Signed::abs(&d) < num_rational::Ratio::new(BigInt::from(1), BigInt::from(10).pow((k / 2) as u32))
            };
            assert!(near(&v13, 1), "{v13}");
            assert!(near(&v14, 0), "{v14}");
        }
    }

    #[test]
    fn quad_coordinate_independent_of_order() {
        let tree = parse_newick("((3,4,5),1,2)0;").unwrap();
        let mut configs = BTreeMap::new();
        for v in tree.internal_vertices() {
            configs.insert(v, Configuration::from_frame(pts("0,1,inf,-2")).unwrap());
        }
        let c = Curve::new(tree, configs).unwrap();
        let quad = [0, 2, 3, 5];
        let want = c.quad_coordinate(quad).unwrap();
        for order in [[1, 4], [4, 1]] {
            let mut d = c.clone();
            for m in order {
                d = d.erase(m).unwrap();
            }
            assert_eq!(d.four_point_value().unwrap(), want);
        }
    }

    #[test]
    fn caterpillar_coordinates_are_all_special() {
        let c = Curve::trivalent(parse_newick("(((3,4),2),1)0;").unwrap()).unwrap();
        let v = m05_vector(&c).unwrap();
        assert!(v.iter().all(|x| x.is_special()));
        assert!(verify_m05(&v));
        assert_eq!(reconstruct_m05(&v).unwrap(), c);
    }

    #[test]
    fn reconstruct_chart_point() {
        let v: [P; 5] = pts("2,3,-3,3,2").try_into().unwrap();
        assert_eq!(reconstruct_m05(&v).unwrap(), Curve::from_points(&pts("0,1,inf,2,3")).unwrap());
    }

    #[test]
    fn reconstruct_rejects_bad_patterns() {
        // one special entry and the equations fail anyway
        let v: [P; 5] = pts("0,3,-3,3,2").try_into().unwrap();
        assert!(reconstruct_m05(&v).is_err());
    }

    #[test]
    fn roundtrip_every_stratum_of_m05() {
        let decorations = ["-1", "2", "1/2", "-7/3"];
        for (k, t) in enumerate(4, DEFAULT_BUDGET).unwrap().into_iter().enumerate() {
            let mut configs = BTreeMap::new();
            for v in t.internal_vertices() {
                let extra = t.valency(v) - 3;
                let mut points = pts("0,1,inf");
                for j in 0..extra {
                    points.push(p(decorations[(k + j) % decorations.len()]));
                }
                if extra > 0 {
                    configs.insert(v, Configuration::from_frame(points).unwrap());
                }
            }
            let c = Curve::new(t, configs).unwrap();
            let v = m05_vector(&c).unwrap();
            assert!(verify_m05(&v), "{}", c.canonical_form());
            let specials = v.iter().filter(|x| x.is_special()).count();
            assert_eq!(specials, match c.component_count() { 1 => 0, 2 => 3, _ => 5 });
            assert_eq!(reconstruct_m05(&v).unwrap(), c);
        }
    }

    #[test]
    fn simplicial_identities_on_a_curve() {
        let fam = ModuliFamily::<BigInt>::new();
        let c = Curve::from_points(&pts("0,1,inf,2,3,-5")).unwrap();
        for j in 1..6 {
            for i in 0..j {
                assert!(check_identity(&fam, &c, i, j).unwrap());
            }
        }
    }

    #[test]
    fn moduli_oracle_is_unsupported() {
        let fam = ModuliFamily::<BigInt>::new();
        let c = Curve::from_points(&pts("0,1,inf,2,3,-5")).unwrap();
        let tuple = FillTuple::new(&fam, fam.faces(&c).unwrap()).unwrap();
        assert!(matches!(fill_oracle(&fam, &tuple), Err(ModuliError::Invalid(_))));
    }

    #[test]
    fn new_validates_decorations() {
        let tree = parse_newick("((3,4),1,2)0;").unwrap();
        assert!(Curve::trivalent(tree.clone()).is_err());
        let v = tree.attachment_vertex(0).unwrap();
        let w = tree.attachment_vertex(3).unwrap();
        let mut configs = BTreeMap::new();
        configs.insert(v, Configuration::from_frame(pts("0,1,inf,4")).unwrap());
        assert!(Curve::new(tree.clone(), configs.clone()).is_ok());
        configs.insert(w, Configuration::from_frame(pts("0,1,inf,4")).unwrap());
        assert!(Curve::new(tree, configs).is_err());
        assert!(Configuration::<BigInt>::from_frame(pts("1,0,inf,4")).is_err());
        assert!(Configuration::<BigInt>::from_frame(pts("0,1,inf,1")).is_err());
    }
}
