//! Reconstruction of a tree from its faces.

use std::collections::{BTreeMap, BTreeSet};

use super::{Label, MarkedTree, TreeError};
use crate::delta::FillTuple;

/// All trees `y` with `erase(y, alpha) == x_alpha` and `erase(y, beta) ==
/// x_beta`, sorted. `x_alpha` lacks `alpha` and `x_beta` lacks `beta`.
pub fn reconstruct_pair(
    x_alpha: &MarkedTree,
    x_beta: &MarkedTree,
    alpha: Label,
    beta: Label,
) -> Result<Vec<MarkedTree>, TreeError> {
    if alpha == beta {
        return Err(TreeError::Invalid("reconstruction needs two distinct labels".into()));
    }
    if x_alpha.has_label(alpha) {
        return Err(TreeError::DuplicateLabel(alpha));
    }
    if x_beta.has_label(beta) {
        return Err(TreeError::DuplicateLabel(beta));
    }
    // with one leaf left on each side there is no common face to compare
    if x_alpha.leaf_count() > 1 || x_beta.leaf_count() > 1 {
        let core_a = x_alpha.erase(beta)?;
        let core_b = x_beta.erase(alpha)?;
        if core_a != core_b {
            return Err(TreeError::Inconsistent(format!("{core_a} vs {core_b}")));
        }
    } else if !x_alpha.has_label(beta) || !x_beta.has_label(alpha) {
        return Err(TreeError::MissingLabel(if x_alpha.has_label(beta) { alpha } else { beta }));
    }
    let found: BTreeSet<MarkedTree> = x_alpha
        .attach_sites()
        .into_iter()
        .map(|site| x_alpha.attach(site, alpha))
        .filter_map(|y| match y {
            Ok(y) => match y.erase(beta) {
                Ok(f) if f == *x_beta => Some(Ok(y)),
                Ok(_) => None,
                Err(e) => Some(Err(e)),
            },
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_, _>>()?;
    Ok(found.into_iter().collect())
}

/// Which branch of the filling argument produced the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FillCase {
    /// Two labels non-adjacent in every other face; rebuilt from their faces.
    NonAdjacentPair(Label, Label),
    /// Every face has a single internal vertex.
    Star,
    /// Faces have at most two internal vertices.
    TwoVertex,
    /// Scan over the attach sites of one face (used in dimension 5).
    Search,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fill {
    pub tree: MarkedTree,
    pub case: FillCase,
}

/// Converts a numeric tuple `(x_0, ..., x_n)` into faces keyed by the erased
/// label: entry `i` is relabelled so that its leaves are `{0..=n} \ {i}`.
pub fn numeric_to_labelled(
    entries: &[MarkedTree],
) -> Result<BTreeMap<Label, MarkedTree>, TreeError> {
    entries
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let i = i as Label;
            Ok((i, x.relabel(|l| if l < i { l } else { l + 1 })?))
        })
        .collect()
}

fn check_shape(faces: &BTreeMap<Label, MarkedTree>) -> Result<(), TreeError> {
    let all: BTreeSet<Label> = faces.keys().copied().collect();
    for (&mu, x) in faces {
        let mut expected = all.clone();
        expected.remove(&mu);
        if x.labels() != expected {
            return Err(TreeError::Incompatible(format!(
                "face {mu} has labels {:?}, expected {:?}",
                x.labels(),
                expected
            )));
        }
    }
    Ok(())
}

/// `erase(x_beta, alpha) == erase(x_alpha, beta)` for all distinct labels.
pub fn is_compatible_labelled(faces: &BTreeMap<Label, MarkedTree>) -> Result<bool, TreeError> {
    check_shape(faces)?;
    let keys: Vec<Label> = faces.keys().copied().collect();
    for (k, &a) in keys.iter().enumerate() {
        for &b in &keys[k + 1..] {
            if faces[&b].erase(a)? != faces[&a].erase(b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn has_faces(y: &MarkedTree, faces: &BTreeMap<Label, MarkedTree>) -> Result<bool, TreeError> {
    for (&mu, x) in faces {
        if y.erase(mu)? != *x {
            return Ok(false);
        }
    }
    Ok(true)
}

fn resolve(
    candidates: impl IntoIterator<Item = MarkedTree>,
    faces: &BTreeMap<Label, MarkedTree>,
    case: FillCase,
) -> Result<Fill, TreeError> {
    let mut found = BTreeSet::new();
    for y in candidates {
        if has_faces(&y, faces)? {
            found.insert(y);
        }
    }
    match found.len() {
        0 => Err(TreeError::NoFill),
        1 => Ok(Fill {
            tree: found.pop_first().unwrap(),
            case,
        }),
        k => Err(TreeError::MultipleFills(k)),
    }
}

/// Fills faces keyed by label (see [`fill_labelled_with`]) using tree
/// adjacency.
pub fn fill_labelled(faces: &BTreeMap<Label, MarkedTree>) -> Result<Fill, TreeError> {
    fill_labelled_with(faces, |t, a, b| t.adjacent(a, b))
}

/// The unique tree whose faces are `faces` (face `mu` lacks label `mu`).
///
/// `adjacent` decides which label pairs are usable for two-face
/// reconstruction; every candidate is checked against all faces, so a weaker
/// predicate only changes which branch is taken.
pub fn fill_labelled_with<F>(
    faces: &BTreeMap<Label, MarkedTree>,
    adjacent: F,
) -> Result<Fill, TreeError>
where
    F: Fn(&MarkedTree, Label, Label) -> Result<bool, TreeError>,
{
    let n = faces.len().saturating_sub(1);
    if n < 5 {
        return Err(TreeError::DimensionTooSmall(n));
    }
    if !is_compatible_labelled(faces)? {
        return Err(TreeError::Incompatible(
            "some pair of faces disagrees on their common face".into(),
        ));
    }
    let labels: Vec<Label> = faces.keys().copied().collect();

    for (k, &a) in labels.iter().enumerate() {
        for &b in &labels[k + 1..] {
            let mut separated = true;
            for (&mu, x) in faces {
                if mu != a && mu != b && adjacent(x, a, b)? {
                    separated = false;
                    break;
                }
            }
            if separated {
                let candidates = reconstruct_pair(&faces[&a], &faces[&b], a, b)?;
                return resolve(candidates, faces, FillCase::NonAdjacentPair(a, b));
            }
        }
    }

    let max_internal = faces.values().map(|x| x.internal_count()).max().unwrap_or(0);
    if max_internal <= 1 {
        let star = MarkedTree::star(labels.iter().copied())?;
        return resolve([star], faces, FillCase::Star);
    }
    if max_internal == 2 {
        let (&mu, x) = faces
            .iter()
            .find(|(_, x)| x.internal_count() == 2)
            .expect("some face has two internal vertices");
        let hubs: Vec<usize> = x.internal_vertices().collect();
        let side = |hub: usize| -> BTreeSet<Label> {
            x.neighbors(hub).iter().filter_map(|&w| x.label_of(w)).collect()
        };
        let (p, q) = (side(hubs[0]), side(hubs[1]));
        let mut p_mu = p.clone();
        p_mu.insert(mu);
        let mut q_mu = q.clone();
        q_mu.insert(mu);
        let candidates = [
            MarkedTree::two_vertex(&p_mu, &q)?,
            MarkedTree::two_vertex(&p, &q_mu)?,
        ];
        return resolve(candidates, faces, FillCase::TwoVertex);
    }

    // Every y with face mu equal to x_mu is x_mu with mu attached somewhere.
    let (&mu, x) = faces.iter().next().expect("non-empty tuple");
    let candidates = x
        .attach_sites()
        .into_iter()
        .map(|site| x.attach(site, mu))
        .collect::<Result<Vec<_>, _>>()?;
    resolve(candidates, faces, FillCase::Search)
}

/// The unique `y` in `T_n` with `face(y, i) == x_i` for all `i`; `n >= 5`.
pub fn fill(tuple: &FillTuple<MarkedTree>) -> Result<MarkedTree, TreeError> {
    if tuple.dim() < 5 {
        return Err(TreeError::DimensionTooSmall(tuple.dim()));
    }
    let faces = numeric_to_labelled(tuple.entries())?;
    Ok(fill_labelled(&faces)?.tree)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::FillTuple;
    use crate::tree::{enumerate, parse_newick, TreeFamily, DEFAULT_BUDGET};

    fn tuple_of(y: &MarkedTree) -> FillTuple<MarkedTree> {
        FillTuple::new(&TreeFamily::default(), y.faces().unwrap()).unwrap()
    }

    #[test]
    fn numeric_relabelling() {
        let y = parse_newick("((2,3,4),1,5)0;").unwrap();
        let faces = numeric_to_labelled(&y.faces().unwrap()).unwrap();
        for (mu, x) in &faces {
            assert_eq!(*x, y.erase(*mu).unwrap());
        }
    }

    #[test]
    fn pair_reconstruction_from_single_leaves() {
        let y = MarkedTree::star([0, 1]).unwrap();
        let got = reconstruct_pair(&y.erase(0).unwrap(), &y.erase(1).unwrap(), 0, 1).unwrap();
        assert_eq!(got, vec![y]);
        let lone = MarkedTree::star([5]).unwrap();
        assert!(reconstruct_pair(&lone, &lone, 0, 1).is_err());
    }

    #[test]
    fn pair_reconstruction_of_non_adjacent_leaves() {
        let y = parse_newick("(((3,4),2),1)0;").unwrap();
        assert!(!y.adjacent(0, 3).unwrap());
        let got = reconstruct_pair(&y.erase(0).unwrap(), &y.erase(3).unwrap(), 0, 3).unwrap();
        assert_eq!(got, vec![y]);
    }

    #[test]
    fn pair_reconstruction_in_a_star_is_ambiguous() {
        let star = MarkedTree::star(0..5).unwrap();
        let xa = star.erase(0).unwrap();
        let xb = star.erase(1).unwrap();
        let got = reconstruct_pair(&xa, &xb, 0, 1).unwrap();
        let cherry = parse_newick("((2,3,4),1)0;").unwrap();
        assert!(got.len() >= 2);
        assert!(got.contains(&star));
        assert!(got.contains(&cherry));
        for y in &got {
            assert_eq!(y.erase(0).unwrap(), xa);
            assert_eq!(y.erase(1).unwrap(), xb);
        }
    }

    #[test]
    fn pair_reconstruction_rejects_disagreeing_cores() {
        let xa = MarkedTree::star([1, 2, 3, 4, 5]).unwrap();
        let xb = parse_newick("((4,5),2,3)0;").unwrap();
        assert!(matches!(
            reconstruct_pair(&xa, &xb, 0, 1),
            Err(TreeError::Inconsistent(_))
        ));
    }

    #[test]
    fn pair_ambiguity_matches_adjacency_in_t4() {
        for t in enumerate(4, DEFAULT_BUDGET).unwrap() {
            for a in 0..5 {
                for b in (a + 1)..5 {
                    let got = reconstruct_pair(&t.erase(a).unwrap(), &t.erase(b).unwrap(), a, b)
                        .unwrap();
                    assert!(got.contains(&t));
                    if t.adjacent(a, b).unwrap() {
                        assert!(got.len() >= 2, "{t} {a} {b}");
                    } else {
                        assert_eq!(got, vec![t.clone()]);
                    }
                }
            }
        }
    }

    #[test]
    fn fill_star() {
        let star = MarkedTree::star(0..6).unwrap();
        assert_eq!(fill(&tuple_of(&star)).unwrap(), star);
        let faces = numeric_to_labelled(star.faces().as_ref().unwrap()).unwrap();
        assert_eq!(fill_labelled(&faces).unwrap().case, FillCase::Star);
    }

    #[test]
    fn fill_two_vertex() {
        let y = parse_newick("((3,4,5),1,2)0;").unwrap();
        assert_eq!(fill(&tuple_of(&y)).unwrap(), y);
        // a 2|4 split leaves every pair adjacent in some face
        let y = parse_newick("((2,3,4,5),1)0;").unwrap();
        assert_eq!(fill(&tuple_of(&y)).unwrap(), y);
        let faces = numeric_to_labelled(&y.faces().unwrap()).unwrap();
        assert_eq!(fill_labelled(&faces).unwrap().case, FillCase::TwoVertex);
    }

    #[test]
    fn fill_refuses_low_dimension() {
        let y = MarkedTree::star(0..5).unwrap();
        assert_eq!(fill(&tuple_of(&y)), Err(TreeError::DimensionTooSmall(4)));
    }

    #[test]
    fn fill_rejects_incompatible() {
        let y = MarkedTree::star(0..6).unwrap();
        let mut entries = y.faces().unwrap();
        entries[0] = parse_newick("((3,4),1,2)0;").unwrap();
        let tuple = FillTuple::new(&TreeFamily::default(), entries).unwrap();
        assert!(matches!(fill(&tuple), Err(TreeError::Incompatible(_))));
    }

    #[test]
    fn fill_roundtrip_all_of_t5() {
        for y in enumerate(5, DEFAULT_BUDGET).unwrap() {
            assert_eq!(fill(&tuple_of(&y)).unwrap(), y);
        }
    }
}
