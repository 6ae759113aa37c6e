//! Reconstruction of a curve from its forgetful images.

use std::collections::{BTreeMap, BTreeSet};

use super::{edge_order, Configuration, ModuliError, StableCurve, Work};
use crate::delta::FillTuple;
use crate::proj::{Mobius, ProjPoint};
use crate::scalar::Scalar;
use crate::tree::{fill_labelled_with, Label, MarkedTree, TreeError};

/// The unique curve with `forget(y, i) == x_i` for all `i`; needs at least
/// six marks on `y`.
pub fn fill_moduli<T: Scalar>(
    tuple: &FillTuple<StableCurve<T>>,
) -> Result<StableCurve<T>, ModuliError> {
    let entries = tuple.entries();
    let mut faces = BTreeMap::new();
    for (i, x) in entries.iter().enumerate() {
        let i = i as Label;
        faces.insert(i, x.relabel(|l| if l < i { l } else { l + 1 })?);
    }
    fill_moduli_labelled(&faces)
}

/// Like [`fill_moduli`], with face `mu` carrying every mark except `mu`.
pub fn fill_moduli_labelled<T: Scalar>(
    faces: &BTreeMap<Label, StableCurve<T>>,
) -> Result<StableCurve<T>, ModuliError> {
    let marks = faces.len();
    if marks < 6 {
        return Err(ModuliError::DimensionTooSmall(marks));
    }
    let all: BTreeSet<Label> = faces.keys().copied().collect();
    for (&mu, x) in faces {
        let mut want = all.clone();
        want.remove(&mu);
        if x.marks() != want {
            return Err(ModuliError::Tree(TreeError::Incompatible(format!(
                "face {mu} has marks {:?}",
                x.marks()
            ))));
        }
    }
    let keys: Vec<Label> = all.iter().copied().collect();
    for (k, &a) in keys.iter().enumerate() {
        for &b in &keys[k + 1..] {
            if faces[&b].erase(a)? != faces[&a].erase(b)? {
                return Err(ModuliError::Tree(TreeError::Incompatible(format!(
                    "faces {a} and {b} disagree on their common face"
                ))));
            }
        }
    }

    let tree_faces: BTreeMap<Label, MarkedTree> =
        faces.iter().map(|(&mu, x)| (mu, x.tree().clone())).collect();
    let y = fill_labelled_with(&tree_faces, |t, a, b| t.trivalent_adjacent(a, b))?.tree;

    let mut work = Work::new(y.to_graph());
    for v in y.internal_vertices() {
        if y.valency(v) < 4 {
            continue;
        }
        for (w, p) in edge_order(&y, v).into_iter().zip(vertex_points(&y, v, faces)?) {
            work.points.insert((v, w), p);
        }
    }
    let curve = work.finish()?;
    for (&mu, x) in faces {
        if curve.erase(mu)? != *x {
            return Err(ModuliError::Inconsistent(format!(
                "the assembled curve does not forget to face {mu}"
            )));
        }
    }
    Ok(curve)
}

/// Points at vertex `v` of `y`, in the edge order of `v`, read off the faces
/// in which the component survives with at least four special points.
fn vertex_points<T: Scalar>(
    y: &MarkedTree,
    v: usize,
    faces: &BTreeMap<Label, StableCurve<T>>,
) -> Result<Vec<ProjPoint<T>>, ModuliError> {
    let order = edge_order(y, v);
    let k = order.len();
    let dirs: Vec<BTreeSet<Label>> = order.iter().map(|&w| y.labels_beyond(v, w)).collect();

    // partial configurations indexed by edge position
    let mut partials: Vec<BTreeMap<usize, ProjPoint<T>>> = Vec::new();
    for (&mu, x) in faces {
        let image: Vec<Option<BTreeSet<Label>>> = dirs
            .iter()
            .map(|d| {
                let mut d = d.clone();
                d.remove(&mu);
                (!d.is_empty()).then_some(d)
            })
            .collect();
        let surviving = image.iter().flatten().count();
        if surviving < 4 {
            continue;
        }
        let xt = x.tree();
        let wanted: BTreeSet<&BTreeSet<Label>> = image.iter().flatten().collect();
        let u = xt
            .internal_vertices()
            .find(|&u| {
                xt.valency(u) == surviving
                    && xt.neighbors(u).iter().all(|&w| wanted.contains(&xt.labels_beyond(u, w)))
            })
            .ok_or_else(|| {
                ModuliError::Inconsistent(format!("face {mu} lacks the expected component"))
            })?;
        let config = x.configs().get(&u).ok_or_else(|| {
            ModuliError::Inconsistent(format!("face {mu} has no configuration on a component"))
        })?;
        let mut partial = BTreeMap::new();
        for (w, p) in edge_order(xt, u).into_iter().zip(config.points()) {
            let d = xt.labels_beyond(u, w);
            let pos = image.iter().position(|i| i.as_ref() == Some(&d)).expect("matched above");
            partial.insert(pos, p.clone());
        }
        partials.push(partial);
    }

    let merged = match partials.iter().find(|p| p.len() == k) {
        Some(full) => full.clone(),
        None => {
            let (first, second) = match partials.as_slice() {
                [a, b, ..] => (a, b),
                _ => {
                    return Err(ModuliError::Inconsistent(
                        "too few faces see a component".into(),
                    ))
                }
            };
            let common: Vec<usize> =
                first.keys().filter(|e| second.contains_key(e)).copied().take(3).collect();
            if common.len() < 3 {
                return Err(ModuliError::Inconsistent(
                    "partial configurations share fewer than three points".into(),
                ));
            }
            let mut merged = frame_on(first, &common)?;
            for (e, p) in frame_on(second, &common)? {
                merged.entry(e).or_insert(p);
            }
            merged
        }
    };
    if merged.len() != k {
        return Err(ModuliError::Inconsistent("a component has unseen edges".into()));
    }
    for partial in &partials {
        let basis: Vec<usize> = partial.keys().copied().take(3).collect();
        let restricted: BTreeMap<usize, ProjPoint<T>> =
            partial.keys().map(|e| (*e, merged[e].clone())).collect();
        if frame_on(partial, &basis)? != frame_on(&restricted, &basis)? {
            return Err(ModuliError::Inconsistent(
                "faces disagree on the points of a component".into(),
            ));
        }
    }
    let points: Vec<ProjPoint<T>> = merged.into_values().collect();
    Ok(Configuration::normalize(&points)?.points().to_vec())
}

/// `points` moved by the transformation sending the three basis entries to
/// `0, 1, ∞`.
fn frame_on<T: Scalar>(
    points: &BTreeMap<usize, ProjPoint<T>>,
    basis: &[usize],
) -> Result<BTreeMap<usize, ProjPoint<T>>, ModuliError> {
    let m = Mobius::from_triple(&points[&basis[0]], &points[&basis[1]], &points[&basis[2]])?;
    Ok(points.iter().map(|(&e, p)| (e, m.apply(p))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::delta::DeltaSet;
    use crate::moduli::ModuliFamily;
    use crate::proj::parse_point_list;
    use crate::tree::parse_newick;
    use num_bigint::BigInt;

    type Curve = StableCurve<BigInt>;

    fn tuple(y: &Curve) -> FillTuple<Curve> {
        let fam = ModuliFamily::new();
        FillTuple::new(&fam, fam.faces(y).unwrap()).unwrap()
    }

    fn decorated(newick: &str, extra: &[&str]) -> Curve {
        let t = parse_newick(newick).unwrap();
        let mut configs = BTreeMap::new();
        let mut it = extra.iter();
        for v in t.internal_vertices() {
            let k = t.valency(v);
            if k >= 4 {
                let mut pts = parse_point_list("0,1,inf").unwrap();
                for _ in 3..k {
                    pts.push(it.next().unwrap().parse().unwrap());
                }
                configs.insert(v, Configuration::from_frame(pts).unwrap());
            }
        }
        Curve::new(t, configs).unwrap()
    }

    #[test]
    fn smooth_curve_with_six_marks() {
        let y = Curve::from_points(&parse_point_list("0,1,inf,2,-3,1/2").unwrap()).unwrap();
        assert_eq!(fill_moduli(&tuple(&y)).unwrap(), y);
    }

    #[test]
    fn nodal_curves() {
        for (newick, extra) in [
            ("((3,4,5),1,2)0;", &["2", "-1"][..]),
            ("((2,3,4,5),1)0;", &["-2", "1/3"][..]),
            ("(((4,5),3),1,2)0;", &["7"][..]),
            ("((((4,5),3),2),1)0;", &[][..]),
            ("((3,4,5,6),1,2)0;", &["5", "-1/2", "4"][..]),
        ] {
            let y = decorated(newick, extra);
            assert_eq!(fill_moduli(&tuple(&y)).unwrap(), y, "{newick}");
        }
    }

    #[test]
    fn too_few_marks() {
        let y = Curve::from_points(&parse_point_list("0,1,inf,2,3").unwrap()).unwrap();
        assert_eq!(fill_moduli(&tuple(&y)), Err(ModuliError::DimensionTooSmall(5)));
    }

    #[test]
    fn perturbed_face_is_rejected() {
        let y = Curve::from_points(&parse_point_list("0,1,inf,2,-3,1/2").unwrap()).unwrap();
        let mut entries = tuple(&y).into_entries();
        entries[2] = Curve::from_points(&parse_point_list("0,1,inf,2,5").unwrap()).unwrap();
        let t = FillTuple::new(&ModuliFamily::new(), entries).unwrap();
        assert!(fill_moduli(&t).is_err());
    }
}
