//! Δ-sets: graded families with face maps `∂_i : X_n → X_{n-1}` satisfying
//! `∂_i ∂_j = ∂_{j-1} ∂_i` for `i < j`.
//!
//! Simplices are compared only through [`DeltaSet::key`], the family's
//! canonical form. Face indices are 0-based.

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum DeltaError {
    #[error("face index {index} out of range for a simplex of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("identity check needs i < j, got i = {i}, j = {j}")]
    IndexOrder { i: usize, j: usize },
    #[error("malformed fill tuple: {0}")]
    MalformedTuple(String),
    #[error("this family cannot enumerate its simplices")]
    Unsupported,
}

/// A family of simplices with face maps.
pub trait DeltaSet {
    type Simplex: Clone;
    /// Canonical form; two simplices are equal iff their keys are equal.
    type Key: Ord + Clone;
    type Error: From<DeltaError>;

    fn dimension(&self, x: &Self::Simplex) -> usize;

    fn face(&self, x: &Self::Simplex, i: usize) -> Result<Self::Simplex, Self::Error>;

    fn key(&self, x: &Self::Simplex) -> Self::Key;

    /// All simplices of dimension `n`, if the family is finite and enumerable.
    fn enumerate(&self, _n: usize) -> Result<Vec<Self::Simplex>, Self::Error> {
        Err(DeltaError::Unsupported.into())
    }

    fn faces(&self, x: &Self::Simplex) -> Result<Vec<Self::Simplex>, Self::Error> {
        let n = self.dimension(x);
        (0..=n).map(|i| self.face(x, i)).collect()
    }
}

/// An indexed family `(x_0, ..., x_n)` of `(n-1)`-simplices, the input of a
/// filling problem in dimension `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FillTuple<S> {
    dim: usize,
    entries: Vec<S>,
}

impl<S: Clone> FillTuple<S> {
    pub fn new<D>(family: &D, entries: Vec<S>) -> Result<Self, DeltaError>
    where
        D: DeltaSet<Simplex = S>,
    {
        if entries.len() < 2 {
            return Err(DeltaError::MalformedTuple(format!(
                "a filling problem needs at least 2 entries, got {}",
                entries.len()
            )));
        }
        let dim = entries.len() - 1;
        for (k, x) in entries.iter().enumerate() {
            let d = family.dimension(x);
            if d + 1 != dim {
                return Err(DeltaError::MalformedTuple(format!(
                    "entry {k} has dimension {d}, expected {}",
                    dim - 1
                )));
            }
        }
        Ok(FillTuple { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<S> {
        self.entries
    }
}

/// Whether `∂_i ∂_j x = ∂_{j-1} ∂_i x`.
pub fn check_identity<D: DeltaSet>(
    family: &D,
    x: &D::Simplex,
    i: usize,
    j: usize,
) -> Result<bool, D::Error> {
    let n = family.dimension(x);
    if i >= j {
        return Err(DeltaError::IndexOrder { i, j }.into());
    }
    if j > n {
        return Err(DeltaError::IndexOutOfRange { index: j, dim: n }.into());
    }
    let lhs = family.face(&family.face(x, j)?, i)?;
    let rhs = family.face(&family.face(x, i)?, j - 1)?;
    Ok(family.key(&lhs) == family.key(&rhs))
}

/// Every identity violation `(i, j)` on `x`.
pub fn identity_violations<D: DeltaSet>(
    family: &D,
    x: &D::Simplex,
) -> Result<Vec<(usize, usize)>, D::Error> {
    let n = family.dimension(x);
    let mut out = Vec::new();
    for j in 1..=n {
        for i in 0..j {
            if !check_identity(family, x, i, j)? {
                out.push((i, j));
            }
        }
    }
    Ok(out)
}

/// Whether `∂_i x_j = ∂_{j-1} x_i` for all `i < j`.
pub fn is_compatible<D: DeltaSet>(
    family: &D,
    tuple: &FillTuple<D::Simplex>,
) -> Result<bool, D::Error> {
    let xs = tuple.entries();
    for j in 1..xs.len() {
        for i in 0..j {
            let lhs = family.face(&xs[j], i)?;
            let rhs = family.face(&xs[i], j - 1)?;
            if family.key(&lhs) != family.key(&rhs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Every `y` of dimension `n` whose faces are the tuple, found by scanning
/// the whole enumeration. Sorted by key, without duplicates.
pub fn fill_oracle<D: DeltaSet>(
    family: &D,
    tuple: &FillTuple<D::Simplex>,
) -> Result<Vec<D::Simplex>, D::Error> {
    let targets: Vec<D::Key> = tuple.entries().iter().map(|x| family.key(x)).collect();
    let mut found: Vec<(D::Key, D::Simplex)> = Vec::new();
    'candidates: for y in family.enumerate(tuple.dim())? {
        for (i, target) in targets.iter().enumerate() {
            if family.key(&family.face(&y, i)?) != *target {
                continue 'candidates;
            }
        }
        found.push((family.key(&y), y));
    }
    found.sort_by(|a, b| a.0.cmp(&b.0));
    found.dedup_by(|a, b| a.0 == b.0);
    Ok(found.into_iter().map(|(_, y)| y).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{parse_newick, MarkedTree, TreeError, TreeFamily};

    fn fam() -> TreeFamily {
        TreeFamily::default()
    }

    #[test]
    fn identity_on_t2() {
        let t = MarkedTree::star([0, 1, 2]).unwrap();
        assert!(check_identity(&fam(), &t, 0, 1).unwrap());
    }

    #[test]
    fn identity_index_errors() {
        let t = MarkedTree::star([0, 1, 2]).unwrap();
        assert!(matches!(
            check_identity(&fam(), &t, 1, 1),
            Err(TreeError::Invalid(_))
        ));
        assert!(matches!(
            check_identity(&fam(), &t, 0, 3),
            Err(TreeError::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn faces_of_anything_are_compatible() {
        let y = parse_newick("(((3,4),2),1)0;").unwrap();
        let tuple = FillTuple::new(&fam(), y.faces().unwrap()).unwrap();
        assert!(is_compatible(&fam(), &tuple).unwrap());
        assert!(fill_oracle(&fam(), &tuple).unwrap().contains(&y));
    }

    #[test]
    fn incompatible_tuple_in_t4() {
        // x_0 the 5-leaf star; x_1 splits {0,1,2}|{3,4}, so ∂_0 x_1 is not a star.
        let star = MarkedTree::star(0..5).unwrap();
        let split = parse_newick("((3,4),1,2)0;").unwrap();
        let mut entries = vec![star.clone(); 6];
        entries[1] = split.clone();
        let tuple = FillTuple::new(&fam(), entries).unwrap();
        assert_ne!(split.face(0).unwrap(), star.face(0).unwrap());
        assert!(!is_compatible(&fam(), &tuple).unwrap());
    }

    #[test]
    fn tuple_shape_is_checked() {
        let s3 = MarkedTree::star(0..4).unwrap();
        let s4 = MarkedTree::star(0..5).unwrap();
        assert!(FillTuple::new(&fam(), vec![s3.clone(); 5]).is_ok());
        assert!(FillTuple::new(&fam(), vec![s3.clone(); 4]).is_err());
        assert!(FillTuple::new(&fam(), vec![s3, s4, MarkedTree::star(0..4).unwrap()]).is_err());
        assert!(FillTuple::<MarkedTree>::new(&fam(), vec![]).is_err());
    }

    #[test]
    fn oracle_on_star_faces() {
        let star = MarkedTree::star(0..6).unwrap();
        let tuple = FillTuple::new(&fam(), star.faces().unwrap()).unwrap();
        assert_eq!(fill_oracle(&fam(), &tuple).unwrap(), vec![star]);
    }

    #[test]
    fn oracle_on_all_star_tuple_in_dimension_4() {
        let s = MarkedTree::star(0..4).unwrap();
        let tuple = FillTuple::new(&fam(), vec![s; 5]).unwrap();
        assert!(is_compatible(&fam(), &tuple).unwrap());
        let fills = fill_oracle(&fam(), &tuple).unwrap();
        let expected: Vec<MarkedTree> = crate::tree::enumerate(4, crate::tree::DEFAULT_BUDGET)
            .unwrap()
            .into_iter()
            .filter(|y| y.faces().unwrap().iter().all(|f| f.internal_count() == 1))
            .collect();
        assert_eq!(fills, expected);
        assert!(!fills.is_empty());
    }
}
