use std::collections::BTreeSet;

use super::{Label, MarkedTree, TreeError};

/// Largest number of trees an enumeration may produce.
pub type Budget = u128;

pub const DEFAULT_BUDGET: Budget = 1_000_000;

/// `|T_n|`, the number of trees with leaves `0..=n`, counted by splitting
/// the leaves other than the root leaf into the blocks under the root's
/// neighbour. Saturates at `u128::MAX`.
pub fn tree_count(n: usize) -> u128 {
    if n == 0 {
        return 1;
    }
    // rooted[m]: series-reduced rooted trees on m labelled leaves.
    // blocks[m][k]: ways to split m labelled leaves into k rooted trees.
    let m = n;
    let mut rooted = vec![0u128; m + 1];
    let mut blocks = vec![vec![0u128; m + 1]; m + 1];
    let binom = binomials(m);
    blocks[0][0] = 1;
    for size in 1..=m {
        // blocks of size < `size` only, so rooted[size] is not needed yet
        for k in 2..=size {
            let mut acc = 0u128;
            // the block holding the first leaf has s leaves
            for s in 1..size {
                let r = if s == 1 { 1 } else { rooted[s] };
                let term = binom[size - 1][s - 1]
                    .saturating_mul(r)
                    .saturating_mul(blocks[size - s][k - 1]);
                acc = acc.saturating_add(term);
            }
            blocks[size][k] = acc;
        }
        rooted[size] = if size == 1 {
            1
        } else {
            (2..=size).fold(0u128, |a, k| a.saturating_add(blocks[size][k]))
        };
        blocks[size][1] = rooted[size];
    }
    rooted[m]
}

fn binomials(m: usize) -> Vec<Vec<u128>> {
    let mut c = vec![vec![0u128; m + 1]; m + 1];
    for i in 0..=m {
        c[i][0] = 1;
        for j in 1..=i {
            c[i][j] = c[i - 1][j - 1].saturating_add(c[i - 1][j]);
        }
    }
    c
}

/// All trees with leaves labelled `0..=n`, sorted by canonical form.
pub fn enumerate(n: usize, budget: Budget) -> Result<Vec<MarkedTree>, TreeError> {
    let labels: Vec<Label> = (0..=n as Label).collect();
    enumerate_labelled(&labels, budget)
}

/// All trees with the given leaf labels, built by inserting one leaf at a
/// time at every attach site.
pub fn enumerate_labelled(labels: &[Label], budget: Budget) -> Result<Vec<MarkedTree>, TreeError> {
    let labels: BTreeSet<Label> = labels.iter().copied().collect();
    if labels.is_empty() {
        return Err(TreeError::Invalid("tree has no vertices".into()));
    }
    let n = labels.len() - 1;
    let estimate = tree_count(n);
    if estimate > budget {
        return Err(TreeError::BudgetExceeded {
            n,
            estimate,
            budget,
        });
    }
    let mut it = labels.iter().copied();
    let mut level = vec![MarkedTree::star([it.next().unwrap()])?];
    for label in it {
        let mut next = BTreeSet::new();
        for tree in &level {
            for site in tree.attach_sites() {
                next.insert(tree.attach(site, label)?);
            }
        }
        level = next.into_iter().collect();
    }
    Ok(level)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let counts: Vec<usize> = (0..=5)
            .map(|n| enumerate(n, DEFAULT_BUDGET).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 1, 4, 26, 236]);
    }

    #[test]
    fn count_formula() {
        let got: Vec<u128> = (0..=8).map(tree_count).collect();
        assert_eq!(got, vec![1, 1, 1, 4, 26, 236, 2752, 39208, 660032]);
    }

    #[test]
    fn budget_refuses_large_n() {
        assert!(matches!(
            enumerate(9, DEFAULT_BUDGET),
            Err(TreeError::BudgetExceeded { n: 9, .. })
        ));
        assert!(enumerate(4, 25).is_err());
        assert!(enumerate(4, 26).is_ok());
    }

    #[test]
    fn t4_encodings_are_distinct() {
        let all = enumerate(4, DEFAULT_BUDGET).unwrap();
        let codes: BTreeSet<&str> = all.iter().map(|t| t.canonical_form()).collect();
        assert_eq!(codes.len(), 26);
    }

    #[test]
    fn arbitrary_labels() {
        let all = enumerate_labelled(&[3, 7, 10, 11], DEFAULT_BUDGET).unwrap();
        assert_eq!(all.len(), 4);
        assert!(all.iter().all(|t| t.labels() == BTreeSet::from([3, 7, 10, 11])));
    }
}
