//! Seeded random trees, points, transformations and curves.
//!
//! Points are small rationals `p/q` with `|p| <= 20`, `1 <= q <= 5`. Curves are
//! drawn by picking a tree uniformly from the enumeration and decorating each
//! component of valency `k >= 4` with `0, 1, ∞` followed by `k - 3` distinct
//! such points, rejecting `0`, `1` and repeats.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::moduli::{Configuration, ModuliError, StableCurve};
use crate::proj::{Mobius, ProjPoint};
use crate::scalar::Scalar;
use crate::tree::{enumerate, Budget, MarkedTree, TreeError, DEFAULT_BUDGET};

pub const MAX_NUMERATOR: i64 = 20;
pub const MAX_DENOMINATOR: i64 = 5;

pub struct Sampler {
    rng: ChaCha8Rng,
    budget: Budget,
    trees: HashMap<usize, Vec<MarkedTree>>,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            budget: DEFAULT_BUDGET,
            trees: HashMap::new(),
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Uniform element of `T_n` (leaves `0..=n`).
    pub fn tree(&mut self, n: usize) -> Result<MarkedTree, TreeError> {
        if !self.trees.contains_key(&n) {
            self.trees.insert(n, enumerate(n, self.budget)?);
        }
        let all = &self.trees[&n];
        Ok(all[self.rng.gen_range(0..all.len())].clone())
    }

    /// A finite rational point.
    pub fn rational<T: Scalar>(&mut self) -> ProjPoint<T> {
        let p = self.rng.gen_range(-MAX_NUMERATOR..=MAX_NUMERATOR);
        let q = self.rng.gen_range(1..=MAX_DENOMINATOR);
        ProjPoint::new(T::from(p), T::from(q)).expect("q is nonzero")
    }

    /// A rational point, `∞` with probability 1/16.
    pub fn point<T: Scalar>(&mut self) -> ProjPoint<T> {
        if self.rng.gen_ratio(1, 16) {
            ProjPoint::infinity()
        } else {
            self.rational()
        }
    }

    /// `k` distinct points avoiding `avoid`.
    pub fn distinct_points<T: Scalar>(
        &mut self,
        k: usize,
        avoid: &[ProjPoint<T>],
    ) -> Vec<ProjPoint<T>> {
        let mut out: Vec<ProjPoint<T>> = Vec::with_capacity(k);
        while out.len() < k {
            let p = self.point();
            if !avoid.contains(&p) && !out.contains(&p) {
                out.push(p);
            }
        }
        out
    }

    /// An invertible transformation with small integer entries.
    pub fn mobius<T: Scalar>(&mut self) -> Mobius<T> {
        loop {
            let mut e = || T::from(self.rng.gen_range(-9i64..=9));
            if let Ok(m) = Mobius::new(e(), e(), e(), e()) {
                return m;
            }
        }
    }

    /// A curve with marks `0..marks`, its stratum uniform among trees.
    pub fn curve<T: Scalar>(&mut self, marks: usize) -> Result<StableCurve<T>, ModuliError> {
        if marks < 3 {
            return Err(ModuliError::Invalid(format!(
                "a stable curve needs at least 3 marks, got {marks}"
            )));
        }
        let tree = self.tree(marks - 1)?;
        let frame = [ProjPoint::zero(), ProjPoint::one(), ProjPoint::infinity()];
        let mut configs = std::collections::BTreeMap::new();
        for v in tree.internal_vertices() {
            let k = tree.valency(v);
            if k >= 4 {
                let mut pts = frame.to_vec();
                pts.extend(self.distinct_points(k - 3, &frame));
                configs.insert(v, Configuration::from_frame(pts)?);
            }
        }
        StableCurve::new(tree, configs)
    }

    /// A smooth curve through random distinct points, not in canonical frame.
    pub fn smooth_curve<T: Scalar>(&mut self, marks: usize) -> Result<StableCurve<T>, ModuliError> {
        let pts = self.distinct_points(marks, &[]);
        StableCurve::from_points(&pts)
    }
}
