//! Polynomial systems cutting out `M̄_{0,n}` inside a product of projective
//! lines.
//!
//! Each coordinate pair `(a_I, b_I)` is indexed either by a chain of forgetful
//! indices (the nested form, built by induction on `n`) or by a 4-subset of
//! marks (the reduced form). A chain `(i_1, ..., i_m)`, with 1-based entries,
//! names the quad coordinate of `∂_{i_1 - 1} ∘ ... ∘ ∂_{i_m - 1}`, so the last
//! entry is forgotten first.
//!
//! Equations are stored as left-minus-right polynomials and count as satisfied
//! only when they evaluate to exactly zero.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moduli::{four_subsets, ModuliError, StableCurve};
use crate::proj::ProjPoint;
use crate::scalar::Scalar;
use crate::tree::{Label, FORMAT_VERSION};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EquationError {
    #[error("equation systems need at least 5 marks, got {0}")]
    TooFewMarks(usize),
    #[error("no value assigned to coordinate {0}")]
    MissingIndex(String),
    #[error("unknown format {0:?}; expected plain, json or cas")]
    UnknownFormat(String),
    #[error("unknown form {0:?}; expected redundant or reduced")]
    UnknownForm(String),
    #[error("invalid system: {0}")]
    Invalid(String),
    #[error(transparent)]
    Moduli(#[from] ModuliError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoordIndex {
    /// 1-based forgetful indices, outermost first.
    Chain(Vec<usize>),
    /// Sorted marks.
    Subset([Label; 4]),
}

impl CoordIndex {
    fn body(&self) -> String {
        match self {
            CoordIndex::Chain(c) => {
                c.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            }
            CoordIndex::Subset(s) => {
                let sep = if s.iter().any(|&m| m >= 10) { "," } else { "" };
                s.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
            }
        }
    }

    /// Variable name in the plain format: `a3` for a single-entry chain,
    /// `a_{1,2}` or `a_{0123}` otherwise.
    pub fn plain_name(&self, var: char) -> String {
        match self {
            CoordIndex::Chain(c) if c.len() == 1 => format!("{var}{}", c[0]),
            _ => self.braced_name(var),
        }
    }

    /// Variable name in the cas format, always braced.
    pub fn braced_name(&self, var: char) -> String {
        format!("{var}_{{{}}}", self.body())
    }
}

impl fmt::Display for CoordIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoordIndex::Chain(_) => write!(f, "({})", self.body()),
            CoordIndex::Subset(_) => write!(f, "{{{}}}", self.body()),
        }
    }
}

/// The marks whose quad coordinate a chain names, out of `0..n`.
pub fn chain_to_subset(n: usize, chain: &[usize]) -> Result<[Label; 4], EquationError> {
    if chain.len() + 4 != n {
        return Err(EquationError::Invalid(format!(
            "a chain for {n} marks has {} entries, got {}",
            n.saturating_sub(4),
            chain.len()
        )));
    }
    let mut marks: Vec<Label> = (0..n as Label).collect();
    for &i in chain.iter().rev() {
        if i == 0 || i > marks.len() {
            return Err(EquationError::Invalid(format!(
                "chain entry {i} out of range 1..={}",
                marks.len()
            )));
        }
        marks.remove(i - 1);
    }
    Ok(marks.try_into().expect("four marks remain"))
}

/// Exponents of `a_I` and `b_I` for one coordinate position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Factor {
    pub coord: usize,
    pub a: u32,
    pub b: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub coeff: i64,
    /// Sorted by coordinate position, no zero exponents.
    pub factors: Vec<Factor>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Equation {
    /// Factored plain rendering.
    pub display: String,
    pub monomials: Vec<Monomial>,
}

/// Sparse polynomial keyed by factor list.
#[derive(Debug, Clone, Default)]
struct Poly(BTreeMap<Vec<Factor>, i64>);

impl Poly {
    fn var(coord: usize, is_a: bool) -> Self {
        let f = Factor {
            coord,
            a: is_a as u32,
            b: !is_a as u32,
        };
        Poly(BTreeMap::from([(vec![f], 1)]))
    }

    fn add_scaled(mut self, other: &Poly, sign: i64) -> Self {
        for (k, c) in &other.0 {
            *self.0.entry(k.clone()).or_insert(0) += sign * c;
        }
        self.0.retain(|_, c| *c != 0);
        self
    }

    fn sub(self, other: &Poly) -> Self {
        self.add_scaled(other, -1)
    }

    fn mul(&self, other: &Poly) -> Self {
        let mut out = Poly::default();
        for (ka, ca) in &self.0 {
            for (kb, cb) in &other.0 {
                let mut m: BTreeMap<usize, (u32, u32)> = BTreeMap::new();
                for f in ka.iter().chain(kb) {
                    let e = m.entry(f.coord).or_insert((0, 0));
                    e.0 += f.a;
                    e.1 += f.b;
                }
                let key = m.into_iter().map(|(coord, (a, b))| Factor { coord, a, b }).collect();
                *out.0.entry(key).or_insert(0) += ca * cb;
            }
        }
        out.0.retain(|_, c| *c != 0);
        out
    }

    fn into_monomials(self) -> Vec<Monomial> {
        self.0
            .into_iter()
            .map(|(factors, coeff)| Monomial { coeff, factors })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Redundant,
    Reduced,
}

impl std::str::FromStr for Form {
    type Err = EquationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "redundant" => Ok(Form::Redundant),
            "reduced" => Ok(Form::Reduced),
            _ => Err(EquationError::UnknownForm(s.into())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqSystem {
    #[serde(default = "default_version")]
    pub version: u32,
    pub n: usize,
    pub form: Form,
    pub coords: Vec<CoordIndex>,
    pub equations: Vec<Equation>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

/// The three equations in coordinates at `pos[k - 1]`, `k = 1..=5`.
fn m05_family(pos: [usize; 5], names: &[CoordIndex; 5]) -> Vec<Equation> {
    let a = |k: usize| Poly::var(pos[k - 1], true);
    let b = |k: usize| Poly::var(pos[k - 1], false);
    let an = |k: usize| names[k - 1].plain_name('a');
    let bn = |k: usize| names[k - 1].plain_name('b');
    let common = a(4).mul(&b(5)).sub(&a(5).mul(&b(4)));
    let common_s = format!("{}*{} - {}*{}", an(4), bn(5), an(5), bn(4));
    vec![
        Equation {
            display: format!(
                "{}*({common_s}) - {}*{}*({} - {})",
                an(1), bn(1), bn(5), an(4), bn(4)
            ),
            monomials: a(1)
                .mul(&common)
                .sub(&b(1).mul(&b(5)).mul(&a(4).sub(&b(4))))
                .into_monomials(),
        },
        Equation {
            display: format!("{}*({common_s}) - {}*{}*{}", an(2), bn(2), an(4), bn(5)),
            monomials: a(2)
                .mul(&common)
                .sub(&b(2).mul(&a(4)).mul(&b(5)))
                .into_monomials(),
        },
        Equation {
            display: format!(
                "{}*({common_s}) - {}*{}*({} - {})",
                an(3), bn(3), an(4), bn(5), an(5)
            ),
            monomials: a(3)
                .mul(&common)
                .sub(&b(3).mul(&a(4)).mul(&b(5).sub(&a(5))))
                .into_monomials(),
        },
    ]
}

fn identification(p: usize, q: usize, names: [&CoordIndex; 2]) -> Equation {
    let poly = Poly::var(p, true)
        .mul(&Poly::var(q, false))
        .sub(&Poly::var(q, true).mul(&Poly::var(p, false)));
    Equation {
        display: format!(
            "{}*{} - {}*{}",
            names[0].plain_name('a'),
            names[1].plain_name('b'),
            names[1].plain_name('a'),
            names[0].plain_name('b')
        ),
        monomials: poly.into_monomials(),
    }
}

/// Chains for `n` marks, grouped by last entry.
fn chains(n: usize) -> Vec<Vec<usize>> {
    if n == 4 {
        return vec![vec![]];
    }
    let inner = chains(n - 1);
    let mut out = Vec::with_capacity(n * inner.len());
    for j in 1..=n {
        for c in &inner {
            let mut c = c.clone();
            c.push(j);
            out.push(c);
        }
    }
    out
}

/// The three equations of `M̄_{0,5}` in `(P¹)^5`.
pub fn generate_m05() -> EqSystem {
    generate_redundant(5).expect("5 marks")
}

/// The nested system: one copy of the `n - 1` system per forgetful index,
/// plus the identifications `(c, i, j) ~ (c, j - 1, i)` for `i < j`.
pub fn generate_redundant(n: usize) -> Result<EqSystem, EquationError> {
    if n < 5 {
        return Err(EquationError::TooFewMarks(n));
    }
    let coords: Vec<CoordIndex> = chains(n).into_iter().map(CoordIndex::Chain).collect();
    let pos: BTreeMap<&CoordIndex, usize> = coords.iter().enumerate().map(|(k, c)| (c, k)).collect();
    let equations = redundant_equations(n, &|chain: &[usize]| pos[&CoordIndex::Chain(chain.to_vec())], &coords);
    Ok(EqSystem {
        version: FORMAT_VERSION,
        n,
        form: Form::Redundant,
        coords,
        equations,
    })
}

/// Equations at level `m`; `lookup` maps a full chain (with the suffix
/// already appended) to its coordinate position.
fn redundant_equations(
    m: usize,
    lookup: &dyn Fn(&[usize]) -> usize,
    coords: &[CoordIndex],
) -> Vec<Equation> {
    if m == 5 {
        let pos: [usize; 5] = std::array::from_fn(|k| lookup(&[k + 1]));
        let names: [CoordIndex; 5] = std::array::from_fn(|k| coords[pos[k]].clone());
        return m05_family(pos, &names);
    }
    let mut out = Vec::new();
    for j in 1..=m {
        let shifted = |chain: &[usize]| {
            let mut c = chain.to_vec();
            c.push(j);
            lookup(&c)
        };
        out.extend(redundant_equations(m - 1, &shifted, coords));
    }
    for j in 2..=m {
        for i in 1..j {
            for c in chains(m - 2) {
                let mut lhs = c.clone();
                lhs.extend([i, j]);
                let mut rhs = c;
                rhs.extend([j - 1, i]);
                let (p, q) = (lookup(&lhs), lookup(&rhs));
                out.push(identification(p, q, [&coords[p], &coords[q]]));
            }
        }
    }
    out
}

/// One coordinate per 4-subset of marks and, for each 5-subset, the three
/// equations with coordinate `k` replaced by the subset omitting its `k`-th
/// smallest mark.
pub fn generate_reduced(n: usize) -> Result<EqSystem, EquationError> {
    if n < 5 {
        return Err(EquationError::TooFewMarks(n));
    }
    let marks: Vec<Label> = (0..n as Label).collect();
    let coords: Vec<CoordIndex> = four_subsets(&marks).into_iter().map(CoordIndex::Subset).collect();
    let pos: BTreeMap<&CoordIndex, usize> = coords.iter().enumerate().map(|(k, c)| (c, k)).collect();
    let mut equations = Vec::new();
    for five in five_subsets(&marks) {
        let names: [CoordIndex; 5] = std::array::from_fn(|k| {
            let mut quad = [0; 4];
            let mut t = 0;
            for (r, &m) in five.iter().enumerate() {
                if r != k {
                    quad[t] = m;
                    t += 1;
                }
            }
            CoordIndex::Subset(quad)
        });
        let p: [usize; 5] = std::array::from_fn(|k| pos[&names[k]]);
        equations.extend(m05_family(p, &names));
    }
    Ok(EqSystem {
        version: FORMAT_VERSION,
        n,
        form: Form::Reduced,
        coords,
        equations,
    })
}

fn five_subsets(marks: &[Label]) -> Vec<[Label; 5]> {
    let mut out = Vec::new();
    for q in four_subsets(marks) {
        for &m in marks.iter().filter(|&&m| m > q[3]) {
            out.push([q[0], q[1], q[2], q[3], m]);
        }
    }
    out
}

pub fn generate(n: usize, form: Form) -> Result<EqSystem, EquationError> {
    match form {
        Form::Redundant => generate_redundant(n),
        Form::Reduced => generate_reduced(n),
    }
}

/// Closed-form equation count of [`generate_redundant`].
pub fn redundant_equation_count(n: usize) -> u128 {
    if n <= 5 {
        return 3;
    }
    let chains = |m: usize| (5..=m as u128).product::<u128>();
    let pairs = (n * (n - 1) / 2) as u128;
    n as u128 * redundant_equation_count(n - 1) + pairs * chains(n - 2)
}

/// Residual of each equation under homogeneous substitution.
pub fn evaluate<T: Scalar>(
    system: &EqSystem,
    assignment: &BTreeMap<CoordIndex, ProjPoint<T>>,
) -> Result<Vec<T>, EquationError> {
    let values: Vec<&ProjPoint<T>> = system
        .coords
        .iter()
        .map(|c| assignment.get(c).ok_or_else(|| EquationError::MissingIndex(c.to_string())))
        .collect::<Result<_, _>>()?;
    let pow = |x: &T, e: u32| num_traits::pow(x.clone(), e as usize);
    Ok(system
        .equations
        .iter()
        .map(|eq| {
            eq.monomials.iter().fold(T::zero(), |acc, m| {
                let term = m.factors.iter().fold(T::from(m.coeff), |t, f| {
                    let p = values[f.coord];
                    t * pow(p.a(), f.a) * pow(p.b(), f.b)
                });
                acc + term
            })
        })
        .collect())
}

/// Whether every residual is exactly zero.
pub fn is_satisfied<T: Scalar>(
    system: &EqSystem,
    assignment: &BTreeMap<CoordIndex, ProjPoint<T>>,
) -> Result<bool, EquationError> {
    Ok(evaluate(system, assignment)?.iter().all(|r| r.is_zero()))
}

/// The value of every coordinate of `system` on a curve with marks `0..n`.
pub fn curve_assignment<T: Scalar>(
    system: &EqSystem,
    curve: &StableCurve<T>,
) -> Result<BTreeMap<CoordIndex, ProjPoint<T>>, EquationError> {
    if curve.marks() != (0..system.n as Label).collect() {
        return Err(EquationError::Invalid(format!(
            "the system is for marks 0..{}, the curve has {:?}",
            system.n,
            curve.marks()
        )));
    }
    let quads = curve.to_coordinates()?;
    system
        .coords
        .iter()
        .map(|c| {
            let q = match c {
                CoordIndex::Chain(chain) => chain_to_subset(system.n, chain)?,
                CoordIndex::Subset(s) => *s,
            };
            Ok((c.clone(), quads[&q].clone()))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Plain,
    Json,
    Cas,
}

impl std::str::FromStr for ExportFormat {
    type Err = EquationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain" => Ok(ExportFormat::Plain),
            "json" => Ok(ExportFormat::Json),
            "cas" => Ok(ExportFormat::Cas),
            _ => Err(EquationError::UnknownFormat(s.into())),
        }
    }
}

impl EqSystem {
    pub fn export(&self, format: ExportFormat) -> String {
        match format {
            ExportFormat::Plain => {
                let mut s = String::new();
                for eq in &self.equations {
                    s.push_str(&eq.display);
                    s.push('\n');
                }
                s
            }
            ExportFormat::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("serializable");
                s.push('\n');
                s
            }
            ExportFormat::Cas => self.to_cas(),
        }
    }

    fn to_cas(&self) -> String {
        let vars: Vec<String> = self
            .coords
            .iter()
            .flat_map(|c| [c.braced_name('a'), c.braced_name('b')])
            .collect();
        let mut s = format!("vars: {}\n", vars.join(", "));
        let polys: Vec<String> = self.equations.iter().map(|eq| self.cas_poly(eq)).collect();
        s.push_str(&polys.join(",\n"));
        s.push('\n');
        s
    }

    fn cas_poly(&self, eq: &Equation) -> String {
        let mut s = String::new();
        for (k, m) in eq.monomials.iter().enumerate() {
            let mag = m.coeff.unsigned_abs();
            match (k, m.coeff < 0) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            let mut parts = Vec::new();
            if mag != 1 || m.factors.is_empty() {
                parts.push(mag.to_string());
            }
            for f in &m.factors {
                let c = &self.coords[f.coord];
                for (var, e) in [('a', f.a), ('b', f.b)] {
                    match e {
                        0 => {}
                        1 => parts.push(c.braced_name(var)),
                        e => parts.push(format!("{}^{e}", c.braced_name(var))),
                    }
                }
            }
            s.push_str(&parts.join("*"));
        }
        s
    }

    pub fn from_json(s: &str) -> Result<Self, EquationError> {
        let sys: EqSystem =
            serde_json::from_str(s).map_err(|e| EquationError::Invalid(format!("json: {e}")))?;
        if sys.version != FORMAT_VERSION {
            return Err(EquationError::Invalid(format!(
                "unsupported format version {}",
                sys.version
            )));
        }
        for eq in &sys.equations {
            for m in &eq.monomials {
                if m.factors.iter().any(|f| f.coord >= sys.coords.len()) {
                    return Err(EquationError::Invalid(format!(
                        "equation {:?} refers to a missing coordinate",
                        eq.display
                    )));
                }
            }
        }
        Ok(sys)
    }
}
