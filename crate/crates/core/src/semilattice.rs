//! Convex spaces of combinatorial type: finite meet-semilattices, the
//! finitary Manes monad of nonempty finite subsets, the support map from
//! distributions to subsets, and possibility measures.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{domain, validation, Error, Result};
use crate::giry::{Dist, DistOfDist};
use crate::kernel::{ConvexSpace, Law, LawReport, RandomElement};
use crate::random::random_subset;
use crate::rational::Coeff;

fn table_op(labels: &[String], table: &[Vec<usize>]) -> Result<()> {
    let n = labels.len();
    if n == 0 {
        return Err(domain!("empty element set"));
    }
    if table.len() != n {
        return Err(validation!("table has {} rows for {n} elements", table.len()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n {
            return Err(validation!("row {i} has {} entries for {n} elements", row.len()));
        }
        if let Some(j) = row.iter().position(|&v| v >= n) {
            return Err(validation!("entry ({i}, {j}) = {} is not an element index", row[j]));
        }
    }
    Ok(())
}

fn combine_by_table(table: &[Vec<usize>], lambda: &Coeff, x: usize, y: usize) -> usize {
    if lambda.is_zero() {
        y
    } else if lambda.is_one() {
        x
    } else {
        table[x][y]
    }
}

/// A validated finite meet-semilattice. Elements are indices into `labels`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteSemilattice {
    labels: Vec<String>,
    meet: Vec<Vec<usize>>,
}

impl FiniteSemilattice {
    /// Validates idempotency, commutativity and associativity exhaustively.
    pub fn new(labels: Vec<String>, meet: Vec<Vec<usize>>) -> Result<Self> {
        table_op(&labels, &meet)?;
        let n = labels.len();
        let name = |i: usize| &labels[i];
        for a in 0..n {
            if meet[a][a] != a {
                return Err(validation!("idempotency fails at {0} ∧ {0} = {1}", name(a), name(meet[a][a])));
            }
        }
        for a in 0..n {
            for b in 0..n {
                if meet[a][b] != meet[b][a] {
                    return Err(validation!("commutativity fails at ({}, {})", name(a), name(b)));
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if meet[meet[a][b]][c] != meet[a][meet[b][c]] {
                        return Err(validation!(
                            "associativity fails at ({}, {}, {})",
                            name(a),
                            name(b),
                            name(c)
                        ));
                    }
                }
            }
        }
        Ok(FiniteSemilattice { labels, meet })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a][b]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.meet
    }

    /// `a ≤ b ⇔ a ∧ b = a`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.meet[a][b] == a
    }

    /// Pairs `(a, b)` with `a < b` and nothing strictly between.
    pub fn covering_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let lt = |a: usize, b: usize| a != b && self.leq(a, b);
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

/// `semilattice_make`.
pub fn semilattice_make(labels: Vec<String>, meet: Vec<Vec<usize>>) -> Result<FiniteSemilattice> {
    FiniteSemilattice::new(labels, meet)
}

/// The convex space of a semilattice: `cc(λ, x, y) = x ∧ y` for interior `λ`.
pub fn semilattice_space(s: &FiniteSemilattice) -> FiniteSemilattice {
    s.clone()
}

/// The two-element semilattice `{i, f}` with `i ∧ f = i`.
pub fn face_classifier_lattice() -> FiniteSemilattice {
    FiniteSemilattice::new(["i", "f"].map(String::from).to_vec(), alloc::vec![alloc::vec![0, 0], alloc::vec![0, 1]])
        .expect("face classifier table")
}

/// The positive divisors of `n` under gcd.
pub fn divisor_lattice(n: u64) -> Result<FiniteSemilattice> {
    if n == 0 {
        return Err(domain!("divisors of 0 are not a finite lattice"));
    }
    let divs: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let index: BTreeMap<u64, usize> = divs.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let meet = divs
        .iter()
        .map(|&a| divs.iter().map(|&b| index[&a.gcd(&b)]).collect())
        .collect();
    FiniteSemilattice::new(divs.iter().map(|d| d.to_string()).collect(), meet)
}

/// The free semilattice on the given generators: nonempty subsets, with
/// meet = union (so `A ≤ B ⇔ A ⊇ B`).
pub fn free_semilattice(generators: &[String]) -> Result<FiniteSemilattice> {
    let k = generators.len();
    if k == 0 {
        return Err(domain!("free semilattice on no generators"));
    }
    if k > 10 {
        return Err(Error::Unsupported(format!("free semilattice on {k} generators is too large")));
    }
    let masks: Vec<u32> = (1..(1u32 << k)).collect();
    let label = |m: u32| {
        let names: Vec<&str> =
            (0..k).filter(|j| m & (1 << j) != 0).map(|j| generators[j].as_str()).collect();
        format!("{{{}}}", names.join(","))
    };
    let meet = masks
        .iter()
        .map(|&a| masks.iter().map(|&b| ((a | b) - 1) as usize).collect())
        .collect();
    FiniteSemilattice::new(masks.iter().map(|&m| label(m)).collect(), meet)
}

impl ConvexSpace for FiniteSemilattice {
    type Elem = usize;

    fn space_id(&self) -> String {
        format!("semilattice{:?}", self.labels)
    }

    fn contains(&self, x: &usize) -> bool {
        *x < self.len()
    }

    fn combine(&self, lambda: &Coeff, x: &usize, y: &usize) -> usize {
        combine_by_table(&self.meet, lambda, *x, *y)
    }

    fn structure_map(&self, d: &Dist<usize>) -> Option<usize> {
        d.points().copied().reduce(|a, b| self.meet[a][b])
    }
}

impl RandomElement for FiniteSemilattice {
    fn random_element(&self, rng: &mut dyn RngCore) -> usize {
        rng.gen_range(0..self.len())
    }
}

/// An arbitrary binary operation used as the interior combination, without
/// any validation. Exists so that broken tables can be fed to the checkers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OperationTable {
    labels: Vec<String>,
    table: Vec<Vec<usize>>,
}

impl OperationTable {
    /// Only checks that the table is total on the element set.
    pub fn new(labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        table_op(&labels, &table)?;
        Ok(OperationTable { labels, table })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

impl ConvexSpace for OperationTable {
    type Elem = usize;

    fn space_id(&self) -> String {
        format!("table{:?}", self.labels)
    }

    fn contains(&self, x: &usize) -> bool {
        *x < self.labels.len()
    }

    fn combine(&self, lambda: &Coeff, x: &usize, y: &usize) -> usize {
        combine_by_table(&self.table, lambda, *x, *y)
    }
}

impl RandomElement for OperationTable {
    fn random_element(&self, rng: &mut dyn RngCore) -> usize {
        rng.gen_range(0..self.labels.len())
    }
}

/// A finite nonempty subset.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "BTreeSet<T>", into = "BTreeSet<T>")]
#[serde(bound(serialize = "T: Clone + Serialize", deserialize = "T: Ord + Deserialize<'de>"))]
pub struct FinSubset<T: Ord>(BTreeSet<T>);

impl<T: Ord> FinSubset<T> {
    pub fn new(members: impl IntoIterator<Item = T>) -> Result<Self> {
        let set: BTreeSet<T> = members.into_iter().collect();
        if set.is_empty() {
            return Err(domain!("empty subset"));
        }
        Ok(FinSubset(set))
    }

    pub fn members(&self) -> &BTreeSet<T> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, x: &T) -> bool {
        self.0.contains(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.0.iter()
    }

    /// Image under `f`.
    pub fn map<U: Ord>(&self, f: impl FnMut(&T) -> U) -> FinSubset<U> {
        FinSubset(self.0.iter().map(f).collect())
    }
}

impl<T: Ord + Clone> FinSubset<T> {
    pub fn union(&self, other: &FinSubset<T>) -> FinSubset<T> {
        FinSubset(self.0.union(&other.0).cloned().collect())
    }
}

impl<T: Ord> TryFrom<BTreeSet<T>> for FinSubset<T> {
    type Error = Error;
    fn try_from(s: BTreeSet<T>) -> Result<Self> {
        FinSubset::new(s)
    }
}

impl<T: Ord + Clone> From<FinSubset<T>> for BTreeSet<T> {
    fn from(s: FinSubset<T>) -> Self {
        s.0
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for FinSubset<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(&self.0).finish()
    }
}

/// `ε`: the singleton.
pub fn manes_unit<T: Ord>(x: T) -> FinSubset<T> {
    let mut s = BTreeSet::new();
    s.insert(x);
    FinSubset(s)
}

/// The Manes multiplication: union of a nonempty family of nonempty sets.
pub fn manes_flatten<T: Ord + Clone>(family: &FinSubset<FinSubset<T>>) -> FinSubset<T> {
    FinSubset(family.iter().flat_map(|b| b.iter().cloned()).collect())
}

/// Points of positive weight: the coefficient change `λ ↦ sgn(λ)`.
pub fn support<T: Ord + Clone>(d: &Dist<T>) -> FinSubset<T> {
    FinSubset(d.support_set())
}

/// The free semilattice on a finite carrier with typed elements: nonempty
/// subsets, interior combinations are unions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetSpace<T: Ord> {
    carrier: BTreeSet<T>,
}

impl<T: Ord + Clone + fmt::Debug> SubsetSpace<T> {
    pub fn new(carrier: impl IntoIterator<Item = T>) -> Result<Self> {
        let carrier: BTreeSet<T> = carrier.into_iter().collect();
        if carrier.is_empty() {
            return Err(domain!("subset space over an empty carrier"));
        }
        Ok(SubsetSpace { carrier })
    }
}

impl<T: Ord + Clone + fmt::Debug> ConvexSpace for SubsetSpace<T> {
    type Elem = FinSubset<T>;

    fn space_id(&self) -> String {
        format!("subsets{:?}", self.carrier)
    }

    fn contains(&self, x: &FinSubset<T>) -> bool {
        x.iter().all(|p| self.carrier.contains(p))
    }

    fn combine(&self, lambda: &Coeff, x: &FinSubset<T>, y: &FinSubset<T>) -> FinSubset<T> {
        if lambda.is_zero() {
            y.clone()
        } else if lambda.is_one() {
            x.clone()
        } else {
            x.union(y)
        }
    }

    fn structure_map(&self, d: &Dist<FinSubset<T>>) -> Option<FinSubset<T>> {
        Some(FinSubset(d.points().flat_map(|b| b.iter().cloned()).collect()))
    }
}

impl<T: Ord + Clone + fmt::Debug> RandomElement for SubsetSpace<T> {
    fn random_element(&self, rng: &mut dyn RngCore) -> FinSubset<T> {
        let points: Vec<T> = self.carrier.iter().cloned().collect();
        FinSubset(random_subset(rng, &points, points.len()))
    }
}

/// Report type of the coefficient-change checker.
pub type CoefficientChangeReport<T> = LawReport<DistOfDist<T>, FinSubset<T>>;

/// Checks that [`support`] is a morphism of monads from distributions to
/// finite subsets on every sample.
pub fn check_coefficient_change<T: Ord + Clone>(samples: &[DistOfDist<T>]) -> CoefficientChangeReport<T> {
    check_coefficient_change_with(samples, support)
}

/// [`check_coefficient_change`] for an arbitrary candidate support map:
/// `sgn(η x) = ε x` for every point, and
/// `sgn(μ dd) = ∪ { sgn(d) : d ∈ sgn(dd) }`.
pub fn check_coefficient_change_with<T, F>(samples: &[DistOfDist<T>], sgn: F) -> CoefficientChangeReport<T>
where
    T: Ord + Clone,
    F: Fn(&Dist<T>) -> FinSubset<T>,
{
    let mut report = CoefficientChangeReport::new();
    for dd in samples {
        let mut seen = BTreeSet::new();
        for inner in dd.points() {
            for x in inner.points() {
                if seen.insert(x.clone()) {
                    report.record(
                        Law::CoefficientChangeUnit,
                        || Dist::point(Dist::point(x.clone())),
                        sgn(&Dist::point(x.clone())),
                        manes_unit(x.clone()),
                    );
                }
            }
        }
        let lhs = sgn(&Dist::flatten(dd));
        let outer = FinSubset(dd.points().map(&sgn).collect());
        let rhs = manes_flatten(&outer);
        report.record(Law::CoefficientChangeMultiplication, || dd.clone(), lhs, rhs);
    }
    report
}

/// Report type of [`check_manes_monad_laws`].
pub type ManesLawReport<T> = LawReport<FinSubset<FinSubset<FinSubset<T>>>, FinSubset<T>>;

/// Unit and associativity laws of the Manes monad on triply nested samples.
pub fn check_manes_monad_laws<T: Ord + Clone>(
    samples: &[FinSubset<FinSubset<FinSubset<T>>>],
) -> ManesLawReport<T> {
    let mut report = ManesLawReport::new();
    for bbb in samples {
        for bb in bbb.iter() {
            for b in bb.iter() {
                let left = manes_flatten(&b.map(|x| manes_unit(x.clone())));
                report.record(Law::MonadLeftUnit, || bbb.clone(), left, b.clone());
                let right = manes_flatten(&manes_unit(b.clone()));
                report.record(Law::MonadRightUnit, || bbb.clone(), right, b.clone());
            }
        }
        let outer_first = manes_flatten(&manes_flatten(bbb));
        let inner_first = manes_flatten(&bbb.map(manes_flatten));
        report.record(Law::MonadAssociativity, || bbb.clone(), outer_first, inner_first);
    }
    report
}

/// A possibility distribution on a finite carrier. Events are valued by the
/// maximum over their members.
///
/// The constructor requires the maximum to be one; [`possibility_meet`] may
/// produce an unnormalized measure, which is then flagged.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PossibilityMeasure<T: Ord> {
    values: BTreeMap<T, Coeff>,
    normalized: bool,
}

impl<T: Ord + Clone + fmt::Debug> PossibilityMeasure<T> {
    pub fn new(values: impl IntoIterator<Item = (T, Coeff)>) -> Result<Self> {
        let values: BTreeMap<T, Coeff> = values.into_iter().collect();
        if values.is_empty() {
            return Err(domain!("possibility measure on an empty carrier"));
        }
        if !values.values().any(Coeff::is_one) {
            return Err(validation!("possibility measure must attain 1 on the carrier"));
        }
        Ok(PossibilityMeasure { values, normalized: true })
    }

    pub fn carrier(&self) -> impl Iterator<Item = &T> {
        self.values.keys()
    }

    pub fn value(&self, x: &T) -> Option<&Coeff> {
        self.values.get(x)
    }

    /// `μ(Y) = max_{y∈Y} μ(y)`, zero on the empty event. Points outside the
    /// carrier are a domain error.
    pub fn event<'a>(&self, ys: impl IntoIterator<Item = &'a T>) -> Result<Coeff>
    where
        T: 'a,
    {
        let mut best = Coeff::zero();
        for y in ys {
            let v = self.values.get(y).ok_or_else(|| domain!("{y:?} is outside the carrier"))?;
            if v > &best {
                best = v.clone();
            }
        }
        Ok(best)
    }

    /// Whether the whole carrier has possibility one.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Pointwise order `μ₁ ≤ μ₂` on a shared carrier.
    pub fn leq(&self, other: &Self) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().all(|(x, v)| other.values.get(x).is_some_and(|w| v <= w))
    }
}

/// `(μ₁ ∧ μ₂)(y) = min(μ₁(y), μ₂(y))`, without renormalization.
pub fn possibility_meet<T: Ord + Clone + fmt::Debug>(
    a: &PossibilityMeasure<T>,
    b: &PossibilityMeasure<T>,
) -> Result<PossibilityMeasure<T>> {
    if !a.values.keys().eq(b.values.keys()) {
        return Err(domain!("possibility measures on different carriers"));
    }
    let values: BTreeMap<T, Coeff> = a
        .values
        .iter()
        .zip(b.values.values())
        .map(|((x, v), w)| (x.clone(), v.min(w).clone()))
        .collect();
    let normalized = values.values().any(Coeff::is_one);
    Ok(PossibilityMeasure { values, normalized })
}
