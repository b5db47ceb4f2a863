//! The convex-space interface, n-ary reduction, and the law checker.
//!
//! A convex space is a set with binary operations `cc(λ, x, y)` for
//! `λ ∈ [0,1]`, read as `λx + (1-λ)y`, satisfying
//!
//! * unit law: `cc(0, x, y) = y`
//! * idempotency: `cc(λ, x, x) = x`
//! * parametric commutativity: `cc(λ, x, y) = cc(1-λ, y, x)`
//! * deformed parametric associativity:
//!   `cc(λ, cc(μ, x, y), z) = cc(λμ, x, cc(μ', y, z))` with
//!   `μ' = λ(1-μ) / (1-λμ)` when `λμ ≠ 1` and `μ'` arbitrary when `λ = μ = 1`.
//!
//! Everything is exact; no tolerance is ever applied.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{domain, validation, Error, Result};
use crate::giry::Dist;
use crate::random::random_coeff;
use crate::rational::{Coeff, Rational};

/// A set equipped with the binary convex-combination operations.
///
/// Element equality is structural (`Eq`) on canonical forms.
pub trait ConvexSpace {
    type Elem: Clone + Ord + fmt::Debug;

    /// Short human-readable identifier.
    fn space_id(&self) -> String;

    fn contains(&self, x: &Self::Elem) -> bool;

    /// `λx + (1-λ)y` for members `x`, `y`. Callers guarantee membership;
    /// use [`ConvexSpace::cc`] for the checked form.
    fn combine(&self, lambda: &Coeff, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;

    /// A native barycenter `Δ_C → C`, for spaces that have a direct formula.
    /// `None` means "derive it from `combine`".
    fn structure_map(&self, _d: &Dist<Self::Elem>) -> Option<Self::Elem> {
        None
    }

    fn cc(&self, lambda: &Coeff, x: &Self::Elem, y: &Self::Elem) -> Result<Self::Elem> {
        self.check_member(x)?;
        self.check_member(y)?;
        Ok(self.combine(lambda, x, y))
    }

    fn check_member(&self, x: &Self::Elem) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(domain!("{x:?} is not an element of {}", self.space_id()))
        }
    }
}

/// Spaces that can draw random members, for seeded law suites.
pub trait RandomElement: ConvexSpace {
    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Elem;
}

impl<S: ConvexSpace + ?Sized> ConvexSpace for &S {
    type Elem = S::Elem;
    fn space_id(&self) -> String {
        (**self).space_id()
    }
    fn contains(&self, x: &Self::Elem) -> bool {
        (**self).contains(x)
    }
    fn combine(&self, lambda: &Coeff, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        (**self).combine(lambda, x, y)
    }
    fn structure_map(&self, d: &Dist<Self::Elem>) -> Option<Self::Elem> {
        (**self).structure_map(d)
    }
}

impl<S: RandomElement + ?Sized> RandomElement for &S {
    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Elem {
        (**self).random_element(rng)
    }
}

/// Checked binary combination `λx + (1-λ)y`.
pub fn cc<S: ConvexSpace + ?Sized>(
    space: &S,
    lambda: &Coeff,
    x: &S::Elem,
    y: &S::Elem,
) -> Result<S::Elem> {
    space.cc(lambda, x, y)
}

/// Validates an n-ary weight vector and returns the indices with nonzero
/// weight together with the binary coefficients of the left-to-right
/// reduction.
///
/// The reduction peels the last weight at every step:
/// `Σ wᵢxᵢ = cc(1-wₙ, Σ_{i<n} (wᵢ/(1-wₙ)) xᵢ, xₙ)`, so the returned
/// coefficient for step `k` is `(w₁+…+w_{k-1}) / (w₁+…+w_k)`.
pub fn nary_coefficients(weights: &[Coeff]) -> Result<(Vec<usize>, Vec<Coeff>)> {
    if weights.is_empty() {
        return Err(domain!("empty convex combination"));
    }
    let total: Rational = weights.iter().map(Coeff::value).sum();
    if !total.is_one() {
        return Err(validation!("weights sum to {total}, not 1"));
    }
    let kept: Vec<usize> = (0..weights.len()).filter(|&i| !weights[i].is_zero()).collect();
    let mut steps = Vec::with_capacity(kept.len().saturating_sub(1));
    let mut partial = weights[kept[0]].value().clone();
    for &i in &kept[1..] {
        let next = &partial + weights[i].value();
        steps.push(Coeff::try_from(&partial / &next)?);
        partial = next;
    }
    Ok((kept, steps))
}

/// The n-ary convex combination `Σ wᵢxᵢ` as iterated binary combinations.
pub fn cc_nary<S: ConvexSpace + ?Sized>(
    space: &S,
    weights: &[Coeff],
    xs: &[S::Elem],
) -> Result<S::Elem> {
    if weights.len() != xs.len() {
        return Err(domain!("{} weights for {} points", weights.len(), xs.len()));
    }
    let (kept, steps) = nary_coefficients(weights)?;
    for x in xs {
        space.check_member(x)?;
    }
    let mut acc = xs[kept[0]].clone();
    for (&i, step) in kept[1..].iter().zip(&steps) {
        acc = space.combine(step, &acc, &xs[i]);
    }
    Ok(acc)
}

/// A full binary bracketing of a set of labelled leaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bracketing {
    Leaf(usize),
    Node(Box<Bracketing>, Box<Bracketing>),
}

impl Bracketing {
    /// All `(2n-3)!!` unordered full binary trees over the given leaves.
    pub fn all(leaves: &[usize]) -> Vec<Bracketing> {
        match leaves {
            [] => Vec::new(),
            [only] => vec![Bracketing::Leaf(*only)],
            [first, rest @ ..] => {
                let mut out = Vec::new();
                // Each split lists `first` on the left, so every unordered
                // split is produced exactly once.
                let n = rest.len();
                for mask in 0..(1u32 << n) {
                    if mask == (1u32 << n) - 1 {
                        continue;
                    }
                    let mut left = vec![*first];
                    let mut right = Vec::new();
                    for (j, &leaf) in rest.iter().enumerate() {
                        if mask & (1 << j) != 0 {
                            left.push(leaf);
                        } else {
                            right.push(leaf);
                        }
                    }
                    for l in Bracketing::all(&left) {
                        for r in Bracketing::all(&right) {
                            out.push(Bracketing::Node(Box::new(l.clone()), Box::new(r)));
                        }
                    }
                }
                out
            }
        }
    }

    fn weight(&self, weights: &[Coeff]) -> Rational {
        match self {
            Bracketing::Leaf(i) => weights[*i].value().clone(),
            Bracketing::Node(l, r) => l.weight(weights) + r.weight(weights),
        }
    }

    /// Evaluates the bracketing with renormalized weights. All leaf weights
    /// must be positive.
    pub fn evaluate<S: ConvexSpace + ?Sized>(
        &self,
        space: &S,
        weights: &[Coeff],
        xs: &[S::Elem],
    ) -> Result<S::Elem> {
        match self {
            Bracketing::Leaf(i) => Ok(xs[*i].clone()),
            Bracketing::Node(l, r) => {
                let wl = l.weight(weights);
                let wr = r.weight(weights);
                let total = &wl + &wr;
                if total.is_zero() {
                    return Err(domain!("bracketing over zero total weight"));
                }
                let lambda = Coeff::try_from(&wl / &total)?;
                let a = l.evaluate(space, weights, xs)?;
                let b = r.evaluate(space, weights, xs)?;
                Ok(space.combine(&lambda, &a, &b))
            }
        }
    }
}

/// Names of every law this crate checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    UnitLaw,
    UnitOne,
    Idempotency,
    ParametricCommutativity,
    DeformedAssociativity,
    NaryBracketing,
    ConvexMap,
    AlgebraUnit,
    AlgebraAssociativity,
    Functoriality,
    IdentityPreservation,
    ProductProjection,
    TensorToProduct,
    FinMapEmbedding,
    CcRoundtrip,
    StructureMapRoundtrip,
    StructureMapAgreement,
    MonadLeftUnit,
    MonadRightUnit,
    MonadAssociativity,
    CoefficientChangeUnit,
    CoefficientChangeMultiplication,
}

impl Law {
    pub const ALL: [Law; 22] = [
        Law::UnitLaw,
        Law::UnitOne,
        Law::Idempotency,
        Law::ParametricCommutativity,
        Law::DeformedAssociativity,
        Law::NaryBracketing,
        Law::ConvexMap,
        Law::AlgebraUnit,
        Law::AlgebraAssociativity,
        Law::Functoriality,
        Law::IdentityPreservation,
        Law::ProductProjection,
        Law::TensorToProduct,
        Law::FinMapEmbedding,
        Law::CcRoundtrip,
        Law::StructureMapRoundtrip,
        Law::StructureMapAgreement,
        Law::MonadLeftUnit,
        Law::MonadRightUnit,
        Law::MonadAssociativity,
        Law::CoefficientChangeUnit,
        Law::CoefficientChangeMultiplication,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::UnitLaw => "unit-law",
            Law::UnitOne => "unit-one",
            Law::Idempotency => "idempotency",
            Law::ParametricCommutativity => "parametric-commutativity",
            Law::DeformedAssociativity => "deformed-associativity",
            Law::NaryBracketing => "nary-bracketing",
            Law::ConvexMap => "convex-map",
            Law::AlgebraUnit => "algebra-unit",
            Law::AlgebraAssociativity => "algebra-associativity",
            Law::Functoriality => "functoriality",
            Law::IdentityPreservation => "identity-preservation",
            Law::ProductProjection => "product-projection",
            Law::TensorToProduct => "tensor-to-product",
            Law::FinMapEmbedding => "finmap-embedding",
            Law::CcRoundtrip => "cc-roundtrip",
            Law::StructureMapRoundtrip => "structure-map-roundtrip",
            Law::StructureMapAgreement => "structure-map-agreement",
            Law::MonadLeftUnit => "monad-left-unit",
            Law::MonadRightUnit => "monad-right-unit",
            Law::MonadAssociativity => "monad-associativity",
            Law::CoefficientChangeUnit => "coefficient-change-unit",
            Law::CoefficientChangeMultiplication => "coefficient-change-multiplication",
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = Error;
    fn from_str(s: &str) -> Result<Law> {
        Law::ALL
            .iter()
            .copied()
            .find(|l| l.name() == s)
            .ok_or_else(|| Error::Parse(alloc::format!("unknown law {s:?}")))
    }
}

/// Coefficients and elements that instantiate one law check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawInputs<E> {
    pub coeffs: Vec<Coeff>,
    pub elements: Vec<E>,
}

impl<E> LawInputs<E> {
    pub fn new(coeffs: Vec<Coeff>, elements: Vec<E>) -> Self {
        LawInputs { coeffs, elements }
    }
}

/// One violated law instance: both sides of the equation that should hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure<I, O> {
    pub law: Law,
    pub inputs: I,
    pub lhs: O,
    pub rhs: O,
}

/// Outcome of a law check: how many instances were evaluated per law and
/// which ones failed. It passes iff `failures` is empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport<I, O> {
    pub counts: BTreeMap<Law, usize>,
    pub failures: Vec<Failure<I, O>>,
}

impl<I, O> Default for LawReport<I, O> {
    fn default() -> Self {
        LawReport { counts: BTreeMap::new(), failures: Vec::new() }
    }
}

impl<I, O: PartialEq> LawReport<I, O> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Counts one instance of `law` and records a failure unless `lhs == rhs`.
    pub fn record(&mut self, law: Law, inputs: impl FnOnce() -> I, lhs: O, rhs: O) -> bool {
        *self.counts.entry(law).or_insert(0) += 1;
        if lhs == rhs {
            true
        } else {
            self.failures.push(Failure { law, inputs: inputs(), lhs, rhs });
            false
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Total number of law instances evaluated.
    pub fn checked(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn checked_for(&self, law: Law) -> usize {
        self.counts.get(&law).copied().unwrap_or(0)
    }

    pub fn failed_laws(&self) -> Vec<Law> {
        let mut laws: Vec<Law> = self.failures.iter().map(|f| f.law).collect();
        laws.sort();
        laws.dedup();
        laws
    }

    pub fn merge(&mut self, other: LawReport<I, O>) {
        for (law, n) in other.counts {
            *self.counts.entry(law).or_insert(0) += n;
        }
        self.failures.extend(other.failures);
    }
}

/// Report type of the convex-space law checker.
pub type SpaceLawReport<E> = LawReport<LawInputs<E>, E>;

/// Evaluates a single convex-space law instance. Returns `Ok(None)` if it
/// holds and the failure otherwise. This is also how a serialized failure
/// is replayed.
pub fn check_case<S: ConvexSpace + ?Sized>(
    space: &S,
    law: Law,
    inputs: &LawInputs<S::Elem>,
) -> Result<Option<Failure<LawInputs<S::Elem>, S::Elem>>> {
    let mut report = SpaceLawReport::new();
    check_case_into(space, law, inputs, &mut report)?;
    Ok(report.failures.pop())
}

fn arity_error(law: Law, coeffs: usize, elements: usize) -> Error {
    domain!("law {law} cannot take {coeffs} coefficients and {elements} elements")
}

fn check_case_into<S: ConvexSpace + ?Sized>(
    space: &S,
    law: Law,
    inputs: &LawInputs<S::Elem>,
    report: &mut SpaceLawReport<S::Elem>,
) -> Result<()> {
    for x in &inputs.elements {
        space.check_member(x)?;
    }
    let cs = &inputs.coeffs;
    let es = &inputs.elements;
    let owned = || inputs.clone();
    match (law, cs.as_slice(), es.as_slice()) {
        (Law::UnitLaw, [], [x, y]) => {
            report.record(law, owned, space.combine(&Coeff::zero(), x, y), y.clone());
        }
        (Law::UnitOne, [], [x, y]) => {
            report.record(law, owned, space.combine(&Coeff::one(), x, y), x.clone());
        }
        (Law::Idempotency, [l], [x]) => {
            report.record(law, owned, space.combine(l, x, x), x.clone());
        }
        (Law::ParametricCommutativity, [l], [x, y]) => {
            let lhs = space.combine(l, x, y);
            let rhs = space.combine(&l.complement(), y, x);
            report.record(law, owned, lhs, rhs);
        }
        (Law::DeformedAssociativity, [l, m, rest @ ..], [x, y, z]) if rest.len() <= 1 => {
            let lhs = space.combine(l, &space.combine(m, x, y), z);
            let lm = l.mul(m);
            let inner = if lm.is_one() {
                // λ = μ = 1: any μ' is allowed; the driver supplies several.
                rest.first().cloned().unwrap_or_else(Coeff::one)
            } else {
                if !rest.is_empty() {
                    return Err(arity_error(law, cs.len(), es.len()));
                }
                deformed_inner_coeff(l, m)?
            };
            let rhs = space.combine(&lm, x, &space.combine(&inner, y, z));
            report.record(law, owned, lhs, rhs);
        }
        (Law::NaryBracketing, ws, xs) if ws.len() == xs.len() && !ws.is_empty() => {
            let direct = cc_nary(space, ws, xs)?;
            let kept: Vec<usize> = (0..ws.len()).filter(|&i| !ws[i].is_zero()).collect();
            let mut ok = true;
            for tree in Bracketing::all(&kept) {
                let other = tree.evaluate(space, ws, xs)?;
                if other != direct {
                    report.record(law, owned, direct.clone(), other);
                    ok = false;
                    break;
                }
            }
            if ok {
                report.record(law, owned, direct.clone(), direct);
            }
        }
        _ => return Err(arity_error(law, cs.len(), es.len())),
    }
    Ok(())
}

/// `μ' = λ(1-μ) / (1-λμ)`, defined whenever `λμ ≠ 1`.
pub fn deformed_inner_coeff(lambda: &Coeff, mu: &Coeff) -> Result<Coeff> {
    let lm = lambda.mul(mu);
    if lm.is_one() {
        return Err(domain!("inner coefficient is arbitrary when λ = μ = 1"));
    }
    Coeff::try_from(lambda.mul(&mu.complement()).value() / lm.complement().value())
}

/// The choices of `μ'` tried when `λ = μ = 1`.
fn free_mu_choices() -> [Coeff; 3] {
    [Coeff::zero(), Coeff::half(), Coeff::one()]
}

fn check_triple<S: ConvexSpace + ?Sized>(
    space: &S,
    l: &Coeff,
    m: &Coeff,
    xyz: [&S::Elem; 3],
    report: &mut SpaceLawReport<S::Elem>,
) -> Result<()> {
    let elements = vec![xyz[0].clone(), xyz[1].clone(), xyz[2].clone()];
    if l.is_one() && m.is_one() {
        for choice in free_mu_choices() {
            let inputs = LawInputs::new(vec![l.clone(), m.clone(), choice], elements.clone());
            check_case_into(space, Law::DeformedAssociativity, &inputs, report)?;
        }
        Ok(())
    } else {
        let inputs = LawInputs::new(vec![l.clone(), m.clone()], elements);
        check_case_into(space, Law::DeformedAssociativity, &inputs, report)
    }
}

fn check_pair<S: ConvexSpace + ?Sized>(
    space: &S,
    l: &Coeff,
    x: &S::Elem,
    y: &S::Elem,
    report: &mut SpaceLawReport<S::Elem>,
) -> Result<()> {
    let pair = vec![x.clone(), y.clone()];
    check_case_into(space, Law::UnitLaw, &LawInputs::new(vec![], pair.clone()), report)?;
    check_case_into(space, Law::UnitOne, &LawInputs::new(vec![], pair.clone()), report)?;
    check_case_into(space, Law::Idempotency, &LawInputs::new(vec![l.clone()], vec![x.clone()]), report)?;
    check_case_into(space, Law::ParametricCommutativity, &LawInputs::new(vec![l.clone()], pair), report)
}

/// Splits a coefficient sequence into a probability vector of length `n`
/// by stick breaking.
fn stick_breaking(sticks: &[Coeff], n: usize) -> Vec<Coeff> {
    let mut remaining = Rational::one();
    let mut out = Vec::with_capacity(n);
    for k in 0..n - 1 {
        let piece = &remaining * sticks[k % sticks.len()].value();
        remaining = &remaining - &piece;
        out.push(Coeff::try_from(piece).expect("stick piece in [0,1]"));
    }
    out.push(Coeff::try_from(remaining).expect("remainder in [0,1]"));
    out
}

/// Checks the four defining laws, `cc(1,x,y) = x`, and bracketing
/// independence of [`cc_nary`] for `n ≤ 5`, over every sampled pair/triple
/// and coefficient pair.
///
/// Fails with `Err` only when a sample is not an element of `space`.
pub fn check_convex_space_laws<S: ConvexSpace + ?Sized>(
    space: &S,
    samples: &[S::Elem],
    lambdas: &[Coeff],
) -> Result<SpaceLawReport<S::Elem>> {
    if samples.is_empty() {
        return Err(domain!("no samples"));
    }
    let mut report = SpaceLawReport::new();
    for x in samples {
        for y in samples {
            for l in lambdas {
                check_pair(space, l, x, y, &mut report)?;
            }
        }
    }
    for x in samples {
        for y in samples {
            for z in samples {
                for l in lambdas {
                    for m in lambdas {
                        check_triple(space, l, m, [x, y, z], &mut report)?;
                    }
                }
            }
        }
    }
    if !lambdas.is_empty() {
        for n in 2..=5 {
            for start in 0..samples.len() {
                let xs: Vec<S::Elem> =
                    (0..n).map(|k| samples[(start + k) % samples.len()].clone()).collect();
                let sticks: Vec<Coeff> =
                    (0..n).map(|k| lambdas[(start + k) % lambdas.len()].clone()).collect();
                let ws = stick_breaking(&sticks, n);
                check_case_into(space, Law::NaryBracketing, &LawInputs::new(ws, xs), &mut report)?;
            }
        }
    }
    Ok(report)
}

/// Seeded random variant of [`check_convex_space_laws`]: every case draws
/// fresh `x, y, z, λ, μ` and an n-ary combination with `2 ≤ n ≤ 5`.
pub fn check_convex_space_laws_random<S: RandomElement + ?Sized>(
    space: &S,
    rng: &mut dyn RngCore,
    cases: usize,
) -> Result<SpaceLawReport<S::Elem>> {
    let mut report = SpaceLawReport::new();
    for case in 0..cases {
        let x = space.random_element(rng);
        let y = space.random_element(rng);
        let z = space.random_element(rng);
        let l = random_coeff(rng);
        let m = random_coeff(rng);
        check_pair(space, &l, &x, &y, &mut report)?;
        check_triple(space, &l, &m, [&x, &y, &z], &mut report)?;
        let n = 2 + case % 4;
        let xs: Vec<S::Elem> = (0..n).map(|_| space.random_element(rng)).collect();
        let ws = crate::random::random_weights(rng, n);
        check_case_into(space, Law::NaryBracketing, &LawInputs::new(ws, xs), &mut report)?;
    }
    Ok(report)
}

/// Report type of [`check_convex_map`]: inputs live in the domain, both
/// sides in the codomain.
pub type MapLawReport<D, C> = LawReport<LawInputs<D>, C>;

/// Checks `f(λx + (1-λ)y) = λf(x) + (1-λ)f(y)` on all sampled pairs and
/// coefficients.
pub fn check_convex_map<D, C, F>(
    f: F,
    dom: &D,
    cod: &C,
    samples: &[D::Elem],
    lambdas: &[Coeff],
) -> Result<MapLawReport<D::Elem, C::Elem>>
where
    D: ConvexSpace + ?Sized,
    C: ConvexSpace + ?Sized,
    F: Fn(&D::Elem) -> C::Elem,
{
    let mut report = MapLawReport::new();
    for x in samples {
        dom.check_member(x)?;
    }
    let images: Vec<C::Elem> = samples.iter().map(&f).collect();
    for fx in &images {
        cod.check_member(fx)?;
    }
    for (x, fx) in samples.iter().zip(&images) {
        for (y, fy) in samples.iter().zip(&images) {
            for l in lambdas {
                let lhs = f(&dom.combine(l, x, y));
                cod.check_member(&lhs)?;
                let rhs = cod.combine(l, fx, fy);
                report.record(
                    Law::ConvexMap,
                    || LawInputs::new(vec![l.clone()], vec![x.clone(), y.clone()]),
                    lhs,
                    rhs,
                );
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometric::{UnitInterval, VectorSpace};
    use crate::rational::Rational;
    use crate::semilattice::OperationTable;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn bracketing_counts_are_double_factorials() {
        let counts: Vec<usize> =
            (1..=6).map(|n| Bracketing::all(&(0..n).collect::<Vec<_>>()).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 15, 105, 945]);
    }

    #[test]
    fn three_way_split_uses_two_thirds_outside_half_inside() {
        let thirds = vec![Coeff::of(1, 3); 3];
        let (kept, steps) = nary_coefficients(&thirds).unwrap();
        assert_eq!(kept, vec![0, 1, 2]);
        assert_eq!(steps, vec![Coeff::of(1, 2), Coeff::of(2, 3)]);
    }

    #[test]
    fn nary_rejects_bad_weights() {
        let v = VectorSpace::new(1);
        let pts = vec![v.point(&[q(0, 1)]), v.point(&[q(1, 1)])];
        assert!(matches!(cc_nary(&v, &[], &[]), Err(Error::Domain(_))));
        assert!(matches!(
            cc_nary(&v, &[Coeff::of(1, 2), Coeff::of(1, 3)], &pts),
            Err(Error::Validation(_))
        ));
        assert!(matches!(cc_nary(&v, &[Coeff::one()], &pts), Err(Error::Domain(_))));
    }

    #[test]
    fn nary_unit_weight_returns_first_point() {
        let v = VectorSpace::new(2);
        let pts = vec![
            v.point(&[q(7, 2), q(1, 1)]),
            v.point(&[q(0, 1), q(0, 1)]),
            v.point(&[q(5, 1), q(-3, 1)]),
        ];
        let ws = vec![Coeff::one(), Coeff::zero(), Coeff::zero()];
        assert_eq!(cc_nary(&v, &ws, &pts).unwrap(), pts[0]);
    }

    #[test]
    fn nary_matches_weighted_sum() {
        let v = VectorSpace::new(1);
        let pts: Vec<_> = [0, 1, 3].iter().map(|&t| v.point(&[q(t, 1)])).collect();
        let ws = vec![Coeff::of(1, 2), Coeff::of(1, 4), Coeff::of(1, 4)];
        // 0·1/2 + 1·1/4 + 3·1/4 = 1
        assert_eq!(cc_nary(&v, &ws, &pts).unwrap(), v.point(&[q(1, 1)]));
    }

    #[test]
    fn half_half_associativity_instance() {
        let v = VectorSpace::new(1);
        let [x, y, z] = [v.point(&[q(2, 1)]), v.point(&[q(-5, 1)]), v.point(&[q(9, 7)])];
        let h = Coeff::half();
        let lhs = v.cc(&h, &v.cc(&h, &x, &y).unwrap(), &z).unwrap();
        let rhs = v.cc(&Coeff::of(1, 4), &x, &v.cc(&Coeff::of(1, 3), &y, &z).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(deformed_inner_coeff(&h, &h).unwrap(), Coeff::of(1, 3));
    }

    #[test]
    fn unit_interval_passes_exhaustive_laws() {
        let u = UnitInterval;
        let samples = vec![q(0, 1), q(1, 1), q(1, 3), q(3, 4)];
        let lambdas = vec![Coeff::zero(), Coeff::one(), Coeff::half(), Coeff::of(2, 5)];
        let report = check_convex_space_laws(&u, &samples, &lambdas).unwrap();
        assert!(report.passed(), "{:?}", report.failures.first());
        assert!(report.checked_for(Law::DeformedAssociativity) > 0);
        assert!(report.checked_for(Law::NaryBracketing) > 0);
    }

    #[test]
    fn foreign_sample_is_a_domain_error() {
        let u = UnitInterval;
        let err = check_convex_space_laws(&u, &[q(2, 1)], &[Coeff::half()]).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(matches!(u.cc(&Coeff::half(), &q(0, 1), &q(-1, 1)), Err(Error::Domain(_))));
    }

    #[test]
    fn noncommutative_table_fails_parametric_commutativity() {
        // op(a,b) = a but op(b,a) = a as well would be commutative; here op(x,y) = x.
        let t = OperationTable::new(
            vec!["a".into(), "b".into()],
            vec![vec![0, 0], vec![1, 1]],
        )
        .unwrap();
        let report = check_convex_space_laws(&t, &[0, 1], &[Coeff::half()]).unwrap();
        assert!(report.failed_laws().contains(&Law::ParametricCommutativity));
        let f = report
            .failures
            .iter()
            .find(|f| f.law == Law::ParametricCommutativity)
            .unwrap();
        assert_ne!(f.lhs, f.rhs);
    }

    #[test]
    fn replay_reproduces_failure() {
        let t = OperationTable::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![0, 0, 2], vec![0, 1, 1], vec![2, 1, 2]],
        )
        .unwrap();
        let report = check_convex_space_laws(&t, &[0, 1, 2], &[Coeff::half()]).unwrap();
        let first = report
            .failures
            .iter()
            .find(|f| f.law == Law::DeformedAssociativity)
            .expect("non-associative table must fail");
        let again = check_case(&t, first.law, &first.inputs).unwrap().unwrap();
        assert_eq!(&again, first);
    }

    #[test]
    fn identity_and_affine_maps_are_convex_squaring_is_not() {
        let u = UnitInterval;
        let line = VectorSpace::new(1);
        let samples = vec![q(0, 1), q(1, 1), q(1, 2), q(1, 5)];
        let lambdas = vec![Coeff::zero(), Coeff::half(), Coeff::of(1, 3), Coeff::one()];
        let id = check_convex_map(|x: &Rational| x.clone(), &u, &u, &samples, &lambdas).unwrap();
        assert!(id.passed());

        let pts: Vec<_> = samples.iter().map(|t| line.point(&[t.clone()])).collect();
        let affine = |p: &crate::geometric::VecPoint| {
            line.point(&[&(&p.coords()[0] * &q(2, 1)) + &q(1, 1)])
        };
        assert!(check_convex_map(affine, &line, &line, &pts, &lambdas).unwrap().passed());

        let square = |x: &Rational| x * x;
        let report = check_convex_map(square, &u, &u, &samples, &lambdas).unwrap();
        assert!(!report.passed());
        let hit = report.failures.iter().any(|f| {
            f.inputs.coeffs == vec![Coeff::half()]
                && f.inputs.elements == vec![q(0, 1), q(1, 1)]
                && f.lhs == q(1, 4)
                && f.rhs == q(1, 2)
        });
        assert!(hit, "expected the (1/2, 0, 1) counterexample");
    }
}
