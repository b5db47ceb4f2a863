//! Convex spaces of geometric type: rational vector spaces, simplices, the
//! unit interval and its segment maps, the space of intervals, and
//! permutohedron membership.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{domain, validation, Error, Result};
use crate::giry::Dist;
use crate::kernel::{
    check_convex_map, check_convex_space_laws, ConvexSpace, MapLawReport, RandomElement,
    SpaceLawReport,
};
use crate::lp::nonnegative_solution;
use crate::random::{random_coeff, random_rational, random_weights};
use crate::rational::{Coeff, Rational};

/// A point of `ℚⁿ`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VecPoint(Vec<Rational>);

impl VecPoint {
    pub fn new(coords: Vec<Rational>) -> Self {
        VecPoint(coords)
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `λx + (1-λ)y` componentwise; both points must have equal length.
    pub fn affine_mix(lambda: &Coeff, x: &VecPoint, y: &VecPoint) -> VecPoint {
        let mu = lambda.complement();
        VecPoint(
            x.0.iter()
                .zip(&y.0)
                .map(|(a, b)| &(lambda.value() * a) + &(mu.value() * b))
                .collect(),
        )
    }

    fn weighted_sum<'a>(dim: usize, terms: impl Iterator<Item = (&'a VecPoint, &'a Coeff)>) -> VecPoint {
        let mut acc = vec![Rational::zero(); dim];
        for (p, w) in terms {
            for (slot, c) in acc.iter_mut().zip(&p.0) {
                *slot = &*slot + &(w.value() * c);
            }
        }
        VecPoint(acc)
    }
}

impl fmt::Debug for VecPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// `ℚⁿ` with `cc(λ, x, y) = λx + (1-λ)y`. Dimension zero is the one-point
/// space.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VectorSpace {
    dim: usize,
}

impl VectorSpace {
    pub fn new(dim: usize) -> Self {
        VectorSpace { dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Panics if `coords` has the wrong length.
    pub fn point(&self, coords: &[Rational]) -> VecPoint {
        assert_eq!(coords.len(), self.dim, "point of wrong dimension");
        VecPoint(coords.to_vec())
    }
}

/// `vector_space(dim)`.
pub fn vector_space(dim: usize) -> VectorSpace {
    VectorSpace::new(dim)
}

impl ConvexSpace for VectorSpace {
    type Elem = VecPoint;

    fn space_id(&self) -> String {
        format!("Q^{}", self.dim)
    }

    fn contains(&self, x: &VecPoint) -> bool {
        x.dim() == self.dim
    }

    fn combine(&self, lambda: &Coeff, x: &VecPoint, y: &VecPoint) -> VecPoint {
        VecPoint::affine_mix(lambda, x, y)
    }

    fn structure_map(&self, d: &Dist<VecPoint>) -> Option<VecPoint> {
        Some(VecPoint::weighted_sum(self.dim, d.iter()))
    }
}

impl RandomElement for VectorSpace {
    fn random_element(&self, rng: &mut dyn RngCore) -> VecPoint {
        VecPoint((0..self.dim).map(|_| random_rational(rng, 5)).collect())
    }
}

/// The standard simplex `{p ∈ ℚᵏ : p ≥ 0, Σp = 1}` spanned by `k` vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Simplex {
    vertices: usize,
}

impl Simplex {
    pub fn new(vertices: usize) -> Result<Self> {
        if vertices == 0 {
            return Err(domain!("a simplex needs at least one vertex"));
        }
        Ok(Simplex { vertices })
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn vertex(&self, i: usize) -> VecPoint {
        assert!(i < self.vertices);
        VecPoint((0..self.vertices).map(|k| if k == i { Rational::one() } else { Rational::zero() }).collect())
    }
}

impl ConvexSpace for Simplex {
    type Elem = VecPoint;

    fn space_id(&self) -> String {
        format!("simplex[{}]", self.vertices)
    }

    fn contains(&self, x: &VecPoint) -> bool {
        x.dim() == self.vertices
            && x.0.iter().all(|c| !c.is_negative())
            && x.0.iter().sum::<Rational>().is_one()
    }

    fn combine(&self, lambda: &Coeff, x: &VecPoint, y: &VecPoint) -> VecPoint {
        VecPoint::affine_mix(lambda, x, y)
    }

    fn structure_map(&self, d: &Dist<VecPoint>) -> Option<VecPoint> {
        Some(VecPoint::weighted_sum(self.vertices, d.iter()))
    }
}

impl RandomElement for Simplex {
    fn random_element(&self, rng: &mut dyn RngCore) -> VecPoint {
        let k = rng.gen_range(1..=self.vertices);
        let ws = random_weights(rng, k);
        let mut coords = vec![Rational::zero(); self.vertices];
        for w in ws {
            let i = rng.gen_range(0..self.vertices);
            coords[i] = &coords[i] + w.value();
        }
        VecPoint(coords)
    }
}

/// `[0,1] ∩ ℚ` as a subspace of `ℚ¹`, with elements stored as bare
/// rationals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct UnitInterval;

impl ConvexSpace for UnitInterval {
    type Elem = Rational;

    fn space_id(&self) -> String {
        "[0,1]".into()
    }

    fn contains(&self, x: &Rational) -> bool {
        !x.is_negative() && *x <= Rational::one()
    }

    fn combine(&self, lambda: &Coeff, x: &Rational, y: &Rational) -> Rational {
        &(lambda.value() * x) + &(lambda.complement().value() * y)
    }

    fn structure_map(&self, d: &Dist<Rational>) -> Option<Rational> {
        Some(d.iter().map(|(x, w)| w.value() * x).sum())
    }
}

impl RandomElement for UnitInterval {
    fn random_element(&self, rng: &mut dyn RngCore) -> Rational {
        random_coeff(rng).into_value()
    }
}

/// `g_{x,y}(λ) = (1-λ)x + λy`, the unique convex map `[0,1] → C` with
/// `g(0) = x` and `g(1) = y`.
pub fn segment<S: ConvexSpace + ?Sized>(
    space: &S,
    x: &S::Elem,
    y: &S::Elem,
    lambda: &Coeff,
) -> Result<S::Elem> {
    space.cc(lambda, y, x)
}

/// The affine self-map `t ↦ (1-t)y₀ + t·y₁` of the unit interval.
pub fn interval_self_map(y0: Rational, y1: Rational) -> impl Fn(&Rational) -> Rational {
    move |t| &(&(Rational::one() - t) * &y0) + &(t * &y1)
}

/// Deliberately wrong convex structures on `[0,1] ∩ ℚ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntervalPerturbation {
    /// `cc(λ, x, y) = λ²x + (1-λ²)y`.
    SquaredWeight,
    /// The standard structure transported along `φ(t) = t/(2-t)`. This is a
    /// genuine convex space, but the affine self-maps are not convex for it.
    Conjugated,
    /// `cc(λ, x, y) = min(x, y)` for interior `λ`: the chain semilattice.
    MinInterior,
    /// `cc(λ, x, y) = (1-λ)x + λy`.
    Swapped,
}

impl IntervalPerturbation {
    pub const ALL: [IntervalPerturbation; 4] = [
        IntervalPerturbation::SquaredWeight,
        IntervalPerturbation::Conjugated,
        IntervalPerturbation::MinInterior,
        IntervalPerturbation::Swapped,
    ];
}

/// The unit interval with a perturbed combination table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PerturbedInterval(pub IntervalPerturbation);

fn conjugate(t: &Rational) -> Rational {
    t / &(Rational::from_integer(2) - t)
}

fn conjugate_inv(u: &Rational) -> Rational {
    &(Rational::from_integer(2) * u.clone()) / &(Rational::one() + u)
}

impl ConvexSpace for PerturbedInterval {
    type Elem = Rational;

    fn space_id(&self) -> String {
        format!("[0,1]/{:?}", self.0)
    }

    fn contains(&self, x: &Rational) -> bool {
        UnitInterval.contains(x)
    }

    fn combine(&self, lambda: &Coeff, x: &Rational, y: &Rational) -> Rational {
        match self.0 {
            IntervalPerturbation::SquaredWeight => UnitInterval.combine(&lambda.mul(lambda), x, y),
            IntervalPerturbation::Conjugated => {
                conjugate_inv(&UnitInterval.combine(lambda, &conjugate(x), &conjugate(y)))
            }
            IntervalPerturbation::MinInterior => {
                if lambda.is_zero() {
                    y.clone()
                } else if lambda.is_one() {
                    x.clone()
                } else {
                    x.min(y).clone()
                }
            }
            IntervalPerturbation::Swapped => UnitInterval.combine(&lambda.complement(), x, y),
        }
    }
}

/// Result of [`check_interval_structure`].
#[derive(Clone, Debug)]
pub struct IntervalStructureReport {
    pub laws: SpaceLawReport<Rational>,
    /// One report per sampled pair `(y₀, y₁)`.
    pub self_maps: Vec<((Rational, Rational), MapLawReport<Rational, Rational>)>,
}

impl IntervalStructureReport {
    pub fn laws_pass(&self) -> bool {
        self.laws.passed()
    }

    pub fn self_maps_convex(&self) -> bool {
        self.self_maps.iter().all(|(_, r)| r.passed())
    }

    /// The standard interval structure is the only one passing both.
    pub fn passed(&self) -> bool {
        self.laws_pass() && self.self_maps_convex()
    }
}

/// Runs the law suite on a candidate structure on `[0,1]` and checks that
/// every affine self-map `t ↦ (1-t)y₀ + t·y₁` with `y₀, y₁` from the samples
/// is convex for it.
pub fn check_interval_structure<S>(
    space: &S,
    samples: &[Rational],
    lambdas: &[Coeff],
) -> Result<IntervalStructureReport>
where
    S: ConvexSpace<Elem = Rational> + ?Sized,
{
    let laws = check_convex_space_laws(space, samples, lambdas)?;
    let mut self_maps = Vec::new();
    for y0 in samples {
        for y1 in samples {
            let f = interval_self_map(y0.clone(), y1.clone());
            let report = check_convex_map(f, space, space, samples, lambdas)?;
            self_maps.push(((y0.clone(), y1.clone()), report));
        }
    }
    Ok(IntervalStructureReport { laws, self_maps })
}

/// A nonempty interval of `ℚ` with open or closed ends.
///
/// Either `lo < hi`, or `lo = hi` with both ends closed (a single point).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawInterval", into = "RawInterval")]
pub struct Interval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawInterval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

impl TryFrom<RawInterval> for Interval {
    type Error = Error;
    fn try_from(r: RawInterval) -> Result<Interval> {
        Interval::new(r.lo, r.hi, r.lo_closed, r.hi_closed)
    }
}

impl From<Interval> for RawInterval {
    fn from(i: Interval) -> RawInterval {
        RawInterval { lo: i.lo, hi: i.hi, lo_closed: i.lo_closed, hi_closed: i.hi_closed }
    }
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo > hi || (lo == hi && !(lo_closed && hi_closed)) {
            return Err(validation!(
                "empty interval {}{lo}, {hi}{}",
                if lo_closed { '[' } else { '(' },
                if hi_closed { ']' } else { ')' }
            ));
        }
        Ok(Interval { lo, hi, lo_closed, hi_closed })
    }

    pub fn closed(lo: Rational, hi: Rational) -> Result<Self> {
        Interval::new(lo, hi, true, true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Result<Self> {
        Interval::new(lo, hi, false, false)
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn contains_point(&self, t: &Rational) -> bool {
        let above = if self.lo_closed { *t >= self.lo } else { *t > self.lo };
        let below = if self.hi_closed { *t <= self.hi } else { *t < self.hi };
        above && below
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Minkowski combination `λI₁ + (1-λ)I₂ = {λa + (1-λ)b : a ∈ I₁, b ∈ I₂}`.
///
/// For interior `λ` an endpoint of the result is attained iff it is attained
/// in both inputs.
pub fn interval_mix(lambda: &Coeff, a: &Interval, b: &Interval) -> Interval {
    if lambda.is_zero() {
        return b.clone();
    }
    if lambda.is_one() {
        return a.clone();
    }
    let mu = lambda.complement();
    let lo = &(lambda.value() * &a.lo) + &(mu.value() * &b.lo);
    let hi = &(lambda.value() * &a.hi) + &(mu.value() * &b.hi);
    Interval {
        lo,
        hi,
        lo_closed: a.lo_closed && b.lo_closed,
        hi_closed: a.hi_closed && b.hi_closed,
    }
}

/// The convex space of nonempty intervals of `ℚ` under Minkowski mixing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct IntervalSpace;

impl ConvexSpace for IntervalSpace {
    type Elem = Interval;

    fn space_id(&self) -> String {
        "intervals(Q)".into()
    }

    fn contains(&self, _x: &Interval) -> bool {
        true
    }

    fn combine(&self, lambda: &Coeff, x: &Interval, y: &Interval) -> Interval {
        interval_mix(lambda, x, y)
    }
}

impl RandomElement for IntervalSpace {
    fn random_element(&self, rng: &mut dyn RngCore) -> Interval {
        let a = random_rational(rng, 4);
        if rng.gen_range(0..6u32) == 0 {
            return Interval::closed(a.clone(), a).expect("point interval");
        }
        let len = Rational::new(rng.gen_range(1..=12), rng.gen_range(1..=4));
        Interval::new(a.clone(), a + len, rng.gen(), rng.gen()).expect("nonempty interval")
    }
}

/// Eigenvalue and diagonal vectors for a Schur–Horn membership question.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumSpec {
    pub eigenvalues: Vec<Rational>,
    pub diagonal: Vec<Rational>,
}

/// Largest dimension accepted by [`permutohedron_contains`].
pub const MAX_PERMUTOHEDRON_DIM: usize = 5;

impl SpectrumSpec {
    pub fn new(eigenvalues: Vec<Rational>, diagonal: Vec<Rational>) -> Result<Self> {
        if eigenvalues.len() != diagonal.len() {
            return Err(validation!(
                "{} eigenvalues but {} diagonal entries",
                eigenvalues.len(),
                diagonal.len()
            ));
        }
        Ok(SpectrumSpec { eigenvalues, diagonal })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// All distinct rearrangements of `v`.
pub fn distinct_permutations(v: &[Rational]) -> Vec<Vec<Rational>> {
    fn go(prefix: &mut Vec<Rational>, rest: &mut Vec<Rational>, out: &mut BTreeSet<Vec<Rational>>) {
        if rest.is_empty() {
            out.insert(prefix.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            prefix.push(x);
            go(prefix, rest, out);
            let x = prefix.pop().expect("pushed above");
            rest.insert(i, x);
        }
    }
    let mut out = BTreeSet::new();
    go(&mut Vec::new(), &mut v.to_vec(), &mut out);
    out.into_iter().collect()
}

/// A convex combination of rearrangements of the eigenvalues that equals the
/// diagonal, if one exists.
pub fn permutohedron_witness(spec: &SpectrumSpec) -> Result<Option<Vec<(Vec<Rational>, Coeff)>>> {
    let n = spec.dim();
    if n > MAX_PERMUTOHEDRON_DIM {
        return Err(Error::Unsupported(format!(
            "permutohedron membership is enumerated for n ≤ {MAX_PERMUTOHEDRON_DIM}, got {n}"
        )));
    }
    let vertices = distinct_permutations(&spec.eigenvalues);
    // Rows: one per coordinate plus Σw = 1; columns: one per vertex.
    let mut a: Vec<Vec<Rational>> = (0..n)
        .map(|j| vertices.iter().map(|v| v[j].clone()).collect())
        .collect();
    a.push(vec![Rational::one(); vertices.len()]);
    let mut b = spec.diagonal.clone();
    b.push(Rational::one());
    Ok(nonnegative_solution(&a, &b).map(|w| {
        vertices
            .into_iter()
            .zip(w)
            .filter(|(_, wi)| !wi.is_zero())
            .map(|(v, wi)| (v, Coeff::try_from(wi).expect("weights of a convex combination")))
            .collect()
    }))
}

/// Whether the diagonal lies in the convex hull of all rearrangements of the
/// eigenvalue vector, decided by exact linear feasibility.
pub fn permutohedron_contains(spec: &SpectrumSpec) -> Result<bool> {
    Ok(permutohedron_witness(spec)?.is_some())
}

/// Majorization `a ≺ λ`: equal totals and, after sorting both in decreasing
/// order, every prefix sum of `a` is at most the one of `λ`.
pub fn is_majorized_by(a: &[Rational], lambda: &[Rational]) -> bool {
    if a.len() != lambda.len() {
        return false;
    }
    let mut a = a.to_vec();
    let mut l = lambda.to_vec();
    a.sort_by(|x, y| y.cmp(x));
    l.sort_by(|x, y| y.cmp(x));
    let mut sa = Rational::zero();
    let mut sl = Rational::zero();
    for (x, y) in a.iter().zip(&l) {
        sa = sa + x;
        sl = sl + y;
        if sa > sl {
            return false;
        }
    }
    sa == sl
}
