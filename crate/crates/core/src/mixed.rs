//! Mixed-type convex spaces: semilattice-fibered spaces `S ⋉_f C`,
//! adjoining a point at infinity, and the lottery space.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::error::{domain, validation, Result};
use crate::geometric::{Simplex, VecPoint, VectorSpace};
use crate::giry::Dist;
use crate::kernel::{check_convex_map, ConvexSpace, RandomElement};
use crate::random::{random_coeff, random_rational, seeded};
use crate::rational::{Coeff, Rational};
use crate::semilattice::{face_classifier_lattice, FiniteSemilattice};

/// A map between fibers, `C_{s'} → C_s` for `s ≤ s'`.
pub trait Transport<E> {
    fn apply(&self, x: &E) -> E;
}

impl<E, F: Fn(&E) -> E> Transport<E> for F {
    fn apply(&self, x: &E) -> E {
        self(x)
    }
}

/// `x ↦ Mx + b` between coordinate spaces; `matrix` has one row per output
/// coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    pub matrix: Vec<Vec<Rational>>,
    pub offset: Vec<Rational>,
}

impl AffineMap {
    pub fn new(matrix: Vec<Vec<Rational>>, offset: Vec<Rational>) -> Result<Self> {
        if matrix.len() != offset.len() {
            return Err(validation!("{} matrix rows but {} offsets", matrix.len(), offset.len()));
        }
        let width = matrix.first().map(Vec::len);
        if let Some(w) = width {
            if matrix.iter().any(|r| r.len() != w) {
                return Err(validation!("ragged transport matrix"));
            }
        }
        Ok(AffineMap { matrix, offset })
    }

    /// The constant map onto `target`, from any input dimension.
    pub fn constant(input_dim: usize, target: Vec<Rational>) -> Self {
        let matrix = target.iter().map(|_| alloc::vec![Rational::zero(); input_dim]).collect();
        AffineMap { matrix, offset: target }
    }

    pub fn identity(dim: usize) -> Self {
        let matrix = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        AffineMap { matrix, offset: alloc::vec![Rational::zero(); dim] }
    }

    pub fn input_dim(&self) -> Option<usize> {
        self.matrix.first().map(Vec::len)
    }

    pub fn output_dim(&self) -> usize {
        self.offset.len()
    }
}

impl Transport<VecPoint> for AffineMap {
    fn apply(&self, x: &VecPoint) -> VecPoint {
        VecPoint::new(
            self.matrix
                .iter()
                .zip(&self.offset)
                .map(|(row, b)| row.iter().zip(x.coords()).map(|(m, c)| m * c).sum::<Rational>() + b)
                .collect(),
        )
    }
}

/// Fiber types with coordinates in `ℚⁿ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AffineFiber {
    Vector(VectorSpace),
    Simplex(Simplex),
}

impl AffineFiber {
    pub fn dim(&self) -> usize {
        match self {
            AffineFiber::Vector(v) => v.dim(),
            AffineFiber::Simplex(s) => s.vertices(),
        }
    }
}

impl ConvexSpace for AffineFiber {
    type Elem = VecPoint;

    fn space_id(&self) -> String {
        match self {
            AffineFiber::Vector(v) => v.space_id(),
            AffineFiber::Simplex(s) => s.space_id(),
        }
    }

    fn contains(&self, x: &VecPoint) -> bool {
        match self {
            AffineFiber::Vector(v) => v.contains(x),
            AffineFiber::Simplex(s) => s.contains(x),
        }
    }

    fn combine(&self, lambda: &Coeff, x: &VecPoint, y: &VecPoint) -> VecPoint {
        VecPoint::affine_mix(lambda, x, y)
    }
}

impl RandomElement for AffineFiber {
    fn random_element(&self, rng: &mut dyn RngCore) -> VecPoint {
        match self {
            AffineFiber::Vector(v) => v.random_element(rng),
            AffineFiber::Simplex(s) => s.random_element(rng),
        }
    }
}

/// An element `(s, x)` with `x ∈ C_s`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FiberedElem<E> {
    pub base: usize,
    pub value: E,
}

impl<E: fmt::Debug> fmt::Debug for FiberedElem<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {:?})", self.base, self.value)
    }
}

/// `S ⋉_f C`. Transports are given on covering pairs `s ⋖ s'` only and
/// composed along chains.
pub struct FiberedSpace<F: ConvexSpace, T> {
    base: FiniteSemilattice,
    fibers: Vec<F>,
    transports: BTreeMap<(usize, usize), T>,
}

impl<F: ConvexSpace + fmt::Debug, T: fmt::Debug> fmt::Debug for FiberedSpace<F, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiberedSpace")
            .field("base", &self.base.labels())
            .field("fibers", &self.fibers)
            .field("transports", &self.transports)
            .finish()
    }
}

/// Number of random fiber elements used to validate transports.
const VALIDATION_SAMPLES: usize = 6;

impl<F, T> FiberedSpace<F, T>
where
    F: RandomElement,
    T: Transport<F::Elem>,
{
    /// Validates that transports exist exactly on covering pairs, map into
    /// the right fiber, are convex, and that all chains between two base
    /// points induce the same map (on seeded random samples).
    pub fn new(
        base: FiniteSemilattice,
        fibers: Vec<F>,
        transports: BTreeMap<(usize, usize), T>,
    ) -> Result<Self> {
        if fibers.len() != base.len() {
            return Err(validation!("{} fibers for a base of {} elements", fibers.len(), base.len()));
        }
        let covers = base.covering_pairs();
        for pair in &covers {
            if !transports.contains_key(pair) {
                return Err(validation!(
                    "missing transport for {} ≤ {}",
                    base.label(pair.0),
                    base.label(pair.1)
                ));
            }
        }
        if let Some(&(a, b)) = transports.keys().find(|p| !covers.contains(p)) {
            return Err(validation!(
                "transport given for ({}, {}), which is not a covering pair",
                label_or_index(&base, a),
                label_or_index(&base, b)
            ));
        }
        let space = FiberedSpace { base, fibers, transports };
        space.validate()?;
        Ok(space)
    }

    fn validate(&self) -> Result<()> {
        let mut rng = seeded(0x5eed);
        let lambdas = [Coeff::zero(), Coeff::of(1, 3), Coeff::half(), Coeff::one()];
        let samples: Vec<Vec<F::Elem>> = self
            .fibers
            .iter()
            .map(|c| (0..VALIDATION_SAMPLES).map(|_| c.random_element(&mut rng)).collect())
            .collect();
        for &(lo, hi) in self.transports.keys() {
            let t = &self.transports[&(lo, hi)];
            for x in &samples[hi] {
                let y = t.apply(x);
                if !self.fibers[lo].contains(&y) {
                    return Err(validation!(
                        "transport {} ≤ {} sends {x:?} outside the fiber {}",
                        self.base.label(lo),
                        self.base.label(hi),
                        self.fibers[lo].space_id()
                    ));
                }
            }
            let report = check_convex_map(|x| t.apply(x), &self.fibers[hi], &self.fibers[lo], &samples[hi], &lambdas)?;
            if let Some(f) = report.failures.first() {
                return Err(validation!(
                    "transport {} ≤ {} is not convex at {:?}",
                    self.base.label(lo),
                    self.base.label(hi),
                    f.inputs
                ));
            }
        }
        // Every chain from s down to r must induce the same map. Compare the
        // route through each lower cover c of s with the canonical route.
        let n = self.base.len();
        for s in 0..n {
            for r in 0..n {
                if r == s || !self.base.leq(r, s) {
                    continue;
                }
                for x in &samples[s] {
                    let canonical = self.transport(r, s, x);
                    for c in self.lower_covers(s) {
                        if !self.base.leq(r, c) {
                            continue;
                        }
                        let via = self.transport(r, c, &self.transports[&(c, s)].apply(x));
                        if via != canonical {
                            return Err(validation!(
                                "transports are not functorial at ({}, {}, {})",
                                self.base.label(r),
                                self.base.label(c),
                                self.base.label(s)
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn label_or_index(base: &FiniteSemilattice, i: usize) -> String {
    if i < base.len() {
        base.label(i).into()
    } else {
        format!("#{i}")
    }
}

impl<F: ConvexSpace, T: Transport<F::Elem>> FiberedSpace<F, T> {
    pub fn base(&self) -> &FiniteSemilattice {
        &self.base
    }

    pub fn fiber(&self, s: usize) -> &F {
        &self.fibers[s]
    }

    fn lower_covers(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        self.transports.keys().filter(move |(_, hi)| *hi == s).map(|(lo, _)| *lo)
    }

    /// `f_{r,s}(x)` for `r ≤ s`, composed along the first available chain.
    pub fn transport(&self, r: usize, s: usize, x: &F::Elem) -> F::Elem {
        if r == s {
            return x.clone();
        }
        let c = self
            .lower_covers(s)
            .find(|&c| self.base.leq(r, c))
            .expect("r < s implies a lower cover of s above r");
        self.transport(r, c, &self.transports[&(c, s)].apply(x))
    }
}

impl<F: ConvexSpace, T: Transport<F::Elem>> ConvexSpace for FiberedSpace<F, T> {
    type Elem = FiberedElem<F::Elem>;

    fn space_id(&self) -> String {
        format!("fibered{:?}", self.base.labels())
    }

    fn contains(&self, x: &Self::Elem) -> bool {
        x.base < self.base.len() && self.fibers[x.base].contains(&x.value)
    }

    fn combine(&self, lambda: &Coeff, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        if lambda.is_zero() {
            return y.clone();
        }
        if lambda.is_one() {
            return x.clone();
        }
        let r = self.base.meet(x.base, y.base);
        let xv = self.transport(r, x.base, &x.value);
        let yv = self.transport(r, y.base, &y.value);
        FiberedElem { base: r, value: self.fibers[r].combine(lambda, &xv, &yv) }
    }
}

impl<F: RandomElement, T: Transport<F::Elem>> RandomElement for FiberedSpace<F, T> {
    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Elem {
        let base = rng.gen_range(0..self.base.len());
        FiberedElem { base, value: self.fibers[base].random_element(rng) }
    }
}

/// `fibered_space_make`.
pub fn fibered_space_make<F, T>(
    base: FiniteSemilattice,
    fibers: Vec<F>,
    transports: BTreeMap<(usize, usize), T>,
) -> Result<FiberedSpace<F, T>>
where
    F: RandomElement,
    T: Transport<F::Elem>,
{
    FiberedSpace::new(base, fibers, transports)
}

/// A random fibered space over a base of at most `max_base` elements.
///
/// The base is an intersection-closed family of subsets of `{0,1,2}`. Half
/// of the time the fibers are simplices on at most `max_vertices` vertices,
/// obtained as quotients of one vertex pool that get coarser further down
/// the base, with the induced vertex maps as transports. Otherwise every
/// fiber is `ℚ^d` with translations as transports.
pub fn random_fibered_space(
    rng: &mut dyn RngCore,
    max_base: usize,
    max_vertices: usize,
) -> FiberedSpace<AffineFiber, AffineMap> {
    assert!(max_base >= 1 && max_vertices >= 1);
    let family: Vec<u8> = loop {
        let k = rng.gen_range(1..=max_base);
        let mut set: alloc::collections::BTreeSet<u8> = (0..k).map(|_| rng.gen_range(0..8u8)).collect();
        loop {
            let extra: Vec<u8> =
                set.iter().flat_map(|a| set.iter().map(move |b| a & b)).filter(|m| !set.contains(m)).collect();
            if extra.is_empty() {
                break;
            }
            set.extend(extra);
        }
        if set.len() <= max_base {
            break set.into_iter().collect();
        }
    };
    let index = |m: u8| family.iter().position(|&f| f == m).expect("closed under intersection");
    let labels = family
        .iter()
        .map(|&m| {
            let members: Vec<String> = (0..3).filter(|j| m & (1 << j) != 0).map(|j| format!("{j}")).collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    let meet = family.iter().map(|&a| family.iter().map(|&b| index(a & b)).collect()).collect();
    let base = FiniteSemilattice::new(labels, meet).expect("intersection-closed family");
    let covers = base.covering_pairs();

    if rng.gen() {
        let colorings: Vec<Vec<bool>> =
            (0..3).map(|_| (0..max_vertices).map(|_| rng.gen()).collect()).collect();
        let blocks: Vec<Vec<Vec<usize>>> = family
            .iter()
            .map(|&m| {
                let mut by_sig: BTreeMap<Vec<bool>, Vec<usize>> = BTreeMap::new();
                for v in 0..max_vertices {
                    let sig = (0..3).filter(|j| m & (1 << j) != 0).map(|j| colorings[j][v]).collect();
                    by_sig.entry(sig).or_default().push(v);
                }
                let mut bs: Vec<Vec<usize>> = by_sig.into_values().collect();
                bs.sort();
                bs
            })
            .collect();
        let fibers = blocks
            .iter()
            .map(|bs| AffineFiber::Simplex(Simplex::new(bs.len()).expect("nonempty pool")))
            .collect();
        let transports = covers
            .iter()
            .map(|&(lo, hi)| {
                let matrix = blocks[lo]
                    .iter()
                    .map(|target| {
                        blocks[hi]
                            .iter()
                            .map(|b| if target.contains(&b[0]) { Rational::one() } else { Rational::zero() })
                            .collect()
                    })
                    .collect();
                let offset = alloc::vec![Rational::zero(); blocks[lo].len()];
                ((lo, hi), AffineMap { matrix, offset })
            })
            .collect();
        FiberedSpace::new(base, fibers, transports).expect("quotient transports are functorial")
    } else {
        let dim = rng.gen_range(0..=2);
        let shifts: Vec<Vec<Rational>> =
            (0..family.len()).map(|_| (0..dim).map(|_| random_rational(rng, 3)).collect()).collect();
        let fibers = alloc::vec![AffineFiber::Vector(VectorSpace::new(dim)); family.len()];
        let transports = covers
            .iter()
            .map(|&(lo, hi)| {
                let offset = shifts[lo].iter().zip(&shifts[hi]).map(|(a, b)| a - b).collect();
                let mut t = AffineMap::identity(dim);
                t.offset = offset;
                ((lo, hi), t)
            })
            .collect();
        FiberedSpace::new(base, fibers, transports).expect("translations are functorial")
    }
}

/// The two-point face classifier `{i, f}`.
pub fn face_classifier() -> FiniteSemilattice {
    face_classifier_lattice()
}

/// An element of `C ∪ {∞}`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Extended<E> {
    Finite(E),
    Infinity,
}

impl<E: fmt::Debug> fmt::Debug for Extended<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(x) => x.fmt(f),
            Extended::Infinity => f.write_str("∞"),
        }
    }
}

/// `C ∪ {∞}` where `∞` absorbs every combination with nonzero weight on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjoinInfinity<S>(pub S);

/// `adjoin_infinity`.
pub fn adjoin_infinity<S: ConvexSpace>(space: S) -> AdjoinInfinity<S> {
    AdjoinInfinity(space)
}

impl<S: ConvexSpace> ConvexSpace for AdjoinInfinity<S> {
    type Elem = Extended<S::Elem>;

    fn space_id(&self) -> String {
        format!("{} + ∞", self.0.space_id())
    }

    fn contains(&self, x: &Self::Elem) -> bool {
        match x {
            Extended::Finite(v) => self.0.contains(v),
            Extended::Infinity => true,
        }
    }

    fn combine(&self, lambda: &Coeff, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        if lambda.is_zero() {
            return y.clone();
        }
        if lambda.is_one() {
            return x.clone();
        }
        match (x, y) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(self.0.combine(lambda, a, b)),
            _ => Extended::Infinity,
        }
    }
}

impl<S: RandomElement> RandomElement for AdjoinInfinity<S> {
    fn random_element(&self, rng: &mut dyn RngCore) -> Self::Elem {
        if rng.gen_range(0..4u32) == 0 {
            Extended::Infinity
        } else {
            Extended::Finite(self.0.random_element(rng))
        }
    }
}

/// The two prizes of the lottery.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Prize {
    A,
    B,
}

/// Either a stake `p ∈ [0,1)` or a lottery over the prizes.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LotteryElem {
    Stake(Rational),
    Prize(Dist<Prize>),
}

impl LotteryElem {
    pub fn stake(p: Rational) -> Result<Self> {
        if p.is_negative() || p >= Rational::one() {
            return Err(domain!("stake {p} is not in [0, 1)"));
        }
        Ok(LotteryElem::Stake(p))
    }

    /// The lottery paying `a` with probability `mu` and `b` otherwise.
    pub fn prize(mu: Coeff) -> Self {
        let rest = mu.complement();
        LotteryElem::Prize(Dist::new([(Prize::A, mu), (Prize::B, rest)]).expect("two-point lottery"))
    }
}

impl fmt::Debug for LotteryElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LotteryElem::Stake(p) => write!(f, "stake {p}"),
            LotteryElem::Prize(d) => write!(f, "prize {d:?}"),
        }
    }
}

/// `[0,1) ∪ Δ_{a,b}`: a stake mixed with any lottery with interior weight
/// keeps the stake branch, with the lottery counted as `1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct LotterySpace;

/// `lottery_space`.
pub fn lottery_space() -> LotterySpace {
    LotterySpace
}

impl ConvexSpace for LotterySpace {
    type Elem = LotteryElem;

    fn space_id(&self) -> String {
        "[0,1) ∪ Δ{a,b}".into()
    }

    fn contains(&self, x: &LotteryElem) -> bool {
        match x {
            LotteryElem::Stake(p) => !p.is_negative() && *p < Rational::one(),
            LotteryElem::Prize(_) => true,
        }
    }

    fn combine(&self, lambda: &Coeff, x: &LotteryElem, y: &LotteryElem) -> LotteryElem {
        if lambda.is_zero() {
            return y.clone();
        }
        if lambda.is_one() {
            return x.clone();
        }
        let mu = lambda.complement();
        let stake_of = |e: &LotteryElem| match e {
            LotteryElem::Stake(p) => p.clone(),
            LotteryElem::Prize(_) => Rational::one(),
        };
        match (x, y) {
            (LotteryElem::Prize(a), LotteryElem::Prize(b)) => LotteryElem::Prize(Dist::mix(lambda, a, b)),
            _ => LotteryElem::Stake(&(lambda.value() * &stake_of(x)) + &(mu.value() * &stake_of(y))),
        }
    }
}

impl RandomElement for LotterySpace {
    fn random_element(&self, rng: &mut dyn RngCore) -> LotteryElem {
        if rng.gen() {
            let mut p = random_rational(rng, 1).abs();
            if p >= Rational::one() {
                p = Rational::zero();
            }
            LotteryElem::Stake(p)
        } else {
            LotteryElem::prize(random_coeff(rng))
        }
    }
}
