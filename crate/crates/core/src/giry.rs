//! Finitely supported distributions, the finitary Giry monad, free convex
//! spaces, and the barycenter (structure map) of a convex space.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{domain, validation, Error, Result};
use crate::kernel::{cc_nary, ConvexSpace, Law, LawReport, RandomElement};
use crate::random::random_dist;
use crate::rational::{Coeff, Rational};

/// A finite formal convex combination `Σ λᵢ xᵢ`.
///
/// Always canonical: points are distinct and sorted, every weight is
/// positive and the weights sum to one. Two distributions are therefore
/// equal exactly when they assign the same total weight to every point.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(T, Coeff)>", into = "Vec<(T, Coeff)>")]
#[serde(bound(
    serialize = "T: Clone + Serialize",
    deserialize = "T: Ord + Deserialize<'de>"
))]
pub struct Dist<T: Ord> {
    support: Vec<(T, Coeff)>,
}

/// A distribution over distributions, the input of the monad multiplication.
pub type DistOfDist<T> = Dist<Dist<T>>;

impl<T: Ord> Dist<T> {
    /// Builds a canonical distribution, merging repeated points and dropping
    /// zero weights.
    pub fn new(pairs: impl IntoIterator<Item = (T, Coeff)>) -> Result<Self> {
        let mut merged: BTreeMap<T, Rational> = BTreeMap::new();
        let mut any = false;
        for (x, w) in pairs {
            any = true;
            let slot = merged.entry(x).or_insert_with(Rational::zero);
            *slot = &*slot + w.value();
        }
        if !any {
            return Err(domain!("empty distribution"));
        }
        let total: Rational = merged.values().sum();
        if !total.is_one() {
            return Err(validation!("weights sum to {total}, not 1"));
        }
        Ok(Self::from_merged(merged))
    }

    fn from_merged(merged: BTreeMap<T, Rational>) -> Self {
        let support = merged
            .into_iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(x, w)| (x, Coeff::try_from(w).expect("partial weight of a distribution")))
            .collect();
        Dist { support }
    }

    /// The point mass at `x`.
    pub fn point(x: T) -> Self {
        Dist { support: alloc::vec![(x, Coeff::one())] }
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&T, &Coeff)> {
        self.support.iter().map(|(x, w)| (x, w))
    }

    pub fn points(&self) -> impl Iterator<Item = &T> {
        self.support.iter().map(|(x, _)| x)
    }

    pub fn weights(&self) -> impl Iterator<Item = &Coeff> {
        self.support.iter().map(|(_, w)| w)
    }

    /// Weight of `x`, zero if `x` is outside the support.
    pub fn weight(&self, x: &T) -> Coeff {
        match self.support.binary_search_by(|(p, _)| p.cmp(x)) {
            Ok(i) => self.support[i].1.clone(),
            Err(_) => Coeff::zero(),
        }
    }

    /// Pushforward along `f`; weights of colliding images add up.
    pub fn map<U: Ord>(&self, mut f: impl FnMut(&T) -> U) -> Dist<U> {
        let mut merged: BTreeMap<U, Rational> = BTreeMap::new();
        for (x, w) in &self.support {
            let slot = merged.entry(f(x)).or_insert_with(Rational::zero);
            *slot = &*slot + w.value();
        }
        Dist::from_merged(merged)
    }

    /// Fallible pushforward.
    pub fn try_map<U: Ord>(&self, mut f: impl FnMut(&T) -> Result<U>) -> Result<Dist<U>> {
        let mut merged: BTreeMap<U, Rational> = BTreeMap::new();
        for (x, w) in &self.support {
            let slot = merged.entry(f(x)?).or_insert_with(Rational::zero);
            *slot = &*slot + w.value();
        }
        Ok(Dist::from_merged(merged))
    }

    pub fn into_pairs(self) -> Vec<(T, Coeff)> {
        self.support
    }
}

impl<T: Ord + Clone> Dist<T> {
    /// Pointwise mixture `λa + (1-λ)b`.
    pub fn mix(lambda: &Coeff, a: &Dist<T>, b: &Dist<T>) -> Dist<T> {
        let mut merged: BTreeMap<T, Rational> = BTreeMap::new();
        let mu = lambda.complement();
        for (x, w) in &a.support {
            let slot = merged.entry(x.clone()).or_insert_with(Rational::zero);
            *slot = &*slot + &(lambda.value() * w.value());
        }
        for (x, w) in &b.support {
            let slot = merged.entry(x.clone()).or_insert_with(Rational::zero);
            *slot = &*slot + &(mu.value() * w.value());
        }
        Dist::from_merged(merged)
    }

    /// Monad multiplication: the weight of `x` is `Σᵢ λᵢ μᵢ(x)`.
    pub fn flatten(dd: &Dist<Dist<T>>) -> Dist<T> {
        let mut merged: BTreeMap<T, Rational> = BTreeMap::new();
        for (inner, outer_w) in &dd.support {
            for (x, w) in &inner.support {
                let slot = merged.entry(x.clone()).or_insert_with(Rational::zero);
                *slot = &*slot + &(outer_w.value() * w.value());
            }
        }
        Dist::from_merged(merged)
    }

    pub fn support_set(&self) -> BTreeSet<T> {
        self.points().cloned().collect()
    }
}

impl<T: Ord + Clone> From<Dist<T>> for Vec<(T, Coeff)> {
    fn from(d: Dist<T>) -> Self {
        d.support
    }
}

impl<T: Ord> TryFrom<Vec<(T, Coeff)>> for Dist<T> {
    type Error = Error;
    fn try_from(v: Vec<(T, Coeff)>) -> Result<Self> {
        Dist::new(v)
    }
}

impl<T: Ord + fmt::Debug> fmt::Debug for Dist<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, w)) in self.support.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x:?}: {w}")?;
        }
        f.write_str("}")
    }
}

/// `dist_make`: canonical distribution from weighted pairs.
pub fn dist_make<T: Ord>(pairs: impl IntoIterator<Item = (T, Coeff)>) -> Result<Dist<T>> {
    Dist::new(pairs)
}

/// `η`: the point mass.
pub fn dist_unit<T: Ord>(x: T) -> Dist<T> {
    Dist::point(x)
}

/// The functor action of `Δ` on maps.
pub fn dist_map<T: Ord, U: Ord>(f: impl FnMut(&T) -> U, d: &Dist<T>) -> Dist<U> {
    d.map(f)
}

/// `μ`: the monad multiplication.
pub fn dist_flatten<T: Ord + Clone>(dd: &DistOfDist<T>) -> Dist<T> {
    Dist::flatten(dd)
}

/// The free convex space `Δ_X` over a finite carrier, with pointwise
/// mixtures as convex combinations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeSpace<T: Ord> {
    carrier: BTreeSet<T>,
}

impl<T: Ord + Clone + fmt::Debug> FreeSpace<T> {
    pub fn carrier(&self) -> &BTreeSet<T> {
        &self.carrier
    }

    /// The vertex `x̲` of the simplex.
    pub fn vertex(&self, x: T) -> Result<Dist<T>> {
        if !self.carrier.contains(&x) {
            return Err(domain!("{x:?} is not in the carrier"));
        }
        Ok(Dist::point(x))
    }
}

/// The free convex space on a nonempty finite carrier.
pub fn free_space<T: Ord + Clone + fmt::Debug>(carrier: impl IntoIterator<Item = T>) -> Result<FreeSpace<T>> {
    let carrier: BTreeSet<T> = carrier.into_iter().collect();
    if carrier.is_empty() {
        return Err(domain!("free space over an empty carrier"));
    }
    Ok(FreeSpace { carrier })
}

impl<T: Ord + Clone + fmt::Debug> ConvexSpace for FreeSpace<T> {
    type Elem = Dist<T>;

    fn space_id(&self) -> String {
        format!("free{:?}", self.carrier)
    }

    fn contains(&self, d: &Dist<T>) -> bool {
        d.points().all(|x| self.carrier.contains(x))
    }

    fn combine(&self, lambda: &Coeff, a: &Dist<T>, b: &Dist<T>) -> Dist<T> {
        Dist::mix(lambda, a, b)
    }

    fn structure_map(&self, d: &Dist<Dist<T>>) -> Option<Dist<T>> {
        Some(Dist::flatten(d))
    }
}

impl<T: Ord + Clone + fmt::Debug> RandomElement for FreeSpace<T> {
    fn random_element(&self, rng: &mut dyn RngCore) -> Dist<T> {
        let points: Vec<T> = self.carrier.iter().cloned().collect();
        random_dist(rng, &points, points.len())
    }
}

/// The structure map `m : Δ_C → C`, evaluating a formal combination with
/// the space's binary operations (see [`cc_nary`]). Satisfies `m(x̲) = x`.
pub fn barycenter<S: ConvexSpace + ?Sized>(space: &S, d: &Dist<S::Elem>) -> Result<S::Elem> {
    let (xs, ws): (Vec<S::Elem>, Vec<Coeff>) =
        d.iter().map(|(x, w)| (x.clone(), w.clone())).unzip();
    cc_nary(space, &ws, &xs)
}

/// Report type of the algebra-law checker.
pub type AlgebraLawReport<E> = LawReport<DistOfDist<E>, E>;

/// Checks both algebra diagrams for the barycenter of `space`:
/// `m(x̲) = x` for every point occurring in the samples, and
/// `m(Δ_m(dd)) = m(μ(dd))` for every nested sample.
pub fn check_algebra_laws<S: ConvexSpace + ?Sized>(
    space: &S,
    nested: &[DistOfDist<S::Elem>],
) -> Result<AlgebraLawReport<S::Elem>> {
    check_algebra_laws_with(space, |d| barycenter(space, d), nested)
}

/// [`check_algebra_laws`] for an arbitrary candidate structure map.
pub fn check_algebra_laws_with<S, M>(
    space: &S,
    m: M,
    nested: &[DistOfDist<S::Elem>],
) -> Result<AlgebraLawReport<S::Elem>>
where
    S: ConvexSpace + ?Sized,
    M: Fn(&Dist<S::Elem>) -> Result<S::Elem>,
{
    let mut report = AlgebraLawReport::new();
    let mut seen = BTreeSet::new();
    for dd in nested {
        for inner in dd.points() {
            for x in inner.points() {
                space.check_member(x)?;
                if seen.insert(x.clone()) {
                    let lhs = m(&Dist::point(x.clone()))?;
                    report.record(
                        Law::AlgebraUnit,
                        || Dist::point(Dist::point(x.clone())),
                        lhs,
                        x.clone(),
                    );
                }
            }
        }
        let lhs = m(&dd.try_map(|inner| m(inner))?)?;
        let rhs = m(&Dist::flatten(dd))?;
        report.record(Law::AlgebraAssociativity, || dd.clone(), lhs, rhs);
    }
    Ok(report)
}

/// Report type of [`check_giry_monad_laws`].
pub type MonadLawReport<T> = LawReport<Dist<DistOfDist<T>>, Dist<T>>;

/// The monad laws of the finitary Giry monad on triply nested samples:
/// `μ ∘ Δη = id`, `μ ∘ η = id` on every inner distribution, and
/// `μ ∘ μ = μ ∘ Δμ` on the whole sample.
pub fn check_giry_monad_laws<T: Ord + Clone>(samples: &[Dist<DistOfDist<T>>]) -> MonadLawReport<T> {
    let mut report = MonadLawReport::new();
    for ddd in samples {
        for dd in ddd.points() {
            for d in dd.points() {
                let left = Dist::flatten(&d.map(|x| Dist::point(x.clone())));
                report.record(Law::MonadLeftUnit, || ddd.clone(), left, d.clone());
                let right = Dist::flatten(&Dist::point(d.clone()));
                report.record(Law::MonadRightUnit, || ddd.clone(), right, d.clone());
            }
        }
        let outer_first = Dist::flatten(&Dist::flatten(ddd));
        let inner_first = Dist::flatten(&ddd.map(Dist::flatten));
        report.record(Law::MonadAssociativity, || ddd.clone(), outer_first, inner_first);
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn c(p: i64, q: i64) -> Coeff {
        Coeff::of(p, q)
    }

    #[test]
    fn make_merges_duplicates_and_drops_zeros() {
        let d = dist_make([('x', c(1, 2)), ('x', c(1, 4)), ('y', c(1, 4))]).unwrap();
        assert_eq!(d.into_pairs(), vec![('x', c(3, 4)), ('y', c(1, 4))]);
        let d = dist_make([('x', c(1, 3)), ('y', c(2, 3)), ('z', c(0, 1))]).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.weight(&'z'), Coeff::zero());
        assert_eq!(dist_make([('x', Coeff::one())]).unwrap(), dist_unit('x'));
    }

    #[test]
    fn make_rejects_empty_and_unnormalized() {
        assert!(matches!(dist_make(Vec::<(char, Coeff)>::new()), Err(Error::Domain(_))));
        assert!(matches!(dist_make([('x', c(1, 2))]), Err(Error::Validation(_))));
    }

    #[test]
    fn constant_map_collapses_support() {
        let d = dist_make([('x', c(1, 2)), ('y', c(1, 2))]).unwrap();
        assert_eq!(dist_map(|_| 'c', &d), dist_unit('c'));
        assert_eq!(dist_map(|x| *x, &d), d);
    }

    #[test]
    fn flatten_expands_linearly() {
        let inner = dist_make([('x', c(1, 2)), ('y', c(1, 2))]).unwrap();
        let dd = dist_make([(inner, c(1, 2)), (dist_unit('y'), c(1, 2))]).unwrap();
        let flat = dist_flatten(&dd);
        assert_eq!(flat, dist_make([('x', c(1, 4)), ('y', c(3, 4))]).unwrap());
        let d = dist_make([('a', c(2, 5)), ('b', c(3, 5))]).unwrap();
        assert_eq!(dist_flatten(&dist_unit(d.clone())), d);
    }

    #[test]
    fn free_space_mixtures() {
        let s = free_space(['a', 'b']).unwrap();
        let ab = s.cc(&Coeff::half(), &dist_unit('a'), &dist_unit('b')).unwrap();
        assert_eq!(ab, dist_make([('a', c(1, 2)), ('b', c(1, 2))]).unwrap());
        let got = s.cc(&c(1, 3), &ab, &dist_unit('b')).unwrap();
        assert_eq!(got, dist_make([('a', c(1, 6)), ('b', c(5, 6))]).unwrap());
        assert!(free_space(Vec::<char>::new()).is_err());
        assert!(s.cc(&Coeff::half(), &dist_unit('z'), &ab).is_err());
    }

    #[test]
    fn serde_round_trip_validates() {
        let d = dist_make([(2u32, c(1, 3)), (1u32, c(2, 3))]).unwrap();
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"[[1,"2/3"],[2,"1/3"]]"#);
        assert_eq!(serde_json::from_str::<Dist<u32>>(&json).unwrap(), d);
        assert!(serde_json::from_str::<Dist<u32>>(r#"[[1,"1/3"]]"#).is_err());
    }
}
