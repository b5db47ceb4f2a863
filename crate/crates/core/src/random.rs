//! Seeded generators for exact test data. Denominators stay small so that
//! nested combinations do not blow up.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::giry::Dist;
use crate::rational::{Coeff, Rational};

/// The deterministic generator used by every seeded suite.
pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A coefficient in `[0,1]` that hits `0`, `1` and `1/2` often and
/// otherwise has denominator at most 8.
pub fn random_coeff(rng: &mut dyn RngCore) -> Coeff {
    match rng.gen_range(0..8u32) {
        0 => Coeff::zero(),
        1 => Coeff::one(),
        2 => Coeff::half(),
        _ => {
            let q: i64 = rng.gen_range(2..=8);
            let p: i64 = rng.gen_range(1..q);
            Coeff::of(p, q)
        }
    }
}

/// A coefficient strictly inside `(0,1)`.
pub fn random_interior_coeff(rng: &mut dyn RngCore) -> Coeff {
    let q: i64 = rng.gen_range(2..=8);
    let p: i64 = rng.gen_range(1..q);
    Coeff::of(p, q)
}

/// `num/den` with `|num| ≤ bound` and `1 ≤ den ≤ 6`.
pub fn random_rational(rng: &mut dyn RngCore, bound: i64) -> Rational {
    let den: i64 = rng.gen_range(1..=6);
    let num: i64 = rng.gen_range(-bound * den..=bound * den);
    Rational::new(num, den)
}

/// A rational in `[lo, hi]` with small denominator.
pub fn random_rational_in(rng: &mut dyn RngCore, lo: &Rational, hi: &Rational) -> Rational {
    let t = random_coeff(rng);
    lo + &(t.value() * &(hi - lo))
}

/// `n` strictly positive weights summing to one.
pub fn random_weights(rng: &mut dyn RngCore, n: usize) -> Vec<Coeff> {
    assert!(n > 0);
    let raw: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    raw.into_iter().map(|r| Coeff::of(r, total)).collect()
}

/// A distribution with support of size `1..=max_support` drawn from
/// `points` (which must be nonempty).
pub fn random_dist<T: Clone + Ord>(rng: &mut dyn RngCore, points: &[T], max_support: usize) -> Dist<T> {
    assert!(!points.is_empty());
    let k = rng.gen_range(1..=max_support.max(1));
    let chosen: Vec<T> = (0..k).map(|_| points[rng.gen_range(0..points.len())].clone()).collect();
    let ws = random_weights(rng, k);
    Dist::new(chosen.into_iter().zip(ws)).expect("random weights are normalized")
}

/// A nonempty subset of `points`.
pub fn random_subset<T: Clone + Ord>(rng: &mut dyn RngCore, points: &[T], max_size: usize) -> BTreeSet<T> {
    assert!(!points.is_empty());
    let k = rng.gen_range(1..=max_size.max(1));
    (0..k).map(|_| points[rng.gen_range(0..points.len())].clone()).collect()
}

/// A nested distribution whose inner distributions are generated by `inner`.
pub fn random_nested<T: Clone + Ord>(
    rng: &mut dyn RngCore,
    outer_support: usize,
    mut inner: impl FnMut(&mut dyn RngCore) -> Dist<T>,
) -> Dist<Dist<T>> {
    let k = rng.gen_range(1..=outer_support.max(1));
    let inners: Vec<Dist<T>> = (0..k).map(|_| inner(&mut *rng)).collect();
    let ws = random_weights(rng, k);
    Dist::new(inners.into_iter().zip(ws)).expect("random weights are normalized")
}
