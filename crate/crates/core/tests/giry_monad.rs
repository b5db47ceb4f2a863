use convex_core::geometric::{vector_space, VecPoint};
use convex_core::giry::{
    barycenter, check_algebra_laws, check_algebra_laws_with, check_giry_monad_laws, dist_flatten, dist_make, dist_map,
    dist_unit, free_space, DistOfDist,
};
use convex_core::kernel::check_convex_map;
use convex_core::random::{random_coeff, random_dist, random_nested, seeded};
use convex_core::semilattice::divisor_lattice;
use convex_core::{cc, Coeff, ConvexSpace, Dist, Law, RandomElement, Rational};
use proptest::prelude::*;

fn d<T: Ord>(pairs: Vec<(T, Coeff)>) -> Dist<T> {
    dist_make(pairs).unwrap()
}

fn q(n: i64, den: i64) -> Rational {
    Rational::new(n, den)
}

fn nested(seed: u64, points: &[char], cases: usize) -> Vec<DistOfDist<char>> {
    let mut rng = seeded(seed);
    (0..cases).map(|_| random_nested(&mut rng, 3, |r| random_dist(r, points, 3))).collect()
}

fn triple_nested(seed: u64, cases: usize) -> Vec<Dist<DistOfDist<char>>> {
    let mut rng = seeded(seed);
    let pts = ['a', 'b', 'c', 'd'];
    (0..cases)
        .map(|_| random_nested(&mut rng, 2, |r| random_nested(r, 2, |r2| random_dist(r2, &pts, 3))))
        .collect()
}

#[test]
fn canonical_forms() {
    let merged = d(vec![('x', Coeff::half()), ('x', Coeff::of(1, 4)), ('y', Coeff::of(1, 4))]);
    assert_eq!(merged, d(vec![('x', Coeff::of(3, 4)), ('y', Coeff::of(1, 4))]));
    assert_eq!(d(vec![('x', Coeff::one())]), Dist::point('x'));
    let dropped = d(vec![('x', Coeff::of(1, 3)), ('y', Coeff::of(2, 3)), ('z', Coeff::zero())]);
    assert_eq!(dropped.len(), 2);
    assert_eq!(dropped.weight(&'z'), Coeff::zero());
    assert!(dist_make(vec![('x', Coeff::half())]).is_err());
}

#[test]
fn unit_map_and_flatten_examples() {
    assert_eq!(dist_unit('x'), d(vec![('x', Coeff::one())]));
    let half = d(vec![('x', Coeff::half()), ('y', Coeff::half())]);
    assert_eq!(dist_map(|_| 'c', &half), Dist::point('c'));
    assert_eq!(dist_map(|c: &char| *c, &half), half);
    assert_eq!(dist_map(|c: &char| c.to_ascii_uppercase(), &dist_unit('x')), dist_unit('X'));

    let dd = d(vec![(half.clone(), Coeff::half()), (Dist::point('y'), Coeff::half())]);
    assert_eq!(dist_flatten(&dd), d(vec![('x', Coeff::of(1, 4)), ('y', Coeff::of(3, 4))]));
    assert_eq!(dist_flatten(&dist_unit(half.clone())), half);
}

#[test]
fn free_space_examples() {
    let fs = free_space(['a', 'b']).unwrap();
    let mix = cc(&fs, &Coeff::half(), &Dist::point('a'), &Dist::point('b')).unwrap();
    assert_eq!(mix, d(vec![('a', Coeff::half()), ('b', Coeff::half())]));
    let abc = free_space(['a', 'b', 'c']).unwrap();
    let x = d(vec![('a', Coeff::half()), ('b', Coeff::half())]);
    let got = cc(&abc, &Coeff::of(1, 3), &x, &Dist::point('b')).unwrap();
    assert_eq!(got, d(vec![('a', Coeff::of(1, 6)), ('b', Coeff::of(5, 6))]));
    assert!(!abc.contains(&Dist::point('z')));
}

#[test]
fn barycenter_examples() {
    let line = vector_space(1);
    let p = |t: i64| line.point(&[q(t, 1)]);
    assert_eq!(barycenter(&line, &dist_unit(p(5))).unwrap(), p(5));
    let mid = d(vec![(p(0), Coeff::half()), (p(4), Coeff::half())]);
    assert_eq!(barycenter(&line, &mid).unwrap(), p(2));
    let lattice = divisor_lattice(12).unwrap();
    let (four, six) = (lattice.index_of("4").unwrap(), lattice.index_of("6").unwrap());
    let m = barycenter(&lattice, &d(vec![(four, Coeff::half()), (six, Coeff::half())])).unwrap();
    assert_eq!(lattice.label(m), "2");
}

#[test]
fn algebra_laws_hold_for_free_and_vector_spaces() {
    let fs = free_space(['a', 'b']).unwrap();
    let mut rng = seeded(11);
    let dists: Vec<DistOfDist<Dist<char>>> = (0..100)
        .map(|_| {
            random_nested(&mut rng, 3, |r| {
                let pts = [fs.random_element(r), fs.random_element(r)];
                random_dist(r, &pts, 2)
            })
        })
        .collect();
    assert!(check_algebra_laws(&fs, &dists).unwrap().passed());

    let plane = vector_space(2);
    let nested_pts: Vec<DistOfDist<VecPoint>> = (0..100)
        .map(|_| {
            random_nested(&mut rng, 3, |r| {
                let pts: Vec<VecPoint> = (0..3).map(|_| plane.random_element(r)).collect();
                random_dist(r, &pts, 3)
            })
        })
        .collect();
    assert!(check_algebra_laws(&plane, &nested_pts).unwrap().passed());
}

#[test]
fn corrupted_barycenter_fails_the_multiplication_square() {
    let line = vector_space(1);
    let p = |t: i64| line.point(&[q(t, 1)]);
    // Folds with the raw weights instead of renormalized ones.
    let corrupted = |dist: &Dist<VecPoint>| -> convex_core::Result<VecPoint> {
        let mut it = dist.iter();
        let (first, _) = it.next().unwrap();
        let mut acc = first.clone();
        for (x, w) in it {
            acc = line.combine(w, x, &acc);
        }
        Ok(acc)
    };
    let inner = d(vec![(p(0), Coeff::of(1, 3)), (p(3), Coeff::of(1, 3)), (p(9), Coeff::of(1, 3))]);
    let dd = d(vec![(inner, Coeff::half()), (dist_unit(p(6)), Coeff::half())]);
    let r = check_algebra_laws_with(&line, corrupted, &[dd]).unwrap();
    assert_eq!(r.failed_laws(), vec![Law::AlgebraAssociativity]);
}

#[test]
fn giry_monad_laws_on_random_samples() {
    let r = check_giry_monad_laws(&triple_nested(5, 200));
    assert!(r.passed());
    assert!(r.checked_for(Law::MonadAssociativity) >= 200);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dist_invariants(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let dd = random_nested(&mut rng, 3, |r| random_dist(r, &['a', 'b', 'c'], 4));
        for dist in dd.points().chain(std::iter::once(&dist_flatten(&dd))) {
            let total: Rational = dist.weights().map(Coeff::value).sum();
            prop_assert!(total.is_one());
            prop_assert!(dist.weights().all(|w| !w.is_zero()));
            let pts: Vec<&char> = dist.points().collect();
            prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn equality_is_by_total_weight(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = random_dist(&mut rng, &['a', 'b', 'c'], 4);
        let mut pairs = a.clone().into_pairs();
        pairs.reverse();
        // Split each weight in two pieces and re-merge.
        let split: Vec<(char, Coeff)> = pairs
            .into_iter()
            .flat_map(|(x, w)| {
                let half = Coeff::try_from(w.value() / &q(2, 1)).unwrap();
                [(x, half.clone()), (x, half)]
            })
            .collect();
        prop_assert_eq!(d(split), a);
    }

    #[test]
    fn unit_laws_and_functoriality(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let dist = random_dist(&mut rng, &[0u8, 1, 2, 3, 4], 4);
        prop_assert_eq!(dist_flatten(&dist_unit(dist.clone())), dist.clone());
        prop_assert_eq!(dist_flatten(&dist_map(|x| dist_unit(*x), &dist)), dist.clone());
        let h = |x: &u8| x % 3;
        let g = |x: &u8| x * 2;
        prop_assert_eq!(dist_map(|x| g(&h(x)), &dist), dist_map(g, &dist_map(h, &dist)));
    }

    #[test]
    fn free_spaces_are_algebras(seed in any::<u64>(), size in 1usize..=6) {
        let fs = free_space(0..size).unwrap();
        let mut rng = seeded(seed);
        let samples: Vec<DistOfDist<Dist<usize>>> = (0..4)
            .map(|_| random_nested(&mut rng, 3, |r| {
                let pts: Vec<Dist<usize>> = (0..3).map(|_| fs.random_element(r)).collect();
                random_dist(r, &pts, 3)
            }))
            .collect();
        prop_assert!(check_algebra_laws(&fs, &samples).unwrap().passed());
    }

    #[test]
    fn barycenter_and_dist_map_are_convex(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let plane = vector_space(2);
        let pts: Vec<VecPoint> = (0..3).map(|_| plane.random_element(&mut rng)).collect();
        let fs = free_space(pts.clone()).unwrap();
        let samples: Vec<Dist<VecPoint>> = (0..3).map(|_| random_dist(&mut rng, &pts, 3)).collect();
        let lambdas = vec![Coeff::zero(), random_coeff(&mut rng), Coeff::one()];
        let bary = |dist: &Dist<VecPoint>| barycenter(&plane, dist).unwrap();
        prop_assert!(check_convex_map(bary, &fs, &plane, &samples, &lambdas).unwrap().passed());

        let letters = free_space(['a', 'b', 'c', 'd']).unwrap();
        let collapse = free_space(['a', 'b']).unwrap();
        let f = |c: &char| if *c < 'c' { 'a' } else { 'b' };
        let ds: Vec<Dist<char>> = (0..3).map(|_| letters.random_element(&mut rng)).collect();
        prop_assert!(check_convex_map(|x: &Dist<char>| dist_map(f, x), &letters, &collapse, &ds, &lambdas).unwrap().passed());
    }

    #[test]
    fn giry_laws_on_nested(seed in any::<u64>()) {
        prop_assert!(check_giry_monad_laws(&triple_nested(seed, 5)).passed());
        prop_assert!(nested(seed, &['p', 'q'], 3).iter().all(|dd| dist_flatten(dd).len() <= 2));
    }
}
