use std::collections::BTreeMap;

use convex_core::geometric::{vector_space, Simplex, VecPoint};
use convex_core::kernel::{check_convex_map, check_convex_space_laws, check_convex_space_laws_random};
use convex_core::mixed::{
    adjoin_infinity, face_classifier, fibered_space_make, lottery_space, random_fibered_space, AffineFiber, AffineMap,
    Extended, FiberedElem, LotteryElem, Prize,
};
use convex_core::random::{random_coeff, random_interior_coeff, seeded};
use convex_core::semilattice::semilattice_make;
use convex_core::{Coeff, ConvexSpace, Dist, RandomElement, Rational};
use proptest::prelude::*;
use rand::{Rng, RngCore};

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn pt(v: &[Rational]) -> VecPoint {
    VecPoint::new(v.to_vec())
}

/// `C_i = ∗`, `C_f = ℚ¹` over the face classifier (`i = 0`, `f = 1`).
fn line_over_face_classifier() -> convex_core::mixed::FiberedSpace<AffineFiber, AffineMap> {
    let fibers = vec![AffineFiber::Vector(vector_space(0)), AffineFiber::Vector(vector_space(1))];
    let transports = BTreeMap::from([((0, 1), AffineMap::constant(1, vec![]))]);
    fibered_space_make(face_classifier(), fibers, transports).unwrap()
}

#[test]
fn fibered_face_classifier_example() {
    let s = line_over_face_classifier();
    let x = FiberedElem { base: 1, value: pt(&[q(3, 1)]) };
    let star = FiberedElem { base: 0, value: pt(&[]) };
    assert_eq!(s.cc(&Coeff::half(), &x, &star).unwrap(), star);
    assert_eq!(s.cc(&Coeff::zero(), &star, &x).unwrap(), x);
    let y = FiberedElem { base: 1, value: pt(&[q(5, 1)]) };
    assert_eq!(s.cc(&Coeff::half(), &x, &y).unwrap(), FiberedElem { base: 1, value: pt(&[q(4, 1)]) });
}

#[test]
fn adjoin_infinity_matches_the_fibered_construction() {
    let line = vector_space(1);
    let ext = adjoin_infinity(line);
    let fibered = line_over_face_classifier();
    let embed = |e: &Extended<VecPoint>| match e {
        Extended::Finite(x) => FiberedElem { base: 1, value: x.clone() },
        Extended::Infinity => FiberedElem { base: 0, value: pt(&[]) },
    };
    let mut rng = seeded(4);
    for _ in 0..300 {
        let (x, y, l) = (ext.random_element(&mut rng), ext.random_element(&mut rng), random_coeff(&mut rng));
        let lhs = embed(&ext.cc(&l, &x, &y).unwrap());
        let rhs = fibered.cc(&l, &embed(&x), &embed(&y)).unwrap();
        assert_eq!(lhs, rhs);
    }
    let p = Extended::Finite(line.point(&[q(2, 1)]));
    assert_eq!(ext.cc(&Coeff::half(), &Extended::Infinity, &p).unwrap(), Extended::Infinity);
    assert_eq!(ext.cc(&Coeff::zero(), &Extended::Infinity, &p).unwrap(), p);
}

#[test]
fn adjoin_infinity_restricts_to_the_original_space() {
    let plane = vector_space(2);
    let ext = adjoin_infinity(plane);
    let mut rng = seeded(5);
    for _ in 0..300 {
        let (x, y, l) = (plane.random_element(&mut rng), plane.random_element(&mut rng), random_coeff(&mut rng));
        let got = ext.cc(&l, &Extended::Finite(x.clone()), &Extended::Finite(y.clone())).unwrap();
        assert_eq!(got, Extended::Finite(plane.cc(&l, &x, &y).unwrap()));
    }
    assert!(check_convex_space_laws_random(&ext, &mut rng, 300).unwrap().passed());
}

#[test]
fn lottery_examples() {
    let lot = lottery_space();
    let stake = |n, d| LotteryElem::stake(q(n, d)).unwrap();
    let fair = LotteryElem::prize(Coeff::half());
    assert_eq!(lot.cc(&Coeff::half(), &stake(0, 1), &fair).unwrap(), stake(1, 2));
    assert_eq!(lot.cc(&Coeff::half(), &stake(1, 2), &stake(0, 1)).unwrap(), stake(1, 4));
    assert!(LotteryElem::stake(q(1, 1)).is_err());
    let grid: Vec<LotteryElem> =
        vec![stake(0, 1), stake(1, 3), stake(3, 4), LotteryElem::prize(Coeff::zero()), fair, LotteryElem::prize(Coeff::one())];
    let lambdas = vec![Coeff::zero(), Coeff::of(1, 4), Coeff::half(), Coeff::of(2, 3), Coeff::one()];
    assert!(check_convex_space_laws(&lot, &grid, &lambdas).unwrap().passed());
}

/// The two fibers a fibered presentation of the lottery space would need:
/// stakes `[0,1)` in `ℚ¹` and lotteries in the 2-simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum LotteryFiber {
    Stakes,
    Prizes,
}

impl ConvexSpace for LotteryFiber {
    type Elem = VecPoint;

    fn space_id(&self) -> String {
        format!("{self:?}")
    }

    fn contains(&self, x: &VecPoint) -> bool {
        match self {
            LotteryFiber::Stakes => x.dim() == 1 && !x.coords()[0].is_negative() && x.coords()[0] < Rational::one(),
            LotteryFiber::Prizes => Simplex::new(2).unwrap().contains(x),
        }
    }

    fn combine(&self, lambda: &Coeff, x: &VecPoint, y: &VecPoint) -> VecPoint {
        VecPoint::affine_mix(lambda, x, y)
    }
}

impl RandomElement for LotteryFiber {
    fn random_element(&self, rng: &mut dyn RngCore) -> VecPoint {
        match self {
            LotteryFiber::Stakes => pt(&[q(rng.gen_range(0..8), 8)]),
            LotteryFiber::Prizes => Simplex::new(2).unwrap().random_element(rng),
        }
    }
}

fn embed_lottery(e: &LotteryElem, stakes: usize, prizes: usize) -> FiberedElem<VecPoint> {
    match e {
        LotteryElem::Stake(p) => FiberedElem { base: stakes, value: pt(&[p.clone()]) },
        LotteryElem::Prize(d) => {
            let coords = [d.weight(&Prize::A).into_value(), d.weight(&Prize::B).into_value()];
            FiberedElem { base: prizes, value: pt(&coords) }
        }
    }
}

/// With two fibers the base is the two-element chain, in either
/// orientation. Search exact affine transports on a grid and confirm none
/// reproduces the lottery combination on a grid of inputs.
#[test]
fn no_fibered_presentation_reproduces_the_lottery_space() {
    let chain = || semilattice_make(vec!["lo".into(), "hi".into()], vec![vec![0, 0], vec![0, 1]]).unwrap();
    let lot = lottery_space();
    let inputs: Vec<LotteryElem> = [0, 1, 2]
        .iter()
        .map(|&k| LotteryElem::stake(q(k, 4)).unwrap())
        .chain([0, 1, 2].iter().map(|&k| LotteryElem::prize(Coeff::of(k, 2))))
        .collect();
    let lambdas = [Coeff::of(1, 4), Coeff::half(), Coeff::of(3, 4)];
    let reproduces = |space: &dyn Fn(&Coeff, &FiberedElem<VecPoint>, &FiberedElem<VecPoint>) -> FiberedElem<VecPoint>,
                      stakes: usize,
                      prizes: usize| {
        inputs.iter().all(|x| {
            inputs.iter().all(|y| {
                lambdas.iter().all(|l| {
                    let expected = embed_lottery(&lot.cc(l, x, y).unwrap(), stakes, prizes);
                    space(l, &embed_lottery(x, stakes, prizes), &embed_lottery(y, stakes, prizes)) == expected
                })
            })
        })
    };
    let stake_grid: Vec<Rational> = (0..8).map(|k| q(k, 8)).collect();
    let unit_grid: Vec<Rational> = (0..=8).map(|k| q(k, 8)).collect();
    let mut candidates = 0;

    // Stakes below prizes: a convex map Δ → [0,1) fixed by the images of
    // the two vertices.
    for fa in &stake_grid {
        for fb in &stake_grid {
            let t = AffineMap::new(vec![vec![fa.clone(), fb.clone()]], vec![Rational::zero()]).unwrap();
            let fibers = vec![LotteryFiber::Stakes, LotteryFiber::Prizes];
            let s = fibered_space_make(chain(), fibers, BTreeMap::from([((0, 1), t)])).unwrap();
            candidates += 1;
            assert!(!reproduces(&|l, x, y| s.cc(l, x, y).unwrap(), 0, 1), "f(a)={fa}, f(b)={fb}");
        }
    }
    // Prizes below stakes: a convex map [0,1) → Δ fixed by g(0) and the slope.
    for g0 in &unit_grid {
        for g1 in &unit_grid {
            let slope = g1 - g0;
            let t = AffineMap::new(vec![vec![slope.clone()], vec![-slope]], vec![g0.clone(), Rational::one() - g0])
                .unwrap();
            let fibers = vec![LotteryFiber::Prizes, LotteryFiber::Stakes];
            let s = fibered_space_make(chain(), fibers, BTreeMap::from([((0, 1), t)])).unwrap();
            candidates += 1;
            assert!(!reproduces(&|l, x, y| s.cc(l, x, y).unwrap(), 1, 0), "g(0)={g0}, g(1)={g1}");
        }
    }
    assert_eq!(candidates, 64 + 81);
}

#[test]
fn chain_of_simplices_passes_the_suite() {
    let base = semilattice_make(
        vec!["bottom".into(), "middle".into(), "top".into()],
        vec![vec![0, 0, 0], vec![0, 1, 1], vec![0, 1, 2]],
    )
    .unwrap();
    let fibers = (1..=3).map(|k| AffineFiber::Simplex(Simplex::new(k).unwrap())).collect();
    let transports = BTreeMap::from([
        ((0, 1), AffineMap::new(vec![vec![q(1, 1), q(1, 1)]], vec![q(0, 1)]).unwrap()),
        (
            (1, 2),
            AffineMap::new(vec![vec![q(1, 1), q(0, 1), q(1, 2)], vec![q(0, 1), q(1, 1), q(1, 2)]], vec![q(0, 1), q(0, 1)])
                .unwrap(),
        ),
    ]);
    let s = fibered_space_make(base, fibers, transports).unwrap();
    assert!(check_convex_space_laws_random(&s, &mut seeded(6), 500).unwrap().passed());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_fibered_spaces_pass(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let s = random_fibered_space(&mut rng, 5, 3);
        let r = check_convex_space_laws_random(&s, &mut rng, 40).unwrap();
        prop_assert!(r.passed(), "{:?}", r.failures.first());
    }

    #[test]
    fn base_point_is_the_meet_and_projection_is_convex(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let s = random_fibered_space(&mut rng, 5, 3);
        let (x, y) = (s.random_element(&mut rng), s.random_element(&mut rng));
        let l = random_interior_coeff(&mut rng);
        prop_assert_eq!(s.cc(&l, &x, &y).unwrap().base, s.base().meet(x.base, y.base));
        for e in [Coeff::zero(), Coeff::one()] {
            let got = s.cc(&e, &x, &y).unwrap();
            prop_assert_eq!(got, if e.is_one() { x.clone() } else { y.clone() });
        }
        let samples: Vec<_> = (0..4).map(|_| s.random_element(&mut rng)).collect();
        let lambdas = vec![Coeff::zero(), l, Coeff::one()];
        let project = |e: &FiberedElem<VecPoint>| e.base;
        prop_assert!(check_convex_map(project, &s, s.base(), &samples, &lambdas).unwrap().passed());
    }

    #[test]
    fn lottery_laws_on_random_samples(seed in any::<u64>()) {
        let lot = lottery_space();
        let r = check_convex_space_laws_random(&lot, &mut seeded(seed), 40).unwrap();
        prop_assert!(r.passed());
        let mut rng = seeded(seed);
        let d = Dist::point(Prize::A);
        let stake = LotteryElem::stake(q(rng.gen_range(0..4), 4)).unwrap();
        let l = random_interior_coeff(&mut rng);
        let got = lot.cc(&l, &stake, &LotteryElem::Prize(d)).unwrap();
        prop_assert!(matches!(got, LotteryElem::Stake(_)));
    }
}
