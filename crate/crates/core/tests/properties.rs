mod common;

use itertools::Itertools;
use num_traits::{One, Zero};
use proptest::prelude::*;

use posassoc::analysis::{abc_scan, harris_criterion, pa_check, sahi_polynomial, sahi_value};
use posassoc::fui::{build_thresholds, chain_law_holds, discretize, footnote2_fixture, random_fui, SplitMix64};
use posassoc::measures::is_positively_correlated;
use posassoc::monotone::{count_increasing, enumerate_increasing, increasing_masks, nonempty_masks, EnumConfig};
use posassoc::rational::ratio;
use posassoc::{fixed_point_measure, Antichain, Event, IncreasingEvent, Measure, Point, ProductMeasure, Rational};

use common::{random_event, random_fkg_table, random_table};

fn ev(n: usize, mask: u64) -> IncreasingEvent {
    IncreasingEvent::from_mask(n, mask).unwrap()
}

fn quarter_grid() -> Vec<ProductMeasure> {
    let vals = [ratio(1, 4), ratio(1, 2), ratio(3, 4)];
    (0..3)
        .map(|_| vals.iter().cloned())
        .multi_cartesian_product()
        .map(|p| ProductMeasure::new(p).unwrap())
        .collect()
}

fn random_subset(rng: &mut SplitMix64, n: usize) -> Event {
    let pts = (0..1u32 << n).filter(|_| rng.below(4) == 0).map(Point);
    Event::from_points(n, pts).unwrap()
}

// cube

#[test]
fn up_closure_idempotent_exhaustive() {
    for n in 0..=3 {
        for mask in 0..1u64 << (1 << n) {
            let up = IncreasingEvent::up_closure(&Event::from_mask(n, mask).unwrap());
            assert_eq!(IncreasingEvent::up_closure(up.as_event()), up);
            assert!(Event::from_mask(n, mask).unwrap().is_subset(up.as_event()));
        }
    }
}

#[test]
fn antichain_round_trip_exhaustive() {
    for mask in increasing_masks(3) {
        let a = ev(3, *mask);
        assert_eq!(IncreasingEvent::from_antichain(&a.minimal_elements()), a);
    }
}

#[test]
fn minimal_elements_of_intersection() {
    for n in 0..=4 {
        let masks = increasing_masks(n);
        for (&d, &e) in masks.iter().cartesian_product(masks) {
            let (d, e) = (ev(n, d), ev(n, e));
            let unions = d
                .minimal_elements()
                .sets()
                .iter()
                .cartesian_product(e.minimal_elements().sets())
                .map(|(x, y)| x.join(*y))
                .collect::<Vec<_>>();
            let minimal = unions.iter().copied().filter(|u| !unions.iter().any(|v| v != u && v.is_subset(*u)));
            let expect = Antichain::new(n, minimal).unwrap();
            assert_eq!(d.intersect(&e).unwrap().minimal_elements(), expect);
        }
    }
}

#[test]
fn z_set_laws_exhaustive() {
    for n in 0..=4 {
        let masks = increasing_masks(n);
        for &a in masks {
            let a = ev(n, a);
            assert_eq!(a.z_set().is_empty(), a.is_empty() || a.is_full());
        }
        for (&a, &b) in masks.iter().cartesian_product(masks) {
            let (a, b) = (ev(n, a), ev(n, b));
            assert!(a.intersect(&b).unwrap().z_set().is_subset(a.z_set().union(b.z_set())));
        }
    }
}

proptest! {
    #[test]
    fn up_closure_idempotent_random(n in 4usize..=5, seed in any::<u64>()) {
        let e = random_subset(&mut SplitMix64::new(seed), n);
        let up = IncreasingEvent::up_closure(&e);
        prop_assert_eq!(IncreasingEvent::up_closure(up.as_event()), up.clone());
        prop_assert!(IncreasingEvent::try_from(up.as_event().clone()).is_ok());
    }

    #[test]
    fn event_json_round_trip(n in 0usize..=6, seed in any::<u64>()) {
        let up = IncreasingEvent::up_closure(&random_subset(&mut SplitMix64::new(seed), n));
        let text = serde_json::to_string(&up.to_json()).unwrap();
        let back: posassoc::EventJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(IncreasingEvent::from_json(&back).unwrap(), up);
    }

    #[test]
    fn z_monotone_random(n in 5usize..=8, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let a = IncreasingEvent::up_closure(&random_subset(&mut rng, n));
        let b = IncreasingEvent::up_closure(&random_subset(&mut rng, n));
        prop_assert!(a.intersect(&b).unwrap().z_set().is_subset(a.z_set().union(b.z_set())));
    }
}

// measures

#[test]
fn normalization() {
    for n in 1..=8 {
        let total: Rational = fixed_point_measure(n).unwrap().weights().iter().sum();
        assert!(total.is_one(), "n={n}");
    }
    let mut rng = SplitMix64::new(5);
    for _ in 0..50 {
        let m = random_table(&mut rng, 3);
        let cond = m.condition(&[(2, rng.below(2) == 1)]).unwrap();
        assert!(cond.weights().iter().sum::<Rational>().is_one());
        assert_eq!(cond.dim(), 2);
    }
}

#[test]
fn harris_inequality_exhaustive() {
    let masks = increasing_masks(3);
    for m in quarter_grid() {
        for (&a, &b) in masks.iter().cartesian_product(masks) {
            assert!(is_positively_correlated(&m, ev(3, a).as_event(), ev(3, b).as_event()).unwrap());
        }
        assert!(m.to_table().check_fkg().is_none());
    }
}

#[test]
fn harris_inequality_spot_checks() {
    let mut rng = SplitMix64::new(11);
    for n in [4usize, 5] {
        for _ in 0..200 {
            let p = (0..n).map(|_| ratio(1 + rng.below(9) as i64, 10)).collect();
            let m = ProductMeasure::new(p).unwrap();
            let (a, b) = (random_event(&mut rng, n, false), random_event(&mut rng, n, false));
            assert!(is_positively_correlated(&m, a.as_event(), b.as_event()).unwrap());
        }
    }
}

#[test]
fn comparable_pairs_hold_with_equality() {
    let mut rng = SplitMix64::new(3);
    for _ in 0..20 {
        let m = random_table(&mut rng, 3);
        for (x, y) in (0..8u32).cartesian_product(0..8u32) {
            let (x, y) = (Point(x), Point(y));
            if x.is_subset(y) {
                let lhs = m.weight(x) * m.weight(y);
                let rhs = m.weight(x.join(y)) * m.weight(x.meet(y));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

// enumeration

#[test]
fn stream_matches_count() {
    for n in 0..=5 {
        let stream = enumerate_increasing(&EnumConfig::all(n)).unwrap();
        assert_eq!(stream.count() as u64, count_increasing(n).unwrap());
    }
}

// analysis

#[test]
fn criterion_equivalence_exhaustive() {
    let masks = nonempty_masks(3);
    let mut tests = 0;
    for m in quarter_grid() {
        for (i, j) in (0..masks.len()).tuple_combinations::<(_, _)>().chain((0..masks.len()).map(|i| (i, i))) {
            let out = harris_criterion(&m, &ev(3, masks[i]), &ev(3, masks[j])).unwrap();
            assert!(out.agrees(), "{:?} {:?}", masks[i], masks[j]);
            tests += 1;
        }
    }
    assert_eq!(tests, 27 * 190);
}

#[test]
fn random_fui_laws_are_associated() {
    for seed in 0..100u64 {
        let m = 1 + (seed % 4) as usize;
        let law = random_fui(3, m, seed).unwrap().pushforward().unwrap();
        assert!(pa_check(&law).unwrap().violation.is_none(), "seed {seed}");
        assert_eq!(abc_scan(&law, None).unwrap().total_witnesses, 0, "seed {seed}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sahi_with_full_event_is_the_covariance(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let m = random_table(&mut rng, n);
        let (b, c) = (random_event(&mut rng, n, true), random_event(&mut rng, n, true));
        let omega = IncreasingEvent::full(n).unwrap();
        let cov = m.prob(&b.intersect(&c).unwrap()).unwrap() - m.prob(&b).unwrap() * m.prob(&c).unwrap();
        prop_assert_eq!(sahi_value(&m, &omega, &b, &c).unwrap(), cov);
    }

    #[test]
    fn sahi_polynomial_matches_value(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let p: Vec<Rational> = (0..n).map(|_| {
            let d = 2 + rng.below(15) as i64;
            ratio(1 + rng.below(d as u64 - 1) as i64, d)
        }).collect();
        let m = ProductMeasure::new(p.clone()).unwrap();
        let [a, b, c] = [0; 3].map(|_| random_event(&mut rng, n, true));
        let poly = sahi_polynomial(&a, &b, &c).unwrap();
        prop_assert_eq!(poly.eval(&p), sahi_value(&m, &a, &b, &c).unwrap());
    }

    #[test]
    fn sahi_is_symmetric(n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = SplitMix64::new(seed);
        let m = random_table(&mut rng, n);
        let evs = [0; 3].map(|_| random_event(&mut rng, n, true));
        let base = sahi_value(&m, &evs[0], &evs[1], &evs[2]).unwrap();
        for perm in (0..3).permutations(3) {
            prop_assert_eq!(sahi_value(&m, &evs[perm[0]], &evs[perm[1]], &evs[perm[2]]).unwrap(), base.clone());
        }
    }
}

// realizations

#[test]
fn fkg_round_trips() {
    let mut rng = SplitMix64::new(2024);
    for k in 0..60 {
        let n = 1 + k % 3;
        let m = random_fkg_table(&mut rng, n);
        let t = build_thresholds(&m).unwrap();
        let r = discretize(&t).unwrap();
        for c in 1..=n {
            let chain = t.interior_thresholds(c);
            let offset: usize = (1..c).map(|d| t.interior_thresholds(d).len()).sum();
            assert!(chain_law_holds(&chain, &r.params()[offset..offset + chain.len()]));
        }
        assert_eq!(r.pushforward().unwrap(), m);
    }
}

proptest! {
    #[test]
    fn fixture_never_charges_weight_two(a in 0i64..=12, b in 0i64..=12, c in 0i64..=12) {
        let q = [a, b, c].map(|v| ratio(v, 12));
        let law = footnote2_fixture(q[0].clone(), q[1].clone(), q[2].clone()).unwrap().pushforward().unwrap();
        for x in (0..8u32).filter(|x| x.count_ones() == 2) {
            prop_assert!(law.weight(Point(x)).is_zero());
        }
    }
}
