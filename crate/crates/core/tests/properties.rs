//! Property tests against direct computations from the action tables.

use std::collections::BTreeSet;
use std::sync::Arc;

use actkit::act::Act;
use actkit::catalog;
use actkit::enumerate::canonical_form;
use actkit::hom::{find_isomorphism, ActHom, HomSearch, HomSearchOptions};
use actkit::independence::{is_independent, IndependenceQuery};
use actkit::injectivity::InjectivityTester;
use actkit::io::{format_act, format_monoid, parse_act, parse_monoid};
use actkit::limits::{coproduct, epi_mono_factorize, pullback, pushout};
use actkit::monoid::Monoid;
use actkit::sample;
use actkit::saturation::{cellular_factorize, saturate, SaturateOptions, SaturationStatus};
use actkit::types::{type_rep, types_equal};
use itertools::Itertools;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn monoid(index: usize) -> Arc<Monoid> {
    let all = catalog::all();
    all[index % all.len()].1.clone()
}

fn small_monoid(index: usize) -> Arc<Monoid> {
    let all = catalog::up_to(3);
    all[index % all.len()].1.clone()
}

fn closure(act: &Act, xs: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    let n = act.monoid().size();
    let mut out = BTreeSet::new();
    let mut stack: Vec<usize> = xs.into_iter().collect();
    while let Some(x) = stack.pop() {
        if out.insert(x) {
            stack.extend((0..n).map(|s| act.act(s, x)));
        }
    }
    out
}

/// Every map `a → b` that commutes with the action, by listing all maps.
fn all_homs(a: &Act, b: &Act) -> Vec<Vec<usize>> {
    let n = a.monoid().size();
    (0..a.size())
        .map(|_| 0..b.size())
        .multi_cartesian_product()
        .filter(|f| (0..a.size()).all(|x| (0..n).all(|s| f[a.act(s, x)] == b.act(s, f[x]))))
        .collect()
}

fn perm(n: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    sample::permutation(n, rng)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn act_files_round_trip(mi in 0usize..13, seed: u64, size in 0usize..6) {
        let m = monoid(mi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::act(&m, size, size, &mut rng);
        prop_assert_eq!(parse_act(&format_act(&a, "m.monoid"), m.clone()).unwrap(), a);
        prop_assert_eq!(&parse_monoid(&format_monoid(&m)).unwrap(), m.as_ref());
    }

    #[test]
    fn canonical_form_is_a_relabelling_invariant(mi in 0usize..13, seed: u64, size in 0usize..6) {
        let m = monoid(mi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::act(&m, size, size, &mut rng);
        let b = a.relabel(&perm(a.size(), &mut rng));
        prop_assert_eq!(canonical_form(&a), canonical_form(&b));
        let iso = find_isomorphism(&a, &b).expect("relabellings are isomorphic");
        prop_assert!(iso.is_injective() && iso.is_surjective());
    }

    #[test]
    fn generated_subacts_match_orbit_closure(mi in 0usize..13, seed: u64, size in 0usize..7) {
        let m = monoid(mi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::act(&m, size, size, &mut rng);
        let xs = sample::subset(&a, 0.3, &mut rng);
        let sub = a.generated_subact(xs.iter().copied()).unwrap();
        prop_assert_eq!(&sub, &closure(&a, xs.iter().copied()));
        let gens = a.min_generators(&sub).unwrap();
        prop_assert_eq!(closure(&a, gens.iter().copied()), sub.clone());
        let smaller = gens.len().checked_sub(1).is_none_or(|k| {
            sub.iter().copied().combinations(k).all(|c| closure(&a, c) != sub)
        });
        prop_assert!(smaller);
    }

    #[test]
    fn hom_search_finds_every_hom(mi in 0usize..13, seed: u64, n in 0usize..4, k in 0usize..4) {
        let m = monoid(mi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::act(&m, n, n, &mut rng);
        let b = sample::act(&m, k, k, &mut rng);
        let found = HomSearch::new(&a, &b, &HomSearchOptions::default()).unwrap().collect();
        prop_assert_eq!(found, all_homs(&a, &b));
    }

    #[test]
    fn types_survive_relabelling(mi in 0usize..13, seed: u64, size in 1usize..6) {
        let m = monoid(mi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::act(&m, size, size, &mut rng);
        let p = perm(a.size(), &mut rng);
        let b = a.relabel(&p);
        let x = rng.gen_range(0..a.size());
        let params = sample::subset(&a, 0.3, &mut rng);
        let moved: BTreeSet<usize> = params.iter().map(|&y| p[y]).collect();
        // Parameters align by increasing index, so only order-preserving
        // relabellings of the parameters give the same type.
        let order_kept = params.iter().map(|&y| p[y]).tuple_windows().all(|(u, v)| u < v);
        prop_assume!(a != b || params == moved);
        let same = types_equal(&type_rep(&a, &[x], &params).unwrap(), &type_rep(&b, &[p[x]], &moved).unwrap()).unwrap();
        prop_assert!(!order_kept || same);
    }

    #[test]
    fn pushouts_commute_and_cover(mi in 0usize..13, seed: u64, size in 1usize..5) {
        let m = monoid(mi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a0 = sample::act(&m, 0, size.min(3), &mut rng);
        let a1 = sample::act(&m, 0, size, &mut rng);
        let a2 = sample::act(&m, 0, size, &mut rng);
        let (Some(f1), Some(f2)) = (sample::hom(&a0, &a1, 32, &mut rng), sample::hom(&a0, &a2, 32, &mut rng)) else {
            return Ok(());
        };
        let p = pushout(&f1, &f2).unwrap();
        for x in 0..a0.size() {
            prop_assert_eq!(p.left.apply(f1.apply(x)), p.right.apply(f2.apply(x)));
        }
        let image: BTreeSet<usize> = p.left.image().union(&p.right.image()).copied().collect();
        prop_assert_eq!(image.len(), p.apex.size());
        prop_assert!(p.apex.size() <= a1.size() + a2.size());
    }

    #[test]
    fn pullbacks_are_agreeing_pairs(mi in 0usize..13, seed: u64, size in 0usize..5) {
        let m = monoid(mi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a3 = sample::act(&m, 1, size + 1, &mut rng);
        let a1 = sample::act(&m, 0, size, &mut rng);
        let a2 = sample::act(&m, 0, size, &mut rng);
        let (Some(g1), Some(g2)) = (sample::hom(&a1, &a3, 32, &mut rng), sample::hom(&a2, &a3, 32, &mut rng)) else {
            return Ok(());
        };
        let p = pullback(&g1, &g2).unwrap();
        let pairs: Vec<(usize, usize)> = (0..p.apex.size()).map(|w| (p.left.apply(w), p.right.apply(w))).collect();
        let expected: Vec<(usize, usize)> = (0..a1.size())
            .cartesian_product(0..a2.size())
            .filter(|&(x, y)| g1.apply(x) == g2.apply(y))
            .collect();
        prop_assert_eq!(pairs, expected);
    }

    #[test]
    fn coproducts_are_disjoint(mi in 0usize..13, seed: u64, n in 0usize..4, k in 0usize..4) {
        let m = monoid(mi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::act(&m, n, n, &mut rng);
        let b = sample::act(&m, k, k, &mut rng);
        let c = coproduct(&a, &b).unwrap();
        prop_assert_eq!(c.apex.size(), n + k);
        prop_assert!(c.left.is_injective() && c.right.is_injective());
        prop_assert!(c.left.image().is_disjoint(&c.right.image()));
    }

    #[test]
    fn epi_mono_factors(mi in 0usize..13, seed: u64, size in 0usize..5) {
        let m = monoid(mi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::act(&m, 0, size, &mut rng);
        let b = sample::act(&m, 0, size, &mut rng);
        let Some(h) = sample::hom(&a, &b, 32, &mut rng) else { return Ok(()); };
        let (e, mo) = epi_mono_factorize(&h);
        prop_assert!(e.is_surjective() && mo.is_injective());
        prop_assert_eq!(e.then(&mo).unwrap(), h.clone());
        prop_assert_eq!(mo.image(), h.image());
    }

    #[test]
    fn independence_is_symmetric_intersection(mi in 0usize..13, seed: u64, size in 0usize..7) {
        let m = monoid(mi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::act(&m, size, size, &mut rng);
        let base = sample::subact(&a, 0.3, &mut rng);
        let x = sample::subset(&a, 0.3, &mut rng);
        let y = sample::subset(&a, 0.3, &mut rng);
        let q = |l: &BTreeSet<usize>, r: &BTreeSet<usize>| is_independent(&IndependenceQuery {
            ambient: a.clone(), base: base.clone(), left: l.clone(), right: r.clone(),
        }).unwrap();
        let oracle = closure(&a, x.iter().copied())
            .intersection(&closure(&a, y.iter().copied()))
            .all(|e| base.contains(e));
        prop_assert_eq!(q(&x, &y), oracle);
        prop_assert_eq!(q(&y, &x), oracle);
    }

    #[test]
    fn cellular_chains_verify(mi in 0usize..13, seed: u64, size in 0usize..6) {
        let m = monoid(mi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = sample::act(&m, size, size, &mut rng);
        let sub = sample::subact(&l, 0.3, &mut rng);
        let f = sample::mono_from_subact(&l, &sub, &mut rng);
        let chain = cellular_factorize(&f).unwrap();
        prop_assert!(chain.verify().is_ok());
        prop_assert!(chain.steps.len() <= l.size() - sub.len());
        prop_assert_eq!(chain.steps.is_empty(), sub.len() == l.size());
    }

    #[test]
    fn weak_injectivity_is_degree_injectivity(mi in 0usize..13, seed: u64, size in 0usize..5) {
        let m = monoid(mi);
        let t = InjectivityTester::new(m.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = sample::act(&m, size, size, &mut rng);
        let weak = t.weakly_injective(&q);
        prop_assert_eq!(weak.verdict, t.n_injective(&q, t.generation_degree()).verdict);
        prop_assert_eq!(weak.verdict, weak.counterexample.is_none());
        if let Some(ce) = &weak.counterexample {
            prop_assert!(ce.replay(&q));
        }
    }

    #[test]
    fn reached_saturations_are_weakly_injective(mi in 0usize..8, seed: u64, size in 0usize..3) {
        let m = small_monoid(mi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = sample::act(&m, size, size, &mut rng);
        let sat = saturate(&k, SaturateOptions { max_size: 64, ..SaturateOptions::default() });
        if let SaturationStatus::Reached { steps } = sat.status {
            prop_assert_eq!(sat.sizes.len(), steps + 1);
            prop_assert!(sat.embedding.is_injective());
            prop_assert!(InjectivityTester::new(m).weakly_injective(&sat.result).verdict);
            prop_assert!((0..k.size()).all(|x| sat.embedding.apply(x) == x));
        }
    }
}

#[test]
fn inclusions_are_monos() {
    let m = catalog::rz3();
    let s = Act::regular(m);
    let ideal: BTreeSet<usize> = [1, 2].into();
    let inc = ActHom::inclusion(&s, &ideal).unwrap();
    assert!(inc.is_injective() && !inc.is_surjective());
    assert_eq!(inc.image(), ideal);
}
