//! Exhaustive checks of the injectivity hierarchy over the catalog.

use actkit::act::Act;
use actkit::catalog;
use actkit::enumerate::acts_up_to;
use actkit::injectivity::InjectivityTester;
use actkit::par;

#[test]
fn pure_at_large_bound_implies_weakly_injective() {
    // The empty act is vacuously pure (purity quantifies over nonempty
    // subacts) but never weakly injective, so it is the one expected exception.
    for (name, m) in catalog::all() {
        let t = InjectivityTester::new(m.clone());
        let bound = m.size() + 2;
        let qs = acts_up_to(&m, 4);
        let exceptions: Vec<Act> = par::map(&qs, |q| {
            (t.absolutely_pure(q, bound).verdict && !t.weakly_injective(q).verdict)
                .then(|| q.clone())
        })
        .into_iter()
        .flatten()
        .collect();
        assert_eq!(exceptions, vec![Act::empty(m.clone())], "{name}");
    }
}

#[test]
fn weakly_injective_acts_with_a_zero_are_pure_at_bound_four() {
    // Without a zero, `Q ≤ Q ⊔ 1` already defeats purity, so the implication
    // can only hold for acts with a zero.
    for (name, m) in catalog::all() {
        let t = InjectivityTester::new(m.clone());
        let qs = acts_up_to(&m, 3);
        let impure: Vec<_> = par::map(&qs, |q| {
            (t.weakly_injective(q).verdict && !t.absolutely_pure(q, 4).verdict).then(|| q.clone())
        })
        .into_iter()
        .flatten()
        .collect();
        for q in &impure {
            assert!(!q.has_zero(), "{name}: {:?}", q.rows());
            let ce = t.absolutely_pure(q, 4).counterexample.unwrap();
            assert!(ce.replay(q));
        }
    }
    // For instance, Z2 acting on itself.
    let z2 = catalog::get("z2").unwrap();
    let t = InjectivityTester::new(z2.clone());
    let regular = Act::regular(z2);
    assert!(t.weakly_injective(&regular).verdict);
    assert!(!t.absolutely_pure(&regular, 4).verdict);
}

/// An rz5 act with fixed points `0, 1` and one further element per tuple,
/// sent to `tuple[i]` by the `i`-th right zero.
fn rz5_act(tuples: &[[usize; 4]]) -> Act {
    let m = catalog::get("rz5").unwrap();
    let size = 2 + tuples.len();
    let mut rows = vec![(0..size).collect::<Vec<_>>()];
    rows.extend((0..4).map(|i| {
        (0..size)
            .map(|x| if x < 2 { x } else { tuples[x - 2][i] })
            .collect()
    }));
    Act::from_table(m, &rows).unwrap()
}

#[test]
fn strictness_witnesses_of_size_five() {
    // rz5 is the exception: a witness at n needs every choice of values on n
    // of its four right zeros to be realised, which takes more than five
    // elements for n = 2 and n = 3.
    for (name, m) in catalog::all() {
        let t = InjectivityTester::new(m.clone());
        let counts: Vec<usize> = m
            .all_left_ideals()
            .iter()
            .map(|i| i.min_generators.len())
            .collect();
        let qs = acts_up_to(&m, 5);
        for n in 1..t.generation_degree() {
            if !counts.contains(&(n + 1)) {
                continue;
            }
            let witness = qs
                .iter()
                .find(|q| t.n_injective(q, n).verdict && !t.n_injective(q, n + 1).verdict);
            if name == "rz5" && n >= 2 {
                assert!(witness.is_none(), "{name}: unexpected witness at n = {n}");
                continue;
            }
            let w = witness.unwrap_or_else(|| panic!("{name}: no witness at n = {n}"));
            let ce = t.n_injective(w, n + 1).counterexample.unwrap();
            assert!(ce.replay(w), "{name}");
        }
    }
}

#[test]
fn larger_strictness_witnesses_for_rz5() {
    let t = InjectivityTester::new(catalog::get("rz5").unwrap());
    let unit = rz5_act(&[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]);
    assert!(t.n_injective(&unit, 2).verdict);
    assert!(!t.n_injective(&unit, 3).verdict);
    let even = rz5_act(&[
        [1, 1, 0, 0],
        [1, 0, 1, 0],
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1, 0, 1],
        [0, 0, 1, 1],
    ]);
    assert!(t.n_injective(&even, 3).verdict);
    assert!(!t.n_injective(&even, 4).verdict);
}

#[test]
fn pqx_is_a_witness_at_one() {
    let m = catalog::rz3();
    let t = InjectivityTester::new(m.clone());
    let pqx = Act::from_table(m, &[vec![0, 1, 2], vec![0, 1, 0], vec![0, 1, 1]]).unwrap();
    assert!(t.n_injective(&pqx, 1).verdict);
    let two = t.n_injective(&pqx, 2);
    assert!(!two.verdict);
    let ce = two.counterexample.unwrap();
    assert_eq!(ce.subact.iter().copied().collect::<Vec<_>>(), vec![1, 2]);
    assert!(ce.replay(&pqx));
    assert!(!t.absolutely_pure(&pqx, 4).verdict);
    assert!(!t.weakly_injective(&pqx).verdict);
}

#[test]
fn regular_act_over_rz3_has_a_zero_but_is_not_injective() {
    // Swapping a and b on the ideal {a, b} cannot extend to S.
    let m = catalog::rz3();
    let t = InjectivityTester::new(m.clone());
    let s = Act::regular(m);
    assert!(s.has_zero());
    let v = t.weakly_injective(&s);
    assert!(!v.verdict);
    let ce = v.counterexample.unwrap();
    assert_eq!(ce.hom, vec![2, 1]);
    assert!(ce.replay(&s));
}

#[test]
fn hierarchy_is_monotone() {
    for (name, m) in catalog::up_to(4) {
        let t = InjectivityTester::new(m.clone());
        let g = t.generation_degree();
        for q in acts_up_to(&m, 3) {
            let inj = t.injective(&q).verdict;
            let weak = t.weakly_injective(&q).verdict;
            let levels: Vec<bool> = (1..=g).map(|n| t.n_injective(&q, n).verdict).collect();
            assert!(!inj || weak, "{name}: {:?}", q.rows());
            assert!(!weak || levels.iter().all(|&v| v), "{name}: {:?}", q.rows());
            assert!(
                levels.windows(2).all(|w| w[0] || !w[1]),
                "{name}: {:?}",
                q.rows()
            );
            assert_eq!(
                inj,
                t.injective_by_definition(&q, 4),
                "{name}: {:?}",
                q.rows()
            );
        }
    }
}
