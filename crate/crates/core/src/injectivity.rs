//! Extension properties: `n`-injectivity along left ideals, weak injectivity,
//! injectivity via the Skornjakov-Baer criterion, and bounded absolute purity.
//!
//! Every test is a search over extension problems `A ≤ B`, `f: A → Q`. A
//! failing verdict carries the least failing problem in search order.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::act::Act;
use crate::enumerate::{acts_up_to, cyclic_acts};
use crate::hom::{extend_along, first_non_extendable, ActHom, HomSearch, HomSearchOptions};
use crate::limits::coproduct;
use crate::monoid::{LeftIdeal, Monoid};
use crate::par;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "test", rename_all = "kebab-case")]
pub enum InjectivityLevel {
    NInjective {
        n: usize,
    },
    WeaklyInjective,
    Injective,
    /// Verified only against acts with at most `bound` elements.
    AbsolutelyPure {
        bound: usize,
    },
}

/// A hom `f: A → Q` from a subact `A ≤ B` with no extension `B → Q`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub ambient: Act,
    pub subact: BTreeSet<usize>,
    /// `hom[i]` is the image of the `i`-th element of `subact`.
    pub hom: Vec<usize>,
}

impl Counterexample {
    pub fn inclusion(&self) -> ActHom {
        ActHom::inclusion(&self.ambient, &self.subact).expect("counterexample subact is closed")
    }

    /// True iff `hom` is a hom into `q` that has no extension to the ambient act.
    pub fn replay(&self, q: &Act) -> bool {
        let inc = self.inclusion();
        ActHom::new(inc.source().clone(), q.clone(), self.hom.clone()).is_ok()
            && extend_along(&inc, &self.hom, q).is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityVerdict {
    pub level: InjectivityLevel,
    pub verdict: bool,
    pub counterexample: Option<Counterexample>,
}

impl InjectivityVerdict {
    fn from_search(level: InjectivityLevel, counterexample: Option<Counterexample>) -> Self {
        InjectivityVerdict {
            level,
            verdict: counterexample.is_none(),
            counterexample,
        }
    }
}

/// An extension problem `A ≤ B`, with the inclusion precomputed.
#[derive(Clone, Debug)]
struct Case {
    inclusion: ActHom,
    subact: BTreeSet<usize>,
}

impl Case {
    fn new(ambient: &Act, subact: BTreeSet<usize>) -> Self {
        Case {
            inclusion: ActHom::inclusion(ambient, &subact).expect("subact is closed"),
            subact,
        }
    }

    fn failure(&self, q: &Act) -> Option<Counterexample> {
        first_non_extendable(&self.inclusion, q).map(|hom| Counterexample {
            ambient: self.inclusion.target().clone(),
            subact: self.subact.clone(),
            hom,
        })
    }
}

fn first_failure(cases: &[Case], q: &Act) -> Option<Counterexample> {
    par::find_first(cases, |c| c.failure(q))
}

/// Proper subacts `A < B` of every act in `acts`; `A = B` always extends.
fn subact_cases(acts: &[Act], include_empty: bool) -> Vec<Case> {
    let mut cases = Vec::new();
    for b in acts {
        for a in b.all_subacts() {
            if a.len() == b.size() || (a.is_empty() && !include_empty) {
                continue;
            }
            cases.push(Case::new(b, a));
        }
    }
    cases
}

/// Precomputed extension problems for one monoid, reusable across many acts.
pub struct InjectivityTester {
    monoid: Arc<Monoid>,
    ideals: Vec<LeftIdeal>,
    ideal_cases: Vec<Case>,
    cyclic_cases: Vec<Case>,
    cyclic: Vec<Act>,
}

impl InjectivityTester {
    pub fn new(monoid: Arc<Monoid>) -> Self {
        let regular = Act::regular(monoid.clone());
        let ideals = monoid.all_left_ideals();
        let ideal_cases = ideals
            .iter()
            .map(|i| Case::new(&regular, i.elements.clone()))
            .collect();
        let cyclic = cyclic_acts(&monoid);
        let cyclic_cases = subact_cases(&cyclic, true);
        InjectivityTester {
            monoid,
            ideals,
            ideal_cases,
            cyclic_cases,
            cyclic,
        }
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        &self.monoid
    }

    pub fn generation_degree(&self) -> usize {
        self.ideals
            .iter()
            .map(|i| i.min_generators.len())
            .max()
            .unwrap_or(0)
    }

    /// Every hom into `q` from a left ideal with at most `n` generators
    /// extends to `S`. The empty ideal counts, so the empty act always fails.
    pub fn n_injective(&self, q: &Act, n: usize) -> InjectivityVerdict {
        let cases: Vec<Case> = self
            .ideals
            .iter()
            .zip(&self.ideal_cases)
            .filter(|(i, _)| i.min_generators.len() <= n)
            .map(|(_, c)| c.clone())
            .collect();
        InjectivityVerdict::from_search(
            InjectivityLevel::NInjective { n },
            first_failure(&cases, q),
        )
    }

    /// Every hom from every left ideal into `q` extends to `S`.
    pub fn weakly_injective(&self, q: &Act) -> InjectivityVerdict {
        InjectivityVerdict::from_search(
            InjectivityLevel::WeaklyInjective,
            first_failure(&self.ideal_cases, q),
        )
    }

    /// `q` has a zero and every hom from a subact of a cyclic act extends.
    ///
    /// Without a zero the reported failure is `∅ ≤ 1`, the one-point act,
    /// since a hom from the one-point act picks out a zero.
    pub fn injective(&self, q: &Act) -> InjectivityVerdict {
        if !q.has_zero() {
            let point = Act::singleton(self.monoid.clone());
            let cx = Counterexample {
                ambient: point,
                subact: BTreeSet::new(),
                hom: Vec::new(),
            };
            return InjectivityVerdict::from_search(InjectivityLevel::Injective, Some(cx));
        }
        InjectivityVerdict::from_search(
            InjectivityLevel::Injective,
            first_failure(&self.cyclic_cases, q),
        )
    }

    /// Every hom into `q` from a nonempty subact `B ≤ C` with `|C| ≤ bound`
    /// extends to `C`. Over a finite monoid every finite act is finitely
    /// presented, so this is absolute purity checked up to the bound.
    ///
    /// Extending along `B ≤ C` amounts to extending one orbit at a time along
    /// `B ≤ B ∪ Sc`, and `B ∪ Sc` is the pushout of `B ← B ∩ Sc ≤ Sc`. So it
    /// suffices that homs from nonempty `A < Sc` extend for cyclic `Sc` with
    /// `|Sc| ≤ bound`, and that every cyclic act fitting next to a smallest
    /// orbit of `q` maps into `q`.
    pub fn absolutely_pure(&self, q: &Act, bound: usize) -> InjectivityVerdict {
        let level = InjectivityLevel::AbsolutelyPure { bound };
        let glued: Vec<Case> = self
            .cyclic_cases
            .iter()
            .filter(|c| !c.subact.is_empty() && c.inclusion.target().size() <= bound)
            .cloned()
            .collect();
        if let Some(cx) = first_failure(&glued, q) {
            return InjectivityVerdict::from_search(level, Some(cx));
        }
        let Some(x) = (0..q.size()).min_by_key(|&x| q.orbit(x).len()) else {
            return InjectivityVerdict::from_search(level, None);
        };
        let orbit = q.orbit(x);
        let (b, elems) = q.restrict(&orbit).expect("orbits are subacts");
        let cx = self
            .cyclic
            .iter()
            .filter(|c| orbit.len() + c.size() <= bound)
            .find(|c| {
                HomSearch::new(c, q, &HomSearchOptions::default())
                    .map_or(true, |h| h.first().is_none())
            })
            .map(|c| Counterexample {
                ambient: coproduct(&b, c).expect("same monoid").apex,
                subact: (0..b.size()).collect(),
                hom: elems.clone(),
            });
        InjectivityVerdict::from_search(level, cx)
    }

    /// Absolute purity straight from the definition, enumerating every act
    /// with at most `bound` elements. Exponential; a test oracle.
    pub fn absolutely_pure_by_definition(&self, q: &Act, bound: usize) -> bool {
        let cases = subact_cases(&acts_up_to(&self.monoid, bound), false);
        first_failure(&cases, q).is_none()
    }

    /// Injectivity straight from the definition: extension along every
    /// inclusion `A ≤ B` with `|B| ≤ bound`, including `A = ∅`.
    pub fn injective_by_definition(&self, q: &Act, bound: usize) -> bool {
        let cases = subact_cases(&acts_up_to(&self.monoid, bound), true);
        first_failure(&cases, q).is_none()
    }
}

pub fn has_zero(q: &Act) -> bool {
    q.has_zero()
}

pub fn is_n_injective(q: &Act, n: usize) -> InjectivityVerdict {
    InjectivityTester::new(q.monoid().clone()).n_injective(q, n)
}

pub fn is_weakly_injective(q: &Act) -> InjectivityVerdict {
    InjectivityTester::new(q.monoid().clone()).weakly_injective(q)
}

pub fn is_injective(q: &Act) -> InjectivityVerdict {
    InjectivityTester::new(q.monoid().clone()).injective(q)
}

pub fn is_absolutely_pure(q: &Act, bound: usize) -> InjectivityVerdict {
    InjectivityTester::new(q.monoid().clone()).absolutely_pure(q, bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::coproduct;

    fn rz3() -> Arc<Monoid> {
        Arc::new(Monoid::from_table(&[vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]]).unwrap())
    }

    fn pqx(m: &Arc<Monoid>) -> Act {
        Act::from_table(m.clone(), &[vec![0, 1, 2], vec![0, 1, 0], vec![0, 1, 1]]).unwrap()
    }

    #[test]
    fn zeros() {
        let m = rz3();
        assert!(has_zero(&Act::singleton(m.clone())));
        assert!(!has_zero(&Act::empty(m.clone())));
        assert!(has_zero(&Act::regular(m)));
    }

    #[test]
    fn pqx_is_one_but_not_two_injective() {
        let m = rz3();
        let q = pqx(&m);
        assert!(is_n_injective(&q, 1).verdict);
        let v = is_n_injective(&q, 2);
        assert!(!v.verdict);
        let cx = v.counterexample.unwrap();
        assert_eq!(cx.subact, [1, 2].into_iter().collect());
        assert!(cx.replay(&q));
        // a ↦ p, b ↦ q extends via x; a ↦ q, b ↦ p does not.
        assert_eq!(cx.hom, vec![1, 0]);
        assert!(!is_weakly_injective(&q).verdict);
    }

    #[test]
    fn point_and_two_points() {
        let m = rz3();
        let pt = Act::singleton(m.clone());
        assert!(is_injective(&pt).verdict);
        assert!(is_n_injective(&pt, 5).verdict);
        let two = coproduct(&pt, &pt).unwrap().apex;
        assert!(!is_weakly_injective(&two).verdict);
        let v = is_injective(&two);
        assert!(!v.verdict);
        assert!(v.counterexample.unwrap().replay(&two));
        assert!(is_absolutely_pure(&pt, 4).verdict);
        let v = is_absolutely_pure(&pqx(&m), 4);
        assert!(!v.verdict);
        assert!(v.counterexample.unwrap().replay(&pqx(&m)));
        let v = is_absolutely_pure(&two, 4);
        assert!(v.counterexample.unwrap().replay(&two));
    }

    #[test]
    fn empty_act() {
        let triv = Arc::new(Monoid::trivial());
        let e = Act::empty(triv.clone());
        assert!(!is_n_injective(&e, 1).verdict);
        let v = is_injective(&e);
        assert!(!v.verdict && v.counterexample.unwrap().replay(&e));
        assert!(is_weakly_injective(&Act::regular(triv)).verdict);
    }

    #[test]
    fn purity_agrees_with_definition_on_small_acts() {
        for name in ["rz3", "nil3", "z2", "lz3"] {
            let m = crate::catalog::get(name).unwrap();
            let tester = InjectivityTester::new(m.clone());
            for q in acts_up_to(&m, 3) {
                for bound in 1..=5 {
                    let v = tester.absolutely_pure(&q, bound);
                    assert_eq!(
                        v.verdict,
                        tester.absolutely_pure_by_definition(&q, bound),
                        "{name} {bound} {q:?}"
                    );
                    if let Some(cx) = v.counterexample {
                        assert!(cx.replay(&q));
                        assert!(cx.ambient.size() <= bound);
                    }
                }
            }
        }
    }

    #[test]
    fn criterion_agrees_with_definition_on_small_acts() {
        let m = rz3();
        let tester = InjectivityTester::new(m.clone());
        for q in acts_up_to(&m, 3) {
            assert_eq!(
                tester.injective(&q).verdict,
                tester.injective_by_definition(&q, 4),
                "{q:?}"
            );
        }
    }
}
