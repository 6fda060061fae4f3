//! Seeded random configurations for the property suites.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::act::Act;
use crate::enumerate::random_act;
use crate::hom::{ActHom, HomSearch, HomSearchOptions};
use crate::limits::{coproduct, pullback, pushout, CommutativeSquare};
use crate::monoid::Monoid;

pub fn pick<'a, T, R: Rng>(items: &'a [T], rng: &mut R) -> &'a T {
    items.choose(rng).expect("nonempty choice")
}

/// A random act with between `min` and `max` elements.
pub fn act<R: Rng>(monoid: &Arc<Monoid>, min: usize, max: usize, rng: &mut R) -> Act {
    let size = rng.gen_range(min..=max);
    random_act(monoid, size, rng)
}

/// The subact generated by a random subset, each element kept with
/// probability `p`.
pub fn subact<R: Rng>(act: &Act, p: f64, rng: &mut R) -> BTreeSet<usize> {
    let seeds: Vec<usize> = (0..act.size()).filter(|_| rng.gen_bool(p)).collect();
    act.generated_subact(seeds).expect("indices in range")
}

/// A subact `A ≤ upper` containing `lower`, both subacts.
pub fn subact_between<R: Rng>(
    act: &Act,
    lower: &BTreeSet<usize>,
    upper: &BTreeSet<usize>,
    rng: &mut R,
) -> BTreeSet<usize> {
    let extra: Vec<usize> = upper
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.4))
        .collect();
    let mut out = act.generated_subact(extra).expect("indices in range");
    out.extend(lower.iter().copied());
    out
}

/// A random subset of the carrier.
pub fn subset<R: Rng>(act: &Act, p: f64, rng: &mut R) -> BTreeSet<usize> {
    (0..act.size()).filter(|_| rng.gen_bool(p)).collect()
}

pub fn permutation<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// The inclusion of a subact, precomposed with a random relabelling of the
/// subact so that monos are not always order-preserving.
pub fn mono_from_subact<R: Rng>(act: &Act, sub: &BTreeSet<usize>, rng: &mut R) -> ActHom {
    let inc = ActHom::inclusion(act, sub).expect("subact is closed");
    let perm = permutation(sub.len(), rng);
    let relabelled = inc.source().relabel(&perm);
    let mut map = vec![0; sub.len()];
    for (x, &px) in perm.iter().enumerate() {
        map[px] = inc.apply(x);
    }
    ActHom::new(relabelled, act.clone(), map).expect("relabelled inclusion is a hom")
}

/// A uniformly chosen hom `a → b` among the first `limit` in search order,
/// if any exists.
pub fn hom<R: Rng>(a: &Act, b: &Act, limit: usize, rng: &mut R) -> Option<ActHom> {
    let search = HomSearch::new(a, b, &HomSearchOptions::default()).ok()?;
    let mut all = Vec::new();
    search.for_each(|m| {
        all.push(m.to_vec());
        if all.len() >= limit {
            std::ops::ControlFlow::Break(())
        } else {
            std::ops::ControlFlow::Continue(())
        }
    });
    let map = all.choose(rng)?.clone();
    Some(ActHom::new(a.clone(), b.clone(), map).expect("search yields homs"))
}

/// A pullback square of monos: two random subacts of a random act, each
/// relabelled, with their pullback as the corner.
pub fn pullback_square<R: Rng>(monoid: &Arc<Monoid>, max: usize, rng: &mut R) -> CommutativeSquare {
    let a3 = act(monoid, 0, max, rng);
    let s1 = subact(&a3, 0.4, rng);
    let s2 = subact(&a3, 0.4, rng);
    let g1 = mono_from_subact(&a3, &s1, rng);
    let g2 = mono_from_subact(&a3, &s2, rng);
    let pb = pullback(&g1, &g2).expect("shared target");
    CommutativeSquare::new(pb.left, pb.right, g1, g2).expect("pullback squares commute")
}

/// Two monos out of a common act `A`.
pub fn mono_span<R: Rng>(monoid: &Arc<Monoid>, max: usize, rng: &mut R) -> (ActHom, ActHom) {
    let b1 = act(monoid, 0, max, rng);
    let a = subact(&b1, 0.4, rng);
    let i1 = mono_from_subact(&b1, &a, rng);
    let src = i1.source().clone();
    let i2 = match rng.gen_range(0..3) {
        0 => i1.clone(),
        1 => {
            let rest = act(monoid, 0, max.saturating_sub(src.size()), rng);
            let sum = coproduct(&src, &rest).expect("same monoid");
            let perm = permutation(sum.apex.size(), rng);
            let apex = sum.apex.relabel(&perm);
            let map = sum.left.map().iter().map(|&y| perm[y]).collect();
            ActHom::new(src.clone(), apex, map).expect("relabelled injection")
        }
        _ => {
            // Another copy of B1 glued to a random act along A.
            let rest = act(monoid, 0, 2, rng);
            let extra = coproduct(&b1, &rest).expect("same monoid");
            let perm = permutation(extra.apex.size(), rng);
            let apex = extra.apex.relabel(&perm);
            let map = i1
                .map()
                .iter()
                .map(|&y| perm[extra.left.apply(y)])
                .collect();
            ActHom::new(src.clone(), apex, map).expect("relabelled mono")
        }
    };
    (i1, i2)
}

/// A configuration `B ≤ C ≤ D` with elements `a1, a2` of equal type over
/// `B`, neither forking over `B` inside `C`.
#[derive(Clone, Debug)]
pub struct MergeConfig {
    pub ambient: Act,
    pub a1: usize,
    pub a2: usize,
    pub base: BTreeSet<usize>,
    pub over: BTreeSet<usize>,
}

/// Glues two copies of a random act along a subact `B`; `a1` lies in the
/// first copy with `Sa1 ∩ C ⊆ B`, and `a2` is its twin in the second copy.
pub fn merge_config<R: Rng>(monoid: &Arc<Monoid>, max: usize, rng: &mut R) -> MergeConfig {
    loop {
        let d = act(monoid, 1, max, rng);
        let c = subact(&d, 0.4, rng);
        let b = subact_between(&d, &BTreeSet::new(), &c, rng);
        let b: BTreeSet<usize> = b.intersection(&c).copied().collect();
        let candidates: Vec<usize> = (0..d.size())
            .filter(|&x| d.orbit(x).intersection(&c).all(|y| b.contains(y)))
            .collect();
        let Some(&a) = candidates.choose(rng) else {
            continue;
        };
        let inc = ActHom::inclusion(&d, &b).expect("subact");
        let glued = pushout(&inc, &inc).expect("shared source");
        return MergeConfig {
            a1: glued.left.apply(a),
            a2: glued.right.apply(a),
            base: glued.left.image_of(&b),
            over: glued.left.image_of(&c),
            ambient: glued.apex,
        };
    }
}
