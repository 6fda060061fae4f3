//! Exact minimum generating sets.
//!
//! A set `Y` closed under the action is covered by the orbits `Sy`. We want a
//! smallest `Z ⊆ Y` with `Y = SZ`, ties broken by the lexicographically least
//! sorted generator list. Every element of a minimum cover has an orbit that
//! is maximal among `{Sy : y ∈ Y}`, so only those are branched on.

use std::collections::BTreeSet;

use itertools::Itertools;

/// Minimum generating set of `target` given the orbit map `orbit(y) = Sy`.
///
/// `target` must be closed under `orbit`; the result is sorted ascending.
pub fn min_generating_set<F>(target: &BTreeSet<usize>, orbit: F) -> Vec<usize>
where
    F: Fn(usize) -> BTreeSet<usize>,
{
    if target.is_empty() {
        return Vec::new();
    }
    let orbits: Vec<(usize, BTreeSet<usize>)> = target.iter().map(|&y| (y, orbit(y))).collect();
    let candidates: Vec<&(usize, BTreeSet<usize>)> = orbits
        .iter()
        .filter(|(_, oy)| {
            !orbits
                .iter()
                .any(|(_, oz)| oz.len() > oy.len() && oy.is_subset(oz))
        })
        .collect();

    // Elements with equal maximal orbits are interchangeable; at least one per
    // distinct maximal orbit is needed, which gives the starting depth.
    let distinct: BTreeSet<&BTreeSet<usize>> = candidates.iter().map(|(_, o)| o).collect();
    for k in distinct.len()..=candidates.len() {
        for combo in candidates.iter().combinations(k) {
            let mut covered = BTreeSet::new();
            for (_, o) in &combo {
                covered.extend(o.iter().copied());
            }
            if covered == *target {
                return combo.iter().map(|(y, _)| *y).collect();
            }
        }
    }
    unreachable!("target is covered by all of its maximal orbits")
}
