//! Equivariant maps and backtracking search for them.

use std::collections::{BTreeSet, HashSet};
use std::ops::ControlFlow;

use crate::act::Act;
use crate::error::{check_index, Error, Result};

/// An equivariant map `f(s·x) = s·f(x)` between acts over the same monoid.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ActHom {
    source: Act,
    target: Act,
    map: Vec<usize>,
}

impl ActHom {
    pub fn new(source: Act, target: Act, map: Vec<usize>) -> Result<Self> {
        if !source.same_monoid(&target) {
            return Err(Error::MonoidMismatch);
        }
        if map.len() != source.size() {
            return Err(Error::MalformedTable(format!(
                "map has length {}, source has {} elements",
                map.len(),
                source.size()
            )));
        }
        for &y in &map {
            check_index(y, target.size())?;
        }
        for s in 0..source.monoid().size() {
            for x in 0..source.size() {
                if map[source.act(s, x)] != target.act(s, map[x]) {
                    return Err(Error::NotEquivariant { s, x });
                }
            }
        }
        Ok(ActHom {
            source,
            target,
            map,
        })
    }

    pub(crate) fn new_unchecked(source: Act, target: Act, map: Vec<usize>) -> Self {
        debug_assert!(ActHom::new(source.clone(), target.clone(), map.clone()).is_ok());
        ActHom {
            source,
            target,
            map,
        }
    }

    pub fn identity(act: &Act) -> Self {
        ActHom {
            source: act.clone(),
            target: act.clone(),
            map: (0..act.size()).collect(),
        }
    }

    /// Inclusion of a subact of `act` (the subact relabelled in index order).
    pub fn inclusion(act: &Act, subact: &BTreeSet<usize>) -> Result<Self> {
        let (sub, elems) = act.restrict(subact)?;
        Ok(ActHom {
            source: sub,
            target: act.clone(),
            map: elems,
        })
    }

    pub fn source(&self) -> &Act {
        &self.source
    }

    pub fn target(&self) -> &Act {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &ActHom) -> Result<ActHom> {
        if self.target != other.source {
            return Err(Error::ShapeMismatch);
        }
        Ok(ActHom {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&y| other.map[y]).collect(),
        })
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.target.size()];
        self.map
            .iter()
            .all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target.size()
    }

    pub fn image(&self) -> BTreeSet<usize> {
        self.map.iter().copied().collect()
    }

    pub fn image_of(&self, xs: &BTreeSet<usize>) -> BTreeSet<usize> {
        xs.iter().map(|&x| self.map[x]).collect()
    }
}

/// Options for [`HomSearch`].
#[derive(Clone, Debug, Default)]
pub struct HomSearchOptions {
    /// Partial map `x -> y` every result must extend.
    pub constraints: Vec<(usize, usize)>,
    /// Only injective maps.
    pub injective: bool,
}

/// Depth-first search over equivariant maps `source -> target`.
///
/// The least unassigned source element is branched on, trying target
/// candidates in index order; each choice is propagated along the orbit of the
/// element. Results therefore come out in lexicographic order of the map array.
pub struct HomSearch<'a> {
    source: &'a Act,
    target: &'a Act,
    injective: bool,
    start: Vec<Option<usize>>,
}

impl<'a> HomSearch<'a> {
    pub fn new(source: &'a Act, target: &'a Act, options: &HomSearchOptions) -> Result<Self> {
        if !source.same_monoid(target) {
            return Err(Error::MonoidMismatch);
        }
        let mut start = vec![None; source.size()];
        let mut used = vec![None; target.size()];
        for &(x, y) in &options.constraints {
            check_index(x, source.size())?;
            check_index(y, target.size())?;
            if !assign(
                source,
                target,
                options.injective,
                &mut start,
                &mut used,
                x,
                y,
            ) {
                return Err(Error::InconsistentConstraints(x));
            }
        }
        Ok(HomSearch {
            source,
            target,
            injective: options.injective,
            start,
        })
    }

    /// Calls `visit` on each map until it breaks.
    pub fn for_each<B>(&self, mut visit: impl FnMut(&[usize]) -> ControlFlow<B>) -> Option<B> {
        let mut used = vec![None; self.target.size()];
        for (x, y) in self.start.iter().enumerate() {
            if let Some(y) = y {
                used[*y] = Some(x);
            }
        }
        let mut scratch = Vec::with_capacity(self.source.size());
        match self.descend(self.start.clone(), used, &mut scratch, &mut visit) {
            ControlFlow::Break(b) => Some(b),
            ControlFlow::Continue(()) => None,
        }
    }

    fn descend<B>(
        &self,
        map: Vec<Option<usize>>,
        used: Vec<Option<usize>>,
        scratch: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        let Some(x) = map.iter().position(Option::is_none) else {
            scratch.clear();
            scratch.extend(map.iter().map(|y| y.unwrap()));
            return visit(scratch);
        };
        for y in 0..self.target.size() {
            if self.injective && used[y].is_some() {
                continue;
            }
            let mut next = map.clone();
            let mut next_used = used.clone();
            if assign(
                self.source,
                self.target,
                self.injective,
                &mut next,
                &mut next_used,
                x,
                y,
            ) {
                self.descend(next, next_used, scratch, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    pub fn collect(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each::<()>(|m| {
            out.push(m.to_vec());
            ControlFlow::Continue(())
        });
        out
    }

    pub fn first(&self) -> Option<Vec<usize>> {
        self.for_each(|m| ControlFlow::Break(m.to_vec()))
    }

    pub fn count(&self) -> usize {
        let mut n = 0;
        self.for_each::<()>(|_| {
            n += 1;
            ControlFlow::Continue(())
        });
        n
    }
}

/// Sets `x -> y` and everything it forces; false on a conflict.
fn assign(
    source: &Act,
    target: &Act,
    injective: bool,
    map: &mut [Option<usize>],
    used: &mut [Option<usize>],
    x: usize,
    y: usize,
) -> bool {
    let mut stack = vec![(x, y)];
    while let Some((x, y)) = stack.pop() {
        match map[x] {
            Some(cur) if cur == y => continue,
            Some(_) => return false,
            None => {}
        }
        if injective {
            match used[y] {
                Some(other) if other != x => return false,
                _ => used[y] = Some(x),
            }
        }
        map[x] = Some(y);
        for s in 1..source.monoid().size() {
            stack.push((source.act(s, x), target.act(s, y)));
        }
    }
    true
}

/// All homomorphisms `a -> b` extending `constraints`, in lexicographic order.
pub fn enumerate_homs(a: &Act, b: &Act, constraints: &[(usize, usize)]) -> Result<Vec<ActHom>> {
    let options = HomSearchOptions {
        constraints: constraints.to_vec(),
        injective: false,
    };
    let search = HomSearch::new(a, b, &options)?;
    Ok(search
        .collect()
        .into_iter()
        .map(|m| ActHom::new_unchecked(a.clone(), b.clone(), m))
        .collect())
}

pub fn find_isomorphism(a: &Act, b: &Act) -> Option<ActHom> {
    if a.size() != b.size() || !a.same_monoid(b) {
        return None;
    }
    let options = HomSearchOptions {
        constraints: Vec::new(),
        injective: true,
    };
    let search = HomSearch::new(a, b, &options).ok()?;
    search
        .first()
        .map(|m| ActHom::new_unchecked(a.clone(), b.clone(), m))
}

pub fn is_isomorphic(a: &Act, b: &Act) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Restrictions along `inclusion: A -> B` of every hom `B -> q`.
pub fn restricted_homs(inclusion: &ActHom, q: &Act) -> HashSet<Vec<usize>> {
    let mut out = HashSet::new();
    let Ok(search) = HomSearch::new(inclusion.target(), q, &HomSearchOptions::default()) else {
        return out;
    };
    search.for_each::<()>(|g| {
        out.insert(inclusion.map().iter().map(|&x| g[x]).collect());
        ControlFlow::Continue(())
    });
    out
}

/// Extends `f: A -> q` along the inclusion `A -> B`, returning the least
/// extension `B -> q` in lexicographic order.
pub fn extend_along(inclusion: &ActHom, f: &[usize], q: &Act) -> Option<Vec<usize>> {
    let constraints = inclusion
        .map()
        .iter()
        .copied()
        .zip(f.iter().copied())
        .collect();
    let options = HomSearchOptions {
        constraints,
        injective: false,
    };
    HomSearch::new(inclusion.target(), q, &options)
        .ok()?
        .first()
}

/// The least hom `A -> q` that does not extend along `inclusion: A -> B`.
pub fn first_non_extendable(inclusion: &ActHom, q: &Act) -> Option<Vec<usize>> {
    let extendable = restricted_homs(inclusion, q);
    let search = HomSearch::new(inclusion.source(), q, &HomSearchOptions::default()).ok()?;
    search.for_each(|f| {
        if extendable.contains(f) {
            ControlFlow::Continue(())
        } else {
            ControlFlow::Break(f.to_vec())
        }
    })
}

/// Every hom `A -> q` that does not extend along `inclusion`, in order.
pub fn all_non_extendable(inclusion: &ActHom, q: &Act) -> Vec<Vec<usize>> {
    non_extendable_within(inclusion, q, usize::MAX).expect("no limit")
}

/// Like [`all_non_extendable`], but gives up with `None` once more than
/// `limit` homs have been found.
pub fn non_extendable_within(inclusion: &ActHom, q: &Act, limit: usize) -> Option<Vec<Vec<usize>>> {
    let extendable = restricted_homs(inclusion, q);
    let mut out = Vec::new();
    if let Ok(search) = HomSearch::new(inclusion.source(), q, &HomSearchOptions::default()) {
        let overflow = search.for_each(|f| {
            if !extendable.contains(f) {
                if out.len() == limit {
                    return ControlFlow::Break(());
                }
                out.push(f.to_vec());
            }
            ControlFlow::Continue(())
        });
        if overflow.is_some() {
            return None;
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::monoid::Monoid;

    fn rz3() -> Arc<Monoid> {
        Arc::new(Monoid::from_table(&[vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]]).unwrap())
    }

    fn brute_force(a: &Act, b: &Act) -> Vec<Vec<usize>> {
        let n = a.size();
        let mut out = Vec::new();
        let total = b.size().pow(n as u32);
        for code in 0..total {
            let mut map = vec![0; n];
            let mut c = code;
            for slot in map.iter_mut().rev() {
                *slot = c % b.size();
                c /= b.size();
            }
            if ActHom::new(a.clone(), b.clone(), map.clone()).is_ok() {
                out.push(map);
            }
        }
        out
    }

    #[test]
    fn trivial_monoid_homs_are_all_functions() {
        let m = Arc::new(Monoid::trivial());
        let two = Act::fixed_points(m, 2);
        assert_eq!(enumerate_homs(&two, &two, &[]).unwrap().len(), 4);
    }

    #[test]
    fn homs_from_regular_act() {
        let m = rz3();
        let s = Act::regular(m.clone());
        let homs = enumerate_homs(&s, &s, &[]).unwrap();
        assert_eq!(homs.len(), 3);
        for h in &homs {
            let img1 = h.apply(0);
            for x in 0..3 {
                assert_eq!(h.apply(x), s.act(x, img1));
            }
        }
        let maps: Vec<_> = homs.iter().map(|h| h.map().to_vec()).collect();
        assert_eq!(maps, brute_force(&s, &s));
    }

    #[test]
    fn ideal_into_singleton() {
        let m = rz3();
        let s = Act::regular(m.clone());
        let inc = ActHom::inclusion(&s, &[1, 2].into_iter().collect()).unwrap();
        let pt = Act::singleton(m);
        assert_eq!(enumerate_homs(inc.source(), &pt, &[]).unwrap().len(), 1);
    }

    #[test]
    fn inconsistent_constraints() {
        let m = rz3();
        let s = Act::regular(m.clone());
        // 1 ↦ 1 forces a·1 = a ↦ a·1... then a=1 ↦ 2 conflicts.
        assert_eq!(
            enumerate_homs(&s, &s, &[(0, 1), (1, 2)]).unwrap_err(),
            Error::InconsistentConstraints(1)
        );
    }

    #[test]
    fn lexicographic_and_complete() {
        let m = rz3();
        let a = Act::from_table(m.clone(), &[vec![0, 1, 2], vec![0, 1, 0], vec![0, 1, 1]]).unwrap();
        let b = Act::regular(m);
        for (src, dst) in [(&a, &b), (&b, &a), (&a, &a)] {
            let got: Vec<_> = enumerate_homs(src, dst, &[])
                .unwrap()
                .into_iter()
                .map(|h| h.map().to_vec())
                .collect();
            assert_eq!(got, brute_force(src, dst));
        }
    }

    #[test]
    fn isomorphism_search() {
        let m = rz3();
        let s = Act::regular(m.clone());
        let swapped = s.relabel(&[0, 2, 1]);
        assert!(is_isomorphic(&s, &swapped));
        assert!(!is_isomorphic(&s, &Act::fixed_points(m, 3)));
    }
}
