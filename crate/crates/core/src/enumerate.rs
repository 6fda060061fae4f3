//! Enumeration of acts: left congruences and cyclic acts, all acts of a given
//! size up to isomorphism, and seeded random acts.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::act::Act;
use crate::hom::is_isomorphic;
use crate::monoid::Monoid;

/// A left congruence on `S` as class labels numbered by least member.
pub type Congruence = Vec<usize>;

fn normalize(labels: &[usize]) -> Congruence {
    let mut remap = BTreeMap::new();
    labels
        .iter()
        .map(|l| {
            let next = remap.len();
            *remap.entry(*l).or_insert(next)
        })
        .collect()
}

fn join(monoid: &Monoid, a: &Congruence, pairs: &[(usize, usize)]) -> Congruence {
    let n = monoid.size();
    let mut labels = a.clone();
    let merge = |labels: &mut Vec<usize>, x: usize, y: usize| {
        let (lx, ly) = (labels[x], labels[y]);
        if lx != ly {
            let (keep, drop) = (lx.min(ly), lx.max(ly));
            for l in labels.iter_mut() {
                if *l == drop {
                    *l = keep;
                }
            }
        }
    };
    for &(x, y) in pairs {
        for s in 0..n {
            merge(&mut labels, monoid.mul(s, x), monoid.mul(s, y));
        }
    }
    normalize(&labels)
}

/// Every left congruence on `S`, as joins of principal congruences.
///
/// The congruence generated by `(x, y)` is the equivalence generated by
/// `{(sx, sy)}`, which is already closed under left multiplication.
pub fn left_congruences(monoid: &Monoid) -> Vec<Congruence> {
    let n = monoid.size();
    let identity: Congruence = (0..n).collect();
    let principal: Vec<(usize, usize)> = (0..n)
        .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
        .collect();
    let mut seen = BTreeSet::from([identity.clone()]);
    let mut stack = vec![identity];
    while let Some(c) = stack.pop() {
        for &p in &principal {
            if c[p.0] == c[p.1] {
                continue;
            }
            let next = join(monoid, &c, &[p]);
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    let mut all: Vec<_> = seen.into_iter().collect();
    // Finest first: the regular act leads, the one-point act comes last.
    all.sort_by_key(|c| std::cmp::Reverse(c.iter().max().map_or(0, |m| m + 1)));
    all
}

/// `S/ρ` with generator `[1]` labelled 0.
pub fn cyclic_act(monoid: &Arc<Monoid>, congruence: &Congruence) -> Act {
    let n = monoid.size();
    let classes = congruence.iter().max().map_or(0, |m| m + 1);
    let mut action = vec![0; n * classes];
    for s in 0..n {
        for t in 0..n {
            action[s * classes + congruence[t]] = congruence[monoid.mul(s, t)];
        }
    }
    Act::from_flat_unchecked(monoid.clone(), classes, action)
}

/// All cyclic acts up to isomorphism, finest quotient first.
pub fn cyclic_acts(monoid: &Arc<Monoid>) -> Vec<Act> {
    let mut out: Vec<Act> = Vec::new();
    for c in left_congruences(monoid) {
        let act = cyclic_act(monoid, &c);
        if !out.iter().any(|o| is_isomorphic(o, &act)) {
            out.push(act);
        }
    }
    out
}

/// Partial action table with constraint propagation for the act laws.
#[derive(Clone)]
struct Partial<'a> {
    monoid: &'a Monoid,
    size: usize,
    cells: Vec<Option<usize>>,
}

impl<'a> Partial<'a> {
    fn new(monoid: &'a Monoid, size: usize) -> Option<Self> {
        let mut p = Partial {
            monoid,
            size,
            cells: vec![None; monoid.size() * size],
        };
        for x in 0..size {
            if !p.set(0, x, x) {
                return None;
            }
        }
        Some(p)
    }

    fn get(&self, s: usize, x: usize) -> Option<usize> {
        self.cells[s * self.size + x]
    }

    /// Sets `s·x = v` and propagates `s·(t·x) = (st)·x`; false on conflict.
    fn set(&mut self, s: usize, x: usize, v: usize) -> bool {
        let n = self.monoid.size();
        let mut queue = vec![(s, x, v)];
        while let Some((s, x, v)) = queue.pop() {
            match self.get(s, x) {
                Some(cur) if cur == v => continue,
                Some(_) => return false,
                None => self.cells[s * self.size + x] = Some(v),
            }
            if s == 0 && v != x {
                return false;
            }
            let require = |q: &mut Vec<(usize, usize, usize)>,
                           this: &Self,
                           s: usize,
                           x: usize,
                           v: usize|
             -> bool {
                match this.get(s, x) {
                    Some(cur) => cur == v,
                    None => {
                        q.push((s, x, v));
                        true
                    }
                }
            };
            // u·(s·x) = (us)·x
            for u in 0..n {
                let us = self.monoid.mul(u, s);
                match (self.get(u, v), self.get(us, x)) {
                    (Some(a), _) => {
                        if !require(&mut queue, self, us, x, a) {
                            return false;
                        }
                    }
                    (None, Some(b)) => queue.push((u, v, b)),
                    (None, None) => {}
                }
            }
            // s·(t·y) = (st)·y whenever t·y = x
            for t in 0..n {
                let st = self.monoid.mul(s, t);
                for y in 0..self.size {
                    if self.get(t, y) == Some(x) && !require(&mut queue, self, st, y, v) {
                        return false;
                    }
                }
            }
            // p·(q·x) = s·x whenever pq = s
            for p in 0..n {
                for q in 0..n {
                    if self.monoid.mul(p, q) != s {
                        continue;
                    }
                    if let Some(y) = self.get(q, x) {
                        if !require(&mut queue, self, p, y, v) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn first_open(&self) -> Option<(usize, usize)> {
        self.cells
            .iter()
            .position(Option::is_none)
            .map(|i| (i / self.size, i % self.size))
    }

    fn finish(&self, monoid: &Arc<Monoid>) -> Act {
        let action = self.cells.iter().map(|c| c.unwrap()).collect();
        Act::from_flat_unchecked(monoid.clone(), self.size, action)
    }
}

/// Calls `f` on every act with carrier `{0..size}` (labelled, not up to
/// isomorphism), in lexicographic order of the action table.
pub fn for_each_labelled_act(monoid: &Arc<Monoid>, size: usize, mut f: impl FnMut(Act)) {
    fn go(p: Partial<'_>, monoid: &Arc<Monoid>, f: &mut impl FnMut(Act)) {
        let Some((s, x)) = p.first_open() else {
            f(p.finish(monoid));
            return;
        };
        for v in 0..p.size {
            let mut next = p.clone();
            if next.set(s, x, v) {
                go(next, monoid, f);
            }
        }
    }
    if let Some(p) = Partial::new(monoid, size) {
        go(p, monoid, &mut f);
    }
}

/// Cheap isomorphism invariant of a point: orbit size, stabilizer size and
/// the number of points it is reachable from.
fn point_invariants(act: &Act) -> Vec<(usize, usize, usize)> {
    let n = act.monoid().size();
    let mut reached_from = vec![0; act.size()];
    let mut orbit_len = vec![0; act.size()];
    for (x, len) in orbit_len.iter_mut().enumerate() {
        let orbit = act.orbit(x);
        *len = orbit.len();
        for y in orbit {
            reached_from[y] += 1;
        }
    }
    (0..act.size())
        .map(|x| {
            let stab = (0..n).filter(|&s| act.act(s, x) == x).count();
            (orbit_len[x], stab, reached_from[x])
        })
        .collect()
}

/// Canonical representative of the isomorphism class: the least action table
/// among relabellings that list points in increasing invariant order.
pub fn canonical_form(act: &Act) -> Act {
    let inv = point_invariants(act);
    let mut order: Vec<usize> = (0..act.size()).collect();
    order.sort_by_key(|&x| inv[x]);
    // Blocks of equal invariants; positions within a block are permuted.
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for &x in &order {
        match blocks.last_mut() {
            Some(b) if inv[b[0]] == inv[x] => b.push(x),
            _ => blocks.push(vec![x]),
        }
    }
    let mut best: Option<Vec<usize>> = None;
    let mut perm = vec![0; act.size()];
    let mut blocks_perm: Vec<Vec<usize>> = blocks.clone();
    search_blocks(act, &blocks, &mut blocks_perm, 0, &mut perm, &mut best);
    let table = best.unwrap_or_default();
    Act::from_flat_unchecked(act.monoid().clone(), act.size(), table)
}

fn search_blocks(
    act: &Act,
    blocks: &[Vec<usize>],
    current: &mut Vec<Vec<usize>>,
    depth: usize,
    perm: &mut Vec<usize>,
    best: &mut Option<Vec<usize>>,
) {
    if depth == blocks.len() {
        let mut pos = 0;
        for b in current.iter() {
            for &x in b {
                perm[x] = pos;
                pos += 1;
            }
        }
        let table = act.relabel(perm).flat().to_vec();
        if best.as_ref().is_none_or(|b| table < *b) {
            *best = Some(table);
        }
        return;
    }
    let mut items = blocks[depth].clone();
    permutations(&mut items, 0, &mut |p| {
        current[depth] = p.to_vec();
        search_blocks(act, blocks, current, depth + 1, perm, best);
    });
}

fn permutations(items: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

/// All acts of exactly `size` points up to isomorphism, in canonical form,
/// sorted by action table.
pub fn acts_up_to_iso(monoid: &Arc<Monoid>, size: usize) -> Vec<Act> {
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for_each_labelled_act(monoid, size, |a| {
        let c = canonical_form(&a);
        seen.insert(c.flat().to_vec());
    });
    let mut tables: Vec<Vec<usize>> = seen.into_iter().collect();
    tables.sort();
    tables
        .into_iter()
        .map(|t| Act::from_flat_unchecked(monoid.clone(), size, t))
        .collect()
}

/// All acts with at most `max_size` points up to isomorphism, smallest first.
pub fn acts_up_to(monoid: &Arc<Monoid>, max_size: usize) -> Vec<Act> {
    (0..=max_size)
        .flat_map(|m| acts_up_to_iso(monoid, m))
        .collect()
}

/// A random act with `size` points: depth-first completion of the action
/// table with shuffled candidate order. Always succeeds since the trivial
/// action is a solution.
pub fn random_act<R: Rng>(monoid: &Arc<Monoid>, size: usize, rng: &mut R) -> Act {
    fn go<R: Rng>(p: Partial<'_>, monoid: &Arc<Monoid>, rng: &mut R) -> Option<Act> {
        let Some((s, x)) = p.first_open() else {
            return Some(p.finish(monoid));
        };
        let mut values: Vec<usize> = (0..p.size).collect();
        values.shuffle(rng);
        for v in values {
            let mut next = p.clone();
            if next.set(s, x, v) {
                if let Some(a) = go(next, monoid, rng) {
                    return Some(a);
                }
            }
        }
        None
    }
    let p = Partial::new(monoid, size).expect("identity row is always consistent");
    go(p, monoid, rng).expect("the trivial action always completes")
}

/// A random subset of `0..n`, each element kept with probability `p`.
pub fn random_subset<R: Rng>(n: usize, p: f64, rng: &mut R) -> BTreeSet<usize> {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}
