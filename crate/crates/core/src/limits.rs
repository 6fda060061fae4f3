//! Finite limits and colimits of acts.
//!
//! Everything is computed on underlying sets, which is how the forgetful
//! functor to sets creates (co)limits. Quotient carriers are labelled by the
//! least tagged index of each class, so outputs are bit-stable.

use std::collections::BTreeSet;

use crate::act::Act;
use crate::error::{Error, Result};
use crate::hom::ActHom;

/// A cocone or cone with its apex and two legs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    pub apex: Act,
    pub left: ActHom,
    pub right: ActHom,
}

/// A commutative square `g1∘f1 = g2∘f2` with `f1: A0→A1, f2: A0→A2,
/// g1: A1→A3, g2: A2→A3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutativeSquare {
    pub f1: ActHom,
    pub f2: ActHom,
    pub g1: ActHom,
    pub g2: ActHom,
}

impl CommutativeSquare {
    pub fn new(f1: ActHom, f2: ActHom, g1: ActHom, g2: ActHom) -> Result<Self> {
        if f1.source() != f2.source() {
            return Err(Error::SourceMismatch);
        }
        if g1.target() != g2.target() {
            return Err(Error::TargetMismatch);
        }
        if f1.target() != g1.source() || f2.target() != g2.source() {
            return Err(Error::ShapeMismatch);
        }
        let square = CommutativeSquare { f1, f2, g1, g2 };
        if !square.commutes() {
            return Err(Error::NotCommutative);
        }
        Ok(square)
    }

    fn commutes(&self) -> bool {
        (0..self.f1.source().size())
            .all(|x| self.g1.apply(self.f1.apply(x)) == self.g2.apply(self.f2.apply(x)))
    }

    pub fn all_mono(&self) -> bool {
        [&self.f1, &self.f2, &self.g1, &self.g2]
            .iter()
            .all(|h| h.is_injective())
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Keeps the smaller index as root, so roots are least representatives.
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Class label of every element; classes numbered by least member.
    fn labels(&mut self) -> (usize, Vec<usize>) {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        for x in 0..n {
            let r = self.find(x);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            label[x] = label[r];
        }
        (count, label)
    }
}

/// Quotient of `act` by the equivalence generated by `pairs`.
///
/// `pairs` must be closed under the action (as the pairs `(f(x), g(x))` of two
/// homs are); then the generated equivalence is already a congruence.
fn quotient(act: &Act, pairs: impl IntoIterator<Item = (usize, usize)>) -> ActHom {
    let mut uf = UnionFind::new(act.size());
    for (a, b) in pairs {
        uf.union(a, b);
    }
    let (count, label) = uf.labels();
    let n = act.monoid().size();
    let mut action = vec![0; n * count];
    for x in 0..act.size() {
        for s in 0..n {
            action[s * count + label[x]] = label[act.act(s, x)];
        }
    }
    let q = Act::from_flat_unchecked(act.monoid().clone(), count, action);
    ActHom::new_unchecked(act.clone(), q, label)
}

/// Disjoint union with the two injections; `a` comes first.
pub fn coproduct(a: &Act, b: &Act) -> Result<Span> {
    if !a.same_monoid(b) {
        return Err(Error::MonoidMismatch);
    }
    let (na, nb) = (a.size(), b.size());
    let size = na + nb;
    let n = a.monoid().size();
    let mut action = Vec::with_capacity(n * size);
    for s in 0..n {
        action.extend((0..na).map(|x| a.act(s, x)));
        action.extend((0..nb).map(|y| na + b.act(s, y)));
    }
    let apex = Act::from_flat_unchecked(a.monoid().clone(), size, action);
    Ok(Span {
        left: ActHom::new_unchecked(a.clone(), apex.clone(), (0..na).collect()),
        right: ActHom::new_unchecked(b.clone(), apex.clone(), (na..size).collect()),
        apex,
    })
}

/// Pushout of `f1: A0 → A1` and `f2: A0 → A2`: the quotient of `A1 ⊔ A2` by
/// `f1(x) ~ f2(x)`. Legs are `q1: A1 → P`, `q2: A2 → P`.
pub fn pushout(f1: &ActHom, f2: &ActHom) -> Result<Span> {
    if f1.source() != f2.source() {
        return Err(Error::SourceMismatch);
    }
    let sum = coproduct(f1.target(), f2.target())?;
    let offset = f1.target().size();
    let q = quotient(
        &sum.apex,
        (0..f1.source().size()).map(|x| (f1.apply(x), offset + f2.apply(x))),
    );
    Ok(Span {
        apex: q.target().clone(),
        left: sum.left.then(&q)?,
        right: sum.right.then(&q)?,
    })
}

/// Pullback of `g1: A1 → A3` and `g2: A2 → A3`: pairs `(x, y)` with
/// `g1(x) = g2(y)` in lexicographic order, with the two projections.
pub fn pullback(g1: &ActHom, g2: &ActHom) -> Result<Span> {
    if g1.target() != g2.target() {
        return Err(Error::TargetMismatch);
    }
    let (a1, a2) = (g1.source(), g2.source());
    let pairs: Vec<(usize, usize)> = (0..a1.size())
        .flat_map(|x| (0..a2.size()).map(move |y| (x, y)))
        .filter(|&(x, y)| g1.apply(x) == g2.apply(y))
        .collect();
    let index = |x: usize, y: usize| {
        pairs
            .binary_search(&(x, y))
            .expect("pullback is closed under the action")
    };
    let n = a1.monoid().size();
    let size = pairs.len();
    let mut action = Vec::with_capacity(n * size);
    for s in 0..n {
        for &(x, y) in &pairs {
            action.push(index(a1.act(s, x), a2.act(s, y)));
        }
    }
    let apex = Act::from_flat_unchecked(a1.monoid().clone(), size, action);
    Ok(Span {
        left: ActHom::new_unchecked(
            apex.clone(),
            a1.clone(),
            pairs.iter().map(|p| p.0).collect(),
        ),
        right: ActHom::new_unchecked(
            apex.clone(),
            a2.clone(),
            pairs.iter().map(|p| p.1).collect(),
        ),
        apex,
    })
}

fn check_parallel(f: &ActHom, g: &ActHom) -> Result<()> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::ShapeMismatch);
    }
    Ok(())
}

/// `{x : f(x) = g(x)}` as a subact, with its inclusion into the source.
pub fn equalizer(f: &ActHom, g: &ActHom) -> Result<ActHom> {
    check_parallel(f, g)?;
    let set: BTreeSet<usize> = (0..f.source().size())
        .filter(|&x| f.apply(x) == g.apply(x))
        .collect();
    ActHom::inclusion(f.source(), &set)
}

/// Quotient of the target by the congruence generated by `f(x) ~ g(x)`.
pub fn coequalizer(f: &ActHom, g: &ActHom) -> Result<ActHom> {
    check_parallel(f, g)?;
    Ok(quotient(
        f.target(),
        (0..f.source().size()).map(|x| (f.apply(x), g.apply(x))),
    ))
}

/// `h = m ∘ e` with `e` onto the image subact and `m` its inclusion.
pub fn epi_mono_factorize(h: &ActHom) -> (ActHom, ActHom) {
    let image = h.image();
    let m = ActHom::inclusion(h.target(), &image).expect("image of a hom is a subact");
    let elems: Vec<usize> = image.into_iter().collect();
    let e_map = h
        .map()
        .iter()
        .map(|y| elems.binary_search(y).unwrap())
        .collect();
    let e = ActHom::new_unchecked(h.source().clone(), m.source().clone(), e_map);
    (e, m)
}

/// Amalgamates two monos out of `A` with `f1[B1] ∩ f2[B2] = f1[i1[A]]`,
/// realized as the pushout.
pub fn disjoint_amalgam(i1: &ActHom, i2: &ActHom) -> Result<Span> {
    if !i1.is_injective() || !i2.is_injective() {
        return Err(Error::NotMono);
    }
    pushout(i1, i2)
}

/// The unique `u: P → Z` with `u∘q1 = z1` and `u∘q2 = z2` for a cocone
/// `(z1, z2)` over the pushout span `(q1, q2)`, or `None` when the cocone
/// does not factor.
pub fn pushout_mediator(pushout: &Span, z1: &ActHom, z2: &ActHom) -> Option<ActHom> {
    let p = &pushout.apex;
    let z = z1.target();
    if z != z2.target()
        || z1.source() != pushout.left.source()
        || z2.source() != pushout.right.source()
    {
        return None;
    }
    let mut map = vec![None; p.size()];
    let legs = [(&pushout.left, z1), (&pushout.right, z2)];
    for (q, zz) in legs {
        for x in 0..q.source().size() {
            let slot = &mut map[q.apply(x)];
            match slot {
                Some(v) if *v != zz.apply(x) => return None,
                _ => *slot = Some(zz.apply(x)),
            }
        }
    }
    let map: Option<Vec<usize>> = map.into_iter().collect();
    ActHom::new(p.clone(), z.clone(), map?).ok()
}

/// The unique `u: Z → P` with `p1∘u = z1` and `p2∘u = z2` for a cone over the
/// pullback span.
pub fn pullback_mediator(pullback: &Span, z1: &ActHom, z2: &ActHom) -> Option<ActHom> {
    let p = &pullback.apex;
    if z1.source() != z2.source() {
        return None;
    }
    let mut map = Vec::with_capacity(z1.source().size());
    for w in 0..z1.source().size() {
        let target = (z1.apply(w), z2.apply(w));
        let found =
            (0..p.size()).find(|&i| (pullback.left.apply(i), pullback.right.apply(i)) == target)?;
        map.push(found);
    }
    ActHom::new(z1.source().clone(), p.clone(), map).ok()
}

/// Checks that `(q1, q2)` with `q1∘f1 = q2∘f2` is a pushout of `(f1, f2)` by
/// comparing it with the canonical construction.
pub fn is_pushout(f1: &ActHom, f2: &ActHom, q1: &ActHom, q2: &ActHom) -> bool {
    let Ok(canonical) = pushout(f1, f2) else {
        return false;
    };
    if q1.target() != q2.target() {
        return false;
    }
    let commutes = (0..f1.source().size()).all(|x| q1.apply(f1.apply(x)) == q2.apply(f2.apply(x)));
    if !commutes {
        return false;
    }
    match pushout_mediator(&canonical, q1, q2) {
        Some(u) => u.is_injective() && u.is_surjective(),
        None => false,
    }
}
