//! The pullback independence relation on subsets of an act, nonforking of
//! types, minimal bases, merging of nonforking types, and splitting.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::act::Act;
use crate::error::{check_index, Error, Result, Side};
use crate::hom::{ActHom, HomSearch, HomSearchOptions};
use crate::limits::CommutativeSquare;
use crate::types::{compare_types, qf_map, type_rep, Equation, PointedTypeRep, TypeComparison};

/// A square of monos is independent iff it is a pullback, i.e.
/// `g1[A1] ∩ g2[A2] = g1 f1[A0]`.
pub fn square_is_independent(square: &CommutativeSquare) -> Result<bool> {
    if !square.all_mono() {
        return Err(Error::NotMono);
    }
    let left = square.g1.image();
    let right = square.g2.image();
    let meet: BTreeSet<usize> = left.intersection(&right).copied().collect();
    let corner = square.g1.image_of(&square.f1.image());
    Ok(meet == corner)
}

/// Is `X` independent from `Y` over the subact `A` inside `B`?
#[derive(Clone, Debug)]
pub struct IndependenceQuery {
    pub ambient: Act,
    pub base: BTreeSet<usize>,
    pub left: BTreeSet<usize>,
    pub right: BTreeSet<usize>,
}

impl IndependenceQuery {
    fn validate(&self) -> Result<()> {
        self.ambient.require_subact(&self.base)?;
        for &x in self.left.iter().chain(&self.right) {
            check_index(x, self.ambient.size())?;
        }
        Ok(())
    }

    /// `SX ∩ SY ∖ A`; empty iff the sides are independent.
    pub fn witness(&self) -> Result<BTreeSet<usize>> {
        self.validate()?;
        let sx = self.ambient.generated_subact(&self.left)?;
        let sy = self.ambient.generated_subact(&self.right)?;
        Ok(sx
            .intersection(&sy)
            .filter(|x| !self.base.contains(x))
            .copied()
            .collect())
    }
}

/// `SX ∩ SY ⊆ A`.
pub fn is_independent(query: &IndependenceQuery) -> Result<bool> {
    Ok(query.witness()?.is_empty())
}

/// A smallest `Z ⊆ A ∩ Sx` with `A ∩ Sx ⊆ SZ`, lexicographically least among
/// ties.
pub fn minimal_base(ambient: &Act, base: &BTreeSet<usize>, x: usize) -> Result<Vec<usize>> {
    ambient.require_subact(base)?;
    check_index(x, ambient.size())?;
    if base.contains(&x) {
        return Err(Error::ElementInBase(x));
    }
    let meet: BTreeSet<usize> = ambient.orbit(x).intersection(base).copied().collect();
    ambient.min_generators(&meet)
}

/// Whether a type forks over a subact of its parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonforkingRecord {
    pub tuple: Vec<usize>,
    pub params: BTreeSet<usize>,
    pub base: BTreeSet<usize>,
    pub nonforking: bool,
    /// `Sb̄ ∩ SX ∖ M`; empty iff the type does not fork.
    pub witness: BTreeSet<usize>,
}

/// `Sb̄ ∩ SX ⊆ M` for the type of `b̄` over `X`, where `M ≤ SX`.
pub fn type_nonforking(p: &PointedTypeRep, base: &BTreeSet<usize>) -> Result<NonforkingRecord> {
    let ambient = p.ambient();
    ambient.require_subact(base)?;
    let sx = ambient.generated_subact(p.params())?;
    if let Some(&x) = base.difference(&sx).next() {
        return Err(Error::BaseNotContained(x));
    }
    let query = IndependenceQuery {
        ambient: ambient.clone(),
        base: base.clone(),
        left: p.tuple().iter().copied().collect(),
        right: p.params().clone(),
    };
    let witness = query.witness()?;
    Ok(NonforkingRecord {
        tuple: p.tuple().to_vec(),
        params: p.params().clone(),
        base: base.clone(),
        nonforking: witness.is_empty(),
        witness,
    })
}

/// An isomorphism `Sa1 ∪ C → Sa2 ∪ C` fixing `C` and sending `a1` to `a2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Merge {
    pub domain: BTreeSet<usize>,
    pub codomain: BTreeSet<usize>,
    /// Between the restricted subacts, relabelled in increasing order.
    pub iso: ActHom,
    /// `(x, g(x))` on ambient indices.
    pub map: Vec<(usize, usize)>,
}

/// The element `s·g_i` of the first type named by a violated equation.
fn equation_element(ambient: &Act, eq: &Equation, gens: &[usize]) -> usize {
    ambient.act(eq.s, gens[eq.i])
}

/// Given `B ≤ C ≤ D` and `a1, a2` with the same type over `B`, both not
/// forking over `B` as types over `C`, glues the map `s·a1 ↦ s·a2` with the
/// identity on `C` and certifies the result as an isomorphism.
pub fn merge_nonforking(
    ambient: &Act,
    a1: usize,
    a2: usize,
    base: &BTreeSet<usize>,
    over: &BTreeSet<usize>,
) -> Result<Merge> {
    ambient.require_subact(base)?;
    ambient.require_subact(over)?;
    check_index(a1, ambient.size())?;
    check_index(a2, ambient.size())?;
    if let Some(&x) = base.difference(over).next() {
        return Err(Error::BaseNotContained(x));
    }

    let p_b = type_rep(ambient, &[a1], base)?;
    let q_b = type_rep(ambient, &[a2], base)?;
    let f = match compare_types(&p_b, &q_b)? {
        TypeComparison::Equal { map } => map,
        TypeComparison::Different { equation } => {
            let element = equation_element(ambient, &equation, &p_b.generators());
            return Err(Error::RestrictionsDiffer(element));
        }
    };

    for (side, a) in [(Side::Left, a1), (Side::Right, a2)] {
        let record = type_nonforking(&type_rep(ambient, &[a], over)?, base)?;
        if let Some(&element) = record.witness.iter().next() {
            return Err(Error::ForkingDetected { side, element });
        }
    }

    // g = f on Sa1, identity on C.
    let mut g = vec![None; ambient.size()];
    for (x, y) in f {
        g[x] = Some(y);
    }
    for &c in over {
        match g[c] {
            Some(y) if y != c => return Err(Error::RestrictionsDiffer(c)),
            _ => g[c] = Some(c),
        }
    }
    let domain: BTreeSet<usize> = (0..ambient.size()).filter(|&x| g[x].is_some()).collect();
    let codomain: BTreeSet<usize> = ambient.orbit(a2).union(over).copied().collect();
    let map: Vec<(usize, usize)> = domain.iter().map(|&x| (x, g[x].unwrap())).collect();

    let (src, src_elems) = ambient.restrict(&domain)?;
    let (tgt, tgt_elems) = ambient.restrict(&codomain)?;
    let local: Vec<usize> = src_elems
        .iter()
        .map(|&x| {
            tgt_elems
                .binary_search(&g[x].unwrap())
                .map_err(|_| Error::NotEquivariant { s: 0, x })
        })
        .collect::<Result<_>>()?;
    let iso = ActHom::new(src, tgt, local)?;
    if !iso.is_injective() || !iso.is_surjective() {
        return Err(Error::NotMono);
    }
    Ok(Merge {
        domain,
        codomain,
        iso,
        map,
    })
}

/// A witness that a type splits: an isomorphism `h: N1 → N2` fixing `M` that
/// moves the restriction of the type.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Splitting {
    pub n1: BTreeSet<usize>,
    pub n2: BTreeSet<usize>,
    /// `(x, h(x))` on ambient indices.
    pub h: Vec<(usize, usize)>,
    pub equation: Equation,
}

/// Searches subacts `M ≤ N1, N2 ≤ SX` and isomorphisms `h: N1 → N2` fixing
/// `M` for one with `h(p↾N1) ≠ p↾N2`. Returns the first witness found.
pub fn splitting_witness(p: &PointedTypeRep, base: &BTreeSet<usize>) -> Result<Option<Splitting>> {
    let ambient = p.ambient();
    ambient.require_subact(base)?;
    let sx = ambient.generated_subact(p.params())?;
    if let Some(&x) = base.difference(&sx).next() {
        return Err(Error::BaseNotContained(x));
    }
    let between = ambient.subacts_between(base, &sx);
    let restricted: Vec<(Act, Vec<usize>)> = between
        .iter()
        .map(|n| ambient.restrict(n))
        .collect::<Result<_>>()?;
    for (n1, (act1, elems1)) in between.iter().zip(&restricted) {
        for (n2, (act2, elems2)) in between.iter().zip(&restricted) {
            if n1.len() != n2.len() {
                continue;
            }
            // h must fix M pointwise.
            let constraints: Vec<(usize, usize)> = base
                .iter()
                .map(|m| {
                    (
                        elems1.binary_search(m).unwrap(),
                        elems2.binary_search(m).unwrap(),
                    )
                })
                .collect();
            let options = HomSearchOptions {
                constraints,
                injective: true,
            };
            let Ok(search) = HomSearch::new(act1, act2, &options) else {
                continue;
            };
            let found = search.for_each(|h| {
                let mut gens1 = p.tuple().to_vec();
                let mut gens2 = p.tuple().to_vec();
                gens1.extend(elems1.iter().copied());
                gens2.extend(h.iter().map(|&y| elems2[y]));
                match qf_map(ambient, &gens1, ambient, &gens2) {
                    Ok(TypeComparison::Different { equation }) => {
                        std::ops::ControlFlow::Break(Splitting {
                            n1: n1.clone(),
                            n2: n2.clone(),
                            h: elems1
                                .iter()
                                .zip(h)
                                .map(|(&x, &y)| (x, elems2[y]))
                                .collect(),
                            equation,
                        })
                    }
                    _ => std::ops::ControlFlow::Continue(()),
                }
            });
            if found.is_some() {
                return Ok(found);
            }
        }
    }
    Ok(None)
}

pub fn splits_over(p: &PointedTypeRep, base: &BTreeSet<usize>) -> Result<bool> {
    Ok(splitting_witness(p, base)?.is_some())
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::limits::{coproduct, disjoint_amalgam};
    use crate::monoid::Monoid;
    use crate::types::types_equal;

    fn rz3() -> Arc<Monoid> {
        Arc::new(Monoid::from_table(&[vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]]).unwrap())
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    fn query(ambient: &Act, base: &[usize], left: &[usize], right: &[usize]) -> IndependenceQuery {
        IndependenceQuery {
            ambient: ambient.clone(),
            base: set(base),
            left: set(left),
            right: set(right),
        }
    }

    #[test]
    fn squares() {
        let m = rz3();
        let s = Act::regular(m.clone());
        let id = ActHom::identity(&s);
        let sq = CommutativeSquare::new(id.clone(), id.clone(), id.clone(), id.clone()).unwrap();
        assert!(square_is_independent(&sq).unwrap());

        let e = Act::empty(m.clone());
        let z = ActHom::new(e.clone(), s.clone(), vec![]).unwrap();
        let sq = CommutativeSquare::new(z.clone(), z.clone(), id.clone(), id.clone()).unwrap();
        assert!(!square_is_independent(&sq).unwrap());

        let sum = coproduct(&s, &s).unwrap();
        let sq = CommutativeSquare::new(z.clone(), z, sum.left, sum.right).unwrap();
        assert!(square_is_independent(&sq).unwrap());

        let (ab, _) = s.restrict(&set(&[1, 2])).unwrap();
        let i1 = ActHom::inclusion(&s, &set(&[1])).unwrap();
        let i2 = ActHom::inclusion(&ab, &set(&[0])).unwrap();
        assert_eq!(i1.source(), i2.source());
        let am = disjoint_amalgam(&i1, &i2).unwrap();
        assert_eq!(am.apex.size(), 4);
        let sq = CommutativeSquare::new(i1, i2, am.left, am.right).unwrap();
        assert!(square_is_independent(&sq).unwrap());
    }

    #[test]
    fn set_independence() {
        let m = rz3();
        let s = Act::regular(m.clone());
        let ss = coproduct(&s, &s).unwrap().apex;
        assert!(is_independent(&query(&ss, &[], &[1], &[4])).unwrap());
        assert!(is_independent(&query(&ss, &[], &[], &[0, 3])).unwrap());
        assert!(!is_independent(&query(&s, &[], &[0], &[1])).unwrap());
        assert_eq!(query(&s, &[], &[0], &[1]).witness().unwrap(), set(&[1]));
        assert!(is_independent(&query(&s, &[1], &[0], &[1])).unwrap());
        assert_eq!(
            is_independent(&query(&s, &[0], &[], &[])),
            Err(Error::BaseNotSubact(0))
        );
    }

    #[test]
    fn minimal_bases() {
        let s = Act::regular(rz3());
        assert_eq!(
            minimal_base(&s, &set(&[1]), 2).unwrap(),
            Vec::<usize>::new()
        );
        assert_eq!(minimal_base(&s, &set(&[1]), 0).unwrap(), vec![1]);
        assert_eq!(minimal_base(&s, &set(&[1, 2]), 0).unwrap(), vec![1, 2]);
        assert_eq!(
            minimal_base(&s, &set(&[1, 2]), 1),
            Err(Error::ElementInBase(1))
        );
    }

    #[test]
    fn nonforking_records() {
        let s = Act::regular(rz3());
        let p = type_rep(&s, &[0], &set(&[1, 2])).unwrap();
        let r = type_nonforking(&p, &set(&[1])).unwrap();
        assert!(!r.nonforking);
        assert_eq!(r.witness, set(&[2]));
        assert!(type_nonforking(&p, &set(&[1, 2])).unwrap().nonforking);
        assert_eq!(
            type_nonforking(&p, &set(&[0, 1, 2])),
            Err(Error::BaseNotContained(0))
        );
    }

    #[test]
    fn merges() {
        let m = rz3();
        let s = Act::regular(m.clone());
        let merged = merge_nonforking(&s, 0, 0, &set(&[]), &set(&[])).unwrap();
        assert!(merged.map.iter().all(|(x, y)| x == y));
        assert_eq!(
            merge_nonforking(&s, 0, 0, &set(&[1]), &set(&[1, 2])),
            Err(Error::ForkingDetected {
                side: Side::Left,
                element: 2
            })
        );

        // Two copies of S next to a fixed point θ = 6, merged over {θ}.
        let d = coproduct(&coproduct(&s, &s).unwrap().apex, &Act::singleton(m.clone()))
            .unwrap()
            .apex;
        let merged = merge_nonforking(&d, 0, 3, &set(&[6]), &set(&[6])).unwrap();
        assert_eq!(merged.map, vec![(0, 3), (1, 4), (2, 5), (6, 6)]);
        assert_eq!(merged.codomain, set(&[3, 4, 5, 6]));

        let ss = coproduct(&s, &s).unwrap().apex;
        let merged = merge_nonforking(&ss, 0, 3, &set(&[]), &set(&[])).unwrap();
        assert_eq!(merged.map, vec![(0, 3), (1, 4), (2, 5)]);
        let p = type_rep(&ss, &[0], &set(&[])).unwrap();
        let q = type_rep(&ss, &[3], &set(&[])).unwrap();
        assert!(types_equal(&p, &q).unwrap());
        assert_eq!(
            merge_nonforking(&ss, 0, 1, &set(&[]), &set(&[])),
            Err(Error::RestrictionsDiffer(0))
        );
    }

    #[test]
    fn splitting() {
        let s = Act::regular(rz3());
        let p = type_rep(&s, &[0], &set(&[1, 2])).unwrap();
        assert!(!splits_over(&p, &set(&[1, 2])).unwrap());
        let w = splitting_witness(&p, &set(&[])).unwrap().unwrap();
        assert_eq!(w.n1, set(&[1]));
        assert_eq!(w.n2, set(&[2]));
        // The type of b over ∅ does not fork, hence does not split.
        let q = type_rep(&s, &[2], &set(&[1])).unwrap();
        assert!(type_nonforking(&q, &set(&[])).unwrap().nonforking);
        assert!(!splits_over(&q, &set(&[])).unwrap());
    }
}
