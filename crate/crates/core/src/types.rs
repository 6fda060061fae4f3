//! Quantifier-free types of tuples over parameter sets.
//!
//! The type of `b̄` over `X` inside `N` is determined by the pointed subact
//! `Sb̄ ∪ SX`. Two types agree iff `s·b1_i ↦ s·b2_i`, `s·x ↦ s·x` is a
//! well-defined bijection; equivariance is then automatic.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::act::Act;
use crate::error::{check_index, Error, Result, Side};

/// A defining equation `s·g_i = t·g_j` between generators that holds in one
/// core and fails in the other. Generators are numbered tuple first, then
/// parameters in increasing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Equation {
    pub s: usize,
    pub i: usize,
    pub t: usize,
    pub j: usize,
    /// The side on which the equation holds.
    pub holds_on: Side,
}

/// Outcome of comparing two pointed cores.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum TypeComparison {
    /// The witnessing isomorphism as `(x, f(x))` pairs of ambient indices.
    Equal {
        map: Vec<(usize, usize)>,
    },
    Different {
        equation: Equation,
    },
}

impl TypeComparison {
    pub fn is_equal(&self) -> bool {
        matches!(self, TypeComparison::Equal { .. })
    }
}

/// Builds `s·gens1[i] ↦ s·gens2[i]` and checks that it is a well-defined
/// injective map `S·gens1 → S·gens2`.
pub fn qf_map(a1: &Act, gens1: &[usize], a2: &Act, gens2: &[usize]) -> Result<TypeComparison> {
    if !a1.same_monoid(a2) {
        return Err(Error::MonoidMismatch);
    }
    if gens1.len() != gens2.len() {
        return Err(Error::TupleLengthMismatch);
    }
    for &g in gens1 {
        check_index(g, a1.size())?;
    }
    for &g in gens2 {
        check_index(g, a2.size())?;
    }
    let n = a1.monoid().size();
    let mut forward: Vec<Option<(usize, usize, usize)>> = vec![None; a1.size()];
    let mut backward: Vec<Option<(usize, usize, usize)>> = vec![None; a2.size()];
    for (i, (&g1, &g2)) in gens1.iter().zip(gens2).enumerate() {
        for s in 0..n {
            let (x, y) = (a1.act(s, g1), a2.act(s, g2));
            match forward[x] {
                None => forward[x] = Some((y, s, i)),
                Some((y0, t, j)) if y0 != y => {
                    return Ok(TypeComparison::Different {
                        equation: Equation {
                            s: t,
                            i: j,
                            t: s,
                            j: i,
                            holds_on: Side::Left,
                        },
                    })
                }
                Some(_) => {}
            }
            match backward[y] {
                None => backward[y] = Some((x, s, i)),
                Some((x0, t, j)) if x0 != x => {
                    return Ok(TypeComparison::Different {
                        equation: Equation {
                            s: t,
                            i: j,
                            t: s,
                            j: i,
                            holds_on: Side::Right,
                        },
                    })
                }
                Some(_) => {}
            }
        }
    }
    let map = forward
        .iter()
        .enumerate()
        .filter_map(|(x, e)| e.map(|(y, _, _)| (x, y)))
        .collect();
    Ok(TypeComparison::Equal { map })
}

/// Canonical representative of the type of `tuple` over `params` in an act.
///
/// The core `Sb̄ ∪ SX` is relabelled in order of first appearance of `s·g`,
/// running over generators (tuple, then parameters ascending) and then over
/// `s`. Two representatives have equal types exactly when their canonical
/// cores and marked generators coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedTypeRep {
    ambient: Act,
    tuple: Vec<usize>,
    params: BTreeSet<usize>,
    core: Act,
    core_tuple: Vec<usize>,
    core_params: Vec<usize>,
    /// `embedding[i]` is the ambient element labelled `i` in the core.
    embedding: Vec<usize>,
}

impl PointedTypeRep {
    pub fn ambient(&self) -> &Act {
        &self.ambient
    }

    pub fn tuple(&self) -> &[usize] {
        &self.tuple
    }

    pub fn params(&self) -> &BTreeSet<usize> {
        &self.params
    }

    pub fn core(&self) -> &Act {
        &self.core
    }

    pub fn core_tuple(&self) -> &[usize] {
        &self.core_tuple
    }

    pub fn core_params(&self) -> &[usize] {
        &self.core_params
    }

    pub fn embedding(&self) -> &[usize] {
        &self.embedding
    }

    /// Ambient elements of the core.
    pub fn core_elements(&self) -> BTreeSet<usize> {
        self.embedding.iter().copied().collect()
    }

    /// Tuple followed by the parameters in increasing order.
    pub fn generators(&self) -> Vec<usize> {
        self.tuple.iter().chain(&self.params).copied().collect()
    }
}

pub fn type_rep(
    ambient: &Act,
    tuple: &[usize],
    params: &BTreeSet<usize>,
) -> Result<PointedTypeRep> {
    for &x in tuple.iter().chain(params) {
        check_index(x, ambient.size())?;
    }
    let n = ambient.monoid().size();
    let gens: Vec<usize> = tuple.iter().chain(params).copied().collect();
    let mut label = vec![usize::MAX; ambient.size()];
    let mut embedding = Vec::new();
    for &g in &gens {
        for s in 0..n {
            let y = ambient.act(s, g);
            if label[y] == usize::MAX {
                label[y] = embedding.len();
                embedding.push(y);
            }
        }
    }
    let size = embedding.len();
    let mut action = vec![0; n * size];
    for s in 0..n {
        for (i, &y) in embedding.iter().enumerate() {
            action[s * size + i] = label[ambient.act(s, y)];
        }
    }
    let core = Act::from_flat_unchecked(ambient.monoid().clone(), size, action);
    Ok(PointedTypeRep {
        ambient: ambient.clone(),
        tuple: tuple.to_vec(),
        params: params.clone(),
        core,
        core_tuple: tuple.iter().map(|&x| label[x]).collect(),
        core_params: params.iter().map(|&x| label[x]).collect(),
        embedding,
    })
}

fn check_comparable(p: &PointedTypeRep, q: &PointedTypeRep) -> Result<()> {
    if !p.ambient.same_monoid(&q.ambient) {
        return Err(Error::MonoidMismatch);
    }
    if p.tuple.len() != q.tuple.len() {
        return Err(Error::TupleLengthMismatch);
    }
    if p.params.len() != q.params.len() || (p.ambient == q.ambient && p.params != q.params) {
        return Err(Error::ParamMismatch);
    }
    Ok(())
}

/// Compares two types, returning the witnessing map or a violated equation.
///
/// Parameters are aligned by position in increasing order; within one ambient
/// act the parameter sets must coincide.
pub fn compare_types(p: &PointedTypeRep, q: &PointedTypeRep) -> Result<TypeComparison> {
    check_comparable(p, q)?;
    qf_map(&p.ambient, &p.generators(), &q.ambient, &q.generators())
}

pub fn types_equal(p: &PointedTypeRep, q: &PointedTypeRep) -> Result<bool> {
    Ok(compare_types(p, q)?.is_equal())
}

/// The same tuple over a smaller parameter set.
pub fn restrict_type(p: &PointedTypeRep, params: &BTreeSet<usize>) -> Result<PointedTypeRep> {
    if let Some(&x) = params.difference(&p.params).next() {
        return Err(Error::NotASubset(x));
    }
    type_rep(&p.ambient, &p.tuple, params)
}
