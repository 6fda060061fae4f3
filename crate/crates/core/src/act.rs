//! Finite left acts over a finite monoid.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::cover::min_generating_set;
use crate::error::{check_index, Error, Result};
use crate::monoid::Monoid;

/// A finite left `S`-act on the carrier `{0, .., size-1}`.
///
/// Equality and hashing are structural, so two acts over equal monoid tables
/// compare equal even when the monoid handles differ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Act {
    monoid: Arc<Monoid>,
    size: usize,
    /// `action[s * size + x] = s·x`
    action: Vec<usize>,
}

impl Act {
    /// Validates the unit law and mixed associativity.
    pub fn from_table(monoid: Arc<Monoid>, rows: &[Vec<usize>]) -> Result<Self> {
        let n = monoid.size();
        if rows.len() != n {
            return Err(Error::MalformedTable(format!(
                "expected {n} rows (one per monoid element), got {}",
                rows.len()
            )));
        }
        let size = rows[0].len();
        let mut action = Vec::with_capacity(n * size);
        for (s, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::MalformedTable(format!(
                    "row {s} has {} entries, expected {size}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= size {
                    return Err(Error::MalformedTable(format!(
                        "entry {v} in row {s} is out of range"
                    )));
                }
            }
            action.extend_from_slice(row);
        }
        Self::from_flat(monoid, size, action)
    }

    pub(crate) fn from_flat(monoid: Arc<Monoid>, size: usize, action: Vec<usize>) -> Result<Self> {
        let act = Act {
            monoid,
            size,
            action,
        };
        act.check_laws()?;
        Ok(act)
    }

    /// Builds without validation; callers guarantee the act laws.
    pub(crate) fn from_flat_unchecked(
        monoid: Arc<Monoid>,
        size: usize,
        action: Vec<usize>,
    ) -> Self {
        debug_assert_eq!(action.len(), monoid.size() * size);
        let act = Act {
            monoid,
            size,
            action,
        };
        debug_assert!(
            act.check_laws().is_ok(),
            "constructed act violates the act laws"
        );
        act
    }

    fn check_laws(&self) -> Result<()> {
        for x in 0..self.size {
            if self.act(0, x) != x {
                return Err(Error::UnitLawFails(x));
            }
        }
        let n = self.monoid.size();
        for s in 0..n {
            for t in 0..n {
                let st = self.monoid.mul(s, t);
                for x in 0..self.size {
                    if self.act(s, self.act(t, x)) != self.act(st, x) {
                        return Err(Error::AssociativityFails(s, t, x));
                    }
                }
            }
        }
        Ok(())
    }

    /// `S` acting on itself by left multiplication.
    pub fn regular(monoid: Arc<Monoid>) -> Self {
        let n = monoid.size();
        let action = (0..n)
            .flat_map(|s| (0..n).map(move |t| (s, t)))
            .map(|(s, t)| monoid.mul(s, t))
            .collect();
        Act {
            monoid,
            size: n,
            action,
        }
    }

    pub fn empty(monoid: Arc<Monoid>) -> Self {
        Act {
            monoid,
            size: 0,
            action: Vec::new(),
        }
    }

    /// `k` points, each fixed by every element.
    pub fn fixed_points(monoid: Arc<Monoid>, k: usize) -> Self {
        let n = monoid.size();
        let action = (0..n).flat_map(|_| 0..k).collect();
        Act {
            monoid,
            size: k,
            action,
        }
    }

    pub fn singleton(monoid: Arc<Monoid>) -> Self {
        Self::fixed_points(monoid, 1)
    }

    pub fn monoid(&self) -> &Arc<Monoid> {
        &self.monoid
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn act(&self, s: usize, x: usize) -> usize {
        self.action[s * self.size + x]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        if self.size == 0 {
            return vec![Vec::new(); self.monoid.size()];
        }
        self.action
            .chunks(self.size)
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub(crate) fn flat(&self) -> &[usize] {
        &self.action
    }

    pub fn same_monoid(&self, other: &Act) -> bool {
        Arc::ptr_eq(&self.monoid, &other.monoid) || self.monoid == other.monoid
    }

    pub fn carrier(&self) -> BTreeSet<usize> {
        (0..self.size).collect()
    }

    /// `Sx`.
    pub fn orbit(&self, x: usize) -> BTreeSet<usize> {
        (0..self.monoid.size()).map(|s| self.act(s, x)).collect()
    }

    /// `SX`, the subact generated by `xs`.
    pub fn generated_subact<I>(&self, xs: I) -> Result<BTreeSet<usize>>
    where
        I: IntoIterator,
        I::Item: std::borrow::Borrow<usize>,
    {
        let mut out = BTreeSet::new();
        for x in xs {
            let x = *std::borrow::Borrow::<usize>::borrow(&x);
            check_index(x, self.size)?;
            for s in 0..self.monoid.size() {
                out.insert(self.act(s, x));
            }
        }
        Ok(out)
    }

    /// Returns the first element whose orbit escapes `set`, if any.
    pub fn subact_violation(&self, set: &BTreeSet<usize>) -> Option<usize> {
        set.iter().copied().find(|&x| {
            x >= self.size || (0..self.monoid.size()).any(|s| !set.contains(&self.act(s, x)))
        })
    }

    pub fn is_subact(&self, set: &BTreeSet<usize>) -> bool {
        self.subact_violation(set).is_none()
    }

    pub(crate) fn require_subact(&self, set: &BTreeSet<usize>) -> Result<()> {
        for &x in set {
            check_index(x, self.size)?;
        }
        match self.subact_violation(set) {
            Some(x) => Err(Error::BaseNotSubact(x)),
            None => Ok(()),
        }
    }

    /// The induced act on a subact, relabelled in increasing index order, with
    /// the list of original indices.
    pub fn restrict(&self, subact: &BTreeSet<usize>) -> Result<(Act, Vec<usize>)> {
        self.require_subact(subact)?;
        let elems: Vec<usize> = subact.iter().copied().collect();
        let mut index = vec![usize::MAX; self.size];
        for (i, &x) in elems.iter().enumerate() {
            index[x] = i;
        }
        let n = self.monoid.size();
        let mut action = Vec::with_capacity(n * elems.len());
        for s in 0..n {
            for &x in &elems {
                action.push(index[self.act(s, x)]);
            }
        }
        Ok((
            Act::from_flat_unchecked(self.monoid.clone(), elems.len(), action),
            elems,
        ))
    }

    /// Minimum generating set of a subact, lexicographically least among ties.
    pub fn min_generators(&self, subact: &BTreeSet<usize>) -> Result<Vec<usize>> {
        self.require_subact(subact)?;
        Ok(min_generating_set(subact, |y| self.orbit(y)))
    }

    /// Least element generating the whole act, if the act is cyclic.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.size).find(|&x| self.orbit(x).len() == self.size)
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }

    /// Elements fixed by every monoid element.
    pub fn zeros(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&x| (0..self.monoid.size()).all(|s| self.act(s, x) == x))
            .collect()
    }

    pub fn has_zero(&self) -> bool {
        !self.zeros().is_empty()
    }

    /// All subacts, ordered by size then elements.
    pub fn all_subacts(&self) -> Vec<BTreeSet<usize>> {
        self.subacts_between(&BTreeSet::new(), &self.carrier())
    }

    /// Subacts `Y` with `lower ⊆ Y ⊆ upper`; both bounds must be subacts.
    pub fn subacts_between(
        &self,
        lower: &BTreeSet<usize>,
        upper: &BTreeSet<usize>,
    ) -> Vec<BTreeSet<usize>> {
        let orbits: Vec<BTreeSet<usize>> = upper.iter().map(|&x| self.orbit(x)).collect();
        let mut seen = BTreeSet::from([lower.clone()]);
        let mut stack = vec![lower.clone()];
        while let Some(cur) = stack.pop() {
            for o in &orbits {
                if o.is_subset(&cur) {
                    continue;
                }
                let next: BTreeSet<usize> = cur.union(o).copied().collect();
                if seen.insert(next.clone()) {
                    stack.push(next);
                }
            }
        }
        let mut all: Vec<_> = seen.into_iter().collect();
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all
    }

    /// Relabels the carrier: element `x` becomes `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> Act {
        let n = self.monoid.size();
        let mut action = vec![0; n * self.size];
        for s in 0..n {
            for x in 0..self.size {
                action[s * self.size + perm[x]] = perm[self.act(s, x)];
            }
        }
        Act::from_flat_unchecked(self.monoid.clone(), self.size, action)
    }
}

/// Serialized as `{"size": m, "action": rows}`; the monoid is implied by context.
impl serde::Serialize for Act {
    fn serialize<Ser: serde::Serializer>(
        &self,
        serializer: Ser,
    ) -> std::result::Result<Ser::Ok, Ser::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Act", 2)?;
        st.serialize_field("size", &self.size)?;
        st.serialize_field("action", &self.rows())?;
        st.end()
    }
}
