//! Finite monoids given by multiplication tables, and their left ideals.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::cover::min_generating_set;
use crate::error::{check_index, Error, Result};

/// A finite monoid on `{0, .., size-1}` with identity `0`.
///
/// `mul(s, t)` is read from row `s`, column `t` of the table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monoid {
    size: usize,
    table: Vec<usize>,
}

/// A left ideal `I` (`SI ⊆ I`) with a minimum generating set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LeftIdeal {
    pub elements: BTreeSet<usize>,
    pub min_generators: Vec<usize>,
}

impl Monoid {
    /// Validates a square table: entries in range, `0` a two-sided identity,
    /// and associativity. The first violation in lexicographic order is reported.
    pub fn from_table(rows: &[Vec<usize>]) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::MalformedTable(
                "a monoid needs at least one element".into(),
            ));
        }
        let mut table = Vec::with_capacity(size * size);
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
                table.push(v);
            }
        }
        let m = Monoid { size, table };
        for s in 0..size {
            if m.mul(0, s) != s || m.mul(s, 0) != s {
                return Err(Error::IdentityLawFails(s));
            }
        }
        for s in 0..size {
            for t in 0..size {
                for u in 0..size {
                    if m.mul(m.mul(s, t), u) != m.mul(s, m.mul(t, u)) {
                        return Err(Error::NotAssociative(s, t, u));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn trivial() -> Self {
        Monoid {
            size: 1,
            table: vec![0],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn mul(&self, s: usize, t: usize) -> usize {
        self.table[s * self.size + t]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.table.chunks(self.size)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.size).all(|s| (0..s).all(|t| self.mul(s, t) == self.mul(t, s)))
    }

    pub fn is_group(&self) -> bool {
        (0..self.size).all(|s| (0..self.size).any(|t| self.mul(s, t) == 0 && self.mul(t, s) == 0))
    }

    /// `SX`, the left ideal generated by `xs`.
    pub fn left_closure(&self, xs: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for a in xs {
            for s in 0..self.size {
                out.insert(self.mul(s, a));
            }
        }
        out
    }

    pub fn is_left_ideal(&self, set: &BTreeSet<usize>) -> bool {
        set.iter()
            .all(|&a| a < self.size && (0..self.size).all(|s| set.contains(&self.mul(s, a))))
    }

    /// `Sa` together with its minimum generating set.
    pub fn principal_ideal(&self, a: usize) -> Result<LeftIdeal> {
        check_index(a, self.size)?;
        Ok(self.ideal_from_elements(self.left_closure([a])))
    }

    fn ideal_from_elements(&self, elements: BTreeSet<usize>) -> LeftIdeal {
        let min_generators = min_generating_set(&elements, |y| self.left_closure([y]));
        LeftIdeal {
            elements,
            min_generators,
        }
    }

    /// Every left ideal including `∅` and `S`, ordered by size then elements.
    ///
    /// Left ideals are exactly the unions of principal ideals, so the lattice is
    /// the union-closure of `{Sa}` starting from `∅`.
    pub fn all_left_ideals(&self) -> Vec<LeftIdeal> {
        let principals: Vec<BTreeSet<usize>> =
            (0..self.size).map(|a| self.left_closure([a])).collect();
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        let mut queue = VecDeque::from([BTreeSet::new()]);
        seen.insert(BTreeSet::new());
        while let Some(ideal) = queue.pop_front() {
            for p in &principals {
                if p.is_subset(&ideal) {
                    continue;
                }
                let joined: BTreeSet<usize> = ideal.union(p).copied().collect();
                if seen.insert(joined.clone()) {
                    queue.push_back(joined);
                }
            }
        }
        let mut ideals: Vec<BTreeSet<usize>> = seen.into_iter().collect();
        ideals.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        ideals
            .into_iter()
            .map(|e| self.ideal_from_elements(e))
            .collect()
    }

    /// Finite generation degree: the largest minimum generator count of a
    /// left ideal.
    pub fn generation_degree(&self) -> usize {
        self.all_left_ideals()
            .iter()
            .map(|i| i.min_generators.len())
            .max()
            .unwrap_or(0)
    }

    /// `St ∩ Sr ≠ ∅` for all `t, r`.
    pub fn right_reversible(&self) -> bool {
        let principals: Vec<BTreeSet<usize>> =
            (0..self.size).map(|a| self.left_closure([a])).collect();
        principals
            .iter()
            .enumerate()
            .all(|(i, p)| principals[..i].iter().all(|q| !p.is_disjoint(q)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn rz3() -> Monoid {
        Monoid::from_table(&[vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]]).unwrap()
    }

    fn z2() -> Monoid {
        Monoid::from_table(&[vec![0, 1], vec![1, 0]]).unwrap()
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn validation_accepts_examples() {
        assert_eq!(Monoid::from_table(&[vec![0]]).unwrap().size(), 1);
        assert!(z2().is_group());
        let m = rz3();
        assert_eq!(m.mul(1, 2), 2);
        assert_eq!(m.mul(2, 1), 1);
    }

    #[test]
    fn matrix_monoid_matches_table() {
        // (1 x; 0 0)(1 y; 0 0) = (1 y; 0 0) over Z2, plus an adjoined identity.
        let mats = [[1u8, 0, 0, 0], [1, 1, 0, 0]];
        let mul = |a: [u8; 4], b: [u8; 4]| {
            [
                (a[0] * b[0] + a[1] * b[2]) % 2,
                (a[0] * b[1] + a[1] * b[3]) % 2,
                (a[2] * b[0] + a[3] * b[2]) % 2,
                (a[2] * b[1] + a[3] * b[3]) % 2,
            ]
        };
        let m = rz3();
        for (i, &x) in mats.iter().enumerate() {
            for (j, &y) in mats.iter().enumerate() {
                let p = mul(x, y);
                let k = mats.iter().position(|&z| z == p).unwrap();
                assert_eq!(m.mul(i + 1, j + 1), k + 1);
            }
        }
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            Monoid::from_table(&[]),
            Err(Error::MalformedTable(_))
        ));
        assert!(matches!(
            Monoid::from_table(&[vec![0, 1], vec![1]]),
            Err(Error::MalformedTable(_))
        ));
        assert!(matches!(
            Monoid::from_table(&[vec![0, 2], vec![1, 0]]),
            Err(Error::MalformedTable(_))
        ));
        // identity at index 1 instead of 0
        assert_eq!(
            Monoid::from_table(&[vec![0, 0], vec![0, 1]]),
            Err(Error::IdentityLawFails(1))
        );
        // 0 is identity, but a*b with a=b... non-associative magma
        let bad = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 2, 1]];
        assert!(matches!(
            Monoid::from_table(&bad),
            Err(Error::NotAssociative(..))
        ));
    }

    #[test]
    fn principal_ideals() {
        let m = rz3();
        assert_eq!(m.principal_ideal(0).unwrap().elements, set(&[0, 1, 2]));
        assert_eq!(m.principal_ideal(1).unwrap().elements, set(&[1]));
        assert_eq!(z2().principal_ideal(1).unwrap().elements, set(&[0, 1]));
        assert_eq!(
            m.principal_ideal(3),
            Err(Error::IndexOutOfRange { index: 3, bound: 3 })
        );
    }

    #[test]
    fn ideal_lattices() {
        let triv: Vec<_> = Monoid::trivial()
            .all_left_ideals()
            .into_iter()
            .map(|i| i.elements)
            .collect();
        assert_eq!(triv, vec![set(&[]), set(&[0])]);

        let ideals = rz3().all_left_ideals();
        let elems: Vec<_> = ideals.iter().map(|i| i.elements.clone()).collect();
        assert_eq!(
            elems,
            vec![
                set(&[]),
                set(&[1]),
                set(&[2]),
                set(&[1, 2]),
                set(&[0, 1, 2])
            ]
        );
        let counts: Vec<_> = ideals.iter().map(|i| i.min_generators.len()).collect();
        assert_eq!(counts, vec![0, 1, 1, 2, 1]);
        assert_eq!(ideals[3].min_generators, vec![1, 2]);

        assert_eq!(z2().all_left_ideals().len(), 2);
    }

    #[test]
    fn degree_and_reversibility() {
        assert_eq!(rz3().generation_degree(), 2);
        assert_eq!(z2().generation_degree(), 1);
        assert_eq!(Monoid::trivial().generation_degree(), 1);
        assert!(!rz3().right_reversible());
        assert!(z2().right_reversible());
        assert!(Monoid::trivial().right_reversible());
    }
}
