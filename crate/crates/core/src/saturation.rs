//! Cellular factorization of monomorphisms and the saturation builder.
//!
//! A mono `K → L` factors as a chain of pushouts of inclusions `A ≤ B` with
//! `B` cyclic. `som_step` glues one copy of `B` along every non-extendable
//! hom `A → K` at once; `saturate` iterates it toward an injectivity target.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::Serialize;

use crate::act::Act;
use crate::enumerate::cyclic_acts;
use crate::error::{Error, Result};
use crate::hom::{non_extendable_within, ActHom};
use crate::injectivity::InjectivityTester;
use crate::limits::{epi_mono_factorize, is_pushout, pullback, pushout, pushout_mediator, Span};
use crate::monoid::Monoid;
use crate::par;

/// One pushout of `A ≤ B` along `u: A → K_i`.
#[derive(Clone, Debug)]
pub struct CellularStep {
    /// The element of `L` whose orbit is attached.
    pub element: usize,
    pub cyclic: Act,
    pub attaching: BTreeSet<usize>,
    pub attaching_hom: ActHom,
    /// Apex `K_{i+1}`; `left: K_i → K_{i+1}`, `right: B → K_{i+1}`.
    pub pushout: Span,
    /// The induced mono `K_{i+1} → L`.
    pub to_target: ActHom,
}

#[derive(Clone, Debug)]
pub struct CellularChain {
    pub input: ActHom,
    pub steps: Vec<CellularStep>,
    /// `K → K_m`, the composite of the pushout legs.
    pub composite: ActHom,
    /// `K_m → L`, a bijection with `composite ; comparison = input`.
    pub comparison: ActHom,
}

impl CellularChain {
    /// Checks every step and the composite; returns the first problem.
    pub fn verify(&self) -> std::result::Result<(), String> {
        let mut current = self.input.source().clone();
        for (i, st) in self.steps.iter().enumerate() {
            if st.pushout.left.source() != &current {
                return Err(format!(
                    "step {i}: pushout leg does not start at the previous stage"
                ));
            }
            if !st.cyclic.is_cyclic() {
                return Err(format!("step {i}: attached act is not cyclic"));
            }
            let incl = ActHom::inclusion(&st.cyclic, &st.attaching)
                .map_err(|e| format!("step {i}: {e}"))?;
            if !is_pushout(
                &st.attaching_hom,
                &incl,
                &st.pushout.left,
                &st.pushout.right,
            ) {
                return Err(format!("step {i}: square is not a pushout"));
            }
            if !st.pushout.left.is_injective() || !st.to_target.is_injective() {
                return Err(format!("step {i}: stage does not embed"));
            }
            current = st.pushout.apex.clone();
        }
        if self.composite.target() != &current {
            return Err("composite does not end at the last stage".into());
        }
        if !self.comparison.is_injective() || !self.comparison.is_surjective() {
            return Err("last stage is not isomorphic to the target".into());
        }
        match self.composite.then(&self.comparison) {
            Ok(c) if c == self.input => Ok(()),
            _ => Err("composite differs from the input mono".into()),
        }
    }
}

/// Factors a mono `f: K → L` into pushouts of subact inclusions into cyclic
/// acts, attaching the orbit of the least element of `L` outside the current
/// image at each step.
pub fn cellular_factorize(f: &ActHom) -> Result<CellularChain> {
    if !f.is_injective() {
        return Err(Error::NotMono);
    }
    let l = f.target();
    let regular = Act::regular(l.monoid().clone());
    let mut t = f.clone();
    let mut composite = ActHom::identity(f.source());
    let mut steps = Vec::new();
    while let Some(a) = (0..l.size()).find(|x| !t.image().contains(x)) {
        let h = ActHom::new_unchecked(
            regular.clone(),
            l.clone(),
            (0..regular.size()).map(|s| l.act(s, a)).collect(),
        );
        let (_, m) = epi_mono_factorize(&h);
        let b = m.source().clone();
        let pb = pullback(&m, &t)?;
        let attaching = pb.left.image();
        let (sub, elems) = b.restrict(&attaching)?;
        let u_map = elems
            .iter()
            .map(|y| {
                pb.right
                    .apply(pb.left.map().iter().position(|z| z == y).unwrap())
            })
            .collect();
        let u = ActHom::new(sub, t.source().clone(), u_map)?;
        let incl = ActHom::inclusion(&b, &attaching)?;
        let po = pushout(&u, &incl)?;
        let next_t = pushout_mediator(&po, &t, &m).ok_or(Error::NotCommutative)?;
        composite = composite.then(&po.left)?;
        t = next_t.clone();
        steps.push(CellularStep {
            element: a,
            cyclic: b,
            attaching,
            attaching_hom: u,
            pushout: po,
            to_target: next_t,
        });
    }
    Ok(CellularChain {
        input: f.clone(),
        steps,
        composite,
        comparison: t,
    })
}

/// A copy of `cyclic` glued onto `K` along `hom: subact → K`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub cyclic_index: usize,
    pub subact: BTreeSet<usize>,
    pub hom: Vec<usize>,
    /// The extension `B → K₁` of `hom`.
    pub extension: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SomStep {
    pub result: Act,
    /// `K → K₁`, the inclusion of the first `|K|` elements.
    pub leg: ActHom,
    pub cells: Vec<Cell>,
}

/// `(cyclic act index, attaching subact, attaching hom)`.
type OpenCell = (usize, BTreeSet<usize>, Vec<usize>);

/// Attaching data for one monoid: every cyclic act up to isomorphism with
/// its proper subacts.
pub struct CellCatalog {
    cyclic: Vec<Act>,
    problems: Vec<(usize, BTreeSet<usize>, ActHom)>,
}

impl CellCatalog {
    pub fn new(monoid: &Arc<Monoid>) -> Self {
        let cyclic = cyclic_acts(monoid);
        let mut problems = Vec::new();
        for (i, b) in cyclic.iter().enumerate() {
            for a in b.all_subacts() {
                if a.len() < b.size() {
                    let incl = ActHom::inclusion(b, &a).expect("subact is closed");
                    problems.push((i, a, incl));
                }
            }
        }
        CellCatalog { cyclic, problems }
    }

    pub fn cyclic_acts(&self) -> &[Act] {
        &self.cyclic
    }

    /// Non-extendable attaching homs in cell order, or `None` once the cells
    /// found would add more than `budget` elements.
    fn open_cells(&self, k: &Act, budget: usize) -> Option<Vec<OpenCell>> {
        let found = par::map(&self.problems, |(i, a, incl)| {
            let fresh = self.cyclic[*i].size() - a.len();
            non_extendable_within(incl, k, budget / fresh).map(|us| {
                us.into_iter()
                    .map(|u| (*i, a.clone(), u))
                    .collect::<Vec<_>>()
            })
        });
        let open: Vec<_> = found
            .into_iter()
            .collect::<Option<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        (self.added(&open) <= budget).then_some(open)
    }

    fn added(&self, open: &[OpenCell]) -> usize {
        open.iter()
            .map(|(i, a, _)| self.cyclic[*i].size() - a.len())
            .sum()
    }

    /// Glues one cell per non-extendable `(A ≤ B, u: A → K)` in the order
    /// (cyclic act, subact, hom); fresh elements are appended in that order.
    pub fn som_step(&self, k: &Act) -> SomStep {
        self.build(k, self.open_cells(k, usize::MAX).expect("no budget"))
    }

    fn build(&self, k: &Act, open: Vec<OpenCell>) -> SomStep {
        let n = k.monoid().size();
        let mut size = k.size();
        let mut cells = Vec::with_capacity(open.len());
        for (i, a, u) in open {
            let b = &self.cyclic[i];
            let elems: Vec<usize> = a.iter().copied().collect();
            let extension: Vec<usize> = (0..b.size())
                .map(|y| match elems.binary_search(&y) {
                    Ok(pos) => u[pos],
                    Err(_) => {
                        size += 1;
                        size - 1
                    }
                })
                .collect();
            cells.push(Cell {
                cyclic_index: i,
                subact: a,
                hom: u,
                extension,
            });
        }
        let mut action = vec![0; n * size];
        for s in 0..n {
            for x in 0..k.size() {
                action[s * size + x] = k.act(s, x);
            }
        }
        for cell in &cells {
            let b = &self.cyclic[cell.cyclic_index];
            for y in (0..b.size()).filter(|y| !cell.subact.contains(y)) {
                for s in 0..n {
                    action[s * size + cell.extension[y]] = cell.extension[b.act(s, y)];
                }
            }
        }
        let result = Act::from_flat_unchecked(k.monoid().clone(), size, action);
        let leg = ActHom::new_unchecked(k.clone(), result.clone(), (0..k.size()).collect());
        SomStep { result, leg, cells }
    }
}

pub fn som_step(k: &Act) -> SomStep {
    CellCatalog::new(k.monoid()).som_step(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Weak,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SaturationStatus {
    /// Target met after this many steps.
    Reached { steps: usize },
    /// Step or size cap hit. After the step cap, `size` is the size of the
    /// last act reached; after the size cap it exceeds `max_size` and bounds
    /// the next step from below.
    CapExceeded { size: usize },
}

#[derive(Clone, Copy, Debug)]
pub struct SaturateOptions {
    pub target: Target,
    pub max_steps: usize,
    pub max_size: usize,
}

impl Default for SaturateOptions {
    fn default() -> Self {
        SaturateOptions {
            target: Target::Weak,
            max_steps: 8,
            max_size: 512,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Saturation {
    pub result: Act,
    /// `K → K*`.
    pub embedding: ActHom,
    pub status: SaturationStatus,
    /// Sizes of `K_0, K_1, ..`.
    pub sizes: Vec<usize>,
}

/// Iterates [`som_step`] until the target holds, checking before the first
/// step as well.
pub fn saturate(k: &Act, options: SaturateOptions) -> Saturation {
    let catalog = CellCatalog::new(k.monoid());
    let tester = InjectivityTester::new(k.monoid().clone());
    saturate_with(k, options, &catalog, &tester)
}

pub fn saturate_with(
    k: &Act,
    options: SaturateOptions,
    catalog: &CellCatalog,
    tester: &InjectivityTester,
) -> Saturation {
    let met = |a: &Act| match options.target {
        Target::Weak => tester.weakly_injective(a).verdict,
        Target::Full => tester.injective(a).verdict,
    };
    let mut current = k.clone();
    let mut embedding = ActHom::identity(k);
    let mut sizes = vec![k.size()];
    for steps in 0..=options.max_steps {
        if met(&current) {
            return Saturation {
                result: current,
                embedding,
                status: SaturationStatus::Reached { steps },
                sizes,
            };
        }
        if steps == options.max_steps {
            break;
        }
        let budget = options.max_size.saturating_sub(current.size());
        let Some(open) = catalog.open_cells(&current, budget) else {
            return Saturation {
                result: current,
                embedding,
                status: SaturationStatus::CapExceeded {
                    size: options.max_size + 1,
                },
                sizes,
            };
        };
        let step = catalog.build(&current, open);
        embedding = embedding.then(&step.leg).expect("legs compose");
        current = step.result;
        sizes.push(current.size());
    }
    let size = current.size();
    Saturation {
        result: current,
        embedding,
        status: SaturationStatus::CapExceeded { size },
        sizes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::is_isomorphic;
    use crate::injectivity::is_weakly_injective;
    use crate::limits::coproduct;

    fn rz3() -> Arc<Monoid> {
        Arc::new(Monoid::from_table(&[vec![0, 1, 2], vec![1, 1, 2], vec![2, 1, 2]]).unwrap())
    }

    fn set(xs: &[usize]) -> BTreeSet<usize> {
        xs.iter().copied().collect()
    }

    #[test]
    fn factorization_examples() {
        let m = rz3();
        let s = Act::regular(m.clone());
        let chain = cellular_factorize(&ActHom::identity(&s)).unwrap();
        assert!(chain.steps.is_empty());
        chain.verify().unwrap();

        let triv = Arc::new(Monoid::trivial());
        let e = Act::empty(triv.clone());
        let pt = Act::regular(triv);
        let chain = cellular_factorize(&ActHom::new(e, pt.clone(), vec![]).unwrap()).unwrap();
        assert_eq!(chain.steps.len(), 1);
        assert_eq!(chain.steps[0].cyclic.size(), 1);
        chain.verify().unwrap();

        // {a} ≤ S: the least missing element is 1, whose orbit is all of S.
        let chain = cellular_factorize(&ActHom::inclusion(&s, &set(&[1])).unwrap()).unwrap();
        assert_eq!(chain.steps.len(), 1);
        assert_eq!(chain.steps[0].element, 0);
        assert_eq!(chain.steps[0].attaching, set(&[1]));
        chain.verify().unwrap();

        // {a} ≤ {a, b}: attach Sb = {b} along ∅.
        let (ab, _) = s.restrict(&set(&[1, 2])).unwrap();
        let chain = cellular_factorize(&ActHom::inclusion(&ab, &set(&[0])).unwrap()).unwrap();
        assert_eq!(chain.steps.len(), 1);
        assert!(chain.steps[0].attaching.is_empty());
        chain.verify().unwrap();

        let q = ActHom::new(s.clone(), Act::singleton(m), vec![0, 0, 0]).unwrap();
        assert_eq!(cellular_factorize(&q).unwrap_err(), Error::NotMono);
    }

    #[test]
    fn som_step_examples() {
        let triv = Arc::new(Monoid::trivial());
        let step = som_step(&Act::empty(triv.clone()));
        assert!(is_isomorphic(&step.result, &Act::singleton(triv)));

        let m = rz3();
        let pt = Act::singleton(m.clone());
        assert_eq!(som_step(&pt).result, pt);

        let s = Act::regular(m.clone());
        let step = som_step(&s);
        assert!(step.result.size() > s.size());
        assert!(step.leg.is_injective());
        assert!(step
            .cells
            .iter()
            .any(|c| c.subact == set(&[1, 2]) && c.hom == vec![2, 1]));
    }

    #[test]
    fn saturating_two_points() {
        let m = rz3();
        let pt = Act::singleton(m.clone());
        assert_eq!(
            saturate(&pt, SaturateOptions::default()).status,
            SaturationStatus::Reached { steps: 0 }
        );

        let two = coproduct(&pt, &pt).unwrap().apex;
        let sat = saturate(&two, SaturateOptions::default());
        assert_eq!(sat.status, SaturationStatus::Reached { steps: 1 });
        assert!(sat.embedding.is_injective());
        assert!(is_weakly_injective(&sat.result).verdict);
        // For θ1 ≠ θ2 there is q0 with a·q0 = θ1 and b·q0 = θ2.
        let k = &sat.result;
        assert!((0..k.size()).any(|q0| k.act(1, q0) == 0 && k.act(2, q0) == 1));
        assert!((0..k.size()).any(|q0| k.act(1, q0) == 1 && k.act(2, q0) == 0));

        let triv = Arc::new(Monoid::trivial());
        let sat = saturate(&Act::empty(triv), SaturateOptions::default());
        assert_eq!(sat.status, SaturationStatus::Reached { steps: 1 });
        assert_eq!(sat.result.size(), 1);
    }
}
