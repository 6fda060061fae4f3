//! Randomized invariant suites over the catalog monoids.
//!
//! Each property is run for a fixed number of trials with a size budget that
//! grows from 1 to `sizes`, so the first failure reported is among the
//! smallest configurations tried. Properties marked [`Kind::Finding`] record
//! known gaps between the theory and the bounded implementation; they are
//! reported but do not fail the run.

use std::collections::BTreeSet;
use std::sync::Arc;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::act::Act;
use crate::catalog;
use crate::enumerate::acts_up_to;
use crate::error::Result;
use crate::hom::{extend_along, ActHom, HomSearch, HomSearchOptions};
use crate::independence::{
    is_independent, merge_nonforking, minimal_base, splits_over, square_is_independent,
    type_nonforking, IndependenceQuery,
};
use crate::injectivity::InjectivityTester;
use crate::limits::{
    self, coequalizer, coproduct, disjoint_amalgam, epi_mono_factorize, equalizer, pullback,
    pushout_mediator, CommutativeSquare, Span,
};
use crate::monoid::Monoid;
use crate::par;
use crate::sample;
use crate::saturation::{saturate_with, CellCatalog, SaturateOptions, SaturationStatus};
use crate::types::{restrict_type, type_rep, types_equal};

pub type PushoutFn = fn(&ActHom, &ActHom) -> Result<Span>;

/// The constructions under test. Swapping one out lets the suites be checked
/// against a deliberately broken implementation.
#[derive(Clone, Copy)]
pub struct Ops {
    pub pushout: PushoutFn,
}

impl Ops {
    pub fn standard() -> Self {
        Ops {
            pushout: limits::pushout,
        }
    }

    /// A pushout that forgets to glue: it returns the coproduct of the targets.
    pub fn mutant_pushout() -> Self {
        Ops {
            pushout: glueless_pushout,
        }
    }
}

fn glueless_pushout(f1: &ActHom, f2: &ActHom) -> Result<Span> {
    if f1.source() != f2.source() {
        return Err(crate::Error::SourceMismatch);
    }
    coproduct(f1.target(), f2.target())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Invariant,
    Finding,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyReport {
    pub name: &'static str,
    pub kind: Kind,
    pub trials: usize,
    /// Trials whose premise held.
    pub cases: usize,
    pub failures: usize,
    /// The first failing configuration.
    pub counterexample: Option<Value>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub sizes: usize,
    pub trials: usize,
    pub properties: Vec<PropertyReport>,
}

impl SelftestReport {
    /// True iff every invariant held; findings do not count.
    pub fn passed(&self) -> bool {
        self.properties
            .iter()
            .all(|p| p.kind == Kind::Finding || p.passed())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Largest act size generated; `0` runs no trials.
    pub sizes: usize,
    pub trials: usize,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            sizes: 4,
            trials: 200,
        }
    }
}

/// Outcome of one trial.
pub enum Check {
    /// Premise did not hold.
    Skip,
    Pass,
    Fail(Value),
}

macro_rules! ensure {
    ($cond:expr, $($ce:tt)+) => {
        if !$cond {
            return Check::Fail(json!($($ce)+));
        }
    };
}

/// Monoid-indexed data shared by all properties.
pub struct Env {
    pub ops: Ops,
    monoids: Vec<(&'static str, Arc<Monoid>)>,
    small: Vec<usize>,
    testers: Vec<InjectivityTester>,
    probes: Vec<Vec<Act>>,
    cells: Vec<Option<CellCatalog>>,
    injective: Vec<Vec<Act>>,
}

impl Env {
    pub fn new(ops: Ops) -> Self {
        let monoids = catalog::all();
        let small = (0..monoids.len())
            .filter(|&i| monoids[i].1.size() <= 3)
            .collect();
        let testers: Vec<_> = monoids
            .iter()
            .map(|(_, m)| InjectivityTester::new(m.clone()))
            .collect();
        let probes = monoids.iter().map(|(_, m)| acts_up_to(m, 2)).collect();
        let cells = monoids
            .iter()
            .map(|(_, m)| (m.size() <= 3).then(|| CellCatalog::new(m)))
            .collect();
        let injective = monoids
            .iter()
            .zip(&testers)
            .map(|((_, m), t)| {
                acts_up_to(m, 3)
                    .into_iter()
                    .filter(|q| t.injective(q).verdict)
                    .collect()
            })
            .collect();
        Env {
            ops,
            monoids,
            small,
            testers,
            probes,
            cells,
            injective,
        }
    }

    fn any<R: Rng>(&self, rng: &mut R) -> usize {
        rng.gen_range(0..self.monoids.len())
    }

    fn small<R: Rng>(&self, rng: &mut R) -> usize {
        *sample::pick(&self.small, rng)
    }
}

type PropertyFn = fn(&Env, &mut ChaCha8Rng, usize) -> Check;

pub struct Property {
    pub name: &'static str,
    pub kind: Kind,
    run: PropertyFn,
}

const fn inv(name: &'static str, run: PropertyFn) -> Property {
    Property {
        name,
        kind: Kind::Invariant,
        run,
    }
}

const fn finding(name: &'static str, run: PropertyFn) -> Property {
    Property {
        name,
        kind: Kind::Finding,
        run,
    }
}

pub const PROPERTIES: &[Property] = &[
    inv("monoid.ideals", monoid_ideals),
    inv("monoid.right_reversible", monoid_right_reversible),
    inv("act.closure_operator", act_closure),
    inv("act.min_generators", act_min_generators),
    inv("hom.mono_iff_left_cancellable", hom_mono),
    inv("hom.epi_iff_right_cancellable", hom_epi),
    inv("limits.pushout_universal", pushout_universal),
    inv("limits.pushout_preserves_mono", pushout_preserves_mono),
    inv("limits.pullback_universal", pullback_universal),
    inv("limits.pullback_preserves_epi", pullback_preserves_epi),
    inv("limits.epi_mono_factorization", epi_mono),
    inv("limits.equalizer_coequalizer", equalizers),
    inv("types.matches_brute_force", types_oracle),
    inv("types.equivalence_relation", types_equivalence),
    inv("types.summand_invariance", types_summand),
    inv("types.restriction", types_restriction),
    inv("independence.symmetry", indep_symmetry),
    inv("independence.monotonicity", indep_monotone),
    inv("independence.transitivity", indep_transitive),
    inv("independence.existence", indep_existence),
    inv("independence.effective_unions", indep_effective_unions),
    inv("independence.square_matches_sets", indep_square),
    inv("independence.minimal_base", indep_minimal_base),
    inv("independence.merge", indep_merge),
    inv("independence.nonforking_does_not_split", indep_nonsplitting),
    inv("injectivity.hierarchy", inj_hierarchy),
    inv("injectivity.weak_iff_degree", inj_weak_degree),
    inv("injectivity.purity_matches_definition", inj_purity_oracle),
    inv("injectivity.coproduct_dichotomy", inj_dichotomy),
    inv("injectivity.pure_implies_weak_nonempty", inj_pure_weak),
    finding("injectivity.pure_implies_weak_empty", inj_pure_weak_empty),
    inv("saturation.cellular_chain", sat_chain),
    inv("saturation.som_step", sat_som_step),
    inv("saturation.reached_meets_target", sat_reached),
    finding("saturation.lifting", sat_lifting),
];

fn name_seed(name: &str) -> u64 {
    // FNV-1a, so streams do not depend on property order.
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x100_0000_01b3)
    })
}

/// Runs one property for `trials` trials.
pub fn run_property(
    env: &Env,
    property: &Property,
    seed: u64,
    sizes: usize,
    trials: usize,
) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ name_seed(property.name));
    let trials = if sizes == 0 { 0 } else { trials };
    let mut report = PropertyReport {
        name: property.name,
        kind: property.kind,
        trials,
        cases: 0,
        failures: 0,
        counterexample: None,
    };
    for t in 0..trials {
        let budget = (1 + t * sizes / trials.max(1)).min(sizes);
        match (property.run)(env, &mut rng, budget) {
            Check::Skip => {}
            Check::Pass => report.cases += 1,
            Check::Fail(ce) => {
                report.cases += 1;
                report.failures += 1;
                report.counterexample.get_or_insert(ce);
            }
        }
    }
    report
}

pub fn run(config: &SelftestConfig, ops: Ops) -> SelftestReport {
    let env = Env::new(ops);
    let properties = par::map(PROPERTIES, |p| {
        run_property(&env, p, config.seed, config.sizes, config.trials)
    });
    SelftestReport {
        seed: config.seed,
        sizes: config.sizes,
        trials: config.trials,
        properties,
    }
}

fn homs(a: &Act, b: &Act) -> Vec<Vec<usize>> {
    HomSearch::new(a, b, &HomSearchOptions::default())
        .map(|s| s.collect())
        .unwrap_or_default()
}

/// `f` then `g`.
fn compose(f: &[usize], g: &[usize]) -> Vec<usize> {
    f.iter().map(|&x| g[x]).collect()
}

fn mediators(p: &Act, z: &Act, constraints: Vec<(usize, usize)>) -> usize {
    let options = HomSearchOptions {
        constraints,
        injective: false,
    };
    HomSearch::new(p, z, &options).map_or(0, |s| s.count())
}

fn hom_json(h: &ActHom) -> Value {
    json!({"source": h.source(), "target": h.target(), "map": h.map()})
}

fn generates(act: &Act, gens: &[usize], target: &BTreeSet<usize>) -> bool {
    act.generated_subact(gens.iter().copied()).ok().as_ref() == Some(target)
}

/// No set of `k - 1` elements of `target` generates it.
fn is_minimal(act: &Act, k: usize, target: &BTreeSet<usize>) -> bool {
    k == 0
        || target
            .iter()
            .copied()
            .combinations(k - 1)
            .all(|c| !generates(act, &c, target))
}

fn monoid_ideals(env: &Env, rng: &mut ChaCha8Rng, _: usize) -> Check {
    let (name, m) = &env.monoids[env.any(rng)];
    let ideals = m.all_left_ideals();
    let sets: Vec<&BTreeSet<usize>> = ideals.iter().map(|i| &i.elements).collect();
    ensure!(sets.iter().any(|s| s.is_empty()), {"monoid": name, "missing": "empty ideal"});
    for i in &ideals {
        ensure!(m.is_left_ideal(&i.elements), {"monoid": name, "not_ideal": i.elements});
        let regular = Act::regular(m.clone());
        ensure!(
            generates(&regular, &i.min_generators, &i.elements)
                && is_minimal(&regular, i.min_generators.len(), &i.elements),
            {"monoid": name, "ideal": i.elements, "generators": i.min_generators}
        );
    }
    for (a, b) in sets.iter().tuple_combinations() {
        let union: BTreeSet<usize> = a.union(b).copied().collect();
        let meet: BTreeSet<usize> = a.intersection(b).copied().collect();
        ensure!(
            sets.contains(&&union) && sets.contains(&&meet),
            {"monoid": name, "ideals": [a, b]}
        );
    }
    let degree = ideals
        .iter()
        .map(|i| i.min_generators.len())
        .max()
        .unwrap_or(0);
    ensure!(m.generation_degree() == degree && degree <= m.size(), {"monoid": name});
    Check::Pass
}

fn monoid_right_reversible(env: &Env, rng: &mut ChaCha8Rng, _: usize) -> Check {
    let (name, m) = &env.monoids[env.any(rng)];
    let n = m.size();
    let oracle = (0..n).all(|t| {
        (0..n).all(|r| {
            let st = m.left_closure([t]);
            let sr = m.left_closure([r]);
            !st.is_disjoint(&sr)
        })
    });
    ensure!(m.right_reversible() == oracle, {"monoid": name, "oracle": oracle});
    ensure!(!(m.is_commutative() || m.is_group()) || oracle, {"monoid": name});
    Check::Pass
}

fn act_closure(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let (name, m) = &env.monoids[env.any(rng)];
    let a = sample::act(m, 0, max, rng);
    let x = sample::subset(&a, 0.3, rng);
    let mut y = sample::subset(&a, 0.3, rng);
    y.extend(&x);
    let sx = a.generated_subact(&x).unwrap();
    let sy = a.generated_subact(&y).unwrap();
    let ssx = a.generated_subact(&sx).unwrap();
    ensure!(
        x.is_subset(&sx) && ssx == sx && sx.is_subset(&sy) && a.is_subact(&sx),
        {"monoid": name, "act": a, "x": x, "y": y}
    );
    for &e in &x {
        ensure!(a.orbit(e) == a.generated_subact([e]).unwrap(), {"monoid": name, "act": a, "element": e});
    }
    Check::Pass
}

fn act_min_generators(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let (name, m) = &env.monoids[env.any(rng)];
    let a = sample::act(m, 0, max, rng);
    let sub = sample::subact(&a, 0.4, rng);
    let gens = a.min_generators(&sub).unwrap();
    ensure!(
        generates(&a, &gens, &sub) && is_minimal(&a, gens.len(), &sub),
        {"monoid": name, "act": a, "subact": sub, "generators": gens}
    );
    Check::Pass
}

/// `Hom(C, A) → Hom(C, B)`, `g ↦ g;f`, is injective for every probe `C`.
fn left_cancellable(env: &Env, mi: usize, f: &ActHom) -> bool {
    let regular = Act::regular(env.monoids[mi].1.clone());
    env.probes[mi]
        .iter()
        .chain(std::iter::once(&regular))
        .all(|c| {
            let gs = homs(c, f.source());
            let images: BTreeSet<Vec<usize>> = gs.iter().map(|g| compose(g, f.map())).collect();
            images.len() == gs.len()
        })
}

fn hom_mono(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let m = &env.monoids[mi].1;
    let a = sample::act(m, 0, max.min(4), rng);
    let b = sample::act(m, 0, max.min(4), rng);
    let Some(f) = sample::hom(&a, &b, 64, rng) else {
        return Check::Skip;
    };
    ensure!(
        f.is_injective() == left_cancellable(env, mi, &f),
        {"monoid": env.monoids[mi].0, "hom": hom_json(&f)}
    );
    Check::Pass
}

fn hom_epi(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let m = &env.monoids[mi].1;
    let a = sample::act(m, 0, max.min(4), rng);
    let b = sample::act(m, 0, max.min(4), rng);
    let Some(f) = sample::hom(&a, &b, 64, rng) else {
        return Check::Skip;
    };
    let cokernel_pair = match (env.ops.pushout)(&f, &f) {
        Ok(p) => p.apex,
        Err(e) => return Check::Fail(json!({"pushout_error": e.to_string()})),
    };
    let cancellable = env.probes[mi]
        .iter()
        .chain(std::iter::once(&cokernel_pair))
        .all(|d| {
            let gs = homs(&b, d);
            let images: BTreeSet<Vec<usize>> = gs.iter().map(|g| compose(f.map(), g)).collect();
            images.len() == gs.len()
        });
    ensure!(
        f.is_surjective() == cancellable,
        {"monoid": env.monoids[mi].0, "hom": hom_json(&f), "surjective": f.is_surjective()}
    );
    Check::Pass
}

fn random_span(env: &Env, mi: usize, rng: &mut ChaCha8Rng, max: usize) -> Option<(ActHom, ActHom)> {
    let m = &env.monoids[mi].1;
    let a0 = sample::act(m, 0, max.min(3), rng);
    let a1 = sample::act(m, 0, max, rng);
    let a2 = sample::act(m, 0, max, rng);
    Some((
        sample::hom(&a0, &a1, 64, rng)?,
        sample::hom(&a0, &a2, 64, rng)?,
    ))
}

fn pushout_universal(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let Some((f1, f2)) = random_span(env, mi, rng, max) else {
        return Check::Skip;
    };
    let ce = json!({"monoid": env.monoids[mi].0, "f1": hom_json(&f1), "f2": hom_json(&f2)});
    let p = match (env.ops.pushout)(&f1, &f2) {
        Ok(p) => p,
        Err(_) => return Check::Fail(ce),
    };
    let commutes =
        (0..f1.source().size()).all(|x| p.left.apply(f1.apply(x)) == p.right.apply(f2.apply(x)));
    ensure!(commutes, ce);
    let reference = limits::pushout(&f1, &f2).expect("valid span");
    let probes = env.probes[mi]
        .iter()
        .chain(std::iter::once(&reference.apex));
    for z in probes {
        for z1 in homs(f1.target(), z) {
            for z2 in homs(f2.target(), z) {
                if compose(f1.map(), &z1) != compose(f2.map(), &z2) {
                    continue;
                }
                let constraints = (0..z1.len())
                    .map(|y| (p.left.apply(y), z1[y]))
                    .chain((0..z2.len()).map(|y| (p.right.apply(y), z2[y])))
                    .collect();
                ensure!(mediators(&p.apex, z, constraints) == 1, ce);
            }
        }
    }
    Check::Pass
}

fn pushout_preserves_mono(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let m = &env.monoids[mi].1;
    let a1 = sample::act(m, 0, max, rng);
    let sub = sample::subact(&a1, 0.4, rng);
    let f1 = sample::mono_from_subact(&a1, &sub, rng);
    let a2 = sample::act(m, 0, max, rng);
    let Some(f2) = sample::hom(f1.source(), &a2, 64, rng) else {
        return Check::Skip;
    };
    let ce = json!({"monoid": env.monoids[mi].0, "f1": hom_json(&f1), "f2": hom_json(&f2)});
    match (env.ops.pushout)(&f1, &f2) {
        Ok(p) => ensure!(p.right.is_injective(), ce),
        Err(_) => return Check::Fail(ce),
    }
    Check::Pass
}

fn random_cospan(
    env: &Env,
    mi: usize,
    rng: &mut ChaCha8Rng,
    max: usize,
) -> Option<(ActHom, ActHom)> {
    let m = &env.monoids[mi].1;
    let a3 = sample::act(m, 0, max, rng);
    let a1 = sample::act(m, 0, max, rng);
    let a2 = sample::act(m, 0, max, rng);
    Some((
        sample::hom(&a1, &a3, 64, rng)?,
        sample::hom(&a2, &a3, 64, rng)?,
    ))
}

fn pullback_universal(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let Some((g1, g2)) = random_cospan(env, mi, rng, max.min(4)) else {
        return Check::Skip;
    };
    let ce = json!({"monoid": env.monoids[mi].0, "g1": hom_json(&g1), "g2": hom_json(&g2)});
    let p = pullback(&g1, &g2).expect("shared target");
    let commutes =
        (0..p.apex.size()).all(|w| g1.apply(p.left.apply(w)) == g2.apply(p.right.apply(w)));
    ensure!(commutes, ce);
    for z in &env.probes[mi] {
        for z1 in homs(z, g1.source()) {
            for z2 in homs(z, g2.source()) {
                if compose(&z1, g1.map()) != compose(&z2, g2.map()) {
                    continue;
                }
                let count = homs(z, &p.apex)
                    .iter()
                    .filter(|u| compose(u, p.left.map()) == z1 && compose(u, p.right.map()) == z2)
                    .count();
                ensure!(count == 1, ce);
            }
        }
    }
    Check::Pass
}

fn pullback_preserves_epi(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let m = &env.monoids[mi].1;
    let a1 = sample::act(m, 0, max, rng);
    let a3 = sample::act(m, 0, max, rng);
    let Some(h) = sample::hom(&a1, &a3, 64, rng) else {
        return Check::Skip;
    };
    let (g1, _) = epi_mono_factorize(&h);
    let a2 = sample::act(m, 0, max, rng);
    let Some(g2) = sample::hom(&a2, g1.target(), 64, rng) else {
        return Check::Skip;
    };
    let p = pullback(&g1, &g2).expect("shared target");
    ensure!(
        p.right.is_surjective(),
        {"monoid": env.monoids[mi].0, "g1": hom_json(&g1), "g2": hom_json(&g2)}
    );
    Check::Pass
}

fn epi_mono(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let m = &env.monoids[mi].1;
    let a = sample::act(m, 0, max, rng);
    let b = sample::act(m, 0, max, rng);
    let Some(h) = sample::hom(&a, &b, 64, rng) else {
        return Check::Skip;
    };
    let (e, mo) = epi_mono_factorize(&h);
    ensure!(
        e.is_surjective() && mo.is_injective() && e.then(&mo).ok().as_ref() == Some(&h),
        {"monoid": env.monoids[mi].0, "hom": hom_json(&h)}
    );
    Check::Pass
}

fn equalizers(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let m = &env.monoids[mi].1;
    let a = sample::act(m, 0, max, rng);
    let b = sample::act(m, 0, max, rng);
    let (Some(f), Some(g)) = (sample::hom(&a, &b, 64, rng), sample::hom(&a, &b, 64, rng)) else {
        return Check::Skip;
    };
    let ce = json!({"monoid": env.monoids[mi].0, "f": hom_json(&f), "g": hom_json(&g)});
    let e = equalizer(&f, &g).expect("parallel pair");
    let agree: BTreeSet<usize> = (0..a.size())
        .filter(|&x| f.apply(x) == g.apply(x))
        .collect();
    ensure!(e.is_injective() && e.image() == agree, ce);
    let q = coequalizer(&f, &g).expect("parallel pair");
    let glued = (0..a.size()).all(|x| q.apply(f.apply(x)) == q.apply(g.apply(x)));
    ensure!(glued && q.is_surjective(), ce);
    for z in &env.probes[mi] {
        for zz in homs(&b, z) {
            if compose(f.map(), &zz) != compose(g.map(), &zz) {
                continue;
            }
            let constraints = (0..b.size()).map(|y| (q.apply(y), zz[y])).collect();
            ensure!(mediators(q.target(), z, constraints) == 1, ce);
        }
    }
    Check::Pass
}

fn random_tuple<R: Rng>(act: &Act, len: usize, rng: &mut R) -> Vec<usize> {
    (0..len).map(|_| rng.gen_range(0..act.size())).collect()
}

/// Is there an isomorphism of generated subacts fixing `params` and sending
/// `t1` to `t2`?
fn same_type_brute_force(act: &Act, t1: &[usize], t2: &[usize], params: &BTreeSet<usize>) -> bool {
    let c1: Vec<usize> = act
        .generated_subact(t1.iter().chain(params).copied())
        .unwrap()
        .into_iter()
        .collect();
    let c2: Vec<usize> = act
        .generated_subact(t2.iter().chain(params).copied())
        .unwrap()
        .into_iter()
        .collect();
    if c1.len() != c2.len() {
        return false;
    }
    let n = act.monoid().size();
    c2.iter().copied().permutations(c2.len()).any(|image| {
        let phi = |x: usize| image[c1.binary_search(&x).unwrap()];
        params.iter().all(|&x| phi(x) == x)
            && t1.iter().zip(t2).all(|(&x, &y)| phi(x) == y)
            && c1
                .iter()
                .all(|&x| (0..n).all(|s| phi(act.act(s, x)) == act.act(s, phi(x))))
    })
}

fn types_oracle(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let m = &env.monoids[mi].1;
    let a = sample::act(m, 1, max.min(5), rng);
    let len = rng.gen_range(1..=2);
    let t1 = random_tuple(&a, len, rng);
    let t2 = if rng.gen_bool(0.2) {
        t1.clone()
    } else {
        random_tuple(&a, len, rng)
    };
    let params = sample::subset(&a, 0.3, rng);
    let p = type_rep(&a, &t1, &params).unwrap();
    let q = type_rep(&a, &t2, &params).unwrap();
    let fast = types_equal(&p, &q).unwrap();
    let slow = same_type_brute_force(&a, &t1, &t2, &params);
    ensure!(
        fast == slow,
        {"monoid": env.monoids[mi].0, "act": a, "t1": t1, "t2": t2, "params": params, "oracle": slow}
    );
    Check::Pass
}

fn types_equivalence(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let m = &env.monoids[mi].1;
    let a = sample::act(m, 1, max, rng);
    let params = sample::subset(&a, 0.3, rng);
    let reps: Vec<_> = (0..3)
        .map(|_| type_rep(&a, &random_tuple(&a, 1, rng), &params).unwrap())
        .collect();
    let eq = |i: usize, j: usize| types_equal(&reps[i], &reps[j]).unwrap();
    let ce = json!({"monoid": env.monoids[mi].0, "act": a, "params": params,
        "tuples": reps.iter().map(|r| r.tuple().to_vec()).collect::<Vec<_>>()});
    ensure!((0..3).all(|i| eq(i, i)), ce);
    ensure!((0..3).all(|i| (0..3).all(|j| eq(i, j) == eq(j, i))), ce);
    ensure!(!(eq(0, 1) && eq(1, 2)) || eq(0, 2), ce);
    Check::Pass
}

fn types_summand(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let m = &env.monoids[mi].1;
    let a = sample::act(m, 1, max, rng);
    let r = sample::act(m, 0, max, rng);
    let sum = coproduct(&a, &r).unwrap();
    let tuple = random_tuple(&a, 2, rng);
    let params = sample::subset(&a, 0.3, rng);
    let p = type_rep(&a, &tuple, &params).unwrap();
    let moved: Vec<usize> = tuple.iter().map(|&x| sum.left.apply(x)).collect();
    let q = type_rep(&sum.apex, &moved, &sum.left.image_of(&params)).unwrap();
    ensure!(
        types_equal(&p, &q).unwrap(),
        {"monoid": env.monoids[mi].0, "act": a, "other": r, "tuple": tuple, "params": params}
    );
    Check::Pass
}

fn types_restriction(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let m = &env.monoids[mi].1;
    let a = sample::act(m, 1, max, rng);
    let tuple = random_tuple(&a, 1, rng);
    let params = sample::subset(&a, 0.5, rng);
    let smaller: BTreeSet<usize> = params
        .iter()
        .copied()
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    let p = type_rep(&a, &tuple, &params).unwrap();
    let r = restrict_type(&p, &smaller).unwrap();
    let direct = type_rep(&a, &tuple, &smaller).unwrap();
    ensure!(
        r.core() == direct.core() && r.core_tuple() == direct.core_tuple(),
        {"monoid": env.monoids[mi].0, "act": a, "tuple": tuple, "params": params, "restricted": smaller}
    );
    Check::Pass
}

fn query(a: &Act, base: &BTreeSet<usize>, x: &BTreeSet<usize>, y: &BTreeSet<usize>) -> bool {
    is_independent(&IndependenceQuery {
        ambient: a.clone(),
        base: base.clone(),
        left: x.clone(),
        right: y.clone(),
    })
    .unwrap()
}

fn indep_symmetry(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let a = sample::act(&env.monoids[mi].1, 0, max + 2, rng);
    let base = sample::subact(&a, 0.3, rng);
    let x = sample::subset(&a, 0.3, rng);
    let y = sample::subset(&a, 0.3, rng);
    ensure!(
        query(&a, &base, &x, &y) == query(&a, &base, &y, &x),
        {"monoid": env.monoids[mi].0, "act": a, "base": base, "x": x, "y": y}
    );
    Check::Pass
}

fn indep_monotone(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let a = sample::act(&env.monoids[mi].1, 0, max + 2, rng);
    let base = sample::subact(&a, 0.3, rng);
    let x = sample::subset(&a, 0.3, rng);
    let y = sample::subset(&a, 0.3, rng);
    if !query(&a, &base, &x, &y) {
        return Check::Skip;
    }
    let bigger = sample::subact_between(&a, &base, &a.carrier(), rng);
    let x2: BTreeSet<usize> = x.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
    let y2: BTreeSet<usize> = y.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
    ensure!(
        query(&a, &bigger, &x, &y) && query(&a, &base, &x2, &y2),
        {"monoid": env.monoids[mi].0, "act": a, "base": base, "bigger": bigger, "x": x, "y": y}
    );
    Check::Pass
}

fn indep_transitive(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let a = sample::act(&env.monoids[mi].1, 0, max + 2, rng);
    let base = sample::subact(&a, 0.2, rng);
    let mid = sample::subact_between(&a, &base, &a.carrier(), rng);
    let x = sample::subset(&a, 0.2, rng);
    let y = sample::subset(&a, 0.3, rng);
    if !(query(&a, &base, &x, &mid) && query(&a, &mid, &x, &y)) {
        return Check::Skip;
    }
    ensure!(
        query(&a, &base, &x, &y),
        {"monoid": env.monoids[mi].0, "act": a, "base": base, "mid": mid, "x": x, "y": y}
    );
    Check::Pass
}

fn indep_existence(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let (i1, i2) = sample::mono_span(&env.monoids[mi].1, max + 1, rng);
    let ce = json!({"monoid": env.monoids[mi].0, "i1": hom_json(&i1), "i2": hom_json(&i2)});
    let Ok(am) = disjoint_amalgam(&i1, &i2) else {
        return Check::Fail(ce);
    };
    let ok = CommutativeSquare::new(i1, i2, am.left, am.right)
        .map(|sq| sq.all_mono() && square_is_independent(&sq).unwrap_or(false))
        .unwrap_or(false);
    ensure!(ok, ce);
    Check::Pass
}

fn indep_effective_unions(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let sq = sample::pullback_square(&env.monoids[mi].1, max + 2, rng);
    let ce = json!({"monoid": env.monoids[mi].0, "g1": hom_json(&sq.g1), "g2": hom_json(&sq.g2)});
    let Ok(p) = (env.ops.pushout)(&sq.f1, &sq.f2) else {
        return Check::Fail(ce);
    };
    let u = pushout_mediator(&p, &sq.g1, &sq.g2);
    ensure!(u.is_some_and(|u| u.is_injective()), ce);
    Check::Pass
}

fn indep_square(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let a3 = sample::act(&env.monoids[mi].1, 0, max + 2, rng);
    let s1 = sample::subact(&a3, 0.4, rng);
    let s2 = sample::subact(&a3, 0.4, rng);
    let meet: BTreeSet<usize> = s1.intersection(&s2).copied().collect();
    let s0 = sample::subact_between(&a3, &BTreeSet::new(), &meet, rng);
    let s0: BTreeSet<usize> = s0.intersection(&meet).copied().collect();
    let g1 = ActHom::inclusion(&a3, &s1).unwrap();
    let g2 = ActHom::inclusion(&a3, &s2).unwrap();
    let (a0, elems) = a3.restrict(&s0).unwrap();
    let into = |g: &ActHom, s: &BTreeSet<usize>| {
        let pos: Vec<usize> = s.iter().copied().collect();
        let map = elems
            .iter()
            .map(|y| pos.binary_search(y).unwrap())
            .collect();
        ActHom::new(a0.clone(), g.source().clone(), map).unwrap()
    };
    let sq = CommutativeSquare::new(into(&g1, &s1), into(&g2, &s2), g1, g2).unwrap();
    ensure!(
        square_is_independent(&sq).unwrap() == query(&a3, &s0, &s1, &s2),
        {"monoid": env.monoids[mi].0, "act": a3, "a0": s0, "a1": s1, "a2": s2}
    );
    Check::Pass
}

fn indep_minimal_base(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let a = sample::act(&env.monoids[mi].1, 1, max + 2, rng);
    let base = sample::subact(&a, 0.4, rng);
    let x = rng.gen_range(0..a.size());
    let ce = json!({"monoid": env.monoids[mi].0, "act": a, "base": base, "x": x});
    match minimal_base(&a, &base, x) {
        Err(_) => ensure!(base.contains(&x), ce),
        Ok(z) => {
            let meet: BTreeSet<usize> = a.orbit(x).intersection(&base).copied().collect();
            ensure!(
                z.iter().all(|e| meet.contains(e))
                    && generates(&a, &z, &meet)
                    && is_minimal(&a, z.len(), &meet),
                ce
            );
        }
    }
    Check::Pass
}

fn indep_merge(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let cfg = sample::merge_config(&env.monoids[mi].1, max.min(4), rng);
    let ce = json!({"monoid": env.monoids[mi].0, "act": cfg.ambient, "a1": cfg.a1, "a2": cfg.a2,
        "base": cfg.base, "over": cfg.over});
    let Ok(merge) = merge_nonforking(&cfg.ambient, cfg.a1, cfg.a2, &cfg.base, &cfg.over) else {
        return Check::Fail(ce);
    };
    ensure!(
        merge.map.contains(&(cfg.a1, cfg.a2))
            && cfg.over.iter().all(|c| merge.map.contains(&(*c, *c))),
        ce
    );
    // The map is forced: any equivariant map extending a1 ↦ a2 and id on C equals it.
    let (dom, elems) = cfg.ambient.restrict(&merge.domain).unwrap();
    let pos = |x: usize| elems.binary_search(&x).unwrap();
    let constraints: Vec<(usize, usize)> = std::iter::once((pos(cfg.a1), cfg.a2))
        .chain(cfg.over.iter().map(|&c| (pos(c), c)))
        .collect();
    ensure!(mediators(&dom, &cfg.ambient, constraints) == 1, ce);
    let over = &cfg.over;
    let p = type_rep(&cfg.ambient, &[cfg.a1], over).unwrap();
    let q = type_rep(&cfg.ambient, &[cfg.a2], over).unwrap();
    ensure!(types_equal(&p, &q).unwrap(), ce);
    Check::Pass
}

fn indep_nonsplitting(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let a = sample::act(&env.monoids[mi].1, 1, (max + 1).min(5), rng);
    let params = sample::subset(&a, 0.4, rng);
    let sx = a.generated_subact(&params).unwrap();
    let base = sample::subact_between(&a, &BTreeSet::new(), &sx, rng);
    let base: BTreeSet<usize> = base.intersection(&sx).copied().collect();
    let tuple = random_tuple(&a, 1, rng);
    let p = type_rep(&a, &tuple, &params).unwrap();
    if !type_nonforking(&p, &base).unwrap().nonforking {
        return Check::Skip;
    }
    ensure!(
        !splits_over(&p, &base).unwrap(),
        {"monoid": env.monoids[mi].0, "act": a, "tuple": tuple, "params": params, "base": base}
    );
    Check::Pass
}

fn inj_hierarchy(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let t = &env.testers[mi];
    let q = sample::act(&env.monoids[mi].1, 0, max.min(3), rng);
    let ce = json!({"monoid": env.monoids[mi].0, "act": q});
    let inj = t.injective(&q);
    let weak = t.weakly_injective(&q);
    let pure = t.absolutely_pure(&q, q.size() + 2);
    let levels: Vec<_> = (1..=t.generation_degree().max(1))
        .map(|n| t.n_injective(&q, n))
        .collect();
    ensure!(!inj.verdict || (weak.verdict && pure.verdict), ce);
    ensure!(levels.windows(2).all(|w| !w[1].verdict || w[0].verdict), ce);
    for v in std::iter::once(&inj).chain([&weak, &pure]).chain(&levels) {
        if let Some(c) = &v.counterexample {
            ensure!(!v.verdict && c.replay(&q), ce);
        }
    }
    Check::Pass
}

fn inj_weak_degree(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let t = &env.testers[mi];
    let q = sample::act(&env.monoids[mi].1, 0, max.min(4), rng);
    ensure!(
        t.weakly_injective(&q).verdict == t.n_injective(&q, t.generation_degree()).verdict,
        {"monoid": env.monoids[mi].0, "act": q}
    );
    Check::Pass
}

fn inj_purity_oracle(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.small(rng);
    let t = &env.testers[mi];
    let q = sample::act(&env.monoids[mi].1, 0, max.min(2), rng);
    let bound = rng.gen_range(1..=4);
    ensure!(
        t.absolutely_pure(&q, bound).verdict == t.absolutely_pure_by_definition(&q, bound),
        {"monoid": env.monoids[mi].0, "act": q, "bound": bound}
    );
    Check::Pass
}

fn inj_dichotomy(env: &Env, rng: &mut ChaCha8Rng, _: usize) -> Check {
    let mi = env.any(rng);
    let (name, m) = &env.monoids[mi];
    let t = &env.testers[mi];
    if m.right_reversible() {
        let pool = &env.injective[mi];
        if pool.is_empty() {
            return Check::Skip;
        }
        let q1 = sample::pick(pool, rng);
        let q2 = sample::pick(pool, rng);
        let sum = coproduct(q1, q2).unwrap().apex;
        ensure!(t.injective(&sum).verdict, {"monoid": name, "q1": q1, "q2": q2});
    } else {
        let pt = Act::singleton(m.clone());
        let two = coproduct(&pt, &pt).unwrap().apex;
        ensure!(
            t.injective(&pt).verdict && !t.weakly_injective(&two).verdict,
            {"monoid": name}
        );
    }
    Check::Pass
}

fn inj_pure_weak(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let t = &env.testers[mi];
    let m = &env.monoids[mi].1;
    let q = sample::act(m, 1, max.min(3), rng);
    if !t.absolutely_pure(&q, m.size() + q.size()).verdict {
        return Check::Skip;
    }
    ensure!(t.weakly_injective(&q).verdict, {"monoid": env.monoids[mi].0, "act": q});
    Check::Pass
}

fn inj_pure_weak_empty(env: &Env, rng: &mut ChaCha8Rng, _: usize) -> Check {
    let mi = env.any(rng);
    let t = &env.testers[mi];
    let m = &env.monoids[mi].1;
    let q = Act::empty(m.clone());
    if !t.absolutely_pure(&q, m.size() + 1).verdict {
        return Check::Skip;
    }
    ensure!(
        t.weakly_injective(&q).verdict,
        {"monoid": env.monoids[mi].0, "act": q, "note": "the empty act is pure but not weakly injective"}
    );
    Check::Pass
}

fn sat_chain(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.any(rng);
    let l = sample::act(&env.monoids[mi].1, 0, max + 1, rng);
    let sub = sample::subact(&l, 0.3, rng);
    let f = sample::mono_from_subact(&l, &sub, rng);
    let ce = json!({"monoid": env.monoids[mi].0, "mono": hom_json(&f)});
    let Ok(chain) = crate::saturation::cellular_factorize(&f) else {
        return Check::Fail(ce);
    };
    let added: usize = chain
        .steps
        .iter()
        .map(|s| s.cyclic.size() - s.attaching.len())
        .sum();
    ensure!(chain.verify().is_ok() && added == l.size() - sub.len(), ce);
    Check::Pass
}

fn sat_som_step(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.small(rng);
    let cells = env.cells[mi]
        .as_ref()
        .expect("small monoids have cell data");
    let k = sample::act(&env.monoids[mi].1, 0, max.min(3), rng);
    let step = cells.som_step(&k);
    let k1 = &step.result;
    let ce = json!({"monoid": env.monoids[mi].0, "act": k});
    ensure!(
        step.leg.is_injective() && Act::from_table(k.monoid().clone(), &k1.rows()).is_ok(),
        ce
    );
    for cell in &step.cells {
        let b = &cells.cyclic_acts()[cell.cyclic_index];
        let ext_ok = ActHom::new(b.clone(), k1.clone(), cell.extension.clone()).is_ok()
            && cell
                .subact
                .iter()
                .zip(&cell.hom)
                .all(|(&y, &u)| cell.extension[y] == u);
        ensure!(ext_ok, ce);
    }
    for b in cells.cyclic_acts() {
        for a in b.all_subacts() {
            let incl = ActHom::inclusion(b, &a).unwrap();
            for u in homs(incl.source(), &k) {
                let moved = compose(&u, step.leg.map());
                ensure!(extend_along(&incl, &moved, k1).is_some(), ce);
            }
        }
    }
    Check::Pass
}

fn sat_options() -> SaturateOptions {
    SaturateOptions {
        max_size: 96,
        ..SaturateOptions::default()
    }
}

fn sat_reached(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.small(rng);
    let cells = env.cells[mi]
        .as_ref()
        .expect("small monoids have cell data");
    let t = &env.testers[mi];
    let k = sample::act(&env.monoids[mi].1, 0, max.min(3), rng);
    let sat = saturate_with(&k, sat_options(), cells, t);
    if !matches!(sat.status, SaturationStatus::Reached { .. }) {
        return Check::Skip;
    }
    let prefix = (0..k.size()).all(|x| sat.embedding.apply(x) == x);
    ensure!(
        prefix && sat.embedding.is_injective() && t.weakly_injective(&sat.result).verdict,
        {"monoid": env.monoids[mi].0, "act": k}
    );
    Check::Pass
}

fn sat_lifting(env: &Env, rng: &mut ChaCha8Rng, max: usize) -> Check {
    let mi = env.small(rng);
    let cells = env.cells[mi]
        .as_ref()
        .expect("small monoids have cell data");
    let m = &env.monoids[mi].1;
    let k = sample::act(m, 0, max.min(2), rng);
    let sat = saturate_with(&k, sat_options(), cells, &env.testers[mi]);
    if !matches!(sat.status, SaturationStatus::Reached { .. }) {
        return Check::Skip;
    }
    let l = sample::act(m, k.size(), k.size() + 2, rng);
    let into = HomSearchOptions {
        constraints: vec![],
        injective: true,
    };
    let Some(iota) = HomSearch::new(&k, &l, &into).unwrap().first() else {
        return Check::Skip;
    };
    let lift = HomSearchOptions {
        constraints: (0..k.size())
            .map(|x| (iota[x], sat.embedding.apply(x)))
            .collect(),
        injective: true,
    };
    let found = HomSearch::new(&l, &sat.result, &lift).is_ok_and(|s| s.first().is_some());
    ensure!(
        found,
        {"monoid": env.monoids[mi].0, "k": k, "l": l, "mono": iota, "saturated": sat.result}
    );
    Check::Pass
}
