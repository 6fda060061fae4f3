//! Parallel against sequential execution of the heavier searches.
//!
//! With the default `parallel` feature each workload runs on a one-thread
//! pool and on the default pool. Build with `--no-default-features` to time
//! the plain sequential fallback.

use std::hint::black_box;

use actkit::catalog;
use actkit::enumerate::acts_up_to;
use actkit::injectivity::InjectivityTester;
use actkit::par;
use actkit::saturation::{cellular_factorize, CellCatalog};
use actkit::selftest::{self, Ops, SelftestConfig};
use actkit::{act::Act, hom::ActHom};
use criterion::{criterion_group, criterion_main, Criterion};

fn injectivity_sweep(tester: &InjectivityTester, acts: &[Act]) -> usize {
    par::map(acts, |q| tester.weakly_injective(q).verdict)
        .into_iter()
        .filter(|&v| v)
        .count()
}

fn cellular_sweep(monos: &[ActHom]) -> usize {
    par::map(monos, |f| {
        cellular_factorize(f).map_or(0, |c| c.steps.len())
    })
    .into_iter()
    .sum()
}

type Workload = Box<dyn Fn() -> usize + Send + Sync>;

fn workloads() -> Vec<(&'static str, Workload)> {
    let rz4 = catalog::get("rz4").unwrap();
    let tester = InjectivityTester::new(rz4.clone());
    let acts = acts_up_to(&rz4, 4);
    let lz4 = catalog::get("lz4").unwrap();
    let monos: Vec<ActHom> = acts_up_to(&lz4, 5)
        .iter()
        .flat_map(|l| {
            l.all_subacts()
                .into_iter()
                .map(|s| ActHom::inclusion(l, &s).unwrap())
                .collect::<Vec<_>>()
        })
        .collect();
    let rz3 = catalog::rz3();
    vec![
        (
            "weak_injectivity_rz4",
            Box::new(move || injectivity_sweep(&tester, &acts)),
        ),
        ("cellular_lz4", Box::new(move || cellular_sweep(&monos))),
        (
            "cell_catalog_rz3",
            Box::new(move || CellCatalog::new(&rz3).cyclic_acts().len()),
        ),
        (
            "selftest",
            Box::new(|| {
                let config = SelftestConfig {
                    seed: 0,
                    sizes: 3,
                    trials: 20,
                };
                selftest::run(&config, Ops::standard()).properties.len()
            }),
        ),
    ]
}

#[cfg(feature = "parallel")]
fn bench(c: &mut Criterion) {
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let default = rayon::ThreadPoolBuilder::new().build().unwrap();
    for (name, work) in workloads() {
        let mut group = c.benchmark_group(name);
        group.sample_size(10);
        group.bench_function("one_thread", |b| {
            b.iter(|| single.install(|| black_box(work())))
        });
        group.bench_function(format!("{}_threads", default.current_num_threads()), |b| {
            b.iter(|| default.install(|| black_box(work())))
        });
        group.finish();
    }
}

#[cfg(not(feature = "parallel"))]
fn bench(c: &mut Criterion) {
    for (name, work) in workloads() {
        let mut group = c.benchmark_group(name);
        group.sample_size(10);
        group.bench_function("sequential", |b| b.iter(|| black_box(work())));
        group.finish();
    }
}

criterion_group!(benches, bench);
criterion_main!(benches);
