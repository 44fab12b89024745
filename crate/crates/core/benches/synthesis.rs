use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use eqfib_core::exec::set_sequential;
use eqfib_core::fincat::zoo;
use eqfib_core::gpd::{standard_family, GpdOracle};
use eqfib_core::htpy::{synthesize, verify_axioms, Htpy};
use eqfib_core::instances::build_codomain;

const BUDGET: usize = 100_000;

fn atoms() -> GpdOracle {
    let fam = Arc::new(standard_family());
    let atoms: Vec<_> = ["T", "Z2", "S3", "J"]
        .iter()
        .map(|n| fam.member(n).unwrap())
        .collect();
    GpdOracle::new(fam).restricted(atoms)
}

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", false), ("sequential", true)]
}

fn codomain(c: &mut Criterion) {
    let mut g = c.benchmark_group("codomain_square_lattice");
    for (mode, seq) in modes() {
        set_sequential(seq);
        g.bench_function(format!("synthesize/{mode}"), |b| {
            b.iter_batched(
                || build_codomain(&zoo::square_lattice()).unwrap().oracle,
                |o| synthesize(&Htpy::new(&o), BUDGET).unwrap(),
                BatchSize::LargeInput,
            )
        });
    }
    set_sequential(false);
    g.finish();
}

fn groupoids(c: &mut Criterion) {
    let mut g = c.benchmark_group("groupoid_atoms");
    g.sample_size(10);
    for (mode, seq) in modes() {
        set_sequential(seq);
        g.bench_function(format!("synthesize/{mode}"), |b| {
            b.iter_batched(
                atoms,
                |o| synthesize(&Htpy::new(&o), BUDGET).unwrap(),
                BatchSize::LargeInput,
            )
        });
        let o = atoms();
        let t = synthesize(&Htpy::new(&o), BUDGET).unwrap();
        g.bench_function(format!("verify_axioms/{mode}"), |b| {
            b.iter(|| verify_axioms(&t))
        });
    }
    set_sequential(false);
    g.finish();
}

criterion_group!(benches, codomain, groupoids);
criterion_main!(benches);
