use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use k3cone::conegeom::{cone_from_rays, mori_lemma_replay};
use k3cone::diophant::{pell_sweep, quad_isotropic_rank3, solve_conic};
use k3cone::par::Exec;
use k3cone::runner::builtin;
use std::hint::black_box;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn sweeps(c: &mut Criterion) {
    let x_gram = vec![vec![6, 0, 8], vec![0, -4, 0], vec![8, 0, 6]];
    let scn = builtin("hilb3-deg6").unwrap();
    let hl = scn.hilb().unwrap();
    let mori = cone_from_rays(hl.lattice().clone(), &scn.mori_generators).unwrap();

    let mut g = c.benchmark_group("isotropy_h200");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| quad_isotropic_rank3(black_box(&x_gram), 200, exec).unwrap()));
    }
    g.finish();

    let mut g = c.benchmark_group("pell_sweep_1e6");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| pell_sweep(black_box(7), -3, 1_000_000, exec).unwrap()));
    }
    g.finish();

    let mut g = c.benchmark_group("solve_conic_b2000");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| solve_conic(black_box(6), 16, 6, -2, 2000, exec).unwrap()));
    }
    g.finish();

    let mut g = c.benchmark_group("mori_replay");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| mori_lemma_replay(black_box(&hl), &mori, &scn.ht_predicates, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = sweeps
}
criterion_main!(benches);
