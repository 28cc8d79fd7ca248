//! Parallel vs sequential trial execution on a Monte Carlo search workload.
//!
//! The unit of work is one seeded `find_marked` run; `map_indexed` fans the
//! runs out over the rayon pool (when the `parallel` feature is on) while
//! `map_indexed_seq` is the single-threaded baseline.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use elecwalk::exec::{map_indexed, map_indexed_seq};
use elecwalk::families;
use elecwalk::{find_marked, CostLedger, SearchParams};

fn one_run(g: &elecwalk::Graph, sigma: &elecwalk::Distribution, seed: u64) -> u64 {
    let params = SearchParams::default();
    let mut ledger = CostLedger::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let _ = find_marked(g, sigma, g.total_weight(), &params, &mut ledger, &mut rng);
    ledger.total()
}

fn bench_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_trials");
    group.sample_size(10);
    for n in [16usize, 48] {
        let g = families::path(n);
        let sigma = families::default_start(&g).unwrap();
        let trials = 16;
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, _| {
            b.iter(|| map_indexed(trials, |k| one_run(&g, &sigma, 1000 + k as u64)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, _| {
            b.iter(|| map_indexed_seq(trials, |k| one_run(&g, &sigma, 1000 + k as u64)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_trials);
criterion_main!(benches);
