use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use hyperdist::laws::{check_characterisation, check_norm_laws, CheckConfig, Execution};

fn execution(c: &mut Criterion) {
    let mut group = c.benchmark_group("laws");
    group.sample_size(10);
    let cfg = CheckConfig::exhaustive(3, 2, 4);
    for (name, exec) in [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)] {
        let cfg = cfg.clone().with_execution(exec);
        group.bench_with_input(BenchmarkId::new("characterisation", name), &cfg, |b, cfg| {
            b.iter(|| check_characterisation(cfg).expect("valid config"))
        });
        group.bench_with_input(BenchmarkId::new("norm", name), &cfg, |b, cfg| {
            b.iter(|| check_norm_laws(cfg).expect("valid config"))
        });
    }
    group.finish();
}

criterion_group!(benches, execution);
criterion_main!(benches);
