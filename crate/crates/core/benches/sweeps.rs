use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use symtwist::exec::{par_map, seq_map};
use symtwist::galois::Corpus;
use symtwist::ramify::{example4_bruteforce, sweep_configs, SweepBounds};
use symtwist::twist::{delta2_via_twist, twist, TwistInput};
use symtwist::verify::{delta2_instances, Bounds, VerifyConfig};

fn ramify_sweep(c: &mut Criterion) {
    let cfgs = sweep_configs(SweepBounds { max_group_order: 12, max_f: 3 });
    let mut g = c.benchmark_group("ramify_bruteforce");
    g.sample_size(10);
    g.bench_with_input(BenchmarkId::new("sequential", cfgs.len()), &cfgs, |b, cfgs| {
        b.iter(|| seq_map(cfgs, |x| example4_bruteforce(x).unwrap()))
    });
    g.bench_with_input(BenchmarkId::new("parallel", cfgs.len()), &cfgs, |b, cfgs| {
        b.iter(|| par_map(cfgs, |x| example4_bruteforce(x).unwrap()))
    });
    g.finish();
}

fn twists(c: &mut Criterion) {
    let cfg = VerifyConfig::new(1, Bounds::default());
    let corpus = Corpus::bundled().with_derived();
    let inputs: Vec<_> = delta2_instances(&cfg).iter().filter_map(|i| i.input(&corpus).ok()).collect();
    let work = |x: &TwistInput| (twist(x).unwrap(), delta2_via_twist(x).unwrap());
    let mut g = c.benchmark_group("delta2_twists");
    g.sample_size(10);
    g.bench_with_input(BenchmarkId::new("sequential", inputs.len()), &inputs, |b, xs| b.iter(|| seq_map(xs, work)));
    g.bench_with_input(BenchmarkId::new("parallel", inputs.len()), &inputs, |b, xs| b.iter(|| par_map(xs, work)));
    g.finish();
}

criterion_group!(benches, ramify_sweep, twists);
criterion_main!(benches);
