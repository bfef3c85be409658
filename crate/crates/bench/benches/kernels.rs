use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use fqzeros::bounds::BoundParams;
use fqzeros::poly::gcd;
use fqzeros::projgeom::count_proj_zeros;
use fqzeros::search::{enumerate_subspaces, exhaustive_max, random_probe, BoundKind, ProbeConfig};
use fqzeros::SearchConfig;
use fqzeros_bench::{field, gcd_pair, tb_family};

fn arithmetic(c: &mut Criterion) {
    let mut g = c.benchmark_group("field");
    for q in [7u64, 9, 256] {
        let f = field(q);
        let xs: Vec<_> = f.nonzero_elements().collect();
        g.bench_with_input(BenchmarkId::new("mul_all_pairs", q), &xs, |b, xs| {
            b.iter(|| {
                xs.iter().fold(f.one(), |acc, &x| xs.iter().fold(acc, |a, &y| f.add(a, f.mul(x, y))))
            })
        });
    }
    g.finish();
}

fn counting(c: &mut Criterion) {
    let mut g = c.benchmark_group("count_proj_zeros");
    for (q, d, m) in [(5u64, 3u32, 2usize), (7, 4, 3), (9, 5, 3)] {
        let fam = tb_family(q, d, m, 2);
        g.bench_function(format!("q{q}_d{d}_m{m}"), |b| b.iter(|| count_proj_zeros(black_box(&fam))));
    }
    g.finish();
}

fn gcds(c: &mut Criterion) {
    let mut g = c.benchmark_group("gcd");
    for (q, m, d, shared) in [(7u64, 3usize, 5u32, 0u32), (7, 3, 4, 2), (5, 2, 6, 3), (4, 3, 5, 1)] {
        let (a, b) = gcd_pair(q, m, d, shared, 1);
        g.bench_function(format!("q{q}_m{m}_d{d}_shared{shared}"), |bn| {
            bn.iter(|| gcd(black_box(&a), black_box(&b)))
        });
    }
    g.finish();
}

fn searches(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    g.bench_function("enumerate_subspaces_6_2_q3", |b| {
        b.iter(|| enumerate_subspaces(6, 2, 3).count())
    });
    let cfg = SearchConfig::default();
    for (q, d, m, r) in [(3u64, 2u32, 2usize, 2u64), (4, 2, 2, 1)] {
        let params = BoundParams::new(q, d, m, r).unwrap();
        g.bench_function(format!("exhaustive_q{q}_d{d}_m{m}_r{r}"), |b| {
            b.iter(|| exhaustive_max(&params, &cfg).unwrap())
        });
    }
    let params = BoundParams::new(5, 3, 2, 4).unwrap();
    let probe = ProbeConfig::new(20_000, 3, BoundKind::Conjecture);
    g.bench_function("random_q5_d3_m2_r4_20k", |b| b.iter(|| random_probe(&params, &probe).unwrap()));
    g.finish();
}

criterion_group!(benches, arithmetic, counting, gcds, searches);
criterion_main!(benches);
