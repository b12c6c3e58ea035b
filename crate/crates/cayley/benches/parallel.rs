use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cayley::cg::clear_cache;
use cayley::derived::presets;
use cayley::table::cohomology_table;
use cayley::{check_exceptional_collection, g2, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn ext_table(c: &mut Criterion) {
    let objs = presets::cg15();
    let mut g = c.benchmark_group("ext_table_cg15");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                clear_cache();
                check_exceptional_collection(&objs, exec)
            })
        });
    }
    g.finish();
}

fn table(c: &mut Criterion) {
    let mut g = c.benchmark_group("cohomology_table");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                clear_cache();
                cohomology_table(exec)
            })
        });
    }
    g.finish();
}

fn sweeps(c: &mut Criterion) {
    let mut g = c.benchmark_group("g2_sweeps");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("cayley_points_60", name), &exec, |b, &exec| {
            b.iter(|| g2::cg_point_sweep(60, 1, exec))
        });
        g.bench_with_input(BenchmarkId::new("phi_rank_200", name), &exec, |b, &exec| {
            b.iter(|| g2::phi_rank_sweep(200, 1, exec))
        });
        g.bench_with_input(BenchmarkId::new("segre_20", name), &exec, |b, &exec| b.iter(|| g2::segre_sweep(20, 1, exec)));
    }
    g.finish();
}

criterion_group!(benches, ext_table, table, sweeps);
criterion_main!(benches);
