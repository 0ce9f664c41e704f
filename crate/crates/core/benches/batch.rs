use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dulac_core::corpus::{e1_corpus, to_float};
use dulac_core::dulac::{dulac_map, separatrix_recurrence};
use dulac_core::equation::diagonalize;
use dulac_core::germ_space::duval_sweep;
use dulac_core::par::{self, Execution};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn corpus_dulac_float(c: &mut Criterion) {
    let corpus: Vec<_> = e1_corpus(1, 32, 4, 12).iter().map(to_float).collect();
    let mut group = c.benchmark_group("dulac_map_float_32");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| par::map(&corpus, exec, |eq| dulac_map(black_box(eq), 12, 1e-9).map(|nf| nf.residual_norm)))
        });
    }
    group.finish();
}

fn corpus_separatrix_exact(c: &mut Criterion) {
    let prepared: Vec<_> = e1_corpus(2, 16, 4, 12)
        .iter()
        .map(|eq| diagonalize(eq, 0.0).expect("corpus is diagonalizable"))
        .collect();
    let mut group = c.benchmark_group("separatrix_exact_16");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| par::map(&prepared, exec, |deq| separatrix_recurrence(black_box(deq), 12, 0.0).is_ok()))
        });
    }
    group.finish();
}

fn duval(c: &mut Criterion) {
    let degrees = [5, 10, 20, 40];
    let mut group = c.benchmark_group("duval_sweep");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| duval_sweep(black_box(0.3), &degrees, 800, exec))
        });
    }
    group.finish();
}

criterion_group!(benches, corpus_dulac_float, corpus_separatrix_exact, duval);
criterion_main!(benches);
