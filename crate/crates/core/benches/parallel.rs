//! Parallel against sequential execution on the two batch workloads:
//! exact lemma sampling and orbit enumeration.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use weylgrowth::checks::lemma_suite;
use weylgrowth::orbit::{enumerate_orbit, MatrixGroup, MatrixGroupSpec};
use weylgrowth::par::ExecMode;
use weylgrowth::RootSystem;

const MODES: [(&str, ExecMode); 2] = [("parallel", ExecMode::Parallel), ("sequential", ExecMode::Sequential)];

fn lemmas(c: &mut Criterion) {
    let rs = RootSystem::preset("b3").unwrap();
    let mut group = c.benchmark_group("lemma_suite_b3_1000");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(lemma_suite(&rs, 1000, 1, mode)))
        });
    }
    group.finish();
}

fn orbit(c: &mut Criterion) {
    let (t, s) = (2f64.exp(), (-2f64).exp());
    let (cs, sn) = (std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2);
    let rotated =
        vec![vec![t * cs * cs + s * sn * sn, (t - s) * cs * sn], vec![(t - s) * cs * sn, t * sn * sn + s * cs * cs]];
    let spec = MatrixGroupSpec {
        ambient: "sl2r".into(),
        generators: vec![vec![vec![t, 0.0], vec![0.0, s]], rotated],
        max_word_length: 8,
        dedupe_tolerance: 1e-6,
    };
    let g = MatrixGroup::new(&spec).unwrap();
    let mut group = c.benchmark_group("schottky_orbit_depth8");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| black_box(enumerate_orbit(&g, 1_000_000, mode).unwrap().points.len()))
        });
    }
    group.finish();
}

criterion_group!(benches, lemmas, orbit);
criterion_main!(benches);
