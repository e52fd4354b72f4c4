//! Sequential against rayon for the three data-parallel entry points.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use henon_lab::classify::classify_grid_with;
use henon_lab::render::{render_with, Palette, RenderJob, SliceMode, SliceSpec};
use henon_lab::verify::{default_samplers, run_all_with, SuiteParams};
use henon_lab::{ClassifyConfig, ConeSchedule, Execution, MapParams, Point};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn config() -> (ClassifyConfig, MapParams) {
    let sched = ConeSchedule::default_for(3.0).unwrap();
    (ClassifyConfig::new(sched), MapParams::new(3.0).unwrap())
}

fn bench_render(c: &mut Criterion) {
    let (cfg, params) = config();
    let job = RenderJob {
        slice: SliceSpec {
            mode: SliceMode::RealPlane,
            center: (0.0, 0.0),
            extent: (60.0, 60.0),
            resolution: (256, 256),
        },
        cfg,
        params,
        palette: Palette::default(),
        gamma: 1.0,
    };
    let mut group = c.benchmark_group("render_256");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| render_with(black_box(&job), exec).unwrap())
        });
    }
    group.finish();
}

fn bench_classify(c: &mut Criterion) {
    let (cfg, params) = config();
    let points: Vec<Point> = (0..20_000)
        .map(|k| {
            let t = k as f64 * 0.618_033_988_749_895;
            Point::real(40.0 * (t.fract() - 0.5), 40.0 * ((t * 7.0).fract() - 0.5))
        })
        .collect();
    let mut group = c.benchmark_group("classify_grid_20k");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| classify_grid_with(black_box(&points), &cfg, &params, exec))
        });
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let params = SuiteParams::for_delta(3.0).unwrap();
    let samplers = default_samplers(7);
    let mut group = c.benchmark_group("verify_all");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| run_all_with(black_box(&samplers), &params, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_render, bench_classify, bench_verify);
criterion_main!(benches);
