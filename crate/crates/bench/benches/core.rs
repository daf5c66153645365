use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use sdof_core::binning::{build_code, equivocation_exact};
use sdof_core::precoders::build_precoders;
use sdof_core::rates::sweep;
use sdof_core::regions::{jamming_plan, sum_sdof};
use sdof_core::rng::{rng_from_seed, standard_cn};
use sdof_core::{AntennaConfig, EraseChannel, SweepSettings};

fn grid(c: &mut Criterion) {
    let configs: Vec<AntennaConfig> = (1..=8)
        .flat_map(|m1| (1..=m1).flat_map(move |m2| (1..=8).flat_map(move |n| (0..m1 + m2).map(move |ne| AntennaConfig::new(m1, m2, n, ne)))))
        .collect();
    c.bench_function("sum_sdof grid 8", |b| {
        b.iter(|| configs.iter().map(|cfg| sum_sdof(black_box(cfg)).unwrap()).max())
    });
    c.bench_function("jamming_plan grid 8", |b| {
        b.iter(|| configs.iter().map(|cfg| jamming_plan(black_box(cfg)).unwrap().d1).sum::<usize>())
    });
}

fn precoders(c: &mut Criterion) {
    for cfg in [AntennaConfig::new(2, 2, 4, 1), AntennaConfig::new(2, 2, 3, 1), AntennaConfig::new(3, 1, 2, 3)] {
        let plan = jamming_plan(&cfg).unwrap();
        let mut rng = rng_from_seed(1);
        let h1 = standard_cn(cfg.n, cfg.m1, &mut rng);
        let h2 = standard_cn(cfg.n, cfg.m2, &mut rng);
        c.bench_function(&format!("build_precoders {cfg}"), |b| {
            b.iter(|| build_precoders(&plan, black_box(&h1), black_box(&h2), 7).unwrap())
        });
    }
}

fn rates(c: &mut Criterion) {
    let grid: Vec<f64> = (3..=9).map(|k| 10f64.powi(k)).collect();
    let cfg = AntennaConfig::new(2, 2, 3, 1);
    c.bench_function("sweep (2,2,3,1) 20 trials", |b| {
        b.iter(|| sweep(&cfg, &SweepSettings::default(), &grid, 20, black_box(4)).unwrap())
    });
}

fn binning(c: &mut Criterion) {
    let ch = EraseChannel::new(0.5).unwrap();
    for n in [8, 12] {
        let code = build_code(n, 0.75, 0.25, 0).unwrap();
        c.bench_function(&format!("equivocation_exact n={n}"), |b| {
            b.iter(|| equivocation_exact(black_box(&code), &ch).unwrap())
        });
    }
}

criterion_group!(benches, grid, precoders, rates, binning);
criterion_main!(benches);
