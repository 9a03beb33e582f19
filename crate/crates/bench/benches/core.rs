use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gbss_core::search::SearchConfig;
use gbss_core::{clifford, discord, gmqd, region, state, EntropySpec, GammaConvention, GbssSpec};

const TOWER: GammaConvention = GammaConvention::Tower;

fn specs() -> [(&'static str, GbssSpec); 3] {
    [
        ("1x1", GbssSpec::new(1, 1, vec![0.6, 0.2, 0.1]).unwrap()),
        ("1x2", GbssSpec::new(1, 2, vec![0.5, 0.2, 0.1]).unwrap()),
        ("2x2", GbssSpec::new(2, 2, vec![0.1, -0.3, 0.2, 0.05, 0.1]).unwrap()),
    ]
}

fn algebra(c: &mut Criterion) {
    let mut group = c.benchmark_group("algebra");
    for d in [4, 8, 12] {
        group.bench_with_input(BenchmarkId::new("gamma_tower", d), &d, |b, &d| b.iter(|| clifford::build_gamma_tower(black_box(d))));
    }
    for dim in [4, 8] {
        group.bench_with_input(BenchmarkId::new("su_basis", dim), &dim, |b, &dim| b.iter(|| clifford::build_su_basis(black_box(dim))));
    }
    group.finish();
}

fn spectra(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum");
    for (name, spec) in specs() {
        group.bench_with_input(BenchmarkId::new("closed_form", name), &spec, |b, s| b.iter(|| state::closed_form_spectrum(black_box(s))));
        group.bench_with_input(BenchmarkId::new("realize_and_diagonalize", name), &spec, |b, s| {
            b.iter(|| state::realize(black_box(s), TOWER).unwrap().eigenvalues())
        });
    }
    group.finish();
}

fn discord_closed_vs_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("discord");
    group.sample_size(10);
    let config = SearchConfig::with_budget(200, 1);
    for (name, spec) in specs() {
        group.bench_with_input(BenchmarkId::new("closed_form", name), &spec, |b, s| {
            b.iter(|| discord::discord_closed(black_box(s), EntropySpec::VonNeumann, TOWER))
        });
        group.bench_with_input(BenchmarkId::new("oracle_budget_200", name), &spec, |b, s| {
            b.iter(|| discord::discord_oracle(black_box(s), EntropySpec::VonNeumann, &config, TOWER))
        });
    }
    group.finish();
}

fn geometric(c: &mut Criterion) {
    let mut group = c.benchmark_group("gmqd");
    group.sample_size(10);
    let config = SearchConfig::with_budget(200, 1);
    for (name, spec) in specs() {
        group.bench_with_input(BenchmarkId::new("closed_form", name), &spec, |b, s| b.iter(|| gmqd::gmqd_closed(black_box(s))));
        let rho = state::realize(&spec, TOWER).unwrap();
        group.bench_with_input(BenchmarkId::new("oracle_budget_200", name), &rho, |b, r| {
            b.iter(|| gmqd::gmqd_oracle(black_box(r), spec.dims(), &config))
        });
    }
    group.finish();
}

fn regions(c: &mut Criterion) {
    let mut group = c.benchmark_group("region");
    group.bench_function("level_surface_2x2_100", |b| b.iter(|| region::sample_level_surface(2, 2, black_box(0.004), 100, 7, TOWER)));
    group.sample_size(10);
    group.bench_function("vertices_2x2", |b| b.iter(|| region::physical_vertices(black_box(2), 2)));
    group.finish();
}

criterion_group!(benches, algebra, spectra, discord_closed_vs_oracle, geometric, regions);
criterion_main!(benches);
