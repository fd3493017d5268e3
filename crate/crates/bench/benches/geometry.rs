use std::hint::black_box;

use chgeom::bending::{identity_word_probe, deform_group};
use chgeom::dirichlet::dirichlet_side_census;
use chgeom::groups::{limit_set_sample, orbit_enumerate};
use chgeom::presets::bend_spec;
use chgeom::projective::classify_isometry;
use chgeom::Preset;
use criterion::{criterion_group, criterion_main, Criterion};

fn orbit(c: &mut Criterion) {
    let p = Preset::Schottky;
    let g = p.group().unwrap();
    let y = p.center();
    c.bench_function("orbit schottky depth 5", |b| b.iter(|| orbit_enumerate(black_box(&g), 5, &y).unwrap()));
    let f = Preset::Fuchsian;
    let g = f.group().unwrap();
    let seeds = [f.center()];
    c.bench_function("limit set fuchsian depth 5", |b| b.iter(|| limit_set_sample(black_box(&g), 5, &seeds).unwrap()));
}

fn census(c: &mut Criterion) {
    let p = Preset::Z2Lattice;
    let g = p.group().unwrap();
    let y = p.center();
    let mut group = c.benchmark_group("census");
    group.sample_size(10);
    group.bench_function("z2 radius 3, 2000 rays", |b| {
        b.iter(|| dirichlet_side_census(black_box(&g), &y, 3, 2000, 0).unwrap())
    });
    group.finish();
}

fn classify(c: &mut Criterion) {
    let gens = deform_group(&bend_spec().unwrap(), 0.1).unwrap();
    let words: Vec<_> = ["a", "ab", "abC", "aBcA", "cAbaC"].iter().map(|w| gens.evaluate(&gens.parse_word(w).unwrap())).collect();
    c.bench_function("classify five words", |b| {
        b.iter(|| words.iter().map(|m| classify_isometry(black_box(m)).unwrap()).count())
    });
    let mut group = c.benchmark_group("probe");
    group.sample_size(10);
    group.bench_function("identity probe length 5", |b| b.iter(|| identity_word_probe(black_box(&gens), 5, 1e-6)));
    group.finish();
}

criterion_group!(benches, orbit, census, classify);
criterion_main!(benches);
