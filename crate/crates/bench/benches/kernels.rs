use std::sync::Arc;

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use nilmassey_bench::{random_element, seeded};
use nilmassey_core::cohomology::{delta_n, TwistedCocycle};
use nilmassey_core::magnus::MalcevBasis;
use nilmassey_core::{Character, FiniteGroup, FreeGroupAction, GroupElement, ModulusContext};

fn series_mul(c: &mut Criterion) {
    let ctx = ModulusContext::new(7, 2).unwrap();
    let mut group = c.benchmark_group("series_mul");
    for (r, n) in [(2, 4), (2, 8), (3, 5)] {
        let mut rng = seeded(1);
        let a = random_element(&mut rng, r, n, ctx).unwrap();
        let b = random_element(&mut rng, r, n, ctx).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(format!("r{r}_n{n}")), &(a, b), |bench, (a, b)| {
            bench.iter(|| black_box(a).multiply(black_box(b)).unwrap())
        });
    }
    group.finish();
}

fn inverse(c: &mut Criterion) {
    let ctx = ModulusContext::new(11, 1).unwrap();
    let a = random_element(&mut seeded(2), 2, 8, ctx).unwrap();
    c.bench_function("inverse_r2_n8", |bench| bench.iter(|| black_box(&a).invert()));
}

fn obstruction_cochain(c: &mut Criterion) {
    let ctx = ModulusContext::new(7, 1).unwrap();
    let g = Arc::new(FiniteGroup::cyclic(3).unwrap());
    let chi = Character::from_generator_value(g, ctx, 2).unwrap();
    let up = FreeGroupAction::character(chi, 2, 3).unwrap();
    let low = Arc::new(up.truncate(2));
    let candidates: Vec<GroupElement> = MalcevBasis::new(2, 2, ctx).unwrap().enumerate().collect();
    let x = TwistedCocycle::enumerate(low, &candidates).unwrap().pop().unwrap();
    c.bench_function("delta_3_cyclic3", |bench| bench.iter(|| delta_n(black_box(&x), &up).unwrap()));
}

criterion_group!(benches, series_mul, inverse, obstruction_cochain);
criterion_main!(benches);
