use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use sigma_core::bornology::{battery, Bornology, Domain, Universe};
use sigma_core::hahn::{cauchy_product, invert_unit, HahnSeries};
use sigma_core::{Mono, Scalar};

fn puiseux() -> Bornology {
    Bornology::wo(Universe::monomials(&["x"], Domain::Rat))
}

fn poly(terms: &[(i64, i64, i64)]) -> HahnSeries {
    HahnSeries::finite(puiseux(), terms.iter().map(|&(n, d, c)| (Mono::rat(n, d), Scalar::int(c)))).unwrap()
}

fn products(c: &mut Criterion) {
    let a = poly(&[(0, 1, 1), (1, 2, -3), (2, 3, 5), (7, 4, 2), (3, 1, -1)]);
    let b = poly(&[(-1, 2, 2), (1, 3, 1), (5, 2, -4), (4, 1, 7)]);
    c.bench_function("cauchy product, 5 × 4 terms", |bench| {
        bench.iter(|| cauchy_product(black_box(&a), black_box(&b)).unwrap())
    });
}

fn inversion(c: &mut Criterion) {
    let f = poly(&[(0, 1, 1), (1, 1, -1), (2, 1, -1)]);
    for n in [16usize, 64] {
        c.bench_function(&format!("1/(1 - x - x^2), {n} coefficients"), |bench| {
            bench.iter(|| {
                let g = invert_unit(black_box(&f)).unwrap();
                g.series().snapshot(n).unwrap()
            })
        });
    }
    let h = poly(&[(0, 1, 1), (1, 2, 1), (1, 3, -2)]);
    c.bench_function("1/(1 + x^(1/2) - 2x^(1/3)), 32 coefficients", |bench| {
        bench.iter(|| invert_unit(black_box(&h)).unwrap().series().snapshot(32).unwrap())
    });
}

fn bornologies(c: &mut Criterion) {
    let z = Universe::int();
    let sets = battery(&z);
    let kinds = [Bornology::finite(z.clone()), Bornology::wo(z.clone()), Bornology::wo_omega(z.clone())];
    c.bench_function("perp verdicts on the battery", |bench| {
        bench.iter(|| {
            for b in &kinds {
                let p = b.perp();
                for s in &sets {
                    black_box(p.is_bounded(s).unwrap());
                }
            }
        })
    });
}

criterion_group!(benches, products, inversion, bornologies);
criterion_main!(benches);
