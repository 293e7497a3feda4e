use proptest::prelude::*;

use sigma_core::bornology::{battery, Bornology, Domain, Universe, Verdict};
use sigma_core::closure::linalg;
use sigma_core::closure::{dual_basis_construction, FunctionalFamily};
use sigma_core::hahn::{cauchy_product, invert_unit, HahnSeries};
use sigma_core::slalg::{extend_derivation, Algebra, MonomialAction};
use sigma_core::{Mono, Scalar, Series, StrongLinearMap};

fn power_series() -> Bornology {
    Bornology::wo(Universe::monomials(&["x"], Domain::Nat))
}

fn poly(coeffs: &[i64]) -> HahnSeries {
    HahnSeries::finite(
        power_series(),
        coeffs.iter().enumerate().map(|(i, &c)| (Mono::int(i as i64), Scalar::int(c))),
    )
    .unwrap()
}

fn dense_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn bornologies(u: &Universe) -> Vec<Bornology> {
    vec![
        Bornology::finite(u.clone()),
        Bornology::all(u.clone()),
        Bornology::wo(u.clone()),
        Bornology::rev_wo(u.clone()),
        Bornology::wo_omega(u.clone()),
    ]
}

#[test]
fn perp_is_a_galois_connection_on_the_battery() {
    for u in [Universe::nat(), Universe::int()] {
        for b in bornologies(&u) {
            let p = b.perp();
            assert_eq!(p.perp().perp(), p, "{b}");
            let bb = p.perp();
            for s in battery(&u) {
                if b.is_bounded(&s).unwrap() == Verdict::Bounded {
                    assert_ne!(bb.is_bounded(&s).unwrap(), Verdict::Unbounded, "{b}: {}", s.format(&u));
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cauchy_product_matches_dense_multiplication(
        a in prop::collection::vec(-5i64..5, 1..6),
        b in prop::collection::vec(-5i64..5, 1..6),
    ) {
        let p = cauchy_product(&poly(&a), &poly(&b)).unwrap();
        for (i, c) in dense_mul(&a, &b).into_iter().enumerate() {
            prop_assert_eq!(p.coeff(&Mono::int(i as i64)).unwrap(), Scalar::int(c));
        }
    }

    #[test]
    fn product_is_associative(
        a in prop::collection::vec(-3i64..3, 1..4),
        b in prop::collection::vec(-3i64..3, 1..4),
        c in prop::collection::vec(-3i64..3, 1..4),
    ) {
        let (a, b, c) = (poly(&a), poly(&b), poly(&c));
        let l = cauchy_product(&cauchy_product(&a, &b).unwrap(), &c).unwrap();
        let r = cauchy_product(&a, &cauchy_product(&b, &c).unwrap()).unwrap();
        prop_assert!(l.series().agrees_to_window(r.series(), 16).unwrap());
    }

    #[test]
    fn inverse_satisfies_the_recurrence(
        c0 in prop::sample::select(vec![-2i64, -1, 1, 2, 3]),
        rest in prop::collection::vec(-4i64..4, 0..4),
    ) {
        let mut coeffs = vec![c0];
        coeffs.extend(rest);
        let f = poly(&coeffs);
        let g = invert_unit(&f).unwrap();
        // g_n = -(Σ_{k≥1} f_k g_{n-k}) / f_0
        let f0 = Scalar::int(c0);
        let mut want: Vec<Scalar> = vec![f0.inv().unwrap()];
        for n in 1..12usize {
            let mut acc = Scalar::zero();
            for k in 1..=n.min(coeffs.len() - 1) {
                acc = &acc + &(&Scalar::int(coeffs[k]) * &want[n - k]);
            }
            want.push(&(-&acc) / &f0);
        }
        for (n, w) in want.iter().enumerate() {
            prop_assert_eq!(&g.coeff(&Mono::int(n as i64)).unwrap(), w);
        }
    }

    #[test]
    fn euler_satisfies_leibniz(
        a in prop::collection::vec(-4i64..4, 1..5),
        b in prop::collection::vec(-4i64..4, 1..5),
    ) {
        let born = Bornology::wo(Universe::monomials(&["x"], Domain::Rat));
        let alg = Algebra::over(born.clone()).unwrap();
        let d = extend_derivation(MonomialAction::euler(&born, 0), &alg).unwrap();
        let mk = |v: &[i64]| {
            HahnSeries::finite(
                born.clone(),
                v.iter().enumerate().map(|(i, &c)| (Mono::rat(i as i64, 2), Scalar::int(c))),
            )
            .unwrap()
        };
        prop_assert!(d.leibniz_defect(&mk(&a), &mk(&b), 16).unwrap().is_empty());
    }

    #[test]
    fn dual_basis_recovers_every_row(
        rows in prop::collection::vec(prop::collection::vec(-2i64..3, 6), 1..4),
    ) {
        let dim = 6;
        let mut h = FunctionalFamily::new(dim);
        for r in &rows {
            h.push(r.iter().map(|&x| Scalar::int(x)).collect()).unwrap();
        }
        let basis = dual_basis_construction(&h, dim);
        prop_assert_eq!(linalg::rank(&basis.vectors), basis.vectors.len());
        for (m, rec) in basis.recoveries.iter().enumerate() {
            let rec = rec.as_ref().unwrap();
            let xi = &h.rows()[m];
            for b in &basis.vectors[rec.bound.min(basis.vectors.len())..] {
                prop_assert!(linalg::dot(xi, b).is_zero());
            }
            // ξ(b_n) read off the recovery must match ξ applied directly.
            for (n, b) in basis.vectors.iter().enumerate() {
                let from_rec = rec.coeffs.iter().find(|(j, _)| *j == n).map(|(_, c)| c.clone()).unwrap_or_else(Scalar::zero);
                prop_assert_eq!(linalg::dot(xi, b), from_rec);
            }
        }
    }

    #[test]
    fn maps_are_linear(
        seed in 0u64..1000,
        a in prop::collection::vec(-3i64..3, 1..6),
        b in prop::collection::vec(-3i64..3, 1..6),
    ) {
        let born = Bornology::wo(Universe::int());
        let m = StrongLinearMap::banded(&born, seed, 2, 3).unwrap();
        let s = |v: &[i64]| Series::finite(born.clone(), v.iter().enumerate().map(|(i, &c)| (Mono::int(i as i64), Scalar::int(c)))).unwrap();
        let (fa, fb) = (s(&a), s(&b));
        let lhs = m.apply(&fa.add(&fb).unwrap()).unwrap();
        let rhs = m.apply(&fa).unwrap().add(&m.apply(&fb).unwrap()).unwrap();
        for k in -4..10 {
            prop_assert_eq!(lhs.coeff(&Mono::int(k)).unwrap(), rhs.coeff(&Mono::int(k)).unwrap());
        }
    }
}
