use std::sync::Arc;

use rand::Rng as _;
use sigma_core::bornology::{Bornology, Domain, Universe};
use sigma_core::hahn::{cauchy_product, invert_unit, neumann_sum, HahnSeries};
use sigma_core::{Mono, Result, Scalar};

use super::oracle::{self, Dense};
use super::{Cases, Rng};

pub fn puiseux() -> Bornology {
    Bornology::wo(Universe::monomials(&["x"], Domain::Rat))
}

fn exponent(rng: &mut Rng, lo: i64, hi: i64) -> Mono {
    let d = [1, 2, 3, 4][rng.gen_range(0..4)];
    Mono::rat(rng.gen_range(lo * d..=hi * d), d)
}

fn nonzero(rng: &mut Rng, r: i64) -> Scalar {
    let k = rng.gen_range(1..=r);
    Scalar::int(if rng.gen_bool(0.5) { k } else { -k })
}

/// A nonzero finite series with up to `n` terms at exponents in `[lo, hi]`.
pub fn random_dense(rng: &mut Rng, n: usize, lo: i64, hi: i64) -> Dense {
    loop {
        let k = rng.gen_range(1..=n);
        let d = oracle::from_terms((0..k).map(|_| (exponent(rng, lo, hi), nonzero(rng, 5))));
        if !d.is_empty() {
            return d;
        }
    }
}

pub fn hahn_of(d: &Dense) -> Result<HahnSeries> {
    HahnSeries::finite(puiseux(), d.iter().map(|(m, c)| (m.clone(), c.clone())))
}

fn same(h: &HahnSeries, d: &Dense) -> Option<String> {
    let got = oracle::of(h.series());
    (got != *d).then(|| format!("got {}, oracle {}", oracle::show(&got), oracle::show(d)))
}

pub fn ring(c: &mut Cases) -> Result<()> {
    for i in 0..300 {
        let (a, b, cc) = (
            random_dense(&mut c.rng, 4, -3, 6),
            random_dense(&mut c.rng, 4, -3, 6),
            random_dense(&mut c.rng, 4, -3, 6),
        );
        let r = (|| -> Result<Option<String>> {
            let (ha, hb, hc) = (hahn_of(&a)?, hahn_of(&b)?, hahn_of(&cc)?);
            let ab = cauchy_product(&ha, &hb)?;
            let ab_d = oracle::mul(&a, &b, None);
            if let Some(w) = same(&ab, &ab_d) {
                return Ok(Some(format!("a·b: {w}")));
            }
            if let Some(w) = same(&cauchy_product(&hb, &ha)?, &ab_d) {
                return Ok(Some(format!("b·a: {w}")));
            }
            let abc = oracle::mul(&ab_d, &cc, None);
            if let Some(w) = same(&cauchy_product(&ab, &hc)?, &abc) {
                return Ok(Some(format!("(a·b)·c: {w}")));
            }
            if let Some(w) = same(&cauchy_product(&ha, &cauchy_product(&hb, &hc)?)?, &abc) {
                return Ok(Some(format!("a·(b·c): {w}")));
            }
            let dist = oracle::add(&ab_d, &oracle::mul(&a, &cc, None));
            if let Some(w) = same(&cauchy_product(&ha, &hb.add(&hc)?)?, &dist) {
                return Ok(Some(format!("a·(b+c): {w}")));
            }
            Ok(None)
        })();
        c.check(format!("ring #{i} a={} b={} c={}", oracle::show(&a), oracle::show(&b), oracle::show(&cc)), r);
    }
    for i in 0..100 {
        let (a, b) = (random_dense(&mut c.rng, 5, -4, 4), random_dense(&mut c.rng, 5, -4, 4));
        let r = (|| -> Result<Option<String>> {
            let p = cauchy_product(&hahn_of(&a)?, &hahn_of(&b)?)?;
            let v = p.leading_term()?.map(|(m, _)| m);
            let want = &oracle::lowest(&a).cloned().unwrap() + oracle::lowest(&b).unwrap();
            Ok(Cases::expect_eq(v, Some(want)))
        })();
        c.check(format!("valuation #{i} a={} b={}", oracle::show(&a), oracle::show(&b)), r);
    }
    Ok(())
}

pub fn neumann(c: &mut Cases) -> Result<()> {
    let w = c.window;
    let one = oracle::one(1);
    for i in 0..50 {
        // a small positive ε with up to three terms
        let eps = random_dense(&mut c.rng, 3, 0, 3);
        let eps: Dense = eps.into_iter().filter(|(m, _)| m.is_positive()).collect();
        let eps = if eps.is_empty() { oracle::from_terms([(Mono::rat(1, 2), Scalar::int(1))]) } else { eps };
        let n = c.rng.gen_range(0..=8u64);
        let r = (|| -> Result<Option<String>> {
            let he = hahn_of(&eps)?;
            let s = neumann_sum(&he, Arc::new(move |k| if k <= n { Scalar::one() } else { Scalar::zero() }))?;
            let lhs = cauchy_product(&s, &hahn_of(&oracle::sub(&one, &eps))?)?;
            let rhs = oracle::sub(&one, &oracle::pow(&eps, n + 1, 1, None));
            if let Some(x) = oracle::agree(lhs.series(), &rhs, w)? {
                return Ok(Some(format!("(1-ε)·Σε^k: {x}")));
            }
            let direct = (0..=n).fold(Dense::new(), |acc, k| oracle::add(&acc, &oracle::pow(&eps, k, 1, None)));
            Ok(oracle::agree(s.series(), &direct, w)?.map(|x| format!("Σε^k: {x}")))
        })();
        c.check(format!("neumann #{i} ε={} N={n}", oracle::show(&eps)), r);
    }
    for i in 0..50 {
        let lead = exponent(&mut c.rng, -2, 2);
        let rest = random_dense(&mut c.rng, 3, 0, 3);
        let mut f = oracle::from_terms([(lead.clone(), nonzero(&mut c.rng, 4))]);
        for (m, k) in rest {
            if m.is_positive() {
                f = oracle::add(&f, &oracle::from_terms([(&lead + &m, k)]));
            }
        }
        let r = (|| -> Result<Option<String>> {
            let hf = hahn_of(&f)?;
            let g = invert_unit(&hf)?;
            if let Some(x) = oracle::agree(cauchy_product(&hf, &g)?.series(), &one, w)? {
                return Ok(Some(format!("f·f⁻¹: {x}")));
            }
            let pts = g.series().window(w)?;
            let bound = pts.last().cloned().unwrap_or_else(|| Mono::int(0));
            let want = oracle::inverse(&f, &bound).expect("unit leading coefficient");
            Ok(oracle::agree(g.series(), &want, w)?.map(|x| format!("f⁻¹: {x}")))
        })();
        c.check(format!("inverse #{i} f={}", oracle::show(&f)), r);
    }
    let r = (|| -> Result<Option<String>> {
        let f = hahn_of(&oracle::from_terms([
            (Mono::int(0), Scalar::one()),
            (Mono::int(1), Scalar::int(-1)),
            (Mono::int(2), Scalar::int(-1)),
        ]))?;
        let g = invert_unit(&f)?;
        let got = (0..6).map(|k| g.coeff(&Mono::int(k))).collect::<Result<Vec<_>>>()?;
        Ok(Cases::expect_eq(got, [1, 1, 2, 3, 5, 8].iter().map(|&k| Scalar::int(k)).collect()))
    })();
    c.check("fibonacci 1/(1-x-x^2)", r);
    Ok(())
}
