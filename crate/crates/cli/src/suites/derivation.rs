//! The Euler operator `x·d/dx` on Puiseux series: Leibniz on products
//! and interchange with infinite sums, against dense arithmetic.

use std::sync::Arc;

use rand::Rng as _;
use sigma_core::hahn::{invert_unit, powers};
use sigma_core::series::family::unit_weights;
use sigma_core::slalg::{extend_derivation, Algebra, Derivation, MonomialAction};
use sigma_core::{DescribedSet, Mono, Result, Scalar, Series, SummableFamily};

use super::hahn::{hahn_of, puiseux, random_dense};
use super::oracle::{self, Dense};
use super::summability::dense_sum;
use super::Cases;

/// `x^q ↦ q·x^q` on dense series.
fn euler(a: &Dense) -> Dense {
    let q = |m: &Mono| {
        let e = m.coords()[0];
        Scalar::ratio(*e.numer(), *e.denom())
    };
    oracle::from_terms(a.iter().map(|(m, c)| (m.clone(), c * &q(m))))
}

/// A unit `1 − (positive part)` whose inverse is a genuinely lazy series.
fn random_unit(c: &mut Cases) -> Dense {
    let tail: Dense = random_dense(&mut c.rng, 2, 0, 2).into_iter().filter(|(m, _)| m.is_positive()).collect();
    let tail = if tail.is_empty() { oracle::from_terms([(Mono::rat(1, 2), Scalar::int(1))]) } else { tail };
    oracle::sub(&oracle::one(1), &tail)
}

fn last_point(s: &Series, w: usize) -> Result<Mono> {
    Ok(s.window(w)?.last().cloned().unwrap_or_else(|| Mono::int(0)))
}

fn leibniz(c: &mut Cases, d: &Derivation) -> Result<()> {
    let w = c.window;
    for i in 0..100 {
        let a = random_dense(&mut c.rng, 4, -2, 5);
        let lazy = i % 3 == 2;
        let b = if lazy { random_unit(c) } else { random_dense(&mut c.rng, 4, -2, 5) };
        let r = (|| -> Result<Option<String>> {
            let f = hahn_of(&a)?;
            let g = if lazy { invert_unit(&hahn_of(&b)?)? } else { hahn_of(&b)? };
            let bad = d.leibniz_defect(&f, &g, w)?;
            if !bad.is_empty() {
                return Ok(Some(format!("Leibniz fails at {bad:?}")));
            }
            // ∂(fg) against the dense product, exact up to the last window point
            let fg = d.algebra().mul(&f, &g)?;
            let dfg = d.apply(fg.series())?;
            let bound = last_point(&dfg, w)?;
            let g_dense = if lazy {
                // f has exponents ≥ −2, so g is needed up to bound + 2
                match oracle::inverse(&b, &(&bound + &Mono::int(3))) {
                    Some(x) => x,
                    None => return Ok(Some("oracle cannot invert".into())),
                }
            } else {
                b.clone()
            };
            let want = euler(&oracle::mul(&a, &g_dense, Some(&bound)));
            Ok(oracle::agree(&dfg, &want, w)?.map(|x| format!("∂(fg): {x}")))
        })();
        let kind = if lazy { "f·(1/u)" } else { "f·g" };
        c.check(format!("leibniz #{i} {kind} f={} g={}", oracle::show(&a), oracle::show(&b)), r);
    }
    Ok(())
}

/// A certified family with the dense oracle for its sum up to a bound.
type Oracle = Box<dyn Fn(&Mono) -> Dense>;

fn random_family(c: &mut Cases) -> Result<(SummableFamily, Oracle, String)> {
    let born = puiseux();
    if c.rng.gen_bool(0.5) {
        let eps: Dense = random_dense(&mut c.rng, 3, 0, 3).into_iter().filter(|(m, _)| m.is_positive()).collect();
        let eps = if eps.is_empty() { oracle::from_terms([(Mono::rat(2, 3), Scalar::int(-1))]) } else { eps };
        let fam = powers(&hahn_of(&eps)?)?;
        let label = format!("powers of {}", oracle::show(&eps));
        Ok((fam, Box::new(move |b: &Mono| dense_sum(&eps, &|_| Scalar::one(), b)), label))
    } else {
        let template = random_dense(&mut c.rng, 3, -1, 2);
        let (start, step) = (Mono::rat(c.rng.gen_range(-2..=2), 2), Mono::rat(c.rng.gen_range(1..=3), c.rng.gen_range(1..=3)));
        let offsets = DescribedSet::progression(start.clone(), step.clone());
        let t = Series::finite(born, template.iter().map(|(m, c)| (m.clone(), c.clone())))?;
        let fam = SummableFamily::translates(&t, offsets)?;
        let label = format!("translates of {} by {start} + ℕ·{step}", oracle::show(&template));
        let lo = oracle::lowest(&template).expect("nonzero").clone();
        Ok((
            fam,
            Box::new(move |b: &Mono| {
                let mut acc = Dense::new();
                let mut t = start.clone();
                while &(&t + &lo) <= b {
                    let shifted = oracle::from_terms(template.iter().map(|(m, c)| (m + &t, c.clone())));
                    acc = oracle::add(&acc, &shifted);
                    t = &t + &step;
                }
                oracle::truncate(&acc, b)
            }),
            label,
        ))
    }
}

fn strong_linearity(c: &mut Cases, d: &Derivation) -> Result<()> {
    let w = c.window;
    for i in 0..30 {
        let (fam, dense, label) = random_family(c)?;
        let r = (|| -> Result<Option<String>> {
            let d2 = d.clone();
            let src = fam.clone();
            let mapped = fam.map_members(
                d.algebra().bornology().clone(),
                Arc::new(move |f| d2.apply(f)),
                Arc::new(move |g| src.contributors(g)),
                fam.union_certificate().clone(),
            )?;
            let report = mapped.check_summable(w);
            if !report.accepted() {
                return Ok(Some(format!("(∂f_i) not accepted: {:?}", report.notes)));
            }
            let sum_of_images = mapped.sum_checked(&unit_weights(), w)?;
            let image_of_sum = d.apply(&fam.sum_checked(&unit_weights(), w)?)?;
            let bound = last_point(&image_of_sum, w)?.max(last_point(&sum_of_images, w)?);
            let want = euler(&dense(&bound));
            if let Some(x) = oracle::agree(&sum_of_images, &want, w)? {
                return Ok(Some(format!("Σ ∂f_i: {x}")));
            }
            Ok(oracle::agree(&image_of_sum, &want, w)?.map(|x| format!("∂ Σ f_i: {x}")))
        })();
        c.check(format!("strong linearity #{i} on {label}"), r);
    }
    Ok(())
}

pub fn derivation(c: &mut Cases) -> Result<()> {
    let born = puiseux();
    let d = extend_derivation(MonomialAction::euler(&born, 0), &Algebra::over(born)?)?;
    leibniz(c, &d)?;
    strong_linearity(c, &d)
}
