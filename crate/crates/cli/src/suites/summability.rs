//! The summation axioms on families of powers `(εⁿ)_n`: finite sums,
//! reindexing by a bijection, padding with zeros, rescaling, and one
//! regrouping along an injection `n ↦ (n div 2, n mod 2)`.

use std::sync::Arc;

use rand::Rng as _;
use sigma_core::hahn::powers;
use sigma_core::series::family::{unit_weights, Index, KernelFn, Weights};
use sigma_core::{DescribedSet, Mono, Result, Scalar, Series, SummableFamily};

use super::hahn::{hahn_of, puiseux, random_dense};
use super::oracle::{self, Dense};
use super::Cases;

/// `Σ_{n ≥ 0} c(n)·εⁿ` up to `bound`, for `ε` with positive valuation.
pub(super) fn dense_sum(eps: &Dense, c: &dyn Fn(i64) -> Scalar, bound: &Mono) -> Dense {
    let v = oracle::lowest(eps).expect("nonzero ε").coords()[0];
    let top = (bound.coords()[0] / v).floor().to_integer().max(0) + 1;
    let mut acc = Dense::new();
    let mut p = oracle::one(1);
    for n in 0..=top {
        acc = oracle::add(&acc, &oracle::scale(&p, &c(n)));
        p = oracle::mul(&p, eps, Some(bound));
    }
    oracle::truncate(&acc, bound)
}

/// Checks summability and compares the sum with the dense oracle.
fn sum_vs(fam: &SummableFamily, w: &Weights, eps: &Dense, c: &dyn Fn(i64) -> Scalar, window: usize) -> Result<Option<String>> {
    let report = fam.check_summable(window);
    if !report.accepted() {
        return Ok(Some(format!("not accepted: {} {:?}", report.verdict, report.notes)));
    }
    let s = fam.sum_checked(w, window)?;
    let pts = s.window(window)?;
    let bound = pts.last().cloned().unwrap_or_else(|| Mono::int(0));
    oracle::agree(&s, &dense_sum(eps, c, &bound), window)
}

fn lin(a: i64, b: i64) -> impl Fn(i64) -> Scalar + Send + Sync + Clone {
    move |n| Scalar::int((a * n + b).rem_euclid(7) - 3)
}

fn label(step: &str, r: Result<Option<String>>) -> Result<Option<String>> {
    r.map(|o| o.map(|w| format!("{step}: {w}")))
}

pub fn axioms(c: &mut Cases) -> Result<()> {
    let w = c.window;
    let born = puiseux();
    for i in 0..100 {
        let eps: Dense = random_dense(&mut c.rng, 3, 0, 3).into_iter().filter(|(m, _)| m.is_positive()).collect();
        let eps = if eps.is_empty() { oracle::from_terms([(Mono::rat(1, 3), Scalar::int(2))]) } else { eps };
        let k = c.rng.gen_range(1..=5i64);
        let (a, b) = (c.rng.gen_range(1..7), c.rng.gen_range(0..7));
        let (a2, b2) = (c.rng.gen_range(1..7), c.rng.gen_range(0..7));
        let r = (|| -> Result<Option<String>> {
            let fam = powers(&hahn_of(&eps)?)?;
            let one = |_: i64| Scalar::one();

            // (a) a finite family sums to its ordinary sum
            let members = (0..k).map(|n| fam.member(&Mono::int(n))).collect::<Result<Vec<Series>>>()?;
            let fin = SummableFamily::finite(born.clone(), members)?;
            let s = fin.sum(&unit_weights())?;
            let want = (0..k).fold(Dense::new(), |acc, n| oracle::add(&acc, &oracle::pow(&eps, n as u64, 1, None)));
            if oracle::of(&s) != want {
                return Ok(Some(format!("(a) finite sum {} vs {}", oracle::show(&oracle::of(&s)), oracle::show(&want))));
            }

            // (b) swapping 2k and 2k+1 changes nothing
            let swap: Arc<dyn Fn(&Mono) -> Mono + Send + Sync> =
                Arc::new(|m: &Mono| Mono::int(m.as_int().map(|n| n ^ 1).unwrap_or(0)));
            let perm = fam.permute(swap.clone(), swap);
            if let Some(x) = label("(b) permuted", sum_vs(&perm, &unit_weights(), &eps, &one, w))? {
                return Ok(Some(x));
            }

            // (c) interleaving zeros changes nothing
            if let Some(x) = label("(c) padded", sum_vs(&fam.pad()?, &unit_weights(), &eps, &one, w))? {
                return Ok(Some(x));
            }

            // (d) any rescaling stays summable, with the weighted sum
            let cw = lin(a, b);
            let cw2 = cw.clone();
            let weights: Weights = Arc::new(move |m: &Mono| cw2(m.as_int().unwrap_or(0)));
            let scaled = fam.rescale(weights.clone());
            if let Some(x) = label("(d) rescaled", sum_vs(&scaled, &unit_weights(), &eps, &cw, w))? {
                return Ok(Some(x));
            }
            if let Some(x) = label("(d) weighted", sum_vs(&fam, &weights, &eps, &cw, w))? {
                return Ok(Some(x));
            }

            // regrouping: member n is k(n div 2, n mod 2)·ε^(n div 2)
            let (k0, k1) = (lin(a, b), lin(a2, b2));
            let (k0c, k1c) = (k0.clone(), k1.clone());
            let kfn: KernelFn = Arc::new(move |s: &Mono, t: &Mono| {
                let i = s.as_int().unwrap_or(0);
                if t.as_int() == Some(0) {
                    k0c(i)
                } else {
                    k1c(i)
                }
            });
            let reg = fam.regroup(
                Index::Described(DescribedSet::at_least(Mono::int(0))),
                Arc::new(|n: &Mono| {
                    let n = n.as_int().unwrap_or(0);
                    (Mono::int(n / 2), Mono::int(n % 2))
                }),
                Arc::new(|i: &Mono| {
                    let i = i.as_int().unwrap_or(0);
                    vec![Mono::int(2 * i), Mono::int(2 * i + 1)]
                }),
                kfn,
            );
            let ci = move |i: i64| &k0(i) + &k1(i);
            label("regrouped", sum_vs(&reg, &unit_weights(), &eps, &ci, w))
        })();
        c.check(format!("axioms #{i} ε={} k={k}", oracle::show(&eps)), r);
    }
    Ok(())
}
