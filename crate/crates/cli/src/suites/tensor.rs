//! Product and hom bornologies on ℕ×ℕ against sampled projections and
//! fibers, and the interchange of sums with tensor products.
//!
//! Every generated set has starts at most 12 and steps at most 3, so an
//! infinite projection shows up in the band `[64, 128)`, and an infinite
//! section or fiber shows up at a fixed coordinate below 16.

use rand::Rng as _;
use sigma_core::bornology::{Bornology, DescribedSet, Universe, Verdict};
use sigma_core::series::family::unit_weights;
use sigma_core::{Mono, Result, Scalar, Series, SummableFamily};

use super::{Cases, Rng};

const BAND: std::ops::Range<i64> = 64..128;
const FAR: std::ops::Range<i64> = 200..400;
const REACH: i64 = 400;
const NEAR: i64 = 16;

struct Sampled {
    proj1_infinite: bool,
    proj2_infinite: bool,
    /// Some `{δ : (γ, δ) ∈ S}` is infinite.
    section_infinite: bool,
    /// Some `{γ : (γ, δ) ∈ S}` is infinite.
    fiber_infinite: bool,
}

fn sample(s: &DescribedSet, u: &Universe) -> Sampled {
    let has = |g: i64, d: i64| s.contains(u, &Mono::ints(&[g, d]));
    let any = |gs: std::ops::Range<i64>, ds: std::ops::Range<i64>| gs.into_iter().any(|g| ds.clone().any(|d| has(g, d)));
    let any_t = |ds: std::ops::Range<i64>, gs: std::ops::Range<i64>| ds.into_iter().any(|d| gs.clone().any(|g| has(g, d)));
    Sampled {
        proj1_infinite: any(BAND, 0..REACH),
        proj2_infinite: any_t(BAND, 0..REACH),
        section_infinite: any(0..NEAR, FAR),
        fiber_infinite: any_t(0..NEAR, FAR),
    }
}

fn factor(rng: &mut Rng) -> String {
    match rng.gen_range(0..4) {
        0 => {
            let k = rng.gen_range(1..=3);
            let pts: Vec<String> = (0..k).map(|_| rng.gen_range(0..=12).to_string()).collect();
            format!("{{{}}}", pts.join(", "))
        }
        1 => format!("prog({}; {})", rng.gen_range(0..=8), rng.gen_range(1..=3)),
        2 => {
            let a = rng.gen_range(0..=8);
            format!("[{a}, {}]", a + rng.gen_range(0..6))
        }
        _ => format!("[{}, inf)", rng.gen_range(0..=8)),
    }
}

fn random_atom(rng: &mut Rng, u: &Universe) -> Result<DescribedSet> {
    let nat = Universe::nat();
    Ok(match rng.gen_range(0..3) {
        0 => DescribedSet::rect(DescribedSet::parse(&factor(rng), &nat)?, DescribedSet::parse(&factor(rng), &nat)?),
        1 => {
            // axis-parallel or diagonal
            let (a, b) = loop {
                let (a, b) = (rng.gen_range(0..=3), rng.gen_range(0..=3));
                if a + b > 0 {
                    break (a, b);
                }
            };
            DescribedSet::progression(Mono::ints(&[rng.gen_range(0..=8), rng.gen_range(0..=8)]), Mono::ints(&[a, b]))
        }
        _ => {
            let k = rng.gen_range(1..=4);
            DescribedSet::finite((0..k).map(|_| Mono::ints(&[rng.gen_range(0..=12), rng.gen_range(0..=12)])))
        }
    })
    .inspect(|s| debug_assert!(s.validate(u).is_ok()))
}

fn want(b: bool) -> Verdict {
    if b {
        Verdict::Bounded
    } else {
        Verdict::Unbounded
    }
}

/// `Σ_{t ∈ offsets, t ≤ n} template(n − t)` on ℕ.
fn translate_sum_at(template: &[(i64, i64)], offsets: &DescribedSet, n: i64) -> i64 {
    let nat = Universe::nat();
    (0..=n)
        .filter(|t| offsets.contains(&nat, &Mono::int(*t)))
        .map(|t| template.iter().filter(|(k, _)| *k == n - t).map(|(_, c)| c).sum::<i64>())
        .sum()
}

/// A translate family with its template terms and offsets.
type Translates = (SummableFamily, Vec<(i64, i64)>, DescribedSet);

fn random_family(rng: &mut Rng, born: &Bornology) -> Result<Translates> {
    let len = rng.gen_range(1..=3);
    let template: Vec<(i64, i64)> = (0..len).map(|i| (i, rng.gen_range(-3..=3))).collect();
    let nat = Universe::nat();
    let offsets = if rng.gen_bool(0.7) {
        DescribedSet::progression(Mono::int(rng.gen_range(0..4)), Mono::int(rng.gen_range(1..=3)))
    } else {
        DescribedSet::parse(&format!("{{{}, {}}}", rng.gen_range(0..6), rng.gen_range(0..6)), &nat)?
    };
    let t = Series::finite(born.clone(), template.iter().map(|&(k, c)| (Mono::int(k), Scalar::int(c))))?;
    Ok((SummableFamily::translates(&t, offsets.clone())?, template, offsets))
}

pub fn tensor_hom(c: &mut Cases) -> Result<()> {
    let nat = Universe::nat();
    let u = Universe::product(nat.clone(), nat.clone());
    let kinds = [Bornology::finite(nat.clone()), Bornology::all(nat.clone())];
    for i in 0..100 {
        let k = c.rng.gen_range(1..=3);
        let parts = (0..k).map(|_| random_atom(&mut c.rng, &u)).collect::<Result<Vec<_>>>()?;
        let s = DescribedSet::union_all(parts.iter());
        let text = s.format(&u);
        let p = sample(&s, &u);
        for f in &kinds {
            for g in &kinds {
                let (f_all, g_all) = (f == &kinds[1], g == &kinds[1]);
                let prod = (f_all || !p.proj1_infinite) && (g_all || !p.proj2_infinite);
                let hom = if f_all {
                    !p.fiber_infinite && (g_all || !p.proj2_infinite)
                } else {
                    g_all || !p.section_infinite
                };
                let r = Bornology::product(f, g).is_bounded(&s).map(|v| Cases::expect_eq(v, want(prod)));
                c.check(format!("set #{i} product({f}, {g}) on {text}"), r);
                let r = Bornology::hom(f, g).is_bounded(&s).map(|v| Cases::expect_eq(v, want(hom)));
                c.check(format!("set #{i} hom({f}, {g}) on {text}"), r);
            }
        }
    }

    let w = c.window as i64;
    let born = Bornology::all(nat.clone());
    for i in 0..30 {
        let (fa, ta, oa) = random_family(&mut c.rng, &born)?;
        let (fb, tb, ob) = random_family(&mut c.rng, &born)?;
        let r = (|| -> Result<Option<String>> {
            let sa = fa.sum(&unit_weights())?;
            let sb = fb.sum(&unit_weights())?;
            let lhs = sa.tensor(&sb);
            let fam = fa.tensor(&fb)?;
            let report = fam.check_summable(c.window);
            if !report.accepted() {
                return Ok(Some(format!("tensor family not accepted: {:?}", report.notes)));
            }
            let rhs = fam.sum_checked(&unit_weights(), c.window)?;
            for g in 0..w {
                for d in 0..w {
                    let m = Mono::ints(&[g, d]);
                    let by_hand = Scalar::int(translate_sum_at(&ta, &oa, g) * translate_sum_at(&tb, &ob, d));
                    let (l, r) = (lhs.coeff(&m)?, rhs.coeff(&m)?);
                    if l != by_hand || r != by_hand {
                        return Ok(Some(format!("at ({g}, {d}): (Σf)⊗(Σg) = {l}, Σ f⊗g = {r}, by hand {by_hand}")));
                    }
                }
            }
            Ok(None)
        })();
        c.check(format!("interchange #{i} {ta:?}@{} ⊗ {tb:?}@{}", oa.format(&nat), ob.format(&nat)), r);
    }
    Ok(())
}
