//! Verdicts and perps on ℤ against a brute-force oracle. Every set in the
//! pool is eventually periodic with small period and has all of its
//! parameters inside `(-PROBE_LO, PROBE_LO)`, so it is unbounded below
//! exactly when it meets `[-PROBE_HI, -PROBE_LO]`, and likewise above.

use rand::Rng as _;
use sigma_core::bornology::{battery, Bornology, DescribedSet, Universe, Verdict};
use sigma_core::{Mono, Result};

use super::{Cases, Rng};

const PROBE_LO: i64 = 200;
const PROBE_HI: i64 = 400;

/// Membership of a set at the probe points, lower band then upper band.
#[derive(Clone)]
struct Probe {
    low: Vec<bool>,
    high: Vec<bool>,
}

impl Probe {
    fn of(s: &DescribedSet, u: &Universe) -> Probe {
        let band = |r: std::ops::RangeInclusive<i64>| r.map(|k| s.contains(u, &Mono::int(k))).collect();
        Probe { low: band(-PROBE_HI..=-PROBE_LO), high: band(PROBE_LO..=PROBE_HI) }
    }

    fn below(&self) -> bool {
        !self.low.contains(&true)
    }

    fn above(&self) -> bool {
        !self.high.contains(&true)
    }

    fn finite(&self) -> bool {
        self.below() && self.above()
    }

    fn meet(&self, o: &Probe) -> Probe {
        let and = |a: &[bool], b: &[bool]| a.iter().zip(b).map(|(x, y)| *x && *y).collect();
        Probe { low: and(&self.low, &o.low), high: and(&self.high, &o.high) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Finite,
    All,
    Wo,
    RevWo,
    WoOmega,
}

const KINDS: [Kind; 5] = [Kind::Finite, Kind::All, Kind::Wo, Kind::RevWo, Kind::WoOmega];

fn build(k: Kind, u: &Universe) -> Bornology {
    match k {
        Kind::Finite => Bornology::finite(u.clone()),
        Kind::All => Bornology::all(u.clone()),
        Kind::Wo => Bornology::wo(u.clone()),
        Kind::RevWo => Bornology::rev_wo(u.clone()),
        Kind::WoOmega => Bornology::wo_omega(u.clone()),
    }
}

/// Order-theoretic definitions on ℤ: a subset of ℤ is well ordered (and
/// then of order type at most ω) iff it is bounded below.
fn expected(k: Kind, p: &Probe) -> bool {
    match k {
        Kind::Finite => p.finite(),
        Kind::All => true,
        Kind::Wo | Kind::WoOmega => p.below(),
        Kind::RevWo => p.above(),
    }
}

/// `S ∈ F⊥` iff `S ∩ T` is finite for every `F`-bounded `T` of the pool.
fn perp_of(bounded: &[bool], pool: &[Probe]) -> Vec<bool> {
    pool.iter()
        .map(|s| pool.iter().zip(bounded).all(|(t, &b)| !b || s.meet(t).finite()))
        .collect()
}

fn random_atom(rng: &mut Rng) -> String {
    let n = |rng: &mut Rng| rng.gen_range(-40..=40i64);
    let step = |rng: &mut Rng| {
        let s = rng.gen_range(1..=5i64);
        if rng.gen_bool(0.5) {
            s
        } else {
            -s
        }
    };
    match rng.gen_range(0..7) {
        0 => {
            let k = rng.gen_range(0..5);
            let pts: Vec<String> = (0..k).map(|_| n(rng).to_string()).collect();
            format!("{{{}}}", pts.join(", "))
        }
        1 => format!("prog({}; {})", n(rng), step(rng)),
        2 => format!("grid({}; {}, {})", n(rng), rng.gen_range(1..=6i64), rng.gen_range(1..=6i64)),
        3 => format!("[{}, inf)", n(rng)),
        4 => format!("(-inf, {}]", n(rng)),
        5 => {
            let a = n(rng);
            format!("[{a}, {}]", a + rng.gen_range(0..20))
        }
        _ => format!("diff(prog({}; {}); prog({}; {}))", n(rng), step(rng), n(rng), step(rng)),
    }
}

fn random_set(rng: &mut Rng) -> String {
    let k = rng.gen_range(1..=3);
    (0..k).map(|_| random_atom(rng)).collect::<Vec<_>>().join(" | ")
}

fn decide(b: &Bornology, s: &DescribedSet) -> Result<Verdict> {
    b.is_bounded(s)
}

fn want(v: bool) -> Verdict {
    if v {
        Verdict::Bounded
    } else {
        Verdict::Unbounded
    }
}

pub fn galois(c: &mut Cases) -> Result<()> {
    let u = Universe::int();
    let mut pool: Vec<(String, DescribedSet)> = battery(&u).into_iter().map(|s| (s.format(&u), s)).collect();
    for _ in 0..60 {
        let text = random_set(&mut c.rng);
        let s = DescribedSet::parse(&text, &u)?;
        pool.push((text, s));
    }
    let probes: Vec<Probe> = pool.iter().map(|(_, s)| Probe::of(s, &u)).collect();

    for k in KINDS {
        let b = build(k, &u);
        let direct: Vec<bool> = probes.iter().map(|p| expected(k, p)).collect();
        let perp = perp_of(&direct, &probes);
        let biperp = perp_of(&perp, &probes);
        let (bp, bpp) = (b.perp(), b.perp().perp());
        c.check(format!("{b}: perp∘perp∘perp = perp"), Ok(Cases::expect_eq(bpp.perp(), bp.clone())));
        for (i, (text, s)) in pool.iter().enumerate() {
            for (label, born, truth) in [("", &b, direct[i]), ("⊥", &bp, perp[i]), ("⊥⊥", &bpp, biperp[i])] {
                let r = decide(born, s).map(|v| {
                    Cases::expect_eq(v, want(truth)).map(|w| format!("{w} (bornology {born})"))
                });
                c.check(format!("{b}{label} on {text}"), r);
            }
        }
    }

    // the worked example: order type ω on ℤ
    let wo_omega = Bornology::wo_omega(u.clone());
    let neg = DescribedSet::parse("prog(0; -1)", &u)?;
    let nat = DescribedSet::parse("prog(0; 1)", &u)?;
    c.check("wo_omega⊥ bounds -N", decide(&wo_omega.perp(), &neg).map(|v| Cases::expect_eq(v, Verdict::Bounded)));
    c.check("wo_omega⊥ does not bound N", decide(&wo_omega.perp(), &nat).map(|v| Cases::expect_eq(v, Verdict::Unbounded)));
    let wo = Bornology::wo(u.clone());
    for s in battery(&u) {
        let r = (|| -> Result<Option<String>> {
            Ok(Cases::expect_eq(decide(&wo_omega.perp().perp(), &s)?, decide(&wo, &s)?))
        })();
        c.check(format!("wo_omega⊥⊥ agrees with wo on {}", s.format(&u)), r);
    }
    c.check("finite⊥ = all", Ok(Cases::expect_eq(Bornology::finite(u.clone()).perp(), Bornology::all(u.clone()))));
    Ok(())
}
