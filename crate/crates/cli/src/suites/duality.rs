//! Adjointness of maps and their duals on `k^ℕ`, and the passage between
//! functionals and series, against explicit matrices.

use rand::Rng as _;
use sigma_core::bornology::{Bornology, DescribedSet, Universe};
use sigma_core::series::pairing;
use sigma_core::strmap::kernel::Banded;
use sigma_core::strmap::{functional_to_series, point_universe};
use sigma_core::{Mono, Result, Scalar, Series, StrongLinearMap};

use super::{Cases, Rng};

/// A map together with an explicit entry function `(δ, γ) ↦ K(δ, γ)` and
/// the `γ` range of row `δ`.
struct Dense {
    map: StrongLinearMap,
    entry: Box<dyn Fn(i64, i64) -> i64>,
    row_span: Box<dyn Fn(i64) -> std::ops::RangeInclusive<i64>>,
    label: String,
}

fn random_map(rng: &mut Rng, born: &Bornology) -> Result<Dense> {
    if rng.gen_bool(0.5) {
        let (seed, width, range) = (rng.gen::<u64>(), rng.gen_range(0..=3i64), rng.gen_range(1..=4i64));
        let map = StrongLinearMap::banded(born, seed, width, range)?;
        let k = Banded { universe: born.universe().clone(), seed, width, range };
        Ok(Dense {
            map,
            entry: Box::new(move |d, g| k.entry(d, g)),
            row_span: Box::new(move |d| (d - width).max(0)..=d + width),
            label: format!("banded(seed {seed}, width {width}, range {range})"),
        })
    } else {
        let (r, c) = (rng.gen_range(1..=8usize), rng.gen_range(1..=8usize));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-3..=3)).collect()).collect();
        let scalars: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| Scalar::int(x)).collect()).collect();
        let map = StrongLinearMap::matrix(born, born, &scalars)?;
        let label = format!("matrix {rows:?}");
        Ok(Dense {
            map,
            entry: Box::new(move |d, g| {
                rows.get(d as usize).and_then(|r| r.get(g as usize)).copied().unwrap_or(0)
            }),
            row_span: Box::new(move |_| 0..=c as i64 - 1),
            label,
        })
    }
}

/// `f(n) = ((a n² + b n + d) mod 7) − 3` on all of ℕ.
fn quadratic(born: &Bornology, a: i64, b: i64, d: i64) -> Result<Series> {
    Series::lazy(born.clone(), DescribedSet::at_least(Mono::int(0)), move |m: &Mono| {
        let n = m.as_int().unwrap_or(0);
        Ok(Scalar::int((a * n * n + b * n + d).rem_euclid(7) - 3))
    })
}

fn quadratic_at(a: i64, b: i64, d: i64, n: i64) -> i64 {
    (a * n * n + b * n + d).rem_euclid(7) - 3
}

pub fn duality(c: &mut Cases) -> Result<()> {
    let w = c.window;
    let all = Bornology::all(Universe::nat());
    let fin = Bornology::finite(Universe::nat());
    for i in 0..200 {
        let m = random_map(&mut c.rng, &all)?;
        let (a, b, d) = (c.rng.gen_range(0..7), c.rng.gen_range(0..7), c.rng.gen_range(0..7));
        let gk = c.rng.gen_range(1..=4);
        let g_terms: Vec<(i64, i64)> = (0..gk).map(|_| (c.rng.gen_range(0..w as i64), c.rng.gen_range(-4..=4))).collect();
        let r = (|| -> Result<Option<String>> {
            let f = quadratic(&all, a, b, d)?;
            let g = Series::finite(fin.clone(), g_terms.iter().map(|&(k, v)| (Mono::int(k), Scalar::int(v))))?;
            // explicit matrix: Σ_δ g(δ) Σ_γ K(δ, γ) f(γ)
            let mut g_dense = std::collections::BTreeMap::new();
            for &(k, v) in &g_terms {
                *g_dense.entry(k).or_insert(0i64) += v;
            }
            let oracle: i64 = g_dense
                .iter()
                .map(|(&dl, &gv)| gv * (m.row_span)(dl).map(|gm| (m.entry)(dl, gm) * quadratic_at(a, b, d, gm)).sum::<i64>())
                .sum();
            let ff = m.map.apply(&f)?;
            for dl in 0..w as i64 {
                let want: i64 = (m.row_span)(dl).map(|gm| (m.entry)(dl, gm) * quadratic_at(a, b, d, gm)).sum();
                if ff.coeff(&Mono::int(dl))? != Scalar::int(want) {
                    return Ok(Some(format!("(Ff)({dl}) = {}, matrix gives {want}", ff.coeff(&Mono::int(dl))?)));
                }
            }
            let lhs = pairing(&ff, &g)?;
            let rhs = pairing(&f, &m.map.dual().apply(&g)?)?;
            if lhs != Scalar::int(oracle) || rhs != Scalar::int(oracle) {
                return Ok(Some(format!("<Ff,g> = {lhs}, <f,F⊥g> = {rhs}, matrix gives {oracle}")));
            }
            if !m.map.dual().dual().agrees_to_window(&m.map, w)? {
                return Ok(Some("dual∘dual differs from the map".into()));
            }
            Ok(None)
        })();
        c.check(format!("adjoint #{i} {} f=({a},{b},{d}) g={g_terms:?}", m.label), r);
    }
    Ok(())
}

pub fn roundtrip(c: &mut Cases) -> Result<()> {
    let w = c.window;
    let sources = [
        (Bornology::all(Universe::nat()), 0i64),
        (Bornology::wo(Universe::int()), -8),
    ];
    let star = Mono::int(0);
    for i in 0..100 {
        let (src, lo) = &sources[i % 2];
        let k = c.rng.gen_range(0..=5);
        let terms: Vec<(i64, i64)> = (0..k).map(|_| (c.rng.gen_range(*lo..12), c.rng.gen_range(-5..=5))).collect();
        let probe: Vec<(i64, i64)> = (0..4).map(|_| (c.rng.gen_range(*lo..12), c.rng.gen_range(-5..=5))).collect();
        let r = (|| -> Result<Option<String>> {
            let dual = src.perp();
            let g = Series::finite(dual.clone(), terms.iter().map(|&(m, v)| (Mono::int(m), Scalar::int(v))))?;
            let xi = StrongLinearMap::series_to_functional(&g, src)?;
            if xi.target().universe() != &point_universe() {
                return Ok(Some(format!("functional lands in {}", xi.target().universe())));
            }
            // ξ(f) = Σ f(γ) g(γ), computed by hand
            let f = Series::finite(src.clone(), probe.iter().map(|&(m, v)| (Mono::int(m), Scalar::int(v))))?;
            let mut by_hand = Scalar::zero();
            for &(m, v) in &probe {
                by_hand = &by_hand + &(&Scalar::int(v) * &g.coeff(&Mono::int(m))?);
            }
            let got = xi.apply(&f)?.coeff(&star)?;
            if got != by_hand {
                return Ok(Some(format!("ξ(f) = {got}, by hand {by_hand}")));
            }
            let back = functional_to_series(&xi)?;
            let want = super::oracle::of(&g);
            if let Some(x) = super::oracle::agree(&back, &want, w)? {
                return Ok(Some(format!("series → functional → series: {x}")));
            }
            let again = StrongLinearMap::series_to_functional(&back, src)?;
            if !again.agrees_to_window(&xi, w)? {
                return Ok(Some("functional → series → functional differs".into()));
            }
            Ok(None)
        })();
        c.check(format!("roundtrip #{i} on {src} g={terms:?}"), r);
    }
    Ok(())
}
