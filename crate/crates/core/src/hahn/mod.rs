//! Series over ordered monoids with grid-certified supports: Cauchy
//! products, leading terms, Neumann sums and inversion.

pub mod grid;

use std::fmt;
use std::sync::{Arc, Mutex};

use crate::bornology::{enumerate, Bornology, DescribedSet};
use crate::error::{Error, Result};
use crate::mono::Mono;
use crate::scalar::Scalar;
use crate::series::family::{Contrib, Index, SummableFamily, Weights};
use crate::series::{Series, DEFAULT_WINDOW};

pub use grid::GridCertificate;

/// Steps allowed when looking for a positive cover during inversion.
pub const POSITIVE_BUDGET: usize = 4096;

/// Elements scanned by `truncate` before giving up.
const TRUNCATE_SCAN: usize = 1 << 16;

/// Index window used to spot-check the family of powers.
const POWERS_CHECK: usize = 8;

pub type PowerCoeffs = Arc<dyn Fn(u64) -> Scalar + Send + Sync>;

#[derive(Clone)]
pub struct HahnSeries {
    series: Series,
    grid: GridCertificate,
}

impl HahnSeries {
    pub fn new(series: Series) -> Result<HahnSeries> {
        let u = series.universe();
        if !u.is_monoid() {
            return Err(Error::Unsupported(format!("{u} has no monoid law")));
        }
        let grid = GridCertificate::covering(&series.certificate(), u)?;
        Ok(HahnSeries { series, grid })
    }

    /// Uses `grid` as the certificate. `grid` must cover the support.
    pub fn with_grid(series: Series, grid: GridCertificate) -> Result<HahnSeries> {
        if !series.universe().is_monoid() {
            return Err(Error::Unsupported(format!("{} has no monoid law", series.universe())));
        }
        Ok(HahnSeries { series, grid })
    }

    pub fn finite<I: IntoIterator<Item = (Mono, Scalar)>>(born: Bornology, terms: I) -> Result<HahnSeries> {
        HahnSeries::new(Series::finite(born, terms)?)
    }

    pub fn one(born: Bornology) -> Result<HahnSeries> {
        let unit = born
            .universe()
            .unit()
            .ok_or_else(|| Error::Unsupported(format!("{} has no monoid law", born.universe())))?;
        HahnSeries::new(Series::delta(born, unit)?)
    }

    pub fn series(&self) -> &Series {
        &self.series
    }

    pub fn into_series(self) -> Series {
        self.series
    }

    pub fn grid(&self) -> &GridCertificate {
        &self.grid
    }

    pub fn bornology(&self) -> &Bornology {
        self.series.bornology()
    }

    pub fn coeff(&self, m: &Mono) -> Result<Scalar> {
        self.series.coeff(m)
    }

    pub fn is_finite(&self) -> bool {
        self.series.is_finite()
    }

    pub fn add(&self, other: &HahnSeries) -> Result<HahnSeries> {
        Ok(HahnSeries { series: self.series.add(&other.series)?, grid: self.grid.union(&other.grid) })
    }

    pub fn sub(&self, other: &HahnSeries) -> Result<HahnSeries> {
        Ok(HahnSeries { series: self.series.sub(&other.series)?, grid: self.grid.union(&other.grid) })
    }

    pub fn scale(&self, c: &Scalar) -> HahnSeries {
        HahnSeries { series: self.series.scale(c), grid: self.grid.clone() }
    }

    pub fn neg(&self) -> HahnSeries {
        self.scale(&-Scalar::one())
    }

    /// Multiplication by the monomial `t`.
    pub fn shift(&self, t: &Mono) -> Result<HahnSeries> {
        Ok(HahnSeries { series: self.series.shift(t)?, grid: self.grid.translate(t) })
    }

    pub fn mul(&self, other: &HahnSeries) -> Result<HahnSeries> {
        cauchy_product(self, other)
    }

    pub fn pow(&self, n: u64) -> Result<HahnSeries> {
        let mut acc = HahnSeries::one(self.bornology().clone())?;
        for _ in 0..n {
            acc = cauchy_product(&acc, self)?;
        }
        Ok(acc)
    }

    /// Candidates for the support, in increasing order.
    fn ascending(&self) -> Result<enumerate::Stream> {
        let u = self.series.universe();
        enumerate::ascending(&self.series.certificate(), u)
            .or_else(|| enumerate::ascending(&self.grid.to_set(), u))
            .ok_or_else(|| Error::Unsupported("support cannot be enumerated in increasing order".into()))
    }

    /// The least support element and its coefficient, looking at the first
    /// `window` candidates. `None` only for a finite zero.
    pub fn leading_term_within(&self, window: usize) -> Result<Option<(Mono, Scalar)>> {
        if let Some(t) = self.series.terms() {
            return Ok(t.iter().next().map(|(m, c)| (m.clone(), c.clone())));
        }
        for m in self.ascending()?.take(window) {
            let c = self.series.coeff(&m)?;
            if !c.is_zero() {
                return Ok(Some((m, c)));
            }
        }
        Err(Error::ZeroToWindow(window))
    }

    pub fn leading_term(&self) -> Result<Option<(Mono, Scalar)>> {
        self.leading_term_within(DEFAULT_WINDOW)
    }

    /// The finite series of terms at monomials `≤ bound`.
    pub fn truncate(&self, bound: &Mono) -> Result<Series> {
        let born = self.bornology().clone();
        if let Some(t) = self.series.terms() {
            return Series::finite(born, t.range(..=bound.clone()).map(|(m, c)| (m.clone(), c.clone())));
        }
        let mut terms = Vec::new();
        let mut scanned = 0;
        for m in self.ascending()? {
            if &m > bound {
                return Series::finite(born, terms);
            }
            scanned += 1;
            if scanned > TRUNCATE_SCAN {
                break;
            }
            let c = self.series.coeff(&m)?;
            if !c.is_zero() {
                terms.push((m, c));
            }
        }
        if scanned <= TRUNCATE_SCAN {
            return Series::finite(born, terms);
        }
        Err(Error::Unsupported(format!(
            "more than {TRUNCATE_SCAN} support candidates below {}",
            self.series.universe().format_elem(bound)
        )))
    }

    pub fn display(&self, n: usize) -> Result<String> {
        self.series.display(n)
    }
}

impl fmt::Debug for HahnSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HahnSeries({:?})", self.series)
    }
}

/// `γ ↦ Σ_{α + β = γ} f(α) g(β)`, read in `target`.
pub fn convolve(f: &HahnSeries, g: &HahnSeries, target: &Bornology) -> Result<Series> {
    let u = target.universe().clone();
    if !u.is_monoid() {
        return Err(Error::Unsupported(format!("{u} has no monoid law")));
    }
    for s in [f, g] {
        if s.series.universe().arity() != u.arity() {
            return Err(Error::UniverseMismatch { expected: u.to_string(), found: s.series.universe().to_string() });
        }
    }
    if let (Some(a), Some(b)) = (f.series.terms(), g.series.terms()) {
        let terms = a.iter().flat_map(|(x, c)| b.iter().map(move |(y, d)| (x + y, c * d)));
        return Series::finite(target.clone(), terms.collect::<Vec<_>>());
    }
    let grid = f.grid.product(&g.grid);
    let (f, g) = (f.clone(), g.clone());
    let u2 = u.clone();
    let oracle = move |m: &Mono| -> Result<Scalar> {
        let mut acc = Scalar::zero();
        let mut term = |alpha: &Mono, a: Scalar| -> Result<()> {
            let beta = m - alpha;
            if u2.contains(&beta) && g.grid.contains(&beta) {
                let b = g.series.coeff(&beta)?;
                if !b.is_zero() {
                    acc = &acc + &(&a * &b);
                }
            }
            Ok(())
        };
        if let Some(t) = f.series.terms() {
            for (alpha, a) in t {
                term(alpha, a.clone())?;
            }
        } else if let Some(t) = g.series.terms() {
            for (beta, b) in t {
                let alpha = m - beta;
                if u2.contains(&alpha) {
                    let a = f.series.coeff(&alpha)?;
                    if !a.is_zero() {
                        acc = &acc + &(&a * b);
                    }
                }
            }
        } else {
            for alpha in f.grid.splits(&g.grid, m)? {
                if !u2.contains(&alpha) {
                    continue;
                }
                let a = f.series.coeff(&alpha)?;
                if !a.is_zero() {
                    term(&alpha, a)?;
                }
            }
        }
        Ok(acc)
    };
    Series::lazy(target.clone(), grid.to_set(), oracle)
}

pub fn cauchy_product(f: &HahnSeries, g: &HahnSeries) -> Result<HahnSeries> {
    if f.bornology() != g.bornology() {
        return Err(Error::BornologyMismatch(format!("{} and {}", f.bornology(), g.bornology())));
    }
    let series = convolve(f, g, f.bornology())?;
    let grid = if series.is_finite() {
        GridCertificate::covering(&series.certificate(), series.universe())?
    } else {
        f.grid.product(&g.grid)
    };
    Ok(HahnSeries { series, grid })
}

fn positive_certificate(eps: &HahnSeries) -> Result<()> {
    if eps.grid.is_positive() {
        Ok(())
    } else {
        Err(Error::Certificate(format!(
            "support certificate {} does not lie above the unit",
            eps.grid.to_set().format(eps.series.universe())
        )))
    }
}

/// `(εⁿ)_{n ∈ ℕ}` with its summability schema.
pub fn powers(eps: &HahnSeries) -> Result<SummableFamily> {
    positive_certificate(eps)?;
    let born = eps.bornology().clone();
    let u = born.universe().clone();
    let cover = GridCertificate::new(
        u.unit(),
        eps.grid.bases().iter().chain(eps.grid.gens()).cloned(),
    )?;
    let cache = Arc::new(Mutex::new(vec![HahnSeries::one(born.clone())?, eps.clone()]));
    let e = eps.clone();
    let member = move |i: &Mono| -> Result<Series> {
        let n = i.as_int().ok_or_else(|| Error::Parse(format!("power index {i}")))? as usize;
        let mut c = cache.lock().expect("power cache poisoned");
        while c.len() <= n {
            let next = cauchy_product(c.last().expect("nonempty"), &e)?;
            c.push(next);
        }
        Ok(c[n].series.clone())
    };
    let g = eps.grid.clone();
    let contributors = move |m: &Mono| -> Result<Contrib> {
        Ok(Contrib::Finite(match g.max_base_count(m)? {
            Some(n) => (0..=n as i64).map(Mono::int).collect(),
            None => vec![],
        }))
    };
    SummableFamily::new(
        born,
        crate::bornology::Universe::nat(),
        Index::Described(DescribedSet::at_least(Mono::int(0))),
        Arc::new(member),
        Arc::new(contributors),
        cover.to_set(),
    )
}

/// `Σ_n c(n)·εⁿ`.
pub fn neumann_sum(eps: &HahnSeries, coeffs: PowerCoeffs) -> Result<HahnSeries> {
    let fam = powers(eps)?;
    let cover = GridCertificate::covering(fam.union_certificate(), eps.series.universe())?;
    let w: Weights = Arc::new(move |i: &Mono| coeffs(i.as_int().expect("natural index") as u64));
    let series = fam.sum_checked(&w, POWERS_CHECK)?;
    Ok(HahnSeries { series, grid: cover })
}

pub fn geometric(eps: &HahnSeries) -> Result<HahnSeries> {
    neumann_sum(eps, Arc::new(|_| Scalar::one()))
}

/// `g` with `f·g = 1`, from `f = c·γ₀·(1 − ε)` and a Neumann sum in `ε`.
pub fn invert_unit(f: &HahnSeries) -> Result<HahnSeries> {
    let u = f.series.universe().clone();
    let (g0, c) = f.leading_term()?.ok_or_else(|| Error::NotInvertible("zero series".into()))?;
    if !g0.is_zero() && !u.is_group() {
        return Err(Error::NotInvertible(format!(
            "leading monomial {} has no inverse in {u}",
            u.format_elem(&g0)
        )));
    }
    let c_inv = c.inv().ok_or_else(|| Error::NotInvertible("leading coefficient".into()))?;
    let back = -&g0;
    let h = f.shift(&back)?.scale(&c_inv);
    let born = f.bornology().clone();
    let eps = match h.series.terms() {
        Some(t) => HahnSeries::finite(
            born,
            t.iter().filter(|(m, _)| !m.is_zero()).map(|(m, x)| (m.clone(), -x)),
        )?,
        None => {
            let cover = h.grid.positive_part(POSITIVE_BUDGET)?;
            let hs = h.series.clone();
            let s = Series::lazy(born, cover.to_set(), move |m| Ok(-hs.coeff(m)?))?;
            HahnSeries { series: s, grid: cover }
        }
    };
    Ok(geometric(&eps)?.shift(&back)?.scale(&c_inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bornology::{Domain, Universe};
    use crate::mono::Q;

    fn wo() -> Bornology {
        Bornology::wo(Universe::monomials(&["x"], Domain::Rat))
    }

    fn poly(terms: &[(Q, i64)]) -> HahnSeries {
        HahnSeries::finite(wo(), terms.iter().map(|(e, c)| (Mono::new([*e]), Scalar::int(*c)))).unwrap()
    }

    fn x(n: i64, d: i64) -> Mono {
        Mono::rat(n, d)
    }

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    fn ones_from(k: i64) -> HahnSeries {
        let s = Series::lazy(wo(), DescribedSet::progression(Mono::int(k), Mono::int(1)), |_| Ok(Scalar::one()));
        HahnSeries::new(s.unwrap()).unwrap()
    }

    #[test]
    fn finite_products() {
        let p = poly(&[(q(0), 1), (q(1), 1)]).mul(&poly(&[(q(0), 1), (q(1), -1)])).unwrap();
        assert_eq!(p.series().terms().unwrap().len(), 2);
        assert_eq!(p.coeff(&x(2, 1)).unwrap(), Scalar::int(-1));
        let h = Q::new(1, 2);
        let p = poly(&[(h, 1), (q(1), 1)]).mul(&poly(&[(h, 1)])).unwrap();
        assert_eq!(p.coeff(&x(1, 1)).unwrap(), Scalar::one());
        assert_eq!(p.coeff(&x(3, 2)).unwrap(), Scalar::one());
    }

    #[test]
    fn geometric_times_one_minus_x() {
        let p = ones_from(0).mul(&poly(&[(q(0), 1), (q(1), -1)])).unwrap();
        // truncated convolution of (1,1,1,…) with (1,-1)
        let a = [1i64; 31];
        let b = [1i64, -1];
        for n in 0..=30usize {
            let mut c = 0;
            for i in 0..=n {
                if n - i < b.len() {
                    c += a[i] * b[n - i];
                }
            }
            assert_eq!(p.coeff(&Mono::int(n as i64)).unwrap(), Scalar::int(c));
        }
    }

    #[test]
    fn leading_terms() {
        let f = poly(&[(q(2), 3), (q(5), 1)]);
        assert_eq!(f.leading_term().unwrap(), Some((x(2, 1), Scalar::int(3))));
        assert_eq!(poly(&[]).leading_term().unwrap(), None);
        assert_eq!(ones_from(4).leading_term().unwrap(), Some((x(4, 1), Scalar::one())));
        let zero = HahnSeries::new(Series::lazy(wo(), DescribedSet::grid(Mono::int(0), vec![Mono::int(1)]), |_| Ok(Scalar::zero())).unwrap()).unwrap();
        assert_eq!(zero.leading_term_within(10).unwrap_err(), Error::ZeroToWindow(10));
    }

    #[test]
    fn neumann_in_half_steps() {
        let g = geometric(&poly(&[(Q::new(1, 2), 1)])).unwrap();
        for n in 0..=20 {
            assert_eq!(g.coeff(&x(n, 2)).unwrap(), Scalar::one());
        }
        assert!(g.coeff(&x(1, 3)).unwrap().is_zero());
    }

    #[test]
    fn neumann_with_factorials() {
        let fact = |n: u64| (1..=n as i64).product::<i64>();
        let s = neumann_sum(&poly(&[(q(1), 1), (q(2), 1)]), Arc::new(move |n| Scalar::int(fact(n)))).unwrap();
        // expand Σ_{n ≤ 3} n!(x + x²)ⁿ as dense polynomials to degree 3
        let mut want = [0i64; 4];
        let mut p = vec![1i64, 0, 0, 0];
        for n in 0..=3u64 {
            for (k, c) in p.iter().enumerate() {
                want[k] += fact(n) * c;
            }
            let mut next = vec![0i64; 4];
            for k in 0..4 {
                for (d, e) in [(1, 1), (2, 1)] {
                    if k + d < 4 {
                        next[k + d] += p[k] * e;
                    }
                }
            }
            p = next;
        }
        for (k, w) in want.iter().take(4).enumerate() {
            assert_eq!(s.coeff(&Mono::int(k as i64)).unwrap(), Scalar::int(*w));
        }
    }

    #[test]
    fn neumann_needs_positive_support() {
        assert!(matches!(geometric(&poly(&[(q(0), 1)])), Err(Error::Certificate(_))));
        assert!(geometric(&poly(&[(q(-1), 1)])).is_err());
    }

    #[test]
    fn inversions() {
        let g = invert_unit(&poly(&[(q(0), 1), (q(1), -1)])).unwrap();
        for n in 0..20 {
            assert_eq!(g.coeff(&Mono::int(n)).unwrap(), Scalar::one());
        }
        let g = invert_unit(&poly(&[(q(2), 1)])).unwrap();
        assert_eq!(g.truncate(&Mono::int(10)).unwrap().terms().unwrap().len(), 1);
        assert_eq!(g.coeff(&Mono::int(-2)).unwrap(), Scalar::one());
        let f = poly(&[(q(1), 2), (Q::new(3, 2), 2)]);
        let g = invert_unit(&f).unwrap();
        assert_eq!(g.leading_term().unwrap(), Some((x(-1, 1), Scalar::ratio(1, 2))));
        let p = f.mul(&g).unwrap();
        for m in p.series().window(15).unwrap() {
            let want = if m.is_zero() { Scalar::one() } else { Scalar::zero() };
            assert_eq!(p.coeff(&m).unwrap(), want, "at {m}");
        }
    }

    #[test]
    fn inversion_needs_a_group() {
        let b = Bornology::all(Universe::nat());
        let f = HahnSeries::finite(b.clone(), [(Mono::int(1), Scalar::one())]).unwrap();
        assert!(matches!(invert_unit(&f), Err(Error::NotInvertible(_))));
        let f = HahnSeries::finite(b, [(Mono::int(0), Scalar::one()), (Mono::int(1), -Scalar::one())]).unwrap();
        assert_eq!(invert_unit(&f).unwrap().coeff(&Mono::int(7)).unwrap(), Scalar::one());
    }

    #[test]
    fn fibonacci_truncation() {
        let g = invert_unit(&poly(&[(q(0), 1), (q(1), -1), (q(2), -1)])).unwrap();
        let t = g.truncate(&Mono::int(5)).unwrap();
        let (mut a, mut b) = (1i64, 1i64);
        for n in 0..=5 {
            assert_eq!(t.coeff(&Mono::int(n)).unwrap(), Scalar::int(a));
            (a, b) = (b, a + b);
        }
        assert_eq!(t.terms().unwrap().len(), 6);
        let again = HahnSeries::new(t.clone()).unwrap().truncate(&Mono::int(5)).unwrap();
        assert!(again.agrees_to_window(&t, 10).unwrap());
        assert!(HahnSeries::new(Series::zero(wo())).unwrap().truncate(&Mono::int(3)).unwrap().terms().unwrap().is_empty());
    }

    #[test]
    fn lazy_inversion_walks_past_zero_bases() {
        // 1 - Σ_{n≥1} xⁿ with a certificate starting at x^-2
        let u = wo().universe().clone();
        let cert = DescribedSet::parse("grid(x^-2; x)", &u).unwrap();
        let f = Series::lazy(wo(), cert, |m| {
            let e = m.coords()[0];
            Ok(if e < Q::from_integer(0) {
                Scalar::zero()
            } else if e == Q::from_integer(0) {
                Scalar::one()
            } else {
                -Scalar::one()
            })
        })
        .unwrap();
        let f = HahnSeries::new(f).unwrap();
        let g = invert_unit(&f).unwrap();
        let p = f.mul(&g).unwrap();
        for n in -2..12 {
            let want = if n == 0 { Scalar::one() } else { Scalar::zero() };
            assert_eq!(p.coeff(&Mono::int(n)).unwrap(), want);
        }
    }
}
