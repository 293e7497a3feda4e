//! Strongly linear maps `k(Γ; F) → k(Δ; G)`, stored by their dual family
//! `δ ↦ r_δ ∈ k(Γ; F⊥)`.

pub mod kernel;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::bornology::{battery, Bornology, DescribedSet, Domain, Universe, Verdict};
use crate::error::{Error, Result};
use crate::mono::Mono;
use crate::scalar::Scalar;
use crate::series::family::{Contrib, SummableFamily, Weights};
use crate::series::{pairing_declared, Series};

pub use kernel::Kernel;

/// Rows inspected when a map is built.
pub const VERIFY_ROWS: usize = 16;

#[derive(Clone)]
pub struct StrongLinearMap {
    source: Bornology,
    target: Bornology,
    kernel: Arc<dyn Kernel>,
    transposed: bool,
}

/// The one-point universe `{*}`.
pub fn point_universe() -> Universe {
    Universe::finite(&["*"])
}

/// Up to `n` elements of `u`, small ones first.
pub fn sample(u: &Universe, n: usize) -> Vec<Mono> {
    match u {
        Universe::Finite(names) => (0..names.len().min(n) as i64).map(Mono::int).collect(),
        Universe::Lattice { domain, arity, .. } => {
            let line: Vec<i64> = match domain {
                Domain::Nat => (0..n as i64).collect(),
                _ => (0..n as i64).map(|k| if k % 2 == 1 { (k + 1) / 2 } else { -(k / 2) }).collect(),
            };
            if *arity == 1 {
                return line.into_iter().map(Mono::int).collect();
            }
            let r = (n as f64).powf(1.0 / *arity as f64).ceil() as usize;
            let mut out = vec![vec![]];
            for _ in 0..*arity {
                out = out
                    .into_iter()
                    .flat_map(|p: Vec<i64>| line.iter().take(r.max(1)).map(move |c| [p.clone(), vec![*c]].concat()))
                    .collect();
            }
            let mut v: Vec<Mono> = out.iter().map(|p| Mono::ints(p)).collect();
            v.sort_by_key(|m| m.coords().iter().map(|c| c.numer().abs()).sum::<i64>());
            v.truncate(n);
            v
        }
        Universe::Product(a, b) => {
            let r = (n as f64).sqrt().ceil() as usize;
            let (xs, ys) = (sample(a, r), sample(b, r));
            xs.iter().flat_map(|x| ys.iter().map(move |y| x.concat(y))).take(n).collect()
        }
    }
}

impl StrongLinearMap {
    /// Builds and verifies a map from its kernel.
    pub fn new(source: Bornology, target: Bornology, kernel: Arc<dyn Kernel>) -> Result<StrongLinearMap> {
        let m = StrongLinearMap { source, target, kernel, transposed: false };
        m.verify(VERIFY_ROWS)?;
        Ok(m)
    }

    pub fn identity(born: &Bornology) -> StrongLinearMap {
        StrongLinearMap {
            source: born.clone(),
            target: born.clone(),
            kernel: Arc::new(kernel::Identity),
            transposed: false,
        }
    }

    /// `(Ff)(δ) = f(δ + by)` on one space.
    pub fn shift(born: &Bornology, by: Mono) -> Result<StrongLinearMap> {
        StrongLinearMap::new(born.clone(), born.clone(), Arc::new(kernel::Shift { by, universe: born.universe().clone() }))
    }

    /// A finite matrix on ℕ-indexed spaces, `rows[δ][γ]`.
    pub fn matrix(source: &Bornology, target: &Bornology, rows: &[Vec<Scalar>]) -> Result<StrongLinearMap> {
        let mut k = kernel::Matrix::dense(rows);
        k.source = source.universe().clone();
        k.target = target.universe().clone();
        StrongLinearMap::new(source.clone(), target.clone(), Arc::new(k))
    }

    /// A banded map on a line with seeded integer entries.
    pub fn banded(born: &Bornology, seed: u64, width: i64, range: i64) -> Result<StrongLinearMap> {
        StrongLinearMap::new(born.clone(), born.clone(), Arc::new(kernel::Banded { universe: born.universe().clone(), seed, width, range }))
    }

    /// `f ↦ ⟨f, g⟩` on `source`; `g` must be bounded in `source⊥`.
    pub fn series_to_functional(g: &Series, source: &Bornology) -> Result<StrongLinearMap> {
        let g = g.with_bornology(&source.perp())?;
        StrongLinearMap::new(
            source.clone(),
            Bornology::finite(point_universe()),
            Arc::new(kernel::Functional { g }),
        )
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &StrongLinearMap, inner: &StrongLinearMap) -> Result<StrongLinearMap> {
        if inner.target != outer.source {
            return Err(Error::BornologyMismatch(format!(
                "cannot compose: {} is not {}",
                inner.target, outer.source
            )));
        }
        StrongLinearMap::new(
            inner.source.clone(),
            outer.target.clone(),
            Arc::new(kernel::Composed { outer: outer.clone(), inner: inner.clone() }),
        )
    }

    /// The map `f ⊗ g ↦ a(f) ⊗ b(g)` on product spaces.
    pub fn tensor(a: &StrongLinearMap, b: &StrongLinearMap) -> Result<StrongLinearMap> {
        StrongLinearMap::new(
            Bornology::product(&a.source, &b.source),
            Bornology::product(&a.target, &b.target),
            Arc::new(kernel::Tensor { left: a.clone(), right: b.clone() }),
        )
    }

    pub fn source(&self) -> &Bornology {
        &self.source
    }

    pub fn target(&self) -> &Bornology {
        &self.target
    }

    pub fn is_transposed(&self) -> bool {
        self.transposed
    }

    pub fn describe(&self) -> String {
        if self.transposed {
            format!("dual({})", self.kernel.describe())
        } else {
            self.kernel.describe()
        }
    }

    /// `r_δ`, an element of `k(Γ; F⊥)`.
    pub fn row(&self, delta: &Mono) -> Result<Series> {
        self.target.universe().check(delta)?;
        let born = self.source.perp();
        if self.transposed {
            self.kernel.col(delta, &born)
        } else {
            self.kernel.row(delta, &born)
        }
    }

    /// The image of `δ_γ`, an element of the target.
    pub fn col(&self, gamma: &Mono) -> Result<Series> {
        self.source.universe().check(gamma)?;
        if self.transposed {
            self.kernel.row(gamma, &self.target)
        } else {
            self.kernel.col(gamma, &self.target)
        }
    }

    /// Contains every `δ` whose row meets `s`.
    pub fn image(&self, s: &DescribedSet) -> Result<DescribedSet> {
        if self.transposed {
            self.kernel.coimage(s)
        } else {
            self.kernel.image(s)
        }
    }

    /// Contains every `γ` whose column meets `t`.
    pub fn coimage(&self, t: &DescribedSet) -> Result<DescribedSet> {
        if self.transposed {
            self.kernel.image(t)
        } else {
            self.kernel.coimage(t)
        }
    }

    pub fn apply(&self, f: &Series) -> Result<Series> {
        let f = if f.bornology() == &self.source { f.clone() } else { f.with_bornology(&self.source)? };
        if let Some(t) = f.terms() {
            let terms = t
                .iter()
                .map(|(g, c)| Ok((c.clone(), self.col(g)?)))
                .collect::<Result<Vec<_>>>()?;
            return Series::linear_combination(&self.target, &terms);
        }
        let cert = self.image(&f.certificate())?;
        let me = self.clone();
        Series::lazy(self.target.clone(), cert, move |d| pairing_declared(&f, &me.row(d)?))
    }

    /// `k(Δ; G⊥) → k(Γ; F⊥)`, the same kernel read by columns.
    pub fn dual(&self) -> StrongLinearMap {
        StrongLinearMap {
            source: self.target.perp(),
            target: self.source.perp(),
            kernel: self.kernel.clone(),
            transposed: !self.transposed,
        }
    }

    /// The same kernel between `F⊥⊥` and `G⊥⊥`, re-verified.
    pub fn extend_biperp(&self) -> Result<StrongLinearMap> {
        let m = StrongLinearMap {
            source: self.source.perp().perp(),
            target: self.target.perp().perp(),
            kernel: self.kernel.clone(),
            transposed: self.transposed,
        };
        m.verify(VERIFY_ROWS)?;
        Ok(m)
    }

    /// Checks the image schema on the bounded battery sets and the rows on
    /// `n` sample points.
    pub fn verify(&self, n: usize) -> Result<()> {
        let (su, tu) = (self.source.universe(), self.target.universe());
        for s in battery(su) {
            if self.source.is_bounded(&s)? != Verdict::Bounded {
                continue;
            }
            let img = self.image(&s)?;
            if self.target.is_bounded(&img)? == Verdict::Unbounded {
                return Err(Error::Certificate(format!(
                    "image schema sends bounded {} to {}, unbounded in {}",
                    s.format(su),
                    img.format(tu),
                    self.target
                )));
            }
        }
        let dual_born = self.source.perp();
        for d in sample(tu, n) {
            let r = self.row(&d)?;
            if dual_born.is_bounded(&r.certificate())? == Verdict::Unbounded {
                return Err(Error::Certificate(format!(
                    "row at {} has support {} outside {}",
                    tu.format_elem(&d),
                    r.certificate().format(su),
                    dual_born
                )));
            }
            for (g, _) in r.snapshot(n)? {
                if !self.image(&DescribedSet::point(g.clone()))?.contains(tu, &d) {
                    return Err(Error::Certificate(format!(
                        "image schema misses {} for {}",
                        tu.format_elem(&d),
                        su.format_elem(&g)
                    )));
                }
            }
        }
        Ok(())
    }

    /// Do both maps have the same rows on `n` sample points?
    pub fn agrees_to_window(&self, other: &StrongLinearMap, n: usize) -> Result<bool> {
        for d in sample(self.target.universe(), n) {
            if !self.row(&d)?.agrees_to_window(&other.row(&d)?, n)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `(F f_i)_i`, with a schema read off the rows.
    pub fn image_family(&self, fam: &SummableFamily) -> Result<SummableFamily> {
        if fam.bornology() != &self.source {
            return Err(Error::BornologyMismatch(format!("family in {}, map from {}", fam.bornology(), self.source)));
        }
        let me = self.clone();
        let inner = fam.clone();
        let contributors = move |d: &Mono| -> Result<Contrib> {
            let r = me.row(d)?;
            let mut out = BTreeSet::new();
            for g in r.support_meeting(inner.union_certificate())? {
                if r.coeff(&g)?.is_zero() {
                    continue;
                }
                match inner.contributors(&g)? {
                    Contrib::Finite(v) => out.extend(v),
                    Contrib::Infinite => return Ok(Contrib::Infinite),
                }
            }
            Ok(Contrib::Finite(out.into_iter().collect()))
        };
        let me = self.clone();
        fam.map_members(
            self.target.clone(),
            Arc::new(move |f| me.apply(f)),
            Arc::new(contributors),
            self.image(fam.union_certificate())?,
        )
    }

    /// For a source family whose image is summable: is the source family
    /// summable too, with the expected sum on a window?
    pub fn reflects(&self, fam: &SummableFamily, w: &Weights, window: usize) -> Result<bool> {
        let img = self.image_family(fam)?;
        if !img.check_summable(window).accepted() {
            return Ok(true);
        }
        if !fam.check_summable(window).accepted() {
            return Ok(false);
        }
        self.apply(&fam.sum(w)?)?.agrees_to_window(&img.sum(w)?, window)
    }

    pub fn to_json(&self, window: usize) -> Result<Value> {
        let tu = self.target.universe();
        let rows = sample(tu, window)
            .iter()
            .map(|d| Ok(json!([tu.format_elem(d), self.row(d)?.to_json(window)?])))
            .collect::<Result<Vec<_>>>()?;
        Ok(json!({
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "rows": rows,
            "schema": self.describe(),
        }))
    }
}

impl fmt::Debug for StrongLinearMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.describe(), self.source, self.target)
    }
}

/// `g` with `ξ(f) = ⟨f, g⟩`, from `g(γ) = ξ(δ_γ)`.
pub fn functional_to_series(xi: &StrongLinearMap) -> Result<Series> {
    if xi.target().universe() != &point_universe() {
        return Err(Error::UniverseMismatch {
            expected: point_universe().to_string(),
            found: xi.target().universe().to_string(),
        });
    }
    let star = Mono::int(0);
    let born = xi.source().perp();
    let cert = xi.coimage(&DescribedSet::point(star.clone()))?;
    let su = xi.source().universe().clone();
    let at = {
        let xi = xi.clone();
        let star = star.clone();
        move |g: &Mono| -> Result<Scalar> { xi.apply(&Series::delta(xi.source().clone(), g.clone())?)?.coeff(&star) }
    };
    if let Some(pts) = crate::bornology::engine::finite_elements(&cert, &su) {
        let terms = pts.iter().map(|g| Ok((g.clone(), at(g)?))).collect::<Result<Vec<_>>>()?;
        return Series::finite(born, terms);
    }
    Series::lazy(born, cert, at)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nat(all: bool) -> Bornology {
        if all {
            Bornology::all(Universe::nat())
        } else {
            Bornology::finite(Universe::nat())
        }
    }

    fn naturals(b: &Bornology) -> Series {
        Series::lazy(b.clone(), DescribedSet::at_least(Mono::int(0)), |m| {
            Ok(Scalar::int(m.as_int().unwrap()))
        })
        .unwrap()
    }

    #[test]
    fn shift_and_identity() {
        let b = nat(true);
        let s = StrongLinearMap::shift(&b, Mono::int(1)).unwrap();
        let out = s.apply(&naturals(&b)).unwrap();
        for n in 0..20 {
            assert_eq!(out.coeff(&Mono::int(n)).unwrap(), Scalar::int(n + 1));
        }
        let id = StrongLinearMap::identity(&b);
        assert!(id.apply(&naturals(&b)).unwrap().agrees_to_window(&naturals(&b), 20).unwrap());
    }

    #[test]
    fn all_ones_functional() {
        let ones = |b: Bornology| Series::lazy(b, DescribedSet::at_least(Mono::int(0)), |_| Ok(Scalar::one())).unwrap();
        let b = nat(true);
        assert!(StrongLinearMap::series_to_functional(&ones(b.clone()), &b).is_err());
        let fin = nat(false);
        let xi = StrongLinearMap::series_to_functional(&ones(fin.perp()), &fin).unwrap();
        let f = Series::finite(fin.clone(), [(Mono::int(0), Scalar::one()), (Mono::int(5), Scalar::one())]).unwrap();
        assert_eq!(xi.apply(&f).unwrap().coeff(&Mono::int(0)).unwrap(), Scalar::int(2));
    }

    #[test]
    fn dual_of_shift_moves_up() {
        let b = nat(true);
        let d = StrongLinearMap::shift(&b, Mono::int(1)).unwrap().dual();
        assert_eq!(d.source(), &nat(false));
        let e3 = Series::delta(nat(false), Mono::int(3)).unwrap();
        let out = d.apply(&e3).unwrap();
        assert_eq!(out.terms().unwrap().keys().cloned().collect::<Vec<_>>(), vec![Mono::int(4)]);
        let dd = d.dual();
        assert_eq!(dd.source(), &b);
        assert!(dd.agrees_to_window(&StrongLinearMap::shift(&b, Mono::int(1)).unwrap(), 10).unwrap());
    }

    #[test]
    fn functional_round_trip() {
        let b = nat(true);
        let g = Series::finite(b.perp(), [(Mono::int(0), Scalar::one()), (Mono::int(3), Scalar::int(-2))]).unwrap();
        let xi = StrongLinearMap::series_to_functional(&g, &b).unwrap();
        let back = functional_to_series(&xi).unwrap();
        assert!(back.is_finite());
        assert!(back.agrees_to_window(&g, 10).unwrap());
        let zero = StrongLinearMap::series_to_functional(&Series::zero(b.perp()), &b).unwrap();
        assert!(functional_to_series(&zero).unwrap().terms().unwrap().is_empty());
    }

    #[test]
    fn compose_and_tensor() {
        let b = nat(true);
        let s = StrongLinearMap::shift(&b, Mono::int(1)).unwrap();
        let ss = StrongLinearMap::compose(&s, &s).unwrap();
        assert!(ss.agrees_to_window(&StrongLinearMap::shift(&b, Mono::int(2)).unwrap(), 12).unwrap());
        let id = StrongLinearMap::identity(&b);
        assert!(StrongLinearMap::compose(&s, &id).unwrap().agrees_to_window(&s, 12).unwrap());
        let t = StrongLinearMap::tensor(&s, &id).unwrap();
        let f = Series::finite(b.clone(), [(Mono::int(2), Scalar::int(3))]).unwrap();
        let g = Series::finite(b.clone(), [(Mono::int(1), Scalar::int(5))]).unwrap();
        let out = t.apply(&f.tensor(&g)).unwrap();
        let want = s.apply(&f).unwrap().tensor(&g);
        assert!(out.agrees_to_window(&want, 20).unwrap());
    }

    #[test]
    fn biperp_extension_of_shift() {
        let z = Universe::int();
        let s = StrongLinearMap::shift(&Bornology::wo_omega(z.clone()), Mono::int(-1)).unwrap();
        let e = s.extend_biperp().unwrap();
        assert_eq!(e.source(), &Bornology::wo(z.clone()));
        let geo = Series::lazy(Bornology::wo(z), DescribedSet::at_least(Mono::int(0)), |_| Ok(Scalar::one())).unwrap();
        let out = e.apply(&geo).unwrap();
        assert!(out.coeff(&Mono::int(0)).unwrap().is_zero());
        for n in 1..=20 {
            assert_eq!(out.coeff(&Mono::int(n)).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn unbounded_image_schema_is_refused() {
        // every row reads coordinate 0, so δ_0 spreads over all of ℕ
        struct Spread;
        impl Kernel for Spread {
            fn row(&self, _d: &Mono, born: &Bornology) -> Result<Series> {
                Series::delta(born.clone(), Mono::int(0))
            }
            fn col(&self, _g: &Mono, _born: &Bornology) -> Result<Series> {
                unreachable!()
            }
            fn image(&self, _s: &DescribedSet) -> Result<DescribedSet> {
                Ok(DescribedSet::at_least(Mono::int(0)))
            }
            fn coimage(&self, _t: &DescribedSet) -> Result<DescribedSet> {
                Ok(DescribedSet::point(Mono::int(0)))
            }
            fn describe(&self) -> String {
                "spread".into()
            }
        }
        assert!(StrongLinearMap::new(nat(false), nat(false), Arc::new(Spread)).is_err());
        assert!(StrongLinearMap::new(nat(false), nat(true), Arc::new(Spread)).is_ok());
    }
}
