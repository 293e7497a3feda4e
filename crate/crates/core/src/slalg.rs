//! Series algebras over bornological monoids, modules over them, and
//! derivations given by their values on monomials.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::bornology::{battery, enumerate, Bornology, DescribedSet, Universe, Verdict};
use crate::error::{Error, Result};
use crate::hahn::{self, HahnSeries};
use crate::mono::Mono;
use crate::scalar::Scalar;
use crate::series::family::{Contrib, Index, Weights};
use crate::series::{Series, SummableFamily};

/// Window used when verifying schemas and monomial identities.
pub const CHECK_WINDOW: usize = 16;

/// A monoid universe with a bornology closed under products.
#[derive(Clone, Debug, PartialEq)]
pub struct BornologicalMonoid {
    born: Bornology,
}

impl BornologicalMonoid {
    /// Checks `A·B` bounded for bounded battery sets `A`, `B`.
    pub fn new(born: Bornology) -> Result<BornologicalMonoid> {
        let u = born.universe();
        if !u.is_monoid() {
            return Err(Error::Unsupported(format!("{u} has no monoid law")));
        }
        let bounded: Vec<DescribedSet> = battery(u)
            .into_iter()
            .filter(|s| matches!(born.is_bounded(s), Ok(Verdict::Bounded)))
            .collect();
        for a in &bounded {
            for b in &bounded {
                let Some(ab) = a.minkowski(b) else { continue };
                if let Ok(Verdict::Unbounded) = born.is_bounded(&ab) {
                    return Err(Error::BornologyMismatch(format!(
                        "{} and {} are bounded in {born} but their product {} is not",
                        a.format(u),
                        b.format(u),
                        ab.format(u)
                    )));
                }
            }
        }
        Ok(BornologicalMonoid { born })
    }

    pub fn bornology(&self) -> &Bornology {
        &self.born
    }

    pub fn universe(&self) -> &Universe {
        self.born.universe()
    }
}

/// The algebra of bounded series over a bornological monoid.
#[derive(Clone, Debug, PartialEq)]
pub struct Algebra {
    monoid: BornologicalMonoid,
}

pub fn monoid_algebra(m: BornologicalMonoid) -> Algebra {
    Algebra { monoid: m }
}

impl Algebra {
    pub fn over(born: Bornology) -> Result<Algebra> {
        Ok(monoid_algebra(BornologicalMonoid::new(born)?))
    }

    pub fn monoid(&self) -> &BornologicalMonoid {
        &self.monoid
    }

    pub fn bornology(&self) -> &Bornology {
        self.monoid.bornology()
    }

    pub fn universe(&self) -> &Universe {
        self.monoid.universe()
    }

    pub fn one(&self) -> Result<HahnSeries> {
        HahnSeries::one(self.bornology().clone())
    }

    pub fn element(&self, f: &Series) -> Result<HahnSeries> {
        self.owns(f)?;
        HahnSeries::new(f.clone())
    }

    pub fn monomial(&self, m: Mono, c: Scalar) -> Result<HahnSeries> {
        HahnSeries::finite(self.bornology().clone(), [(m, c)])
    }

    pub fn mul(&self, f: &HahnSeries, g: &HahnSeries) -> Result<HahnSeries> {
        self.owns(f.series())?;
        self.owns(g.series())?;
        hahn::cauchy_product(f, g)
    }

    pub fn invert(&self, f: &HahnSeries) -> Result<HahnSeries> {
        self.owns(f.series())?;
        hahn::invert_unit(f)
    }

    fn owns(&self, f: &Series) -> Result<()> {
        if f.bornology() != self.bornology() {
            return Err(Error::BornologyMismatch(format!("{} is not {}", f.bornology(), self.bornology())));
        }
        Ok(())
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k[{}]", self.bornology())
    }
}

pub type Action = Arc<dyn Fn(&Mono) -> Result<Series> + Send + Sync>;
pub type Preimages = Arc<dyn Fn(&Mono) -> Vec<Mono> + Send + Sync>;
pub type ImageSchema = Arc<dyn Fn(&DescribedSet) -> DescribedSet + Send + Sync>;

/// `γ ↦ ∂γ` together with a schema: `preimages(δ)` lists every `γ` whose
/// value may be nonzero at `δ`, and `image(F)` covers `⋃_{γ∈F} supp ∂γ`.
#[derive(Clone)]
pub struct MonomialAction {
    pub name: String,
    pub action: Action,
    pub preimages: Preimages,
    pub image: ImageSchema,
}

impl fmt::Debug for MonomialAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MonomialAction({})", self.name)
    }
}

fn exponent(m: &Mono, var: usize) -> Scalar {
    let e = &m.coords()[var];
    Scalar::from_big(num_rational::BigRational::new((*e.numer()).into(), (*e.denom()).into()))
}

impl MonomialAction {
    /// `∂γ = c(γ)·(γ + step)`.
    pub fn shifting(
        name: &str,
        born: &Bornology,
        step: Mono,
        c: Arc<dyn Fn(&Mono) -> Scalar + Send + Sync>,
    ) -> MonomialAction {
        let (b, s, u) = (born.clone(), step.clone(), born.universe().clone());
        let c2 = c.clone();
        let u2 = u.clone();
        let s2 = step.clone();
        MonomialAction {
            name: name.into(),
            action: Arc::new(move |g| {
                let k = c(g);
                if k.is_zero() {
                    return Ok(Series::zero(b.clone()));
                }
                Series::monomial(b.clone(), g + &s, k)
            }),
            preimages: Arc::new(move |d| {
                let g = d - &s2;
                if u2.contains(&g) && !c2(&g).is_zero() {
                    vec![g]
                } else {
                    vec![]
                }
            }),
            image: Arc::new(move |f| f.translate(&step).restrict(&u)),
        }
    }

    /// `x_var·∂/∂x_var`: `x^q ↦ q_var·x^q`.
    pub fn euler(born: &Bornology, var: usize) -> MonomialAction {
        let arity = born.universe().arity();
        MonomialAction::shifting("euler", born, Mono::zero(arity), Arc::new(move |g| exponent(g, var)))
    }

    /// `∂/∂x_var`: `x^q ↦ q_var·x^{q − e_var}`.
    pub fn ddx(born: &Bornology, var: usize) -> MonomialAction {
        let arity = born.universe().arity();
        let mut step = vec![0i64; arity];
        step[var] = -1;
        MonomialAction::shifting("d/dx", born, Mono::ints(&step), Arc::new(move |g| exponent(g, var)))
    }

    pub fn zero(born: &Bornology) -> MonomialAction {
        let arity = born.universe().arity();
        MonomialAction::shifting("zero", born, Mono::zero(arity), Arc::new(|_| Scalar::zero()))
    }
}

/// A strongly linear derivation of an algebra, determined by its values
/// on monomials.
#[derive(Clone, Debug)]
pub struct Derivation {
    alg: Algebra,
    d: MonomialAction,
}

fn window_points(s: &DescribedSet, u: &Universe, n: usize) -> Vec<Mono> {
    enumerate::window(s, u, n).unwrap_or_default()
}

impl Derivation {
    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn name(&self) -> &str {
        &self.d.name
    }

    /// `∂γ`.
    pub fn on_monomial(&self, g: &Mono) -> Result<Series> {
        (self.d.action)(g)
    }

    /// `(∂γ)_{γ ∈ index}` with the schema of the action.
    pub fn image_family(&self, index: Index, cert: &DescribedSet) -> Result<SummableFamily> {
        let born = self.alg.bornology().clone();
        let u = born.universe().clone();
        let pre = self.d.preimages.clone();
        let idx = index.clone();
        let keep = move |g: &Mono| match &idx {
            Index::Finite(v) => v.contains(g),
            Index::Described(s) => s.contains(&u, g),
        };
        SummableFamily::new(
            born.clone(),
            born.universe().clone(),
            index,
            self.d.action.clone(),
            Arc::new(move |d| Ok(Contrib::Finite(pre(d).into_iter().filter(|g| keep(g)).collect()))),
            (self.d.image)(cert),
        )
    }

    /// `∂f = Σ_γ f(γ)·∂γ`.
    pub fn apply(&self, f: &Series) -> Result<Series> {
        self.alg.owns(f)?;
        let index = match f.terms() {
            Some(t) => Index::Finite(t.keys().cloned().collect()),
            None => Index::Described(f.certificate()),
        };
        let fam = self.image_family(index, &f.certificate())?;
        let f2 = f.clone();
        let w: Weights = Arc::new(move |g| f2.coeff(g).unwrap_or_else(|_| Scalar::zero()));
        fam.sum_checked(&w, CHECK_WINDOW)
    }

    /// `∂(fg) − f·∂g − g·∂f` restricted to the first `n` points of the
    /// product certificate; empty when Leibniz holds there.
    pub fn leibniz_defect(&self, f: &HahnSeries, g: &HahnSeries, n: usize) -> Result<Vec<Mono>> {
        let fg = self.alg.mul(f, g)?;
        let lhs = HahnSeries::new(self.apply(fg.series())?)?;
        let df = HahnSeries::new(self.apply(f.series())?)?;
        let dg = HahnSeries::new(self.apply(g.series())?)?;
        let rhs = self.alg.mul(f, &dg)?.add(&self.alg.mul(&df, g)?)?;
        let diff = lhs.sub(&rhs)?;
        let pts = diff.series().window(n)?;
        let mut bad = Vec::new();
        for p in pts {
            if !diff.coeff(&p)?.is_zero() {
                bad.push(p);
            }
        }
        Ok(bad)
    }
}

/// Checks the schema on the bounded battery sets and Leibniz on pairs of
/// monomials drawn from them.
pub fn extend_derivation(d: MonomialAction, alg: &Algebra) -> Result<Derivation> {
    let der = Derivation { alg: alg.clone(), d };
    let born = alg.bornology();
    let u = born.universe();
    let mut sample = BTreeSet::new();
    for s in battery(u) {
        if !matches!(born.is_bounded(&s), Ok(Verdict::Bounded)) {
            continue;
        }
        let fam = der.image_family(Index::Described(s.clone()), &s)?;
        let report = fam.check_summable(CHECK_WINDOW);
        if !report.accepted() {
            return Err(Error::Certificate(format!(
                "{} on {}: {}",
                der.d.name,
                s.format(u),
                report.notes.join("; ")
            )));
        }
        sample.extend(window_points(&s, u, 4));
    }
    let sample: Vec<Mono> = sample.into_iter().collect();
    for a in &sample {
        for b in &sample {
            let ab = a + b;
            if !u.contains(&ab) {
                continue;
            }
            let lhs = der.on_monomial(&ab)?;
            let rhs = der.on_monomial(b)?.shift(a)?.add(&der.on_monomial(a)?.shift(b)?)?;
            if !lhs.agrees_to_window(&rhs, CHECK_WINDOW)? {
                return Err(Error::Certificate(format!(
                    "{} breaks Leibniz at {} · {}",
                    der.d.name,
                    u.format_elem(a),
                    u.format_elem(b)
                )));
            }
        }
    }
    Ok(der)
}

pub fn apply_derivation(d: &Derivation, f: &Series) -> Result<Series> {
    d.apply(f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActionKind {
    /// `g·x = g + x` on a carrier of the same shape.
    Translation,
    Zero,
}

/// A strong module structure on a based space over a series algebra.
#[derive(Clone, Debug)]
pub struct ModuleAction {
    scalars: Algebra,
    carrier: Bornology,
    kind: ActionKind,
}

/// Checks `F·H` bounded in the carrier for bounded battery sets.
pub fn module_action(scalars: &Algebra, carrier: &Bornology, kind: ActionKind) -> Result<ModuleAction> {
    if kind == ActionKind::Translation {
        let (g, x) = (scalars.universe(), carrier.universe());
        if g.arity() != x.arity() || !x.is_monoid() {
            return Err(Error::UniverseMismatch { expected: g.to_string(), found: x.to_string() });
        }
        for f in battery(g) {
            if !matches!(scalars.bornology().is_bounded(&f), Ok(Verdict::Bounded)) {
                continue;
            }
            for h in battery(x) {
                if !matches!(carrier.is_bounded(&h), Ok(Verdict::Bounded)) {
                    continue;
                }
                let Some(fh) = f.minkowski(&h) else { continue };
                if let Ok(Verdict::Unbounded) = carrier.is_bounded(&fh.restrict(x)) {
                    return Err(Error::BornologyMismatch(format!(
                        "{} acting on {} leaves {carrier}",
                        f.format(g),
                        h.format(x)
                    )));
                }
            }
        }
    }
    Ok(ModuleAction { scalars: scalars.clone(), carrier: carrier.clone(), kind })
}

impl ModuleAction {
    pub fn carrier(&self) -> &Bornology {
        &self.carrier
    }

    pub fn scalars(&self) -> &Algebra {
        &self.scalars
    }

    /// `r·m`.
    pub fn act(&self, r: &HahnSeries, m: &Series) -> Result<Series> {
        self.scalars.owns(r.series())?;
        if m.bornology() != &self.carrier {
            return Err(Error::BornologyMismatch(format!("{} is not {}", m.bornology(), self.carrier)));
        }
        match self.kind {
            ActionKind::Zero => Ok(Series::zero(self.carrier.clone())),
            ActionKind::Translation => {
                let m = HahnSeries::new(m.clone())?;
                hahn::convolve(r, &m, &self.carrier)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bornology::Domain;
    use crate::hahn::invert_unit;

    fn wo_q() -> Bornology {
        Bornology::wo(Universe::monomials(&["x"], Domain::Rat))
    }

    fn poly(b: &Bornology, terms: &[(i64, i64, i64)]) -> Series {
        Series::finite(b.clone(), terms.iter().map(|&(n, d, c)| (Mono::rat(n, d), Scalar::int(c)))).unwrap()
    }

    #[test]
    fn algebras() {
        let z = Algebra::over(Bornology::wo(Universe::monomials(&["x"], Domain::Int))).unwrap();
        let x = z.monomial(Mono::int(1), Scalar::one()).unwrap();
        let xi = z.invert(&x).unwrap();
        let one = z.mul(&x, &xi).unwrap();
        assert_eq!(one.series().snapshot(8).unwrap(), vec![(Mono::int(0), Scalar::one())]);
        let n = Algebra::over(Bornology::all(Universe::nat())).unwrap();
        let f = n.element(&poly(n.bornology(), &[(0, 1, 1), (1, 1, -1)])).unwrap();
        let g = n.invert(&f).unwrap();
        for k in 0..10 {
            assert_eq!(g.coeff(&Mono::int(k)).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn product_closure_is_checked() {
        assert!(BornologicalMonoid::new(Bornology::finite(Universe::int())).is_ok());
        assert!(BornologicalMonoid::new(Bornology::finite(Universe::finite(&["a"]))).is_err());
    }

    #[test]
    fn euler_operator() {
        let b = wo_q();
        let alg = Algebra::over(b.clone()).unwrap();
        let d = extend_derivation(MonomialAction::euler(&b, 0), &alg).unwrap();
        let f = poly(&b, &[(3, 1, 1), (5, 1, 2), (1, 2, 4)]);
        let df = d.apply(&f).unwrap();
        assert_eq!(df.terms(), poly(&b, &[(3, 1, 3), (5, 1, 10), (1, 2, 2)]).terms());
        assert!(d.apply(&poly(&b, &[(0, 1, 1)])).unwrap().terms().unwrap().is_empty());
        let geo = invert_unit(&alg.element(&poly(&b, &[(0, 1, 1), (1, 1, -1)])).unwrap()).unwrap();
        let dg = d.apply(geo.series()).unwrap();
        for n in 0..20 {
            assert_eq!(dg.coeff(&Mono::int(n)).unwrap(), Scalar::int(n));
        }
        let one_minus_x = alg.element(&poly(&b, &[(0, 1, 1), (1, 1, -1)])).unwrap();
        assert!(d.leibniz_defect(&one_minus_x, &geo, 20).unwrap().is_empty());
    }

    #[test]
    fn zero_and_ddx() {
        let b = wo_q();
        let alg = Algebra::over(b.clone()).unwrap();
        let z = extend_derivation(MonomialAction::zero(&b), &alg).unwrap();
        assert!(z.apply(&poly(&b, &[(2, 1, 7)])).unwrap().terms().unwrap().is_empty());
        let d = extend_derivation(MonomialAction::ddx(&b, 0), &alg).unwrap();
        assert_eq!(d.apply(&poly(&b, &[(3, 1, 1), (0, 1, 5)])).unwrap().terms(), poly(&b, &[(2, 1, 3)]).terms());
    }

    #[test]
    fn non_derivations_are_refused() {
        let b = wo_q();
        let alg = Algebra::over(b.clone()).unwrap();
        let square = MonomialAction::shifting("square", &b, Mono::int(0), Arc::new(|g| {
            let e = exponent(g, 0);
            &e * &e
        }));
        assert!(extend_derivation(square, &alg).is_err());
    }

    #[test]
    fn translation_module() {
        let z = Universe::int();
        let alg = Algebra::over(Bornology::wo(z.clone())).unwrap();
        let carrier = Bornology::wo(z.clone());
        let m = module_action(&alg, &carrier, ActionKind::Translation).unwrap();
        let x = alg.monomial(Mono::int(1), Scalar::one()).unwrap();
        let ones = Series::lazy(carrier.clone(), DescribedSet::at_least(Mono::int(0)), |_| Ok(Scalar::one())).unwrap();
        let moved = m.act(&x, &ones).unwrap();
        assert!(moved.coeff(&Mono::int(0)).unwrap().is_zero());
        for n in 1..20 {
            assert_eq!(moved.coeff(&Mono::int(n)).unwrap(), Scalar::one());
        }
        let zero = module_action(&alg, &carrier, ActionKind::Zero).unwrap();
        assert!(zero.act(&x, &ones).unwrap().terms().unwrap().is_empty());
        let rev = Bornology::rev_wo(z);
        assert!(module_action(&alg, &rev, ActionKind::Translation).is_err());
    }
}
