//! Elements of `k(Γ; F)`: functions with bounded support, finite or lazy.

pub mod family;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use crate::bornology::engine::{self, SetExpr};
use crate::bornology::enumerate;
use crate::bornology::{Atom, Bornology, DescribedSet, Universe, Verdict};
use crate::error::{Error, Result};
use crate::mono::Mono;
use crate::scalar::{Field, Scalar};

pub use family::{Contrib, Index, SummabilityReport, SummableFamily, Summability};

pub const DEFAULT_WINDOW: usize = 32;

/// Upper limit on elements scanned while intersecting certificates.
const SCAN_LIMIT: usize = 1 << 16;

pub type Oracle = Arc<dyn Fn(&Mono) -> Result<Scalar> + Send + Sync>;

#[derive(Clone)]
pub struct Series {
    born: Bornology,
    repr: Repr,
}

#[derive(Clone)]
enum Repr {
    Finite(Arc<BTreeMap<Mono, Scalar>>),
    Lazy(Arc<Lazy>),
}

struct Lazy {
    cert: DescribedSet,
    oracle: Oracle,
    memo: Mutex<HashMap<Mono, Scalar>>,
}

impl Series {
    pub fn zero(born: Bornology) -> Series {
        Series { born, repr: Repr::Finite(Arc::new(BTreeMap::new())) }
    }

    /// Sums repeated monomials and drops zero coefficients.
    pub fn finite<I>(born: Bornology, terms: I) -> Result<Series>
    where
        I: IntoIterator<Item = (Mono, Scalar)>,
    {
        let mut map: BTreeMap<Mono, Scalar> = BTreeMap::new();
        for (m, c) in terms {
            born.universe().check(&m)?;
            let e = map.entry(m).or_insert_with(Scalar::zero);
            *e = &*e + &c;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Series { born, repr: Repr::Finite(Arc::new(map)) })
    }

    pub fn monomial(born: Bornology, m: Mono, c: Scalar) -> Result<Series> {
        Series::finite(born, [(m, c)])
    }

    /// The characteristic function of a point.
    pub fn delta(born: Bornology, m: Mono) -> Result<Series> {
        Series::monomial(born, m, Scalar::one())
    }

    /// A lazily evaluated series. The certificate must be bounded.
    pub fn lazy<F>(born: Bornology, cert: DescribedSet, oracle: F) -> Result<Series>
    where
        F: Fn(&Mono) -> Result<Scalar> + Send + Sync + 'static,
    {
        match born.is_bounded(&cert)? {
            Verdict::Bounded => Ok(Series::lazy_trusted(born, cert, Arc::new(oracle))),
            Verdict::Unbounded => Err(Error::Certificate(format!(
                "support certificate {} is not bounded in {born}",
                cert.format(born.universe())
            ))),
            Verdict::Undecided => Err(Error::Undecided(format!(
                "boundedness of {} in {born}",
                cert.format(born.universe())
            ))),
        }
    }

    /// Skips the boundedness check; callers guarantee it.
    pub(crate) fn lazy_trusted(born: Bornology, cert: DescribedSet, oracle: Oracle) -> Series {
        Series {
            born,
            repr: Repr::Lazy(Arc::new(Lazy { cert, oracle, memo: Mutex::new(HashMap::new()) })),
        }
    }

    pub fn bornology(&self) -> &Bornology {
        &self.born
    }

    pub fn universe(&self) -> &Universe {
        self.born.universe()
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.repr, Repr::Finite(_))
    }

    /// The terms of a finite series.
    pub fn terms(&self) -> Option<&BTreeMap<Mono, Scalar>> {
        match &self.repr {
            Repr::Finite(m) => Some(m),
            Repr::Lazy(_) => None,
        }
    }

    /// A described superset of the support.
    pub fn certificate(&self) -> DescribedSet {
        match &self.repr {
            Repr::Finite(m) => DescribedSet::finite(m.keys().cloned()),
            Repr::Lazy(l) => l.cert.clone(),
        }
    }

    pub fn coeff(&self, m: &Mono) -> Result<Scalar> {
        match &self.repr {
            Repr::Finite(map) => Ok(map.get(m).cloned().unwrap_or_else(Scalar::zero)),
            Repr::Lazy(l) => {
                if !l.cert.contains(self.born.universe(), m) {
                    return Ok(Scalar::zero());
                }
                if let Some(c) = l.memo.lock().expect("memo poisoned").get(m) {
                    return Ok(c.clone());
                }
                let c = (l.oracle)(m)?;
                l.memo.lock().expect("memo poisoned").insert(m.clone(), c.clone());
                Ok(c)
            }
        }
    }

    /// The first `n` certificate elements, increasing when the certificate
    /// can be enumerated that way.
    pub fn window(&self, n: usize) -> Result<Vec<Mono>> {
        match &self.repr {
            Repr::Finite(map) => Ok(map.keys().take(n).cloned().collect()),
            Repr::Lazy(l) => enumerate::window(&l.cert, self.universe(), n).ok_or_else(|| {
                Error::Unsupported(format!(
                    "certificate {} cannot be enumerated",
                    l.cert.format(self.universe())
                ))
            }),
        }
    }

    /// Nonzero terms on the window of size `n`.
    pub fn snapshot(&self, n: usize) -> Result<Vec<(Mono, Scalar)>> {
        let mut out = Vec::new();
        for m in self.window(n)? {
            let c = self.coeff(&m)?;
            if !c.is_zero() {
                out.push((m, c));
            }
        }
        Ok(out)
    }

    /// The same function viewed in another bornology on the same universe.
    pub fn with_bornology(&self, born: &Bornology) -> Result<Series> {
        if born.universe() != self.universe() {
            return Err(Error::UniverseMismatch {
                expected: born.universe().to_string(),
                found: self.universe().to_string(),
            });
        }
        if *born == self.born {
            return Ok(self.clone());
        }
        let cert = self.certificate();
        match born.is_bounded(&cert)? {
            Verdict::Bounded => Ok(Series { born: born.clone(), repr: self.repr.clone() }),
            v => Err(Error::BornologyMismatch(format!(
                "support certificate {} is {v} in {born}",
                cert.format(self.universe())
            ))),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Series {
        Series::linear_combination(&self.born, &[(c.clone(), self.clone())]).expect("same space")
    }

    pub fn neg(&self) -> Series {
        self.scale(&-Scalar::one())
    }

    pub fn add(&self, other: &Series) -> Result<Series> {
        Series::linear_combination(&self.born, &[(Scalar::one(), self.clone()), (Scalar::one(), other.clone())])
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        Series::linear_combination(&self.born, &[(Scalar::one(), self.clone()), (-Scalar::one(), other.clone())])
    }

    /// `Σ c_i f_i`. Finite inputs stay finite.
    pub fn linear_combination(born: &Bornology, terms: &[(Scalar, Series)]) -> Result<Series> {
        for (_, f) in terms {
            if f.bornology() != born {
                if f.universe() != born.universe() {
                    return Err(Error::UniverseMismatch {
                        expected: born.universe().to_string(),
                        found: f.universe().to_string(),
                    });
                }
                return Err(Error::BornologyMismatch(format!("expected {born}, found {}", f.bornology())));
            }
        }
        if terms.iter().all(|(_, f)| f.is_finite()) {
            let all = terms.iter().flat_map(|(c, f)| {
                f.terms().expect("finite").iter().map(move |(m, x)| (m.clone(), c * x))
            });
            return Series::finite(born.clone(), all);
        }
        let terms: Vec<(Scalar, Series)> = terms.iter().filter(|(c, _)| !c.is_zero()).cloned().collect();
        let cert = DescribedSet::union_all(terms.iter().map(|(_, f)| f.certificate()).collect::<Vec<_>>().iter());
        // a finite union of bounded sets is bounded
        Ok(Series::lazy_trusted(
            born.clone(),
            cert,
            Arc::new(move |m| {
                let mut acc = Scalar::zero();
                for (c, f) in &terms {
                    acc = &acc + &(c * &f.coeff(m)?);
                }
                Ok(acc)
            }),
        ))
    }

    /// `γ ↦ f(γ − t)`, i.e. multiplication by the monomial `t`.
    pub fn shift(&self, t: &Mono) -> Result<Series> {
        let u = self.universe().clone();
        match &self.repr {
            Repr::Finite(map) => Series::finite(self.born.clone(), map.iter().map(|(m, c)| (m + t, c.clone()))),
            Repr::Lazy(_) => {
                let f = self.clone();
                let neg = -t;
                let t = t.clone();
                let cert = self.certificate().translate(&t);
                Series::lazy(self.born.clone(), cert, move |m| {
                    let src = m + &neg;
                    if u.contains(&src) {
                        f.coeff(&src)
                    } else {
                        Ok(Scalar::zero())
                    }
                })
            }
        }
    }

    /// `(γ, δ) ↦ f(γ)·g(δ)` on the product space.
    pub fn tensor(&self, other: &Series) -> Series {
        let born = Bornology::product(&self.born, &other.born);
        let k = self.universe().arity();
        if let (Some(a), Some(b)) = (self.terms(), other.terms()) {
            let terms = a
                .iter()
                .flat_map(|(x, c)| b.iter().map(move |(y, d)| (x.concat(y), c * d)))
                .collect::<Vec<_>>();
            return Series::finite(born, terms).expect("pairs lie in the product");
        }
        let cert = DescribedSet::rect(self.certificate(), other.certificate());
        let (f, g) = (self.clone(), other.clone());
        Series::lazy_trusted(
            born,
            cert,
            Arc::new(move |m| {
                let (x, y) = m.split(k);
                let a = f.coeff(&x)?;
                if a.is_zero() {
                    return Ok(a);
                }
                Ok(&a * &g.coeff(&y)?)
            }),
        )
    }

    /// Is `self` equal to `other` at every listed point?
    pub fn agrees_on<'a, I: IntoIterator<Item = &'a Mono>>(&self, other: &Series, points: I) -> Result<bool> {
        for m in points {
            if self.coeff(m)? != other.coeff(m)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality on the union of both windows of size `n`.
    pub fn agrees_to_window(&self, other: &Series, n: usize) -> Result<bool> {
        let mut pts = self.window(n)?;
        pts.extend(other.window(n)?);
        self.agrees_on(other, pts.iter())
    }

    /// Certificate points inside `s`, when there are finitely many and
    /// they can be listed.
    pub fn support_meeting(&self, s: &DescribedSet) -> Result<Vec<Mono>> {
        let u = self.universe();
        match &self.repr {
            Repr::Finite(map) => Ok(map.keys().filter(|m| s.contains(u, m)).cloned().collect()),
            Repr::Lazy(l) => intersection_points(&l.cert, s, u),
        }
    }

    pub fn to_json(&self, window: usize) -> Result<Value> {
        let u = self.universe();
        let terms: Vec<Value> = self
            .snapshot(if self.is_finite() { usize::MAX } else { window })?
            .iter()
            .map(|(m, c)| json!([u.format_elem(m), c.to_string()]))
            .collect();
        let field = terms_field(self, window);
        let mut rec = self.born.to_json();
        rec["kind"] = json!(if self.is_finite() { "finite" } else { "lazy" });
        rec["field"] = json!(field.to_string());
        rec["terms"] = Value::Array(terms);
        rec["certificate"] = json!(self.certificate().format(u));
        if !self.is_finite() {
            rec["window"] = json!(window);
        }
        Ok(rec)
    }

    /// Reads a finite series record. Lazy records only carry a snapshot
    /// and are refused.
    pub fn from_json(v: &Value) -> Result<Series> {
        let born = Bornology::from_json(v)?;
        let bad = || Error::Parse(format!("bad series record {v}"));
        if v.get("kind").and_then(Value::as_str) != Some("finite") {
            return Err(Error::Unsupported("only finite series records can be read back".into()));
        }
        let field: Field = v.get("field").and_then(Value::as_str).unwrap_or("rational").parse()?;
        let mut terms = Vec::new();
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(bad)? {
            let pair = t.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let m = born.universe().parse_elem(pair[0].as_str().ok_or_else(bad)?)?;
            let c = field.parse_scalar(pair[1].as_str().ok_or_else(bad)?)?;
            terms.push((m, c));
        }
        Series::finite(born, terms)
    }

    /// Human-readable rendering of the window of size `n`.
    pub fn display(&self, n: usize) -> Result<String> {
        let u = self.universe();
        let terms = self.snapshot(n)?;
        let mut out = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = if neg { -c.clone() } else { c.clone() };
            let body = format_term(u, m, &mag);
            match (i, neg) {
                (0, true) => out.push_str(&format!("-{body}")),
                (0, false) => out.push_str(&body),
                (_, true) => out.push_str(&format!(" - {body}")),
                (_, false) => out.push_str(&format!(" + {body}")),
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        if !self.is_finite() {
            let w = self.window(n)?;
            if let Some(last) = w.last() {
                out.push_str(&format!(" + O(>{})", u.format_elem(last)));
            }
        }
        Ok(out)
    }
}

fn terms_field(f: &Series, window: usize) -> Field {
    f.snapshot(window)
        .ok()
        .and_then(|t| t.first().map(|(_, c)| c.field()))
        .unwrap_or(Field::Rational)
}

fn format_term(u: &Universe, m: &Mono, c: &Scalar) -> String {
    let coef = |c: &Scalar| {
        let s = c.to_string();
        if s.contains('/') {
            format!("({s})")
        } else {
            s
        }
    };
    match u {
        Universe::Lattice { names: Some(_), .. } => {
            if m.is_zero() {
                c.to_string()
            } else if c.is_one() {
                u.format_elem(m)
            } else {
                format!("{}{}", coef(c), u.format_elem(m))
            }
        }
        _ => {
            let e = format!("[{}]", u.format_elem(m));
            if c.is_one() {
                e
            } else {
                format!("{}{e}", coef(c))
            }
        }
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.display(8) {
            Ok(s) => write!(f, "Series({s} in {})", self.born),
            Err(e) => write!(f, "Series(<{e}> in {})", self.born),
        }
    }
}

/// `Σ_γ f(γ) g(γ)` for `f` in `k(Γ;F)` and `g` in `k(Γ;F⊥)`.
pub fn pairing(f: &Series, g: &Series) -> Result<Scalar> {
    if f.universe() != g.universe() {
        return Err(Error::UniverseMismatch { expected: f.universe().to_string(), found: g.universe().to_string() });
    }
    let fp = f.bornology().perp();
    let gp = g.bornology().perp();
    if &fp != g.bornology() && &gp != f.bornology() && !f.is_finite() && !g.is_finite() {
        return Err(Error::BornologyMismatch(format!(
            "pairing needs dual bornologies, found {} and {}",
            f.bornology(),
            g.bornology()
        )));
    }
    pairing_declared(f, g)
}

/// Pairing without the bornology check; the caller vouches for the
/// finiteness of the support intersection.
pub fn pairing_declared(f: &Series, g: &Series) -> Result<Scalar> {
    let sum_over = |pts: &mut dyn Iterator<Item = &Mono>| -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for m in pts {
            let a = f.coeff(m)?;
            if !a.is_zero() {
                acc = &acc + &(&a * &g.coeff(m)?);
            }
        }
        Ok(acc)
    };
    if let Some(t) = f.terms() {
        return sum_over(&mut t.keys());
    }
    if let Some(t) = g.terms() {
        return sum_over(&mut t.keys());
    }
    let pts = intersection_points(&f.certificate(), &g.certificate(), f.universe())?;
    sum_over(&mut pts.iter())
}

/// Elements of `a ∩ b`, listed when the intersection is certifiably finite.
pub fn intersection_points(a: &DescribedSet, b: &DescribedSet, u: &Universe) -> Result<Vec<Mono>> {
    let only_points = |s: &DescribedSet| s.atoms().iter().all(|x| matches!(x, Atom::Finite(_)));
    if only_points(a) || only_points(b) {
        let (pts, other) = if only_points(a) { (a, b) } else { (b, a) };
        let mut v: Vec<Mono> = Vec::new();
        pts.for_each_number(&mut |m| {
            if u.contains(m) && other.contains(u, m) {
                v.push(m.clone());
            }
        });
        v.sort();
        v.dedup();
        return Ok(v);
    }
    let e = SetExpr::inter(SetExpr::of(a), SetExpr::of(b));
    if u.line_domain().is_some() {
        if let Some(p) = engine::line_profile(&e, u) {
            if !p.finite() {
                return Err(Error::Undecided("certificates meet in an infinite set".into()));
            }
            if let Some(v) = engine::line_elements(&e, u, &p) {
                return Ok(v);
            }
        }
    }
    // walk one certificate upwards until it passes the top of the other
    for (lo, hi) in [(a, b), (b, a)] {
        let (Some(up), Some(mut down)) = (enumerate::ascending(lo, u), enumerate::descending(hi, u)) else {
            continue;
        };
        let Some(top) = down.next() else { return Ok(vec![]) };
        let mut out = Vec::new();
        let mut exhausted = true;
        for (i, m) in up.enumerate() {
            if m > top {
                return Ok(out);
            }
            if i >= SCAN_LIMIT {
                exhausted = false;
                break;
            }
            if hi.contains(u, &m) {
                out.push(m);
            }
        }
        if exhausted {
            return Ok(out);
        }
    }
    Err(Error::Undecided(format!(
        "cannot list {} ∩ {}",
        a.format(u),
        b.format(u)
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bornology::Domain;

    fn mono_space() -> Bornology {
        Bornology::wo(Universe::monomials(&["x"], Domain::Rat))
    }

    fn x(n: i64) -> Mono {
        Mono::int(n)
    }

    #[test]
    fn linear_combinations() {
        let b = mono_space();
        let e0 = Series::delta(b.clone(), x(0)).unwrap();
        let e1 = Series::delta(b.clone(), x(1)).unwrap();
        let s = Series::linear_combination(
            &b,
            &[(Scalar::int(2), e0.add(&e1).unwrap()), (Scalar::int(3), e1.clone())],
        )
        .unwrap();
        assert_eq!(s.terms().unwrap().len(), 2);
        assert_eq!(s.coeff(&x(1)).unwrap(), Scalar::int(5));
        assert!(e1.sub(&e1).unwrap().terms().unwrap().is_empty());
    }

    #[test]
    fn lazy_difference_of_geometric_series() {
        let b = mono_space();
        let u = b.universe().clone();
        let all = Series::lazy(b.clone(), DescribedSet::parse("grid(1; x)", &u).unwrap(), |_| Ok(Scalar::one())).unwrap();
        let even = Series::lazy(b.clone(), DescribedSet::parse("grid(1; x^2)", &u).unwrap(), |_| Ok(Scalar::one()))
            .unwrap();
        let odd = all.sub(&even).unwrap();
        for n in 0..20 {
            let want = if n % 2 == 1 { Scalar::one() } else { Scalar::zero() };
            assert_eq!(odd.coeff(&x(n)).unwrap(), want);
        }
    }

    #[test]
    fn unbounded_certificate_is_refused() {
        let b = mono_space();
        let cert = DescribedSet::parse("prog(1; x^-1)", b.universe()).unwrap();
        assert!(matches!(Series::lazy(b, cert, |_| Ok(Scalar::one())), Err(Error::Certificate(_))));
    }

    #[test]
    fn pairing_examples() {
        let n = Universe::nat();
        let fin = Bornology::finite(n.clone());
        let all = Bornology::all(n.clone());
        let f = Series::finite(fin, [(x(0), Scalar::one()), (x(3), Scalar::int(-2))]).unwrap();
        let ones = Series::lazy(all, DescribedSet::parse("prog(0; 1)", &n).unwrap(), |_| Ok(Scalar::one())).unwrap();
        assert_eq!(pairing(&f, &ones).unwrap(), Scalar::int(-1));

        let z = Universe::int();
        let up = Series::lazy(Bornology::wo_omega(z.clone()), DescribedSet::parse("prog(0; 1)", &z).unwrap(), |_| {
            Ok(Scalar::one())
        })
        .unwrap();
        let down = Series::lazy(Bornology::rev_wo(z.clone()), DescribedSet::parse("prog(0; -1)", &z).unwrap(), |_| {
            Ok(Scalar::one())
        })
        .unwrap();
        assert_eq!(pairing(&up, &down).unwrap(), Scalar::one());
        assert!(pairing(&up, &up).is_err());
    }

    #[test]
    fn multi_dimensional_intersections_walk_the_certificates() {
        let u = Universe::lattice(Domain::Int, 2);
        let a = DescribedSet::parse("grid((0, 0); (1, 0), (1, 1))", &u).unwrap();
        let b = DescribedSet::parse("prog((2, 5); (0, -1))", &u).unwrap();
        let pts = intersection_points(&a, &b, &u).unwrap();
        assert_eq!(pts, vec![Mono::ints(&[2, 0]), Mono::ints(&[2, 1]), Mono::ints(&[2, 2])]);
        // infinitely many points of the first set lie below the second
        let c = DescribedSet::parse("grid((0, 0); (0, 1), (1, 0))", &u).unwrap();
        assert!(matches!(intersection_points(&c, &b, &u), Err(Error::Undecided(_))));
    }

    #[test]
    fn json_roundtrip_of_finite_series() {
        let b = mono_space();
        let f = Series::finite(b, [(Mono::rat(1, 2), Scalar::ratio(-3, 4)), (x(2), Scalar::one())]).unwrap();
        let v = f.to_json(8).unwrap();
        let g = Series::from_json(&v).unwrap();
        assert_eq!(g.terms(), f.terms());
        assert_eq!(f.display(8).unwrap(), "-(3/4)x^(1/2) + x^2");
    }
}
