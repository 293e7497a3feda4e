//! Summable families with pointwise-finiteness schemas.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::bornology::{enumerate, Bornology, DescribedSet, Universe, Verdict};
use crate::error::{Error, Result};
use crate::mono::Mono;
use crate::scalar::Scalar;
use crate::series::{Series, DEFAULT_WINDOW};

/// Index set of a family.
#[derive(Clone, Debug, PartialEq)]
pub enum Index {
    Finite(Vec<Mono>),
    Described(DescribedSet),
}

/// Indices whose member may be nonzero at a given point.
#[derive(Clone, Debug, PartialEq)]
pub enum Contrib {
    Finite(Vec<Mono>),
    /// Infinitely many members are nonzero there.
    Infinite,
}

pub type MemberFn = Arc<dyn Fn(&Mono) -> Result<Series> + Send + Sync>;
pub type ContribFn = Arc<dyn Fn(&Mono) -> Result<Contrib> + Send + Sync>;
pub type Weights = Arc<dyn Fn(&Mono) -> Scalar + Send + Sync>;
/// `n ↦ (s(n), t(n))` for regrouping.
pub type SplitFn = Arc<dyn Fn(&Mono) -> (Mono, Mono) + Send + Sync>;
pub type FiberFn = Arc<dyn Fn(&Mono) -> Vec<Mono> + Send + Sync>;
pub type KernelFn = Arc<dyn Fn(&Mono, &Mono) -> Scalar + Send + Sync>;
pub type SeriesMap = Arc<dyn Fn(&Series) -> Result<Series> + Send + Sync>;

#[derive(Clone)]
pub struct SummableFamily {
    born: Bornology,
    index_universe: Universe,
    index: Index,
    member: MemberFn,
    contributors: ContribFn,
    union_cert: DescribedSet,
    memo: Arc<Mutex<HashMap<Mono, Series>>>,
}

impl fmt::Debug for SummableFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SummableFamily")
            .field("bornology", &self.born.to_string())
            .field("index", &self.index)
            .field("union_cert", &self.union_cert.format(self.born.universe()))
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summability {
    Accepted,
    Rejected,
    Undecided,
}

#[derive(Clone, Debug)]
pub struct SummabilityReport {
    pub verdict: Summability,
    pub notes: Vec<String>,
}

impl SummabilityReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Summability::Accepted
    }
}

impl fmt::Display for Summability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Summability::Accepted => "accepted",
            Summability::Rejected => "rejected",
            Summability::Undecided => "undecided",
        })
    }
}

pub fn weights<F: Fn(&Mono) -> Scalar + Send + Sync + 'static>(f: F) -> Weights {
    Arc::new(f)
}

pub fn unit_weights() -> Weights {
    Arc::new(|_| Scalar::one())
}

impl SummableFamily {
    pub fn new(
        born: Bornology,
        index_universe: Universe,
        index: Index,
        member: MemberFn,
        contributors: ContribFn,
        union_cert: DescribedSet,
    ) -> Result<SummableFamily> {
        union_cert.validate(born.universe())?;
        match &index {
            Index::Finite(v) => v.iter().try_for_each(|i| index_universe.check(i))?,
            Index::Described(s) => s.validate(&index_universe)?,
        }
        Ok(SummableFamily {
            born,
            index_universe,
            index,
            member,
            contributors,
            union_cert,
            memo: Arc::new(Mutex::new(HashMap::new())),
        })
    }

    /// `(f_0, …, f_{n-1})` indexed by `0..n`.
    pub fn finite(born: Bornology, members: Vec<Series>) -> Result<SummableFamily> {
        for f in &members {
            if f.bornology() != &born {
                return Err(Error::BornologyMismatch(format!("member in {} not {born}", f.bornology())));
            }
        }
        let certs: Vec<DescribedSet> = members.iter().map(Series::certificate).collect();
        let union = DescribedSet::union_all(certs.iter());
        let u = born.universe().clone();
        let members = Arc::new(members);
        let m2 = members.clone();
        SummableFamily::new(
            born,
            Universe::nat(),
            Index::Finite((0..members.len() as i64).map(Mono::int).collect()),
            Arc::new(move |i| {
                let k = i.as_int().filter(|k| (0..m2.len() as i64).contains(k));
                k.map(|k| m2[k as usize].clone()).ok_or_else(|| Error::Parse(format!("no member {i}")))
            }),
            Arc::new(move |g| {
                Ok(Contrib::Finite(
                    certs
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| c.contains(&u, g))
                        .map(|(i, _)| Mono::int(i as i64))
                        .collect(),
                ))
            }),
            union,
        )
    }

    /// `(δ_γ)_{γ ∈ s}`.
    pub fn monomials(born: Bornology, s: DescribedSet) -> Result<SummableFamily> {
        let u = born.universe().clone();
        let (b2, s2) = (born.clone(), s.clone());
        SummableFamily::new(
            born,
            u.clone(),
            Index::Described(s.clone()),
            Arc::new(move |g| Series::delta(b2.clone(), g.clone())),
            Arc::new(move |g| Ok(Contrib::Finite(if s2.contains(&u, g) { vec![g.clone()] } else { vec![] }))),
            s,
        )
    }

    /// Translates `t·template` for `t` in `offsets`, indexed by the offsets.
    pub fn translates(template: &Series, offsets: DescribedSet) -> Result<SummableFamily> {
        let terms = template
            .terms()
            .ok_or_else(|| Error::Unsupported("translate families need a finite template".into()))?
            .clone();
        let born = template.bornology().clone();
        let u = born.universe().clone();
        offsets.validate(&u)?;
        let union = DescribedSet::union_all(terms.keys().map(|s| offsets.translate(s)).collect::<Vec<_>>().iter());
        let t2 = template.clone();
        let (u2, off2) = (u.clone(), offsets.clone());
        let keys: Vec<Mono> = terms.keys().cloned().collect();
        SummableFamily::new(
            born,
            u,
            Index::Described(offsets),
            Arc::new(move |t| t2.shift(t)),
            Arc::new(move |g| {
                let mut v: Vec<Mono> = keys.iter().map(|s| g - s).filter(|t| off2.contains(&u2, t)).collect();
                v.sort();
                v.dedup();
                Ok(Contrib::Finite(v))
            }),
            union,
        )
    }

    /// `(f)_{i ∈ ℕ}`: the same member over and over.
    pub fn constant(f: &Series) -> Result<SummableFamily> {
        let (f2, f3) = (f.clone(), f.clone());
        SummableFamily::new(
            f.bornology().clone(),
            Universe::nat(),
            Index::Described(DescribedSet::at_least(Mono::int(0))),
            Arc::new(move |_| Ok(f2.clone())),
            Arc::new(move |g| Ok(if f3.coeff(g)?.is_zero() { Contrib::Finite(vec![]) } else { Contrib::Infinite })),
            f.certificate(),
        )
    }

    /// `f = Σ_γ f(γ)·δ_γ` as a family with weights. Lazy series are
    /// expanded over their certificate, with zero weights off the support.
    pub fn expansion(f: &Series) -> Result<(SummableFamily, Weights)> {
        let born = f.bornology().clone();
        let fam = match f.terms() {
            Some(t) => {
                let keys: Vec<Mono> = t.keys().cloned().collect();
                let set: BTreeSet<Mono> = keys.iter().cloned().collect();
                let b2 = born.clone();
                SummableFamily::new(
                    born.clone(),
                    born.universe().clone(),
                    Index::Finite(keys),
                    Arc::new(move |g| Series::delta(b2.clone(), g.clone())),
                    Arc::new(move |g| Ok(Contrib::Finite(if set.contains(g) { vec![g.clone()] } else { vec![] }))),
                    f.certificate(),
                )?
            }
            None => SummableFamily::monomials(born, f.certificate())?,
        };
        let f2 = f.clone();
        Ok((fam, Arc::new(move |g| f2.coeff(g).unwrap_or_else(|_| Scalar::zero()))))
    }

    pub fn bornology(&self) -> &Bornology {
        &self.born
    }

    pub fn index_universe(&self) -> &Universe {
        &self.index_universe
    }

    pub fn index(&self) -> &Index {
        &self.index
    }

    pub fn union_certificate(&self) -> &DescribedSet {
        &self.union_cert
    }

    pub fn index_set(&self) -> DescribedSet {
        match &self.index {
            Index::Finite(v) => DescribedSet::finite(v.iter().cloned()),
            Index::Described(s) => s.clone(),
        }
    }

    pub fn has_index(&self, i: &Mono) -> bool {
        match &self.index {
            Index::Finite(v) => v.contains(i),
            Index::Described(s) => s.contains(&self.index_universe, i),
        }
    }

    pub fn member(&self, i: &Mono) -> Result<Series> {
        if !self.has_index(i) {
            return Err(Error::NotInUniverse { elem: i.to_string(), universe: "the index set".into() });
        }
        if let Some(f) = self.memo.lock().expect("memo poisoned").get(i) {
            return Ok(f.clone());
        }
        let f = (self.member)(i)?;
        self.memo.lock().expect("memo poisoned").insert(i.clone(), f.clone());
        Ok(f)
    }

    pub fn contributors(&self, g: &Mono) -> Result<Contrib> {
        if !self.union_cert.contains(self.born.universe(), g) {
            return Ok(Contrib::Finite(vec![]));
        }
        (self.contributors)(g)
    }

    /// The first `n` indices.
    pub fn index_window(&self, n: usize) -> Result<Vec<Mono>> {
        match &self.index {
            Index::Finite(v) => Ok(v.iter().take(n).cloned().collect()),
            Index::Described(s) => enumerate::window(s, &self.index_universe, n)
                .ok_or_else(|| Error::Unsupported("index set cannot be enumerated".into())),
        }
    }

    /// Verifies the union certificate and spot-checks the schema on a
    /// window of points and indices.
    pub fn check_summable(&self, window: usize) -> SummabilityReport {
        let mut notes = Vec::new();
        let mut verdict = Summability::Accepted;
        let mut worsen = |v: Summability, note: String, notes: &mut Vec<String>| {
            notes.push(note);
            verdict = match (verdict, v) {
                (Summability::Rejected, _) | (_, Summability::Rejected) => Summability::Rejected,
                _ => Summability::Undecided,
            };
        };
        let u = self.born.universe();
        match self.born.is_bounded(&self.union_cert) {
            Ok(Verdict::Bounded) => {}
            Ok(Verdict::Unbounded) => worsen(
                Summability::Rejected,
                format!("union certificate {} is unbounded in {}", self.union_cert.format(u), self.born),
                &mut notes,
            ),
            Ok(Verdict::Undecided) => worsen(
                Summability::Undecided,
                format!("boundedness of {} is undecided", self.union_cert.format(u)),
                &mut notes,
            ),
            Err(e) => worsen(Summability::Rejected, e.to_string(), &mut notes),
        }
        let points = enumerate::window(&self.union_cert, u, window).unwrap_or_default();
        for g in &points {
            match self.contributors(g) {
                Ok(Contrib::Infinite) => worsen(
                    Summability::Rejected,
                    format!("infinitely many members are nonzero at {}", u.format_elem(g)),
                    &mut notes,
                ),
                Ok(Contrib::Finite(v)) => {
                    if let Some(i) = v.iter().find(|i| !self.has_index(i)) {
                        worsen(Summability::Rejected, format!("schema lists {i} outside the index set"), &mut notes);
                    }
                }
                Err(e) => worsen(Summability::Undecided, e.to_string(), &mut notes),
            }
        }
        let indices = match self.index_window(window) {
            Ok(v) => v,
            Err(e) => {
                worsen(Summability::Undecided, e.to_string(), &mut notes);
                vec![]
            }
        };
        for i in &indices {
            let f = match self.member(i) {
                Ok(f) => f,
                Err(e) => {
                    worsen(Summability::Rejected, format!("member {i}: {e}"), &mut notes);
                    continue;
                }
            };
            if f.bornology() != &self.born {
                worsen(Summability::Rejected, format!("member {i} lives in {}", f.bornology()), &mut notes);
                continue;
            }
            let terms = match f.snapshot(window) {
                Ok(t) => t,
                Err(e) => {
                    worsen(Summability::Undecided, format!("member {i}: {e}"), &mut notes);
                    continue;
                }
            };
            for (g, _) in terms {
                if !self.union_cert.contains(u, &g) {
                    worsen(
                        Summability::Rejected,
                        format!("member {i} is nonzero at {} outside the union certificate", u.format_elem(&g)),
                        &mut notes,
                    );
                    break;
                }
                match self.contributors(&g) {
                    Ok(Contrib::Finite(v)) if !v.contains(i) => {
                        worsen(
                            Summability::Rejected,
                            format!("schema misses member {i} at {}", u.format_elem(&g)),
                            &mut notes,
                        );
                        break;
                    }
                    _ => {}
                }
            }
        }
        SummabilityReport { verdict, notes }
    }

    /// `Σ_i w(i)·f_i`. Refuses families that fail `check_summable`.
    pub fn sum(&self, w: &Weights) -> Result<Series> {
        self.sum_checked(w, DEFAULT_WINDOW)
    }

    /// `sum` with the spot checks run on a window of size `window`.
    pub fn sum_checked(&self, w: &Weights, window: usize) -> Result<Series> {
        let report = self.check_summable(window);
        if !report.accepted() {
            return Err(Error::NotSummable(format!("{}: {}", report.verdict, report.notes.join("; "))));
        }
        if let Index::Finite(idx) = &self.index {
            let members = idx.iter().map(|i| self.member(i)).collect::<Result<Vec<_>>>()?;
            if members.iter().all(Series::is_finite) {
                let terms: Vec<(Scalar, Series)> = idx.iter().map(|i| w(i)).zip(members).collect();
                return Series::linear_combination(&self.born, &terms);
            }
        }
        let fam = self.clone();
        let w = w.clone();
        Ok(Series::lazy_trusted(
            self.born.clone(),
            self.union_cert.clone(),
            Arc::new(move |g| {
                let Contrib::Finite(idx) = fam.contributors(g)? else {
                    return Err(Error::NotSummable(format!("infinitely many members at {g}")));
                };
                let mut acc = Scalar::zero();
                for i in &idx {
                    let c = w(i);
                    if !c.is_zero() {
                        acc = &acc + &(&c * &fam.member(i)?.coeff(g)?);
                    }
                }
                Ok(acc)
            }),
        ))
    }

    /// `(c(i)·f_i)_i`.
    pub fn rescale(&self, c: Weights) -> SummableFamily {
        let inner = self.clone();
        SummableFamily {
            member: Arc::new(move |i| Ok(inner.member(i)?.scale(&c(i)))),
            memo: Arc::new(Mutex::new(HashMap::new())),
            ..self.clone()
        }
    }

    /// `(f_{σ(i)})_i` for a bijection `σ` of the index set with inverse `inv`.
    pub fn permute(&self, sigma: Arc<dyn Fn(&Mono) -> Mono + Send + Sync>, inv: Arc<dyn Fn(&Mono) -> Mono + Send + Sync>) -> SummableFamily {
        let (a, b) = (self.clone(), self.clone());
        let index = match &self.index {
            Index::Finite(v) => Index::Finite(v.iter().map(|i| inv(i)).collect()),
            Index::Described(s) => Index::Described(s.clone()),
        };
        let s2 = sigma.clone();
        SummableFamily {
            index,
            member: Arc::new(move |i| a.member(&s2(i))),
            contributors: Arc::new(move |g| {
                Ok(match b.contributors(g)? {
                    Contrib::Finite(v) => Contrib::Finite(v.iter().map(|i| inv(i)).collect()),
                    Contrib::Infinite => Contrib::Infinite,
                })
            }),
            memo: Arc::new(Mutex::new(HashMap::new())),
            ..self.clone()
        }
    }

    /// Interleaves zero members: index `2i` carries `f_i`, `2i + 1` is zero.
    /// Needs an index set inside ℕ.
    pub fn pad(&self) -> Result<SummableFamily> {
        if self.index_universe != Universe::nat() {
            return Err(Error::Unsupported("padding needs an index set in ℕ".into()));
        }
        let idx = match &self.index {
            Index::Finite(v) => Index::Finite(
                v.iter()
                    .flat_map(|i| {
                        let k = i.as_int().expect("natural index");
                        [Mono::int(2 * k), Mono::int(2 * k + 1)]
                    })
                    .collect(),
            ),
            Index::Described(_) => Index::Described(DescribedSet::at_least(Mono::int(0))),
        };
        let (a, b) = (self.clone(), self.clone());
        let zero = Series::zero(self.born.clone());
        Ok(SummableFamily {
            index: idx,
            member: Arc::new(move |i| {
                let k = i.as_int().expect("natural index");
                let j = Mono::int(k / 2);
                if k % 2 == 0 && a.has_index(&j) {
                    a.member(&j)
                } else {
                    Ok(zero.clone())
                }
            }),
            contributors: Arc::new(move |g| {
                Ok(match b.contributors(g)? {
                    Contrib::Finite(v) => {
                        Contrib::Finite(v.iter().map(|i| Mono::int(2 * i.as_int().expect("natural index"))).collect())
                    }
                    Contrib::Infinite => Contrib::Infinite,
                })
            }),
            memo: Arc::new(Mutex::new(HashMap::new())),
            ..self.clone()
        })
    }

    /// The regrouped family `(k(s(n), t(n))·f_{s(n)})_{n ∈ index}` for an
    /// injective `n ↦ (s(n), t(n))`. `fiber(i)` lists the `n` with
    /// `s(n) = i` and must be finite.
    pub fn regroup(
        &self,
        index: Index,
        st: SplitFn,
        fiber: FiberFn,
        k: KernelFn,
    ) -> SummableFamily {
        let (a, b) = (self.clone(), self.clone());
        SummableFamily {
            index,
            index_universe: Universe::nat(),
            member: Arc::new(move |n| {
                let (s, t) = st(n);
                Ok(a.member(&s)?.scale(&k(&s, &t)))
            }),
            contributors: Arc::new(move |g| {
                Ok(match b.contributors(g)? {
                    Contrib::Finite(v) => Contrib::Finite(v.iter().flat_map(|i| fiber(i)).collect()),
                    Contrib::Infinite => Contrib::Infinite,
                })
            }),
            memo: Arc::new(Mutex::new(HashMap::new())),
            ..self.clone()
        }
    }

    /// `(f_i ⊗ g_j)_{(i, j)}` on the product space.
    pub fn tensor(&self, other: &SummableFamily) -> Result<SummableFamily> {
        let born = Bornology::product(&self.born, &other.born);
        let iu = Universe::product(self.index_universe.clone(), other.index_universe.clone());
        let index = match (&self.index, &other.index) {
            (Index::Finite(a), Index::Finite(b)) => {
                Index::Finite(a.iter().flat_map(|i| b.iter().map(move |j| i.concat(j))).collect())
            }
            _ => Index::Described(DescribedSet::rect(self.index_set(), other.index_set())),
        };
        let (ka, kg) = (self.index_universe.arity(), self.born.universe().arity());
        let (a, b) = (self.clone(), other.clone());
        let (c, d) = (self.clone(), other.clone());
        SummableFamily::new(
            born,
            iu,
            index,
            Arc::new(move |ij| {
                let (i, j) = ij.split(ka);
                Ok(a.member(&i)?.tensor(&b.member(&j)?))
            }),
            Arc::new(move |gd| {
                let (g, h) = gd.split(kg);
                Ok(match (c.contributors(&g)?, d.contributors(&h)?) {
                    (Contrib::Finite(x), Contrib::Finite(y)) => {
                        Contrib::Finite(x.iter().flat_map(|i| y.iter().map(move |j| i.concat(j))).collect())
                    }
                    (Contrib::Finite(x), _) | (_, Contrib::Finite(x)) if x.is_empty() => Contrib::Finite(vec![]),
                    _ => Contrib::Infinite,
                })
            }),
            DescribedSet::rect(self.union_cert.clone(), other.union_cert.clone()),
        )
    }

    /// `(F(f_i))_i` for a member map with a matching schema.
    pub fn map_members(
        &self,
        born: Bornology,
        f: SeriesMap,
        contributors: ContribFn,
        union_cert: DescribedSet,
    ) -> Result<SummableFamily> {
        let a = self.clone();
        SummableFamily::new(
            born,
            self.index_universe.clone(),
            self.index.clone(),
            Arc::new(move |i| f(&a.member(i)?)),
            contributors,
            union_cert,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bornology::Domain;

    fn nat_all() -> Bornology {
        Bornology::all(Universe::nat())
    }

    #[test]
    fn standard_basis_family() {
        let b = nat_all();
        let e0 = Series::delta(b.clone(), Mono::int(0)).unwrap();
        let fam = SummableFamily::translates(&e0, DescribedSet::at_least(Mono::int(0))).unwrap();
        assert!(fam.check_summable(16).accepted());
        let s = fam.sum(&unit_weights()).unwrap();
        for n in 0..30 {
            assert_eq!(s.coeff(&Mono::int(n)).unwrap(), Scalar::one());
        }
    }

    #[test]
    fn constant_family_is_rejected() {
        let b = nat_all();
        let e0 = Series::delta(b, Mono::int(0)).unwrap();
        let fam = SummableFamily::constant(&e0).unwrap();
        let r = fam.check_summable(8);
        assert_eq!(r.verdict, Summability::Rejected);
        assert!(fam.sum(&unit_weights()).is_err());
    }

    #[test]
    fn telescoping_sum() {
        let b = nat_all();
        let t = Series::finite(b, [(Mono::int(0), Scalar::one()), (Mono::int(1), -Scalar::one())]).unwrap();
        let fam = SummableFamily::translates(&t, DescribedSet::at_least(Mono::int(0))).unwrap();
        let s = fam.sum(&unit_weights()).unwrap();
        assert_eq!(s.coeff(&Mono::int(0)).unwrap(), Scalar::one());
        for n in 1..20 {
            assert!(s.coeff(&Mono::int(n)).unwrap().is_zero());
        }
    }

    #[test]
    fn empty_family_sums_to_zero() {
        let fam = SummableFamily::finite(nat_all(), vec![]).unwrap();
        let s = fam.sum(&unit_weights()).unwrap();
        assert!(s.terms().unwrap().is_empty());
    }

    #[test]
    fn expansion_round_trip() {
        let b = Bornology::wo(Universe::monomials(&["x"], Domain::Rat));
        let u = b.universe().clone();
        let f = Series::lazy(b, DescribedSet::parse("grid(1; x)", &u).unwrap(), |m| {
            Ok(Scalar::from_big(num_rational::BigRational::from_integer(
                (*m.coords()[0].numer()).into(),
            )))
        })
        .unwrap();
        let (fam, w) = SummableFamily::expansion(&f).unwrap();
        let g = fam.sum(&w).unwrap();
        assert!(g.agrees_to_window(&f, 25).unwrap());
    }
}
