//! Universes, described subsets and bornologies (ideals of bounded sets).

pub mod engine;
pub mod enumerate;
pub mod set;
pub mod universe;

use std::fmt;
use std::sync::Arc;

use num_traits::Signed;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::mono::Mono;
use engine::{props, props_of, SetExpr, Tri};
pub use set::{Atom, Bound, DescribedSet};
pub use universe::{Domain, Universe};

/// Three-valued membership answer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Bounded,
    Unbounded,
    Undecided,
}

impl Verdict {
    pub fn from_tri(t: Tri) -> Verdict {
        match t {
            Some(true) => Verdict::Bounded,
            Some(false) => Verdict::Unbounded,
            None => Verdict::Undecided,
        }
    }

    pub fn tri(self) -> Tri {
        match self {
            Verdict::Bounded => Some(true),
            Verdict::Unbounded => Some(false),
            Verdict::Undecided => None,
        }
    }

    pub fn and(self, o: Verdict) -> Verdict {
        Verdict::from_tri(engine::and3(self.tri(), o.tri()))
    }

    pub fn or(self, o: Verdict) -> Verdict {
        Verdict::from_tri(engine::or3(self.tri(), o.tri()))
    }

    pub fn is_bounded(self) -> bool {
        self == Verdict::Bounded
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Bounded => "bounded",
            Verdict::Unbounded => "unbounded",
            Verdict::Undecided => "undecided",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Finite,
    All,
    /// Well-ordered subsets.
    WO,
    /// Reverse-well-ordered subsets.
    RevWO,
    /// Finite unions of subsets of order type at most ω.
    WOOmega,
    /// Subsets of finite unions of grids.
    GridBased,
    Generated(Vec<DescribedSet>),
    Product(Bornology, Bornology),
    Hom(Bornology, Bornology),
    Perp(Bornology),
}

/// An ideal of bounded subsets of a universe, containing all singletons.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bornology {
    universe: Universe,
    kind: Arc<Kind>,
}

impl Bornology {
    fn make(universe: Universe, kind: Kind) -> Bornology {
        Bornology { universe, kind: Arc::new(kind) }
    }

    pub fn finite(u: Universe) -> Bornology {
        Bornology::make(u, Kind::Finite)
    }

    pub fn all(u: Universe) -> Bornology {
        Bornology::make(u, Kind::All)
    }

    pub fn wo(u: Universe) -> Bornology {
        Bornology::make(u, Kind::WO)
    }

    pub fn rev_wo(u: Universe) -> Bornology {
        Bornology::make(u, Kind::RevWO)
    }

    pub fn wo_omega(u: Universe) -> Bornology {
        Bornology::make(u, Kind::WOOmega)
    }

    pub fn grid_based(u: Universe) -> Result<Bornology> {
        if !u.is_monoid() {
            return Err(Error::Unsupported(format!("grid-based bornology needs a monoid, not {u}")));
        }
        Ok(Bornology::make(u, Kind::GridBased))
    }

    /// Smallest bornology containing `gens`.
    pub fn generate(u: Universe, gens: Vec<DescribedSet>) -> Result<Bornology> {
        for g in &gens {
            g.validate(&u)?;
        }
        let gens: Vec<DescribedSet> = gens.into_iter().filter(|g| !g.is_syntactically_empty()).collect();
        if gens.is_empty() {
            return Ok(Bornology::finite(u));
        }
        let cover = SetExpr::Union(gens.iter().map(SetExpr::of).collect());
        if props(&SetExpr::diff(SetExpr::All, cover), &u).finite == Some(true) {
            return Ok(Bornology::all(u));
        }
        Ok(Bornology::make(u, Kind::Generated(gens)))
    }

    /// Bounded sets contained in some `F × G` up to a finite set.
    pub fn product(f: &Bornology, g: &Bornology) -> Bornology {
        let u = Universe::product(f.universe.clone(), g.universe.clone());
        match (f.kind(), g.kind()) {
            (Kind::All, Kind::All) => Bornology::all(u),
            (Kind::Finite, Kind::Finite) => Bornology::finite(u),
            _ => Bornology::make(u, Kind::Product(f.clone(), g.clone())),
        }
    }

    /// Supports of matrices of strongly linear maps from `f` to `g`.
    pub fn hom(f: &Bornology, g: &Bornology) -> Bornology {
        let u = Universe::product(f.universe.clone(), g.universe.clone());
        Bornology::make(u, Kind::Hom(f.clone(), g.clone()))
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn kind(&self) -> &Kind {
        &self.kind
    }

    /// Sets meeting every bounded set finitely. Known identities are
    /// applied eagerly; everything else stays a symbolic wrapper.
    pub fn perp(&self) -> Bornology {
        let u = self.universe.clone();
        match self.kind() {
            Kind::Finite => Bornology::all(u),
            Kind::All => Bornology::finite(u),
            Kind::WO | Kind::WOOmega => Bornology::rev_wo(u),
            Kind::RevWO => Bornology::wo(u),
            Kind::Perp(inner) => match inner.kind() {
                Kind::Generated(_) => inner.clone(),
                Kind::Perp(_) => inner.clone(),
                _ => Bornology::make(u, Kind::Perp(self.clone())),
            },
            _ => Bornology::make(u, Kind::Perp(self.clone())),
        }
    }

    /// Is `s` bounded?
    pub fn is_bounded(&self, s: &DescribedSet) -> Result<Verdict> {
        s.validate(&self.universe)?;
        Ok(self.decide(s))
    }

    fn decide(&self, s: &DescribedSet) -> Verdict {
        let u = &self.universe;
        let p = props_of(s, u);
        if p.finite == Some(true) {
            return Verdict::Bounded;
        }
        match self.kind() {
            Kind::Finite => Verdict::from_tri(p.finite),
            Kind::All => Verdict::Bounded,
            Kind::WO => Verdict::from_tri(p.wo),
            Kind::RevWO => Verdict::from_tri(p.rwo),
            Kind::WOOmega => Verdict::from_tri(p.wo_omega),
            Kind::GridBased => self.per_atom(s, |a| self.grid_based_atom(a)),
            Kind::Generated(gens) => self.per_atom(s, |a| {
                if gens.iter().any(|g| g.atoms().len() == 1 && g.atoms()[0] == *a) {
                    return Verdict::Bounded;
                }
                let cover = SetExpr::Union(gens.iter().map(SetExpr::of).collect());
                let rest = SetExpr::diff(SetExpr::of(&DescribedSet::from(a.clone())), cover);
                Verdict::from_tri(props(&rest, u).finite)
            }),
            Kind::Product(f, g) => self.per_atom(s, |a| self.product_atom(f, g, a)),
            Kind::Hom(f, g) => self.per_atom(s, |a| self.hom_atom(f, g, a)),
            Kind::Perp(inner) => self.per_atom(s, |a| self.perp_atom(inner, a)),
        }
    }

    /// Bounded sets form an ideal, so a union is bounded iff each part is.
    fn per_atom(&self, s: &DescribedSet, f: impl Fn(&Atom) -> Verdict) -> Verdict {
        s.atoms().iter().fold(Verdict::Bounded, |acc, a| {
            if acc == Verdict::Unbounded {
                return acc;
            }
            let single = DescribedSet::from(a.clone());
            if props_of(&single, &self.universe).finite == Some(true) {
                return acc;
            }
            let v = match a {
                Atom::Diff(x, _) if f(x) == Verdict::Bounded => Verdict::Bounded,
                _ => f(a),
            };
            acc.and(v)
        })
    }

    /// Kinds without atom rules decide lines through the generic engine.
    fn decide_line(&self, s: &DescribedSet) -> Verdict {
        let u = &self.universe;
        let e = SetExpr::of(s);
        let Some(prof) = engine::line_profile(&e, u) else { return Verdict::Undecided };
        match self.kind() {
            Kind::GridBased => Verdict::from_tri(Some(prof.well_ordered())),
            Kind::Generated(gens) => {
                let cover = SetExpr::Union(gens.iter().map(SetExpr::of).collect());
                Verdict::from_tri(props(&SetExpr::diff(e, cover), u).finite)
            }
            Kind::Perp(inner) => self.perp_line(inner, &e, &prof),
            _ => self.decide(s),
        }
    }

    fn grid_based_atom(&self, a: &Atom) -> Verdict {
        let u = &self.universe;
        match a {
            Atom::Grid { .. } => Verdict::Bounded,
            Atom::Progression { step, .. } if step.is_positive() => Verdict::Bounded,
            _ if u.line_domain().is_some() => {
                // on a line every described well-ordered set sits in a grid
                // with step 1/L
                self.decide_line(&DescribedSet::from(a.clone()))
            }
            _ => match props_of(&DescribedSet::from(a.clone()), u).wo {
                Some(false) => Verdict::Unbounded,
                _ => Verdict::Undecided,
            },
        }
    }

    fn product_atom(&self, f: &Bornology, g: &Bornology, a: &Atom) -> Verdict {
        match projections(a, &self.universe) {
            Some((p1, p2)) => f.decide(&p1).and(g.decide(&p2)),
            None => Verdict::Undecided,
        }
    }

    fn hom_atom(&self, f: &Bornology, g: &Bornology, a: &Atom) -> Verdict {
        let u = &self.universe;
        let (ua, ub) = u.factors().expect("hom bornology lives on a product");
        match a {
            Atom::Rect(x, y) => {
                let ex = props_of(x, ua).empty;
                let ey = props_of(y, ub).empty;
                match engine::or3(ex, ey) {
                    Some(true) => Verdict::Bounded,
                    Some(false) => f.perp().decide(x).and(g.decide(y)),
                    None => Verdict::Undecided,
                }
            }
            Atom::Progression { start, step } => {
                let k = ua.arity();
                let (s1, s2) = start.split(k);
                let (d1, d2) = step.split(k);
                if d1.is_zero() || d2.is_zero() {
                    let (p1, p2) = projections(a, u).expect("axis-parallel line");
                    return self.hom_atom(f, g, &Atom::Rect(Box::new(p1), Box::new(p2)));
                }
                // fibres are single points
                let p1 = DescribedSet::progression(s1, d1);
                let p2 = DescribedSet::progression(s2, d2);
                if f.perp().decide(&p1) == Verdict::Bounded {
                    return Verdict::Bounded;
                }
                if f.decide(&p1) == Verdict::Bounded {
                    return g.decide(&p2);
                }
                Verdict::Undecided
            }
            _ => Verdict::Undecided,
        }
    }

    fn perp_atom(&self, inner: &Bornology, a: &Atom) -> Verdict {
        let u = &self.universe;
        let single = DescribedSet::from(a.clone());
        if u.line_domain().is_some() {
            return self.decide_line(&single);
        }
        match inner.kind() {
            Kind::Generated(gens) => {
                let e = SetExpr::of(&single);
                gens.iter().fold(Verdict::Bounded, |acc, gset| {
                    acc.and(Verdict::from_tri(props(&SetExpr::inter(e.clone(), SetExpr::of(gset)), u).finite))
                })
            }
            Kind::GridBased => {
                let p = props_of(&single, u);
                if p.rwo == Some(true) {
                    Verdict::Bounded
                } else if inner.grid_based_atom(a) == Verdict::Bounded {
                    // an infinite bounded set meets itself infinitely
                    Verdict::Unbounded
                } else {
                    Verdict::Undecided
                }
            }
            Kind::Product(f, g) => {
                let (ua, ub) = u.factors().expect("product bornology lives on a product");
                match a {
                    Atom::Rect(x, y) => {
                        let ex = props_of(x, ua).empty;
                        let ey = props_of(y, ub).empty;
                        if engine::or3(ex, ey) == Some(true) {
                            return Verdict::Bounded;
                        }
                        f.perp().decide(x).or(g.perp().decide(y))
                    }
                    Atom::Progression { .. } => match projections(a, u) {
                        Some((p1, p2)) => {
                            if f.perp().decide(&p1).is_bounded() || g.perp().decide(&p2).is_bounded() {
                                Verdict::Bounded
                            } else if f.decide(&p1).is_bounded() && g.decide(&p2).is_bounded() {
                                Verdict::Unbounded
                            } else {
                                Verdict::Undecided
                            }
                        }
                        None => Verdict::Undecided,
                    },
                    _ => Verdict::Undecided,
                }
            }
            Kind::Perp(base) => {
                // F ⊆ F⊥⊥
                if base.decide(&single) == Verdict::Bounded {
                    Verdict::Bounded
                } else {
                    Verdict::Undecided
                }
            }
            _ => Verdict::Undecided,
        }
    }

    fn perp_line(&self, inner: &Bornology, e: &SetExpr, prof: &engine::LineProfile) -> Verdict {
        let u = &self.universe;
        match inner.kind() {
            Kind::Generated(gens) => gens.iter().fold(Verdict::Bounded, |acc, g| {
                acc.and(Verdict::from_tri(props(&SetExpr::inter(e.clone(), SetExpr::of(g)), u).finite))
            }),
            // grids have finitely many points below any bound, and a set
            // unbounded above meets the grid with step 1/L infinitely
            Kind::GridBased => Verdict::from_tri(Some(prof.bounded_above())),
            Kind::Perp(base) if matches!(base.kind(), Kind::GridBased) => {
                Verdict::from_tri(Some(prof.well_ordered()))
            }
            Kind::Perp(base) => {
                let s = expr_as_set(e);
                match s.map(|s| base.decide(&s)) {
                    Some(Verdict::Bounded) => Verdict::Bounded,
                    _ => Verdict::Undecided,
                }
            }
            _ => Verdict::Undecided,
        }
    }

    pub fn to_json(&self) -> Value {
        let k = match self.kind() {
            Kind::Finite => json!({"kind": "finite"}),
            Kind::All => json!({"kind": "all"}),
            Kind::WO => json!({"kind": "wo"}),
            Kind::RevWO => json!({"kind": "revwo"}),
            Kind::WOOmega => json!({"kind": "wo_omega"}),
            Kind::GridBased => json!({"kind": "grid"}),
            Kind::Generated(g) => json!({
                "kind": "generated",
                "gens": g.iter().map(|s| s.format(&self.universe)).collect::<Vec<_>>(),
            }),
            Kind::Product(f, g) => json!({"kind": "product", "left": f.to_json(), "right": g.to_json()}),
            Kind::Hom(f, g) => json!({"kind": "hom", "left": f.to_json(), "right": g.to_json()}),
            Kind::Perp(b) => json!({"kind": "perp", "inner": b.to_json()}),
        };
        json!({"universe": self.universe.to_string(), "bornology": k})
    }

    pub fn from_json(v: &Value) -> Result<Bornology> {
        let bad = || Error::Parse(format!("bad bornology record {v}"));
        let u: Universe = v.get("universe").and_then(Value::as_str).ok_or_else(bad)?.parse()?;
        let b = v.get("bornology").ok_or_else(bad)?;
        let kind = b.get("kind").and_then(Value::as_str).ok_or_else(bad)?;
        let sub = |key: &str| Bornology::from_json(b.get(key).ok_or_else(bad)?);
        Ok(match kind {
            "finite" => Bornology::finite(u),
            "all" => Bornology::all(u),
            "wo" => Bornology::wo(u),
            "revwo" => Bornology::rev_wo(u),
            "wo_omega" => Bornology::wo_omega(u),
            "grid" => Bornology::grid_based(u)?,
            "generated" => {
                let gens = b
                    .get("gens")
                    .and_then(Value::as_array)
                    .ok_or_else(bad)?
                    .iter()
                    .map(|g| DescribedSet::parse(g.as_str().unwrap_or(""), &u))
                    .collect::<Result<Vec<_>>>()?;
                Bornology::make(u, Kind::Generated(gens))
            }
            "product" => Bornology::make(u, Kind::Product(sub("left")?, sub("right")?)),
            "hom" => Bornology::make(u, Kind::Hom(sub("left")?, sub("right")?)),
            "perp" => Bornology::make(u, Kind::Perp(sub("inner")?)),
            _ => return Err(bad()),
        })
    }
}

fn expr_as_set(e: &SetExpr) -> Option<DescribedSet> {
    match e {
        SetExpr::Union(v) => {
            let mut atoms = Vec::new();
            for x in v {
                match x {
                    SetExpr::Atom(a) => atoms.push(a.clone()),
                    _ => return None,
                }
            }
            Some(DescribedSet::from_atoms(atoms))
        }
        SetExpr::Atom(a) => Some(DescribedSet::from(a.clone())),
        _ => None,
    }
}

/// Coordinate projections of an atom of a product universe.
pub fn projections(a: &Atom, u: &Universe) -> Option<(DescribedSet, DescribedSet)> {
    let (ua, ub) = u.factors()?;
    let k = ua.arity();
    match a {
        Atom::Finite(pts) => {
            let (l, r): (Vec<Mono>, Vec<Mono>) = pts.iter().filter(|x| u.contains(x)).map(|x| x.split(k)).unzip();
            Some((DescribedSet::finite(l), DescribedSet::finite(r)))
        }
        Atom::Rect(x, y) => {
            let ex = props_of(x, ua).empty?;
            let ey = props_of(y, ub).empty?;
            if ex || ey {
                Some((DescribedSet::empty(), DescribedSet::empty()))
            } else {
                Some(((**x).clone(), (**y).clone()))
            }
        }
        Atom::Progression { start, step } => {
            let (s1, s2) = start.split(k);
            let (d1, d2) = step.split(k);
            let side = |s: Mono, d: Mono| {
                if d.is_zero() {
                    DescribedSet::point(s)
                } else {
                    DescribedSet::progression(s, d)
                }
            };
            if !u.contains(start) {
                return None;
            }
            // a coordinate leaving ℕ truncates the line; keep exact cases only
            let inside = |uu: &Universe, d: &Mono| match uu.line_domain() {
                Some(Domain::Nat) => !d.coords()[0].is_negative(),
                _ => true,
            };
            if !(inside(ua, &d1) && inside(ub, &d2)) {
                return None;
            }
            Some((side(s1, d1), side(s2, d2)))
        }
        Atom::Grid { base, gens } => {
            let (b1, b2) = base.split(k);
            let mut g1 = Vec::new();
            let mut g2 = Vec::new();
            for g in gens {
                let (x, y) = g.split(k);
                for (v, out) in [(x, &mut g1), (y, &mut g2)] {
                    match v.sign() {
                        std::cmp::Ordering::Greater => out.push(v),
                        std::cmp::Ordering::Equal => {}
                        std::cmp::Ordering::Less => return None,
                    }
                }
            }
            Some((DescribedSet::grid(b1, g1), DescribedSet::grid(b2, g2)))
        }
        _ => None,
    }
}

impl fmt::Display for Bornology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            Kind::Finite => write!(f, "finite"),
            Kind::All => write!(f, "all"),
            Kind::WO => write!(f, "wo"),
            Kind::RevWO => write!(f, "revwo"),
            Kind::WOOmega => write!(f, "wo_omega"),
            Kind::GridBased => write!(f, "grid"),
            Kind::Generated(g) => write!(
                f,
                "generated({})",
                g.iter().map(|s| s.format(&self.universe)).collect::<Vec<_>>().join("; ")
            ),
            Kind::Product(a, b) => write!(f, "product({a}, {b})"),
            Kind::Hom(a, b) => write!(f, "hom({a}, {b})"),
            Kind::Perp(b) => write!(f, "perp({b})"),
        }
    }
}

/// Standard described sets used to compare bornologies extensionally.
pub fn battery(u: &Universe) -> Vec<DescribedSet> {
    let mut out = Vec::new();
    // Parsed on the bare line so the unit may be written `0`.
    let plain = u.line_domain().map(|d| Universe::lattice(d, 1));
    match u.line_domain() {
        Some(Domain::Int) => {
            for s in [
                "{}", "{0}", "{-3, 0, 5}", "prog(0; 1)", "prog(0; -1)", "prog(0; 2) | prog(-2; -2)",
                "prog(1; 2) | prog(-1; -2)", "grid(-4; 3, 5)", "grid(2; 2)", "[-5, 5]", "(-inf, inf)",
                "[7, inf)", "(-inf, -2]", "prog(0; 3) | prog(0; -3)", "diff(prog(0; 1); grid(0; 2))",
                "{0, 2, 4} | {7}", "prog(5; -2) | {9, 11}", "diff((-inf, inf); prog(0; -1))",
            ] {
                out.push(DescribedSet::parse(s, plain.as_ref().unwrap()).unwrap());
            }
        }
        Some(Domain::Nat) => {
            for s in [
                "{}", "{0}", "{1, 2, 3}", "prog(0; 1)", "prog(0; 2)", "prog(1; 2)", "grid(3; 2, 5)",
                "[4, 9]", "[10, inf)", "prog(20; -3)", "diff(prog(0; 1); prog(0; 3))",
            ] {
                out.push(DescribedSet::parse(s, plain.as_ref().unwrap()).unwrap());
            }
        }
        Some(Domain::Rat) => {
            for s in [
                "{}", "{1/2}", "{-1, 1/3}", "prog(0; 1/2)", "prog(0; -1)", "grid(-1; 1/2, 1/3)",
                "[0, 1]", "[0, 0]", "(-inf, 0)", "diff([0, 2]; grid(0; 1/2))", "grid(0; 1) | prog(-1; -1)",
            ] {
                if let Ok(s) = DescribedSet::parse(s, plain.as_ref().unwrap()) {
                    out.push(s);
                }
            }
        }
        None => {
            out.push(DescribedSet::empty());
            out.push(DescribedSet::point(Mono::zero(u.arity())));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str, u: &Universe) -> DescribedSet {
        DescribedSet::parse(s, u).unwrap()
    }

    #[test]
    fn finite_bornology() {
        let n = Universe::nat();
        let b = Bornology::finite(n.clone());
        assert_eq!(b.is_bounded(&set("{0, 1, 2}", &n)).unwrap(), Verdict::Bounded);
        assert_eq!(b.is_bounded(&set("prog(0; 1)", &n)).unwrap(), Verdict::Unbounded);
    }

    #[test]
    fn wo_omega_on_integers() {
        let z = Universe::int();
        let b = Bornology::wo_omega(z.clone());
        assert_eq!(b.is_bounded(&set("prog(0; 1)", &z)).unwrap(), Verdict::Bounded);
        assert_eq!(b.is_bounded(&set("prog(0; -1)", &z)).unwrap(), Verdict::Unbounded);
        let p = b.perp();
        assert_eq!(p.is_bounded(&set("prog(0; -1)", &z)).unwrap(), Verdict::Bounded);
        assert_eq!(p.is_bounded(&set("prog(0; 1)", &z)).unwrap(), Verdict::Unbounded);
        let pp = p.perp();
        assert_eq!(pp, Bornology::wo(z.clone()));
        assert_eq!(pp.is_bounded(&set("grid(-4; 3, 5)", &z)).unwrap(), Verdict::Bounded);
    }

    #[test]
    fn generated() {
        let n = Universe::nat();
        let evens = set("prog(0; 2)", &n);
        let b = Bornology::generate(n.clone(), vec![evens]).unwrap();
        assert_eq!(b.is_bounded(&set("{0, 2, 4} | {7}", &n)).unwrap(), Verdict::Bounded);
        assert_eq!(b.is_bounded(&set("prog(1; 2)", &n)).unwrap(), Verdict::Unbounded);
        assert_eq!(b.is_bounded(&set("grid(4; 6, 10)", &n)).unwrap(), Verdict::Bounded);
        assert_eq!(Bornology::generate(n.clone(), vec![]).unwrap(), Bornology::finite(n.clone()));
        assert_eq!(
            Bornology::generate(n.clone(), vec![set("prog(0; 1)", &n)]).unwrap(),
            Bornology::all(n.clone())
        );
        let p = b.perp();
        assert_eq!(p.is_bounded(&set("prog(1; 2)", &n)).unwrap(), Verdict::Bounded);
        assert_eq!(p.is_bounded(&set("prog(0; 3)", &n)).unwrap(), Verdict::Unbounded);
        assert_eq!(p.perp(), b);
    }

    #[test]
    fn products_and_homs() {
        let n = Universe::nat();
        let fin = Bornology::finite(n.clone());
        let all = Bornology::all(n.clone());
        let prod = Bornology::product(&fin, &all);
        let u = prod.universe().clone();
        assert_eq!(prod.is_bounded(&set("rect([0, 9]; prog(0; 1))", &u)).unwrap(), Verdict::Bounded);
        assert_eq!(prod.is_bounded(&set("prog((0, 0); (1, 1))", &u)).unwrap(), Verdict::Unbounded);
        let ff = Bornology::product(&fin, &fin);
        assert_eq!(ff.is_bounded(&set("rect({0}; prog(0; 1))", &u)).unwrap(), Verdict::Unbounded);

        let h = Bornology::hom(&fin, &all);
        assert_eq!(h.is_bounded(&set("prog((0, 0); (1, 1))", &u)).unwrap(), Verdict::Bounded);
        let h2 = Bornology::hom(&all, &all);
        assert_eq!(h2.is_bounded(&set("rect(prog(0; 1); {0})", &u)).unwrap(), Verdict::Unbounded);
        let h3 = Bornology::hom(&fin, &fin);
        assert_eq!(h3.is_bounded(&set("prog((0, 0); (1, 0))", &u)).unwrap(), Verdict::Bounded);
    }

    #[test]
    fn grid_based_on_rationals() {
        let q = Universe::monomials(&["x"], Domain::Rat);
        let g = Bornology::grid_based(q.clone()).unwrap();
        assert_eq!(g.is_bounded(&set("grid(x^-1; x^(1/2), x^(1/3))", &q)).unwrap(), Verdict::Bounded);
        assert_eq!(g.is_bounded(&set("[1, x]", &q)).unwrap(), Verdict::Unbounded);
        let p = g.perp();
        assert_eq!(p.is_bounded(&set("prog(1; x^-1)", &q)).unwrap(), Verdict::Bounded);
        assert_eq!(p.is_bounded(&set("[1, x]", &q)).unwrap(), Verdict::Bounded);
        assert_eq!(p.is_bounded(&set("prog(1; x^(1/2))", &q)).unwrap(), Verdict::Unbounded);
    }

    #[test]
    fn universe_mismatch_is_an_error() {
        let b = Bornology::finite(Universe::nat());
        let s = DescribedSet::point(Mono::ints(&[1, 2]));
        assert!(b.is_bounded(&s).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let n = Universe::nat();
        let b = Bornology::hom(&Bornology::finite(n.clone()), &Bornology::generate(n.clone(), vec![set("prog(0; 2)", &n)]).unwrap());
        assert_eq!(Bornology::from_json(&b.to_json()).unwrap(), b);
    }
}
