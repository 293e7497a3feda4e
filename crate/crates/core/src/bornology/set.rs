use std::collections::BTreeSet;

use crate::bornology::universe::{split_top, Universe};
use crate::error::{Error, Result};
use crate::lattice;
use crate::mono::Mono;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bound {
    Unbounded,
    Closed(Mono),
    Open(Mono),
}

impl Bound {
    pub fn point(&self) -> Option<&Mono> {
        match self {
            Bound::Unbounded => None,
            Bound::Closed(m) | Bound::Open(m) => Some(m),
        }
    }

    fn admits_above(&self, x: &Mono) -> bool {
        match self {
            Bound::Unbounded => true,
            Bound::Closed(m) => x >= m,
            Bound::Open(m) => x > m,
        }
    }

    fn admits_below(&self, x: &Mono) -> bool {
        match self {
            Bound::Unbounded => true,
            Bound::Closed(m) => x <= m,
            Bound::Open(m) => x < m,
        }
    }
}

/// One building block of a described set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Finite(BTreeSet<Mono>),
    /// Order interval.
    Interval { lo: Bound, hi: Bound },
    /// `{start + k·step : k ∈ ℕ}`, `step ≠ 0`.
    Progression { start: Mono, step: Mono },
    /// `{base + Σ k_i·g_i : k ∈ ℕ^m}`, every `g_i` positive.
    Grid { base: Mono, gens: Vec<Mono> },
    /// `A × B` inside a product universe.
    Rect(Box<DescribedSet>, Box<DescribedSet>),
    /// Elements of the atom outside the set.
    Diff(Box<Atom>, Box<DescribedSet>),
}

/// A finite union of atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DescribedSet {
    atoms: Vec<Atom>,
}

impl From<Atom> for DescribedSet {
    fn from(a: Atom) -> DescribedSet {
        DescribedSet { atoms: vec![a] }
    }
}

impl DescribedSet {
    pub fn empty() -> DescribedSet {
        DescribedSet::default()
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> DescribedSet {
        DescribedSet { atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_syntactically_empty(&self) -> bool {
        self.atoms.iter().all(|a| matches!(a, Atom::Finite(s) if s.is_empty()))
    }

    pub fn finite<I: IntoIterator<Item = Mono>>(points: I) -> DescribedSet {
        Atom::Finite(points.into_iter().collect()).into()
    }

    pub fn point(x: Mono) -> DescribedSet {
        DescribedSet::finite([x])
    }

    pub fn interval(lo: Bound, hi: Bound) -> DescribedSet {
        Atom::Interval { lo, hi }.into()
    }

    /// `[lo, ∞)`.
    pub fn at_least(lo: Mono) -> DescribedSet {
        DescribedSet::interval(Bound::Closed(lo), Bound::Unbounded)
    }

    /// `(-∞, hi]`.
    pub fn at_most(hi: Mono) -> DescribedSet {
        DescribedSet::interval(Bound::Unbounded, Bound::Closed(hi))
    }

    pub fn everything() -> DescribedSet {
        DescribedSet::interval(Bound::Unbounded, Bound::Unbounded)
    }

    pub fn progression(start: Mono, step: Mono) -> DescribedSet {
        assert!(!step.is_zero(), "progression step must be nonzero");
        Atom::Progression { start, step }.into()
    }

    pub fn grid(base: Mono, gens: Vec<Mono>) -> DescribedSet {
        assert!(gens.iter().all(Mono::is_positive), "grid generators must be positive");
        Atom::Grid { base, gens }.into()
    }

    pub fn rect(a: DescribedSet, b: DescribedSet) -> DescribedSet {
        Atom::Rect(Box::new(a), Box::new(b)).into()
    }

    /// `self \ other` for a single-atom `self`; general sets distribute.
    pub fn minus(&self, other: &DescribedSet) -> DescribedSet {
        DescribedSet {
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom::Diff(Box::new(a.clone()), Box::new(other.clone())))
                .collect(),
        }
    }

    pub fn union(&self, other: &DescribedSet) -> DescribedSet {
        let mut atoms = self.atoms.clone();
        for a in &other.atoms {
            if !atoms.contains(a) {
                atoms.push(a.clone());
            }
        }
        DescribedSet { atoms }
    }

    pub fn union_all<'a, I: IntoIterator<Item = &'a DescribedSet>>(sets: I) -> DescribedSet {
        sets.into_iter().fold(DescribedSet::empty(), |acc, s| acc.union(s))
    }

    pub fn contains(&self, u: &Universe, x: &Mono) -> bool {
        u.contains(x) && self.atoms.iter().any(|a| a.contains(u, x))
    }

    /// Rejects atoms that do not fit the universe.
    pub fn validate(&self, u: &Universe) -> Result<()> {
        self.atoms.iter().try_for_each(|a| a.validate(u))
    }

    /// All rationals appearing in the description.
    pub fn for_each_number(&self, f: &mut dyn FnMut(&Mono)) {
        for a in &self.atoms {
            a.for_each_number(f);
        }
    }

    pub fn translate(&self, t: &Mono) -> DescribedSet {
        DescribedSet { atoms: self.atoms.iter().map(|a| a.translate(t)).collect() }
    }

    /// Drops listed points that fall outside `u`.
    pub fn restrict(&self, u: &Universe) -> DescribedSet {
        DescribedSet {
            atoms: self
                .atoms
                .iter()
                .map(|a| match a {
                    Atom::Finite(pts) => Atom::Finite(pts.iter().filter(|x| u.contains(x)).cloned().collect()),
                    other => other.clone(),
                })
                .collect(),
        }
    }

    /// Minkowski sum, when the atom kinds allow a description.
    pub fn minkowski(&self, other: &DescribedSet) -> Option<DescribedSet> {
        let mut atoms = Vec::new();
        for a in &self.atoms {
            for b in &other.atoms {
                atoms.extend(a.minkowski(b)?.atoms);
            }
        }
        Some(DescribedSet { atoms })
    }

    pub fn format(&self, u: &Universe) -> String {
        if self.atoms.is_empty() {
            return "{}".into();
        }
        self.atoms.iter().map(|a| a.format(u)).collect::<Vec<_>>().join(" | ")
    }

    pub fn parse(s: &str, u: &Universe) -> Result<DescribedSet> {
        let parts = split_top(s, '|')?;
        let mut atoms = Vec::new();
        for p in parts {
            atoms.push(Atom::parse(&p, u)?);
        }
        let set = DescribedSet { atoms };
        set.validate(u)?;
        Ok(set)
    }
}

impl Atom {
    pub fn contains(&self, u: &Universe, x: &Mono) -> bool {
        match self {
            Atom::Finite(s) => s.contains(x),
            Atom::Interval { lo, hi } => lo.admits_above(x) && hi.admits_below(x),
            Atom::Progression { start, step } => (x - start).multiple_of(step).is_some(),
            Atom::Grid { base, gens } => lattice::is_decomposable(gens, &(x - base)),
            Atom::Rect(a, b) => match u.factors() {
                Some((ua, ub)) => {
                    let (l, r) = x.split(ua.arity());
                    a.contains(ua, &l) && b.contains(ub, &r)
                }
                None => false,
            },
            Atom::Diff(a, b) => a.contains(u, x) && !b.contains(u, x),
        }
    }

    fn validate(&self, u: &Universe) -> Result<()> {
        let n = u.arity();
        let arity = |m: &Mono| -> Result<()> {
            if m.arity() != n {
                return Err(Error::UniverseMismatch {
                    expected: format!("{u} (arity {n})"),
                    found: format!("element of arity {}", m.arity()),
                });
            }
            Ok(())
        };
        match self {
            Atom::Finite(s) => s.iter().try_for_each(|m| u.check(m)),
            Atom::Interval { lo, hi } => {
                lo.point().map(arity).transpose()?;
                hi.point().map(arity).transpose()?;
                Ok(())
            }
            Atom::Progression { start, step } => {
                arity(start)?;
                arity(step)?;
                if step.is_zero() {
                    return Err(Error::Certificate("progression with zero step".into()));
                }
                if !u.is_monoid() {
                    return Err(Error::Unsupported(format!("progressions need a monoid universe, not {u}")));
                }
                Ok(())
            }
            Atom::Grid { base, gens } => {
                arity(base)?;
                for g in gens {
                    arity(g)?;
                    if !g.is_positive() {
                        return Err(Error::Certificate(format!("grid generator {g} is not above the unit")));
                    }
                }
                if !u.is_monoid() {
                    return Err(Error::Unsupported(format!("grids need a monoid universe, not {u}")));
                }
                Ok(())
            }
            Atom::Rect(a, b) => {
                let (ua, ub) = u.factors().ok_or_else(|| Error::UniverseMismatch {
                    expected: "a product universe".into(),
                    found: u.to_string(),
                })?;
                a.validate(ua)?;
                b.validate(ub)
            }
            Atom::Diff(a, b) => {
                a.validate(u)?;
                b.validate(u)
            }
        }
    }

    fn for_each_number(&self, f: &mut dyn FnMut(&Mono)) {
        match self {
            Atom::Finite(s) => s.iter().for_each(f),
            Atom::Interval { lo, hi } => {
                if let Some(m) = lo.point() {
                    f(m)
                }
                if let Some(m) = hi.point() {
                    f(m)
                }
            }
            Atom::Progression { start, step } => {
                f(start);
                f(step);
            }
            Atom::Grid { base, gens } => {
                f(base);
                gens.iter().for_each(&mut *f);
            }
            Atom::Rect(a, b) => {
                a.for_each_number(f);
                b.for_each_number(f);
            }
            Atom::Diff(a, b) => {
                a.for_each_number(f);
                b.for_each_number(f);
            }
        }
    }

    pub fn translate(&self, t: &Mono) -> Atom {
        let sh = |b: &Bound| match b {
            Bound::Unbounded => Bound::Unbounded,
            Bound::Closed(m) => Bound::Closed(m + t),
            Bound::Open(m) => Bound::Open(m + t),
        };
        match self {
            Atom::Finite(s) => Atom::Finite(s.iter().map(|m| m + t).collect()),
            Atom::Interval { lo, hi } => Atom::Interval { lo: sh(lo), hi: sh(hi) },
            Atom::Progression { start, step } => Atom::Progression { start: start + t, step: step.clone() },
            Atom::Grid { base, gens } => Atom::Grid { base: base + t, gens: gens.clone() },
            Atom::Rect(a, b) => {
                let k = first_arity(a).unwrap_or(0);
                let (ta, tb) = t.split(k);
                Atom::Rect(Box::new(a.translate(&ta)), Box::new(b.translate(&tb)))
            }
            Atom::Diff(a, b) => Atom::Diff(Box::new(a.translate(t)), Box::new(b.translate(t))),
        }
    }

    fn minkowski(&self, other: &Atom) -> Option<DescribedSet> {
        let as_grid = |a: &Atom| -> Option<(Vec<Mono>, Vec<Mono>)> {
            match a {
                Atom::Finite(s) => Some((s.iter().cloned().collect(), vec![])),
                Atom::Grid { base, gens } => Some((vec![base.clone()], gens.clone())),
                Atom::Progression { start, step } if step.is_positive() => {
                    Some((vec![start.clone()], vec![step.clone()]))
                }
                _ => None,
            }
        };
        match (self, other) {
            (Atom::Finite(s), b) | (b, Atom::Finite(s)) if as_grid(b).is_none() => {
                let atoms = s.iter().map(|m| b.translate(m)).collect();
                Some(DescribedSet { atoms })
            }
            _ => {
                let (b1, g1) = as_grid(self)?;
                let (b2, g2) = as_grid(other)?;
                let mut gens = g1.clone();
                for g in g2 {
                    if !gens.contains(&g) {
                        gens.push(g);
                    }
                }
                let mut atoms = Vec::new();
                for x in &b1 {
                    for y in &b2 {
                        let base = x + y;
                        atoms.push(if gens.is_empty() {
                            Atom::Finite([base].into())
                        } else {
                            Atom::Grid { base, gens: gens.clone() }
                        });
                    }
                }
                Some(DescribedSet { atoms })
            }
        }
    }

    pub fn format(&self, u: &Universe) -> String {
        let e = |m: &Mono| u.format_elem(m);
        match self {
            Atom::Finite(s) => {
                format!("{{{}}}", s.iter().map(e).collect::<Vec<_>>().join(", "))
            }
            Atom::Interval { lo, hi } => {
                let (l, lv) = match lo {
                    Bound::Unbounded => ('(', "-inf".to_string()),
                    Bound::Closed(m) => ('[', e(m)),
                    Bound::Open(m) => ('(', e(m)),
                };
                let (r, rv) = match hi {
                    Bound::Unbounded => (')', "inf".to_string()),
                    Bound::Closed(m) => (']', e(m)),
                    Bound::Open(m) => (')', e(m)),
                };
                format!("{l}{lv}, {rv}{r}")
            }
            Atom::Progression { start, step } => {
                format!("prog({}; {})", e(start), format_step(u, step))
            }
            Atom::Grid { base, gens } => format!(
                "grid({}; {})",
                e(base),
                gens.iter().map(|g| format_step(u, g)).collect::<Vec<_>>().join(", ")
            ),
            Atom::Rect(a, b) => {
                let (ua, ub) = u.factors().expect("rect outside a product universe");
                format!("rect({}; {})", a.format(ua), b.format(ub))
            }
            Atom::Diff(a, b) => format!("diff({}; {})", a.format(u), b.format(u)),
        }
    }

    fn parse(s: &str, u: &Universe) -> Result<Atom> {
        let s = s.trim();
        let call = |name: &str| -> Option<Vec<String>> {
            let body = s.strip_prefix(name)?.strip_prefix('(')?.strip_suffix(')')?;
            split_top(body, ';').ok()
        };
        let bad = || Error::Parse(format!("bad set atom `{s}`"));
        if let Some(body) = s.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            let pts = split_top(body, ',')?
                .iter()
                .map(|p| u.parse_elem(p))
                .collect::<Result<BTreeSet<_>>>()?;
            return Ok(Atom::Finite(pts));
        }
        if let Some(args) = call("prog") {
            let [a, b] = args.as_slice() else { return Err(bad()) };
            return Ok(Atom::Progression { start: u.parse_elem(a)?, step: parse_step(u, b)? });
        }
        if let Some(args) = call("grid") {
            let [a, b] = args.as_slice() else { return Err(bad()) };
            let gens = split_top(b, ',')?
                .iter()
                .map(|g| parse_step(u, g))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Atom::Grid { base: u.parse_elem(a)?, gens });
        }
        if let Some(args) = call("rect") {
            let [a, b] = args.as_slice() else { return Err(bad()) };
            let (ua, ub) = u.factors().ok_or_else(bad)?;
            return Ok(Atom::Rect(
                Box::new(DescribedSet::parse(a, ua)?),
                Box::new(DescribedSet::parse(b, ub)?),
            ));
        }
        if let Some(args) = call("diff") {
            let [a, b] = args.as_slice() else { return Err(bad()) };
            let inner = Atom::parse(a, u)?;
            return Ok(Atom::Diff(Box::new(inner), Box::new(DescribedSet::parse(b, u)?)));
        }
        let open = s.chars().next().ok_or_else(bad)?;
        let close = s.chars().last().ok_or_else(bad)?;
        if matches!(open, '[' | '(') && matches!(close, ']' | ')') && s.len() >= 2 {
            let parts = split_top(&s[1..s.len() - 1], ',')?;
            let [a, b] = parts.as_slice() else { return Err(bad()) };
            let lo = match (open, a.as_str()) {
                (_, "-inf") => Bound::Unbounded,
                ('[', v) => Bound::Closed(u.parse_elem(v)?),
                (_, v) => Bound::Open(u.parse_elem(v)?),
            };
            let hi = match (close, b.as_str()) {
                (_, "inf") => Bound::Unbounded,
                (']', v) => Bound::Closed(u.parse_elem(v)?),
                (_, v) => Bound::Open(u.parse_elem(v)?),
            };
            return Ok(Atom::Interval { lo, hi });
        }
        Err(bad())
    }
}

/// Steps and generators may leave the universe (negative steps in ℕ),
/// so they are written in the ambient lattice notation.
fn format_step(u: &Universe, m: &Mono) -> String {
    match u {
        Universe::Lattice { names: Some(_), .. } => u.format_elem(m),
        _ => m.to_string(),
    }
}

fn parse_step(u: &Universe, s: &str) -> Result<Mono> {
    use crate::bornology::universe::{parse_q, Domain};
    if let Universe::Lattice { names: Some(names), arity, .. } = u {
        let ambient = Universe::Lattice { domain: Domain::Rat, arity: *arity, names: Some(names.clone()) };
        return ambient.parse_elem(s);
    }
    let flat = flatten_tuple(s)?;
    if flat.len() != u.arity() {
        return Err(Error::Parse(format!("step `{s}` has the wrong arity")));
    }
    Ok(Mono::new(flat.iter().map(|p| parse_q(p)).collect::<Result<Vec<_>>>()?))
}

fn flatten_tuple(s: &str) -> Result<Vec<String>> {
    let s = s.trim();
    if s.starts_with('(') {
        let mut out = Vec::new();
        for part in crate::bornology::universe::split_tuple(s)? {
            out.extend(flatten_tuple(&part)?);
        }
        Ok(out)
    } else {
        Ok(vec![s.to_string()])
    }
}

fn first_arity(s: &DescribedSet) -> Option<usize> {
    let mut k = None;
    s.for_each_number(&mut |m| {
        k.get_or_insert(m.arity());
    });
    k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bornology::universe::Domain;

    #[test]
    fn membership() {
        let z = Universe::int();
        let evens = DescribedSet::progression(Mono::int(0), Mono::int(2))
            .union(&DescribedSet::progression(Mono::int(-2), Mono::int(-2)));
        assert!(evens.contains(&z, &Mono::int(-4)));
        assert!(!evens.contains(&z, &Mono::int(3)));
        let g = DescribedSet::grid(Mono::int(1), vec![Mono::int(3), Mono::int(5)]);
        assert!(g.contains(&z, &Mono::int(9)));
        assert!(!g.contains(&z, &Mono::int(8)));
        let d = DescribedSet::at_least(Mono::int(0)).minus(&evens);
        assert!(d.contains(&z, &Mono::int(7)));
        assert!(!d.contains(&z, &Mono::int(6)));
    }

    #[test]
    fn codec_roundtrip() {
        let z = Universe::int();
        for s in ["{0, 2, 4} | {7}", "prog(0; -1)", "[3, inf)", "(-inf, 2)", "grid(1; 2, 3)", "diff([0, inf); prog(0; 2))"] {
            let set = DescribedSet::parse(s, &z).unwrap();
            assert_eq!(set.format(&z), s);
        }
        let m = Universe::monomials(&["x"], Domain::Rat);
        let s = DescribedSet::parse("grid(x^-1; x^(1/2), x)", &m).unwrap();
        assert_eq!(s.format(&m), "grid(x^-1; x^(1/2), x)");
        let p = Universe::product(Universe::nat(), Universe::nat());
        let r = DescribedSet::parse("rect({0, 1}; prog(0; 1)) | prog((0, 0); (1, 1))", &p).unwrap();
        assert_eq!(r.format(&p), "rect({0, 1}; prog(0; 1)) | prog((0, 0); (1, 1))");
        assert!(r.contains(&p, &Mono::ints(&[1, 9])));
        assert!(r.contains(&p, &Mono::ints(&[5, 5])));
        assert!(!r.contains(&p, &Mono::ints(&[5, 4])));
    }

    #[test]
    fn validation() {
        let n = Universe::nat();
        assert!(DescribedSet::finite([Mono::int(-1)]).validate(&n).is_err());
        let bad = DescribedSet::from(Atom::Grid { base: Mono::int(0), gens: vec![Mono::int(-1)] });
        assert!(bad.validate(&n).is_err());
        assert!(DescribedSet::rect(DescribedSet::empty(), DescribedSet::empty()).validate(&n).is_err());
    }

    #[test]
    fn minkowski_of_grids() {
        let z = Universe::int();
        let a = DescribedSet::grid(Mono::int(1), vec![Mono::int(2)]);
        let b = DescribedSet::finite([Mono::int(0), Mono::int(10)]);
        let s = a.minkowski(&b).unwrap();
        assert!(s.contains(&z, &Mono::int(11)));
        assert!(!s.contains(&z, &Mono::int(0)));
    }
}
