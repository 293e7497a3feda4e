//! Decision procedures for finiteness and order properties of described sets.
//!
//! On a line (ℕ, ℤ, ℚ or a finite universe) every described set is, after
//! scaling by the common denominator `L`, a finite set plus two ultimately
//! periodic tails on `(1/L)ℤ`, plus (over ℚ) open cells of an interval
//! partition that are either fully in or fully out off the lattice. All
//! properties are then decided by sampling one period past a threshold.
//!
//! Product universes are handled through unions of rectangles whose
//! factors recurse. Everything else falls back to per-atom rules that
//! answer `None` rather than guess.

use num_integer::Integer;
use num_traits::Signed;

use crate::bornology::set::{Atom, Bound, DescribedSet};
use crate::bornology::universe::{Domain, Universe};
use crate::mono::{Mono, Q};

pub type Tri = Option<bool>;

pub fn and3(a: Tri, b: Tri) -> Tri {
    match (a, b) {
        (Some(false), _) | (_, Some(false)) => Some(false),
        (Some(true), Some(true)) => Some(true),
        _ => None,
    }
}

pub fn or3(a: Tri, b: Tri) -> Tri {
    match (a, b) {
        (Some(true), _) | (_, Some(true)) => Some(true),
        (Some(false), Some(false)) => Some(false),
        _ => None,
    }
}

/// Boolean combination of atoms.
#[derive(Clone, Debug)]
pub enum SetExpr {
    All,
    Atom(Atom),
    Union(Vec<SetExpr>),
    Inter(Vec<SetExpr>),
    Diff(Box<SetExpr>, Box<SetExpr>),
}

impl SetExpr {
    pub fn of(s: &DescribedSet) -> SetExpr {
        SetExpr::Union(s.atoms().iter().map(SetExpr::of_atom).collect())
    }

    fn of_atom(a: &Atom) -> SetExpr {
        match a {
            Atom::Diff(x, y) => SetExpr::Diff(Box::new(SetExpr::of_atom(x)), Box::new(SetExpr::of(y))),
            other => SetExpr::Atom(other.clone()),
        }
    }

    pub fn diff(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::Diff(Box::new(a), Box::new(b))
    }

    pub fn inter(a: SetExpr, b: SetExpr) -> SetExpr {
        SetExpr::Inter(vec![a, b])
    }

    /// Membership, ignoring the universe constraint.
    fn has(&self, u: &Universe, x: &Mono) -> bool {
        match self {
            SetExpr::All => true,
            SetExpr::Atom(a) => a.contains(u, x),
            SetExpr::Union(v) => v.iter().any(|e| e.has(u, x)),
            SetExpr::Inter(v) => v.iter().all(|e| e.has(u, x)),
            SetExpr::Diff(a, b) => a.has(u, x) && !b.has(u, x),
        }
    }

    pub fn contains(&self, u: &Universe, x: &Mono) -> bool {
        u.contains(x) && self.has(u, x)
    }

    fn for_each_atom(&self, f: &mut dyn FnMut(&Atom)) {
        match self {
            SetExpr::All => {}
            SetExpr::Atom(a) => f(a),
            SetExpr::Union(v) | SetExpr::Inter(v) => v.iter().for_each(|e| e.for_each_atom(f)),
            SetExpr::Diff(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
        }
    }
}

const MAX_PERIOD: i128 = 1 << 21;
const MAX_SCAN: i128 = 1 << 22;
const MAX_MAGNITUDE: i128 = 1 << 50;

/// Exact shape of a described set on a line.
#[derive(Clone, Debug)]
pub struct LineProfile {
    /// Some open cell is contained in the set (only over ℚ).
    pub dense: bool,
    pub dense_up: bool,
    pub dense_down: bool,
    /// Infinitely many lattice points towards +∞ / -∞.
    pub up: bool,
    pub down: bool,
    scale: i64,
    threshold: i128,
}

impl LineProfile {
    pub fn finite(&self) -> bool {
        !self.dense && !self.up && !self.down
    }

    pub fn well_ordered(&self) -> bool {
        !self.dense && !self.down
    }

    pub fn reverse_well_ordered(&self) -> bool {
        !self.dense && !self.up
    }

    pub fn bounded_above(&self) -> bool {
        !self.dense_up && !self.up
    }

    pub fn bounded_below(&self) -> bool {
        !self.dense_down && !self.down
    }
}

fn lattice_point(m: i128, l: i64) -> Mono {
    Mono::new([Q::new(m as i64, l)])
}

/// Profile of `e` on a one-dimensional universe.
pub fn line_profile(e: &SetExpr, u: &Universe) -> Option<LineProfile> {
    let domain = u.line_domain()?;
    let mut l: i64 = 1;
    let mut overflow = false;
    e.for_each_atom(&mut |a| {
        DescribedSet::from(a.clone()).for_each_number(&mut |m| {
            let d = m.denom_lcm();
            match (l as i128).checked_mul(d as i128) {
                Some(x) if x < MAX_MAGNITUDE => l = l.lcm(&d),
                _ => overflow = true,
            }
        })
    });
    if overflow {
        return None;
    }
    let scaled = |x: &Mono| -> Option<i128> {
        let v = x.coords()[0] * Q::from_integer(l);
        (v.to_integer().abs() < MAX_MAGNITUDE as i64).then(|| v.to_integer() as i128)
    };
    let mut t: i128 = 1;
    let mut p: i128 = 1;
    let mut endpoints: Vec<Q> = Vec::new();
    let mut ok = true;
    e.for_each_atom(&mut |a| match a {
        Atom::Finite(s) => {
            for x in s {
                match scaled(x) {
                    Some(m) => t = t.max(m.abs() + 1),
                    None => ok = false,
                }
            }
        }
        Atom::Interval { lo, hi } => {
            for b in [lo, hi] {
                if let Some(x) = b.point() {
                    match scaled(x) {
                        Some(m) => t = t.max(m.abs() + 1),
                        None => ok = false,
                    }
                    endpoints.push(x.coords()[0]);
                }
            }
        }
        Atom::Progression { start, step } => match (scaled(start), scaled(step)) {
            (Some(m0), Some(q)) => {
                t = t.max(m0.abs() + 1);
                p = p.lcm(&q.abs());
            }
            _ => ok = false,
        },
        Atom::Grid { base, gens } => {
            let b = scaled(base);
            let g: Option<Vec<i128>> = gens.iter().map(scaled).collect();
            match (b, g) {
                (Some(b), Some(g)) => {
                    let mut bound = b.abs() + 1;
                    if let (Some(lo), Some(hi)) = (g.iter().min(), g.iter().max()) {
                        bound += lo * hi;
                        p = p.lcm(&g.iter().fold(0i128, |d, x| d.gcd(x)));
                    }
                    t = t.max(bound);
                }
                _ => ok = false,
            }
        }
        Atom::Rect(..) | Atom::Diff(..) => ok = false,
    });
    if !ok {
        return None;
    }
    match domain {
        Domain::Nat | Domain::Int => p = p.lcm(&(l as i128)),
        Domain::Rat => {}
    }
    if let Some(n) = u.len() {
        t = t.max(n as i128 + 1);
    }
    if p > MAX_PERIOD || t > MAX_MAGNITUDE {
        return None;
    }

    let mut prof = LineProfile {
        dense: false,
        dense_up: false,
        dense_down: false,
        up: false,
        down: false,
        scale: l,
        threshold: t,
    };

    if domain == Domain::Rat && u.len().is_none() {
        endpoints.sort();
        endpoints.dedup();
        let half = Q::new(1, 2 * l);
        let probe = |r: Q| e.contains(u, &Mono::new([r]));
        if endpoints.is_empty() {
            let c = probe(half);
            prof.dense = c;
            prof.dense_up = c;
            prof.dense_down = c;
        } else {
            prof.dense_down = probe(endpoints[0] - half);
            prof.dense_up = probe(*endpoints.last().unwrap() + half);
            prof.dense = prof.dense_down
                || prof.dense_up
                || endpoints.windows(2).any(|w| probe(w[0] + half));
        }
    }

    for r in 0..p {
        if !prof.up && e.contains(u, &lattice_point(t + r, l)) {
            prof.up = true;
        }
        if !prof.down && e.contains(u, &lattice_point(-t - r, l)) {
            prof.down = true;
        }
    }
    Some(prof)
}

/// Elements of a finite set on a line, in increasing order.
pub fn line_elements(e: &SetExpr, u: &Universe, prof: &LineProfile) -> Option<Vec<Mono>> {
    if !prof.finite() || 2 * prof.threshold > MAX_SCAN {
        return None;
    }
    let t = prof.threshold;
    Some(
        (-t..=t)
            .map(|m| lattice_point(m, prof.scale))
            .filter(|x| e.contains(u, x))
            .collect(),
    )
}

/// Three-valued order and size facts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Props {
    pub empty: Tri,
    pub finite: Tri,
    pub wo: Tri,
    pub rwo: Tri,
    /// Well-ordered of order type below ω², i.e. a finite union of sets
    /// of order type at most ω.
    pub wo_omega: Tri,
}

impl Props {
    const EMPTY: Props = Props {
        empty: Some(true),
        finite: Some(true),
        wo: Some(true),
        rwo: Some(true),
        wo_omega: Some(true),
    };

    const UNKNOWN: Props = Props { empty: None, finite: None, wo: None, rwo: None, wo_omega: None };

    fn finite_nonempty() -> Props {
        Props { empty: Some(false), ..Props::EMPTY }
    }

    fn infinite(wo: bool, rwo: bool, wo_omega: bool) -> Props {
        Props {
            empty: Some(false),
            finite: Some(false),
            wo: Some(wo),
            rwo: Some(rwo),
            wo_omega: Some(wo_omega),
        }
    }

    /// Keep only the positive answers, which pass to subsets.
    fn for_subset(self) -> Props {
        let keep = |t: Tri| if t == Some(true) { Some(true) } else { None };
        Props {
            empty: keep(self.empty),
            finite: keep(self.finite),
            wo: keep(self.wo),
            rwo: keep(self.rwo),
            wo_omega: keep(self.wo_omega),
        }
    }

    fn union(self, o: Props) -> Props {
        Props {
            empty: and3(self.empty, o.empty),
            finite: and3(self.finite, o.finite),
            wo: and3(self.wo, o.wo),
            rwo: and3(self.rwo, o.rwo),
            wo_omega: and3(self.wo_omega, o.wo_omega),
        }
    }

    fn inter(self, o: Props) -> Props {
        Props {
            empty: or3_pos(self.empty, o.empty),
            finite: or3_pos(self.finite, o.finite),
            wo: or3_pos(self.wo, o.wo),
            rwo: or3_pos(self.rwo, o.rwo),
            wo_omega: or3_pos(self.wo_omega, o.wo_omega),
        }
    }
}

fn or3_pos(a: Tri, b: Tri) -> Tri {
    if a == Some(true) || b == Some(true) {
        Some(true)
    } else {
        None
    }
}

pub fn props_of(s: &DescribedSet, u: &Universe) -> Props {
    props(&SetExpr::of(s), u)
}

pub fn props(e: &SetExpr, u: &Universe) -> Props {
    if u.line_domain().is_some() {
        return match line_profile(e, u) {
            Some(p) => {
                let empty = if p.finite() {
                    line_elements(e, u, &p).map(|v| v.is_empty())
                } else {
                    Some(false)
                };
                let wo = p.well_ordered();
                Props {
                    empty,
                    finite: Some(p.finite()),
                    wo: Some(wo),
                    rwo: Some(p.reverse_well_ordered()),
                    wo_omega: Some(wo),
                }
            }
            None => Props::UNKNOWN,
        };
    }
    if let Some((ua, ub)) = u.factors() {
        if let Some(pieces) = rects(e, u) {
            return pieces.iter().fold(Props::EMPTY, |acc, (a, b)| {
                acc.union(rect_props(props(a, ua), props(b, ub)))
            });
        }
    }
    fallback(e, u)
}

fn rect_props(a: Props, b: Props) -> Props {
    let empty = or3(a.empty, b.empty);
    if empty == Some(true) {
        return Props::EMPTY;
    }
    let guard = |t: Tri| or3(empty, t);
    Props {
        empty,
        finite: guard(and3(a.finite, b.finite)),
        wo: guard(and3(a.wo, b.wo)),
        rwo: guard(and3(a.rwo, b.rwo)),
        wo_omega: guard(or3(and3(a.finite, b.wo_omega), and3(a.wo_omega, b.finite))),
    }
}

type Rects = Vec<(SetExpr, SetExpr)>;

/// Rewrite as a union of rectangles, when every atom is one.
pub fn rects(e: &SetExpr, u: &Universe) -> Option<Rects> {
    let (ua, _) = u.factors()?;
    let k = ua.arity();
    match e {
        SetExpr::All => Some(vec![(SetExpr::All, SetExpr::All)]),
        SetExpr::Atom(Atom::Finite(pts)) => Some(
            pts.iter()
                .map(|x| {
                    let (a, b) = x.split(k);
                    (SetExpr::Atom(Atom::Finite([a].into())), SetExpr::Atom(Atom::Finite([b].into())))
                })
                .collect(),
        ),
        SetExpr::Atom(Atom::Rect(a, b)) => Some(vec![(SetExpr::of(a), SetExpr::of(b))]),
        SetExpr::Atom(Atom::Progression { start, step }) => {
            let (s1, s2) = start.split(k);
            let (d1, d2) = step.split(k);
            let pt = |m: Mono| SetExpr::Atom(Atom::Finite([m].into()));
            if d1.is_zero() {
                Some(vec![(pt(s1), SetExpr::Atom(Atom::Progression { start: s2, step: d2 }))])
            } else if d2.is_zero() {
                Some(vec![(SetExpr::Atom(Atom::Progression { start: s1, step: d1 }), pt(s2))])
            } else {
                None
            }
        }
        SetExpr::Atom(_) => None,
        SetExpr::Union(v) => {
            let mut out = Vec::new();
            for x in v {
                out.extend(rects(x, u)?);
            }
            Some(out)
        }
        SetExpr::Inter(v) => {
            let mut acc: Rects = vec![(SetExpr::All, SetExpr::All)];
            for x in v {
                let r = rects(x, u)?;
                let mut next = Vec::new();
                for (a, b) in &acc {
                    for (c, d) in &r {
                        next.push((SetExpr::inter(a.clone(), c.clone()), SetExpr::inter(b.clone(), d.clone())));
                    }
                }
                acc = next;
            }
            Some(acc)
        }
        SetExpr::Diff(x, y) => {
            let mut acc = rects(x, u)?;
            for (c, d) in rects(y, u)? {
                let mut next = Vec::new();
                for (a, b) in acc {
                    // A×B \ C×D = (A\C)×B ∪ (A∩C)×(B\D)
                    next.push((SetExpr::diff(a.clone(), c.clone()), b.clone()));
                    next.push((SetExpr::inter(a, c.clone()), SetExpr::diff(b, d.clone())));
                }
                acc = next;
            }
            Some(acc)
        }
    }
}

/// Coordinate domains when `u` is a lattice or a product of lattices.
fn coord_domains(u: &Universe) -> Option<Vec<Domain>> {
    match u {
        Universe::Lattice { domain, arity, .. } => Some(vec![*domain; *arity]),
        Universe::Product(a, b) => {
            let mut v = coord_domains(a)?;
            v.extend(coord_domains(b)?);
            Some(v)
        }
        Universe::Finite(_) => None,
    }
}

/// Does `{start + Σ k_i·dirs_i}` stay inside the universe?
fn stays_inside(u: &Universe, start: &Mono, dirs: &[Mono]) -> bool {
    let Some(doms) = coord_domains(u) else { return false };
    u.contains(start)
        && dirs.iter().all(|d| {
            d.coords().iter().zip(&doms).all(|(c, dom)| match dom {
                Domain::Nat => c.is_integer() && !c.is_negative(),
                Domain::Int => c.is_integer(),
                Domain::Rat => true,
            })
        })
}

fn fallback(e: &SetExpr, u: &Universe) -> Props {
    match e {
        SetExpr::All => {
            if u.is_finite() {
                Props { empty: Some(u.is_empty()), ..Props::EMPTY }
            } else {
                Props { empty: Some(false), finite: Some(false), ..Props::UNKNOWN }
            }
        }
        SetExpr::Union(v) => v.iter().fold(Props::EMPTY, |acc, x| acc.union(fallback(x, u))),
        SetExpr::Inter(v) => v
            .iter()
            .map(|x| fallback(x, u))
            .fold(Props::UNKNOWN, |acc, p| acc.inter(p)),
        SetExpr::Diff(x, y) => {
            let px = fallback(x, u);
            let py = fallback(y, u);
            if py.finite == Some(true) {
                let empty = if px.finite == Some(false) { Some(false) } else { px.empty.filter(|&b| b) };
                Props { empty, ..px }
            } else {
                px.for_subset()
            }
        }
        SetExpr::Atom(a) => atom_props(a, u),
    }
}

fn atom_props(a: &Atom, u: &Universe) -> Props {
    match a {
        Atom::Finite(s) => {
            if s.iter().any(|x| u.contains(x)) {
                Props::finite_nonempty()
            } else {
                Props::EMPTY
            }
        }
        Atom::Progression { start, step } => {
            let amb = Props::infinite(step.is_positive(), !step.is_positive(), step.is_positive());
            if stays_inside(u, start, std::slice::from_ref(step)) {
                amb
            } else {
                amb.for_subset()
            }
        }
        Atom::Grid { base, gens } => {
            if gens.is_empty() {
                return atom_props(&Atom::Finite([base.clone()].into()), u);
            }
            let lead = gens[0].lead_index();
            let same_lead = gens.iter().all(|g| g.lead_index() == lead);
            let amb = Props::infinite(true, false, same_lead);
            if stays_inside(u, base, gens) {
                amb
            } else {
                amb.for_subset()
            }
        }
        Atom::Interval { lo, hi } => match (lo, hi) {
            (Bound::Closed(x), Bound::Closed(y)) if x == y => {
                atom_props(&Atom::Finite([x.clone()].into()), u)
            }
            (Bound::Closed(x) | Bound::Open(x), Bound::Closed(y) | Bound::Open(y)) if x > y => Props::EMPTY,
            _ => Props::UNKNOWN,
        },
        Atom::Rect(..) => Props::UNKNOWN,
        Atom::Diff(x, y) => fallback(&SetExpr::diff(SetExpr::of_atom(x), SetExpr::of(y)), u),
    }
}

/// Elements of a set known to be finite, when they can be listed.
pub fn finite_elements(s: &DescribedSet, u: &Universe) -> Option<Vec<Mono>> {
    let e = SetExpr::of(s);
    if u.line_domain().is_some() {
        let p = line_profile(&e, u)?;
        return line_elements(&e, u, &p);
    }
    // every atom finite on its own: list candidates and filter
    let mut out = std::collections::BTreeSet::new();
    for a in s.atoms() {
        match a {
            Atom::Finite(pts) => out.extend(pts.iter().filter(|x| u.contains(x)).cloned()),
            Atom::Rect(x, y) => {
                let (ua, ub) = u.factors()?;
                let xs = finite_elements(x, ua)?;
                let ys = finite_elements(y, ub)?;
                for p in &xs {
                    for q in &ys {
                        out.insert(p.concat(q));
                    }
                }
            }
            Atom::Diff(x, y) => {
                for m in finite_elements(&DescribedSet::from((**x).clone()), u)? {
                    if !y.contains(u, &m) {
                        out.insert(m);
                    }
                }
            }
            Atom::Grid { base, gens } if gens.is_empty() => {
                if u.contains(base) {
                    out.insert(base.clone());
                }
            }
            _ => return None,
        }
    }
    Some(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Universe {
        Universe::int()
    }

    fn p(s: &str, u: &Universe) -> Props {
        props_of(&DescribedSet::parse(s, u).unwrap(), u)
    }

    #[test]
    fn integer_tails() {
        let u = z();
        let nat = p("prog(0; 1)", &u);
        assert_eq!((nat.finite, nat.wo, nat.rwo), (Some(false), Some(true), Some(false)));
        let neg = p("prog(0; -1)", &u);
        assert_eq!((neg.wo, neg.rwo), (Some(false), Some(true)));
        let d = p("diff(prog(0; 1); prog(0; 2) | prog(1; 2))", &u);
        assert_eq!((d.finite, d.empty), (Some(true), Some(true)));
        let g = p("diff(grid(0; 3, 5); prog(8; 1))", &u);
        assert_eq!((g.finite, g.empty), (Some(true), Some(false)));
    }

    #[test]
    fn rationals_with_dense_cells() {
        let u = Universe::rat();
        let i = p("[0, 1]", &u);
        assert_eq!((i.finite, i.wo, i.rwo), (Some(false), Some(false), Some(false)));
        let pt = p("[1/2, 1/2]", &u);
        assert_eq!(pt.finite, Some(true));
        let g = p("grid(0; 1/2, 1/3)", &u);
        assert_eq!((g.finite, g.wo, g.rwo), (Some(false), Some(true), Some(false)));
        let cut = p("diff([0, 1]; grid(0; 1/2))", &u);
        assert_eq!(cut.finite, Some(false));
        let meet = props(
            &SetExpr::inter(
                SetExpr::of(&DescribedSet::parse("[0, 2]", &u).unwrap()),
                SetExpr::of(&DescribedSet::parse("grid(0; 1/3)", &u).unwrap()),
            ),
            &u,
        );
        assert_eq!(meet.finite, Some(true));
    }

    #[test]
    fn naturals_universe_cuts_negative_tails() {
        let u = Universe::nat();
        let s = p("prog(10; -1)", &u);
        assert_eq!(s.finite, Some(true));
        let e = line_profile(&SetExpr::of(&DescribedSet::parse("prog(10; -3)", &u).unwrap()), &u).unwrap();
        let els = line_elements(&SetExpr::of(&DescribedSet::parse("prog(10; -3)", &u).unwrap()), &u, &e).unwrap();
        assert_eq!(els, vec![Mono::int(1), Mono::int(4), Mono::int(7), Mono::int(10)]);
    }

    #[test]
    fn rectangles() {
        let u = Universe::product(Universe::nat(), Universe::nat());
        let r = p("rect({0, 1}; prog(0; 1))", &u);
        assert_eq!((r.finite, r.wo, r.wo_omega), (Some(false), Some(true), Some(true)));
        let q = p("rect(prog(0; 1); prog(0; 1))", &u);
        assert_eq!((q.wo, q.wo_omega), (Some(true), Some(false)));
        let d = p("diff(rect([0, 5]; [0, 5]); rect([0, 5]; [0, 4]))", &u);
        assert_eq!((d.finite, d.empty), (Some(true), Some(false)));
        let line = p("prog((0, 0); (1, 1))", &u);
        assert_eq!((line.finite, line.wo_omega), (Some(false), Some(true)));
    }

    #[test]
    fn lexicographic_grids() {
        let u = Universe::lattice(Domain::Int, 2);
        let a = p("grid((0, 0); (0, 1), (1, -3))", &u);
        assert_eq!((a.wo, a.wo_omega), (Some(true), Some(false)));
        let b = p("grid((0, 0); (1, 0), (1, 5))", &u);
        assert_eq!(b.wo_omega, Some(true));
    }
}
