//! Streams of elements of described sets.
//!
//! Ascending streams exist for well-ordered atoms, descending ones for
//! reverse-well-ordered atoms. A difference filters the stream of its
//! first argument and gives up after `REJECT_BUDGET` consecutive misses,
//! so a stream may end early but never yields a non-member.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::iter::Peekable;

use crate::bornology::set::{Atom, Bound, DescribedSet};
use crate::bornology::universe::{Domain, Universe};
use crate::mono::{Mono, Q};

pub const REJECT_BUDGET: usize = 1 << 16;

pub type Stream = Box<dyn Iterator<Item = Mono> + Send>;

/// Elements in increasing order, or `None` if some atom is not
/// enumerable upwards.
pub fn ascending(s: &DescribedSet, u: &Universe) -> Option<Stream> {
    let streams = s
        .atoms()
        .iter()
        .map(|a| atom_up(a, u))
        .collect::<Option<Vec<_>>>()?;
    let u = u.clone();
    Some(Box::new(Merge::new(streams, false).filter(move |x| u.contains(x))))
}

/// Elements in decreasing order.
pub fn descending(s: &DescribedSet, u: &Universe) -> Option<Stream> {
    let streams = s
        .atoms()
        .iter()
        .map(|a| atom_down(a, u))
        .collect::<Option<Vec<_>>>()?;
    let u = u.clone();
    Some(Box::new(Merge::new(streams, true).filter(move |x| u.contains(x))))
}

/// Some enumeration without repetitions: ascending if possible, then
/// descending, then an interleaving of per-atom streams.
pub fn any_order(s: &DescribedSet, u: &Universe) -> Option<Stream> {
    if let Some(st) = ascending(s, u) {
        return Some(st);
    }
    if let Some(st) = descending(s, u) {
        return Some(st);
    }
    let streams = s
        .atoms()
        .iter()
        .map(|a| atom_up(a, u).or_else(|| atom_down(a, u)).or_else(|| atom_any(a, u)))
        .collect::<Option<Vec<_>>>()?;
    let u = u.clone();
    let mut seen = HashSet::new();
    Some(Box::new(RoundRobin { streams, next: 0 }.filter(move |x| u.contains(x) && seen.insert(x.clone()))))
}

/// The first `n` elements of the best available enumeration.
pub fn window(s: &DescribedSet, u: &Universe, n: usize) -> Option<Vec<Mono>> {
    Some(any_order(s, u)?.take(n).collect())
}

fn integral_line(u: &Universe) -> bool {
    matches!(u.line_domain(), Some(Domain::Nat | Domain::Int)) && u.len().is_none()
}

fn ceil_int(b: &Bound) -> Option<i64> {
    match b {
        Bound::Unbounded => None,
        Bound::Closed(m) => Some(m.coords()[0].ceil().to_integer()),
        Bound::Open(m) => Some((m.coords()[0].floor() + Q::from_integer(1)).to_integer()),
    }
}

fn floor_int(b: &Bound) -> Option<i64> {
    match b {
        Bound::Unbounded => None,
        Bound::Closed(m) => Some(m.coords()[0].floor().to_integer()),
        Bound::Open(m) => Some((m.coords()[0].ceil() - Q::from_integer(1)).to_integer()),
    }
}

fn atom_up(a: &Atom, u: &Universe) -> Option<Stream> {
    match a {
        Atom::Finite(s) => Some(Box::new(s.clone().into_iter())),
        Atom::Progression { start, step } if step.is_positive() => {
            let (start, step) = (start.clone(), step.clone());
            Some(Box::new(std::iter::successors(Some(start), move |x| Some(x + &step))))
        }
        Atom::Grid { base, gens } => Some(Box::new(GridWalk::new(base.clone(), gens.clone()))),
        Atom::Interval { lo, hi } if integral_line(u) => {
            let mut from = ceil_int(lo)?;
            if u.line_domain() == Some(Domain::Nat) {
                from = from.max(0);
            }
            match floor_int(hi) {
                Some(to) => Some(Box::new((from..=to).map(Mono::int))),
                None => Some(Box::new((from..).map(Mono::int))),
            }
        }
        Atom::Interval { lo: Bound::Closed(x), hi: Bound::Closed(y) } if x == y => {
            Some(Box::new(std::iter::once(x.clone())))
        }
        Atom::Rect(x, y) => {
            let (ua, ub) = u.factors()?;
            if ascending(y, ub)?.next().is_none() {
                return Some(Box::new(std::iter::empty()));
            }
            let outer = ascending(x, ua)?;
            let (y, ub) = ((**y).clone(), ub.clone());
            Some(Box::new(outer.flat_map(move |p| {
                ascending(&y, &ub).expect("checked above").map(move |q| p.concat(&q))
            })))
        }
        Atom::Diff(x, y) => Some(filtered(atom_up(x, u)?, (**y).clone(), u.clone())),
        _ => None,
    }
}

fn atom_down(a: &Atom, u: &Universe) -> Option<Stream> {
    match a {
        Atom::Finite(s) => Some(Box::new(s.clone().into_iter().rev())),
        Atom::Progression { start, step } if !step.is_positive() => {
            let (start, step) = (start.clone(), step.clone());
            let floor = match u.line_domain() {
                Some(Domain::Nat) => Some(Mono::int(0)),
                _ => None,
            };
            Some(Box::new(
                std::iter::successors(Some(start), move |x| Some(x + &step))
                    .take_while(move |x| floor.as_ref().is_none_or(|f| x >= f)),
            ))
        }
        Atom::Grid { base, gens } if gens.is_empty() => Some(Box::new(std::iter::once(base.clone()))),
        Atom::Interval { lo, hi } if integral_line(u) => {
            let mut to = floor_int(hi)?;
            let mut from = ceil_int(lo);
            if u.line_domain() == Some(Domain::Nat) {
                from = Some(from.unwrap_or(0).max(0));
                to = to.max(-1);
            }
            match from {
                Some(from) => Some(Box::new((from..=to).rev().map(Mono::int))),
                None => Some(Box::new((0i64..).map(move |k| Mono::int(to - k)))),
            }
        }
        Atom::Interval { lo: Bound::Closed(x), hi: Bound::Closed(y) } if x == y => {
            Some(Box::new(std::iter::once(x.clone())))
        }
        Atom::Rect(x, y) => {
            let (ua, ub) = u.factors()?;
            if descending(y, ub)?.next().is_none() {
                return Some(Box::new(std::iter::empty()));
            }
            let outer = descending(x, ua)?;
            let (y, ub) = ((**y).clone(), ub.clone());
            Some(Box::new(outer.flat_map(move |p| {
                descending(&y, &ub).expect("checked above").map(move |q| p.concat(&q))
            })))
        }
        Atom::Diff(x, y) => Some(filtered(atom_down(x, u)?, (**y).clone(), u.clone())),
        _ => None,
    }
}

/// Integer intervals unbounded on both sides, in order of magnitude.
fn atom_any(a: &Atom, u: &Universe) -> Option<Stream> {
    match a {
        Atom::Interval { lo: Bound::Unbounded, hi: Bound::Unbounded } if integral_line(u) => Some(Box::new(
            (0i64..).flat_map(|n| if n == 0 { vec![0] } else { vec![n, -n] }).map(Mono::int),
        )),
        Atom::Diff(x, y) => Some(filtered(atom_any(x, u)?, (**y).clone(), u.clone())),
        _ => None,
    }
}

fn filtered(inner: Stream, out: DescribedSet, u: Universe) -> Stream {
    Box::new(Filtered { inner, out, u })
}

struct Filtered {
    inner: Stream,
    out: DescribedSet,
    u: Universe,
}

impl Iterator for Filtered {
    type Item = Mono;

    fn next(&mut self) -> Option<Mono> {
        for _ in 0..REJECT_BUDGET {
            let x = self.inner.next()?;
            if !self.out.contains(&self.u, &x) {
                return Some(x);
            }
        }
        None
    }
}

/// Ascending walk through `base + ℕ·gens`.
struct GridWalk {
    heap: BinaryHeap<Reverse<Mono>>,
    seen: HashSet<Mono>,
    gens: Vec<Mono>,
}

impl GridWalk {
    fn new(base: Mono, gens: Vec<Mono>) -> GridWalk {
        let mut heap = BinaryHeap::new();
        let mut seen = HashSet::new();
        seen.insert(base.clone());
        heap.push(Reverse(base));
        GridWalk { heap, seen, gens }
    }
}

impl Iterator for GridWalk {
    type Item = Mono;

    fn next(&mut self) -> Option<Mono> {
        let Reverse(x) = self.heap.pop()?;
        self.seen.remove(&x);
        for g in &self.gens {
            let y = &x + g;
            if self.seen.insert(y.clone()) {
                self.heap.push(Reverse(y));
            }
        }
        Some(x)
    }
}

/// K-way merge of sorted streams, dropping duplicates.
struct Merge {
    streams: Vec<Peekable<Stream>>,
    desc: bool,
    last: Option<Mono>,
}

impl Merge {
    fn new(streams: Vec<Stream>, desc: bool) -> Merge {
        Merge { streams: streams.into_iter().map(Iterator::peekable).collect(), desc, last: None }
    }
}

impl Iterator for Merge {
    type Item = Mono;

    fn next(&mut self) -> Option<Mono> {
        loop {
            let mut best: Option<(usize, Mono)> = None;
            for (i, st) in self.streams.iter_mut().enumerate() {
                let Some(x) = st.peek() else { continue };
                let better = match &best {
                    None => true,
                    Some((_, y)) => {
                        if self.desc { x > y } else { x < y }
                    }
                };
                if better {
                    best = Some((i, x.clone()));
                }
            }
            let x = self.streams[best?.0].next().expect("peeked");
            if self.last.as_ref() != Some(&x) {
                self.last = Some(x.clone());
                return Some(x);
            }
        }
    }
}

struct RoundRobin {
    streams: Vec<Stream>,
    next: usize,
}

impl Iterator for RoundRobin {
    type Item = Mono;

    fn next(&mut self) -> Option<Mono> {
        while !self.streams.is_empty() {
            let i = self.next % self.streams.len();
            match self.streams[i].next() {
                Some(x) => {
                    self.next = i + 1;
                    return Some(x);
                }
                None => {
                    drop(self.streams.remove(i));
                    self.next = i;
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str, u: &Universe) -> DescribedSet {
        DescribedSet::parse(s, u).unwrap()
    }

    fn ints(v: Vec<Mono>) -> Vec<i64> {
        v.into_iter().map(|m| m.as_int().unwrap()).collect()
    }

    #[test]
    fn ascending_merge() {
        let z = Universe::int();
        let s = set("grid(0; 3, 5) | prog(1; 4) | {-2}", &z);
        let got = ints(ascending(&s, &z).unwrap().take(10).collect());
        assert_eq!(got, vec![-2, 0, 1, 3, 5, 6, 8, 9, 10, 11]);
    }

    #[test]
    fn descending_stops_at_zero_in_naturals() {
        let n = Universe::nat();
        let s = set("prog(7; -3) | [2, 4]", &n);
        let got = ints(descending(&s, &n).unwrap().collect());
        assert_eq!(got, vec![7, 4, 3, 2, 1]);
    }

    #[test]
    fn differences_filter() {
        let n = Universe::nat();
        let s = set("diff(prog(0; 1); prog(0; 2))", &n);
        let got = ints(ascending(&s, &n).unwrap().take(4).collect());
        assert_eq!(got, vec![1, 3, 5, 7]);
        let finite = set("diff(prog(0; 1); [3, inf))", &n);
        assert_eq!(ints(ascending(&finite, &n).unwrap().collect()), vec![0, 1, 2]);
    }

    #[test]
    fn lexicographic_rectangles() {
        let u = Universe::product(Universe::nat(), Universe::nat());
        let s = set("rect({0, 1}; [0, 2])", &u);
        let got: Vec<Mono> = ascending(&s, &u).unwrap().collect();
        assert_eq!(got.len(), 6);
        assert!(got.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rectangles_with_an_empty_side() {
        let u = Universe::product(Universe::nat(), Universe::nat());
        let s = DescribedSet::rect(set("prog(0; 1)", &Universe::nat()), DescribedSet::empty());
        assert!(window(&s, &u, 4).unwrap().is_empty());
    }

    #[test]
    fn whole_integers() {
        let z = Universe::int();
        let got = ints(window(&set("(-inf, inf)", &z), &z, 5).unwrap());
        assert_eq!(got, vec![0, 1, -1, 2, -2]);
    }
}
