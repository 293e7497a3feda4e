//! Grid certificates `{b + Σ k_i g_i : b ∈ B, k ∈ ℕ^m}` with positive generators.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use crate::bornology::{Atom, Bound, DescribedSet, Domain, Universe};
use crate::error::{Error, Result};
use crate::lattice;
use crate::mono::{Mono, Q};

/// Cap on decompositions visited for one coefficient.
pub const SPLIT_LIMIT: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridCertificate {
    bases: Vec<Mono>,
    gens: Vec<Mono>,
}

impl GridCertificate {
    pub fn new(bases: impl IntoIterator<Item = Mono>, gens: impl IntoIterator<Item = Mono>) -> Result<GridCertificate> {
        let bases: BTreeSet<Mono> = bases.into_iter().collect();
        let gens: BTreeSet<Mono> = gens.into_iter().collect();
        if let Some(g) = gens.iter().find(|g| !g.is_positive()) {
            return Err(Error::Certificate(format!("grid generator {g} is not ≻ 1")));
        }
        Ok(GridCertificate { bases: bases.into_iter().collect(), gens: gens.into_iter().collect() })
    }

    pub fn finite(points: impl IntoIterator<Item = Mono>) -> GridCertificate {
        GridCertificate::new(points, []).expect("no generators")
    }

    pub fn bases(&self) -> &[Mono] {
        &self.bases
    }

    pub fn gens(&self) -> &[Mono] {
        &self.gens
    }

    pub fn is_finite(&self) -> bool {
        self.gens.is_empty()
    }

    /// A grid certificate covering `s`, when every atom admits one.
    pub fn covering(s: &DescribedSet, u: &Universe) -> Result<GridCertificate> {
        let mut bases = Vec::new();
        let mut gens = Vec::new();
        for a in s.atoms() {
            cover_atom(a, u, &mut bases, &mut gens)?;
        }
        GridCertificate::new(bases, gens)
    }

    pub fn to_set(&self) -> DescribedSet {
        if self.gens.is_empty() {
            return DescribedSet::finite(self.bases.iter().cloned());
        }
        DescribedSet::from_atoms(
            self.bases.iter().map(|b| Atom::Grid { base: b.clone(), gens: self.gens.clone() }).collect(),
        )
    }

    pub fn contains(&self, x: &Mono) -> bool {
        self.bases.iter().any(|b| lattice::is_decomposable(&self.gens, &(x - b)))
    }

    /// Certificate of a product: pairwise base sums, merged generators.
    pub fn product(&self, other: &GridCertificate) -> GridCertificate {
        let bases = self.bases.iter().flat_map(|a| other.bases.iter().map(move |b| a + b));
        GridCertificate::new(bases, self.gens.iter().chain(&other.gens).cloned()).expect("positive generators")
    }

    pub fn union(&self, other: &GridCertificate) -> GridCertificate {
        GridCertificate::new(
            self.bases.iter().chain(&other.bases).cloned(),
            self.gens.iter().chain(&other.gens).cloned(),
        )
        .expect("positive generators")
    }

    pub fn translate(&self, t: &Mono) -> GridCertificate {
        GridCertificate { bases: self.bases.iter().map(|b| b + t).collect(), gens: self.gens.clone() }
    }

    /// Every base and generator is ≻ 1, so the whole set is.
    pub fn is_positive(&self) -> bool {
        self.bases.iter().all(Mono::is_positive)
    }

    /// The least element, which is the least base.
    pub fn min(&self) -> Option<&Mono> {
        self.bases.first()
    }

    /// The distinct `α ∈ self` with `target − α ∈ other`.
    pub fn splits(&self, other: &GridCertificate, target: &Mono) -> Result<Vec<Mono>> {
        let gens: Vec<Mono> = self.gens.iter().chain(&other.gens).cloned().collect();
        let m = self.gens.len();
        let mut out = BTreeSet::new();
        let mut visited = 0usize;
        for a in &self.bases {
            for b in &other.bases {
                let rest = &(target - a) - b;
                let flow = lattice::visit_decompositions(&gens, &rest, &mut |k| {
                    visited += 1;
                    if visited > SPLIT_LIMIT {
                        return ControlFlow::Break(());
                    }
                    let mut alpha = a.clone();
                    for (g, &c) in self.gens.iter().zip(&k[..m]) {
                        if c > 0 {
                            alpha = &alpha + &g.scale(Q::from_integer(c as i64));
                        }
                    }
                    out.insert(alpha);
                    ControlFlow::Continue(())
                });
                if flow.is_break() {
                    return Err(Error::Unsupported(format!("more than {SPLIT_LIMIT} decompositions of {target}")));
                }
            }
        }
        Ok(out.into_iter().collect())
    }

    /// Largest number of bases used in a decomposition of `target` over
    /// bases and generators together; `None` when there is none.
    pub fn max_base_count(&self, target: &Mono) -> Result<Option<u64>> {
        let all: Vec<Mono> = self.bases.iter().chain(&self.gens).cloned().collect();
        let nb = self.bases.len();
        let mut best: Option<u64> = None;
        let mut visited = 0usize;
        let flow = lattice::visit_decompositions(&all, target, &mut |k| {
            visited += 1;
            if visited > SPLIT_LIMIT {
                return ControlFlow::Break(());
            }
            let n: u64 = k[..nb].iter().sum();
            best = Some(best.map_or(n, |b| b.max(n)));
            ControlFlow::Continue(())
        });
        if flow.is_break() {
            return Err(Error::Unsupported(format!("more than {SPLIT_LIMIT} decompositions of {target}")));
        }
        Ok(best)
    }

    /// Replaces bases ≼ 1 by the minimal grid elements ≻ 1 above them.
    /// Gives up after `budget` steps.
    pub fn positive_part(&self, budget: usize) -> Result<GridCertificate> {
        let mut bases = BTreeSet::new();
        let mut seen = BTreeSet::new();
        let mut queue: Vec<Mono> = self.bases.clone();
        let mut steps = 0;
        while let Some(x) = queue.pop() {
            if x.is_positive() {
                bases.insert(x);
                continue;
            }
            if !seen.insert(x.clone()) {
                continue;
            }
            steps += 1;
            if steps > budget {
                return Err(Error::Unsupported(format!("no positive grid cover found within {budget} steps")));
            }
            queue.extend(self.gens.iter().map(|g| &x + g));
        }
        GridCertificate::new(bases, self.gens.clone())
    }
}

fn cover_atom(a: &Atom, u: &Universe, bases: &mut Vec<Mono>, gens: &mut Vec<Mono>) -> Result<()> {
    match a {
        Atom::Finite(s) => bases.extend(s.iter().cloned()),
        Atom::Grid { base, gens: g } => {
            bases.push(base.clone());
            gens.extend(g.iter().cloned());
        }
        Atom::Progression { start, step } if step.is_positive() => {
            bases.push(start.clone());
            gens.push(step.clone());
        }
        Atom::Interval { lo, .. } if matches!(u.line_domain(), Some(Domain::Nat | Domain::Int)) && !u.is_finite() => {
            let start = match lo {
                Bound::Closed(m) => m.coords()[0].ceil(),
                Bound::Open(m) => m.coords()[0].floor() + Q::from_integer(1),
                Bound::Unbounded if u.line_domain() == Some(Domain::Nat) => Q::from_integer(0),
                Bound::Unbounded => {
                    return Err(Error::Certificate("interval unbounded below has no grid cover".into()));
                }
            };
            bases.push(Mono::new([start]));
            gens.push(Mono::int(1));
        }
        Atom::Diff(inner, _) => cover_atom(inner, u, bases, gens)?,
        other => {
            return Err(Error::Certificate(format!("{} has no grid cover", other.format(u))));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn covering_and_membership() {
        let u = Universe::monomials(&["x"], Domain::Rat);
        let s = DescribedSet::parse("grid(1; x^(1/2)) | {x^-1}", &u).unwrap();
        let g = GridCertificate::covering(&s, &u).unwrap();
        assert_eq!(g.min(), Some(&Mono::int(-1)));
        assert!(g.contains(&Mono::rat(5, 2)));
        assert!(!g.contains(&Mono::rat(1, 3)));
        assert!(!g.is_positive());
        let bad = DescribedSet::parse("prog(1; x^-1)", &u).unwrap();
        assert!(GridCertificate::covering(&bad, &u).is_err());
    }

    #[test]
    fn splits_in_one_dimension() {
        let a = GridCertificate::new([Mono::int(0)], [Mono::int(1)]).unwrap();
        let b = GridCertificate::finite([Mono::int(0), Mono::int(1)]);
        let s = a.splits(&b, &Mono::int(4)).unwrap();
        assert_eq!(s, vec![Mono::int(3), Mono::int(4)]);
    }

    #[test]
    fn positive_part_walks_up() {
        let g = GridCertificate::new([Mono::int(-3)], [Mono::int(2)]).unwrap();
        let p = g.positive_part(100).unwrap();
        assert_eq!(p.bases(), &[Mono::int(1)]);
        let lex = GridCertificate::new([Mono::ints(&[-1, 0])], [Mono::ints(&[0, 1])]).unwrap();
        assert!(lex.positive_part(50).is_err());
    }

    #[test]
    fn max_base_count() {
        let g = GridCertificate::finite([Mono::int(1), Mono::int(2)]);
        assert_eq!(g.max_base_count(&Mono::int(3)).unwrap(), Some(3));
        assert_eq!(g.max_base_count(&Mono::int(0)).unwrap(), Some(0));
        assert_eq!(g.max_base_count(&Mono::int(-1)).unwrap(), None);
    }
}
