//! Σ-spans of subspaces of `k^ℕ`, decided on a window of coordinates.
//!
//! A subspace is given by finitely many single vectors and finitely many
//! translate patterns `{t·template : t ∈ offsets}`. Only the translates
//! with `t < window` can touch the window, so the question reduces to a
//! finite linear system. An acceptance comes with a certified summable
//! family whose sum agrees with the candidate on the window.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bornology::{enumerate, Bornology, DescribedSet, Universe};
use crate::closure::basis::approximant;
use crate::closure::linalg::{self, Vector};
use crate::error::{Error, Result};
use crate::mono::Mono;
use crate::scalar::Scalar;
use crate::series::{Series, SummableFamily};

#[derive(Clone, Debug)]
pub enum Generator {
    Single(Series),
    /// Translates of a finite template by every element of `offsets`.
    Pattern { template: Series, offsets: DescribedSet },
}

impl Generator {
    pub fn pattern(template: Series, offsets: DescribedSet) -> Generator {
        Generator::Pattern { template, offsets }
    }

    pub fn describe(&self) -> String {
        match self {
            Generator::Single(s) => s.display(8).unwrap_or_else(|_| "?".into()),
            Generator::Pattern { template, offsets } => format!(
                "translates of {} by {}",
                template.display(8).unwrap_or_else(|_| "?".into()),
                offsets.format(template.universe())
            ),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpanWitness {
    /// Weight of each single generator.
    pub singles: Vec<Scalar>,
    /// Nonzero weights of each pattern, by offset.
    pub patterns: Vec<BTreeMap<Mono, Scalar>>,
    /// One certified family per generator group.
    pub families: Vec<SummableFamily>,
    pub sum: Series,
}

#[derive(Clone, Debug)]
pub enum SpanVerdict {
    Accepted(SpanWitness),
    /// Not even the window restriction lies in the span.
    Rejected,
    Undecided(String),
}

impl SpanVerdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, SpanVerdict::Accepted(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            SpanVerdict::Accepted(_) => "accepted",
            SpanVerdict::Rejected => "rejected",
            SpanVerdict::Undecided(_) => "undecided",
        }
    }
}

fn check_line(s: &Series) -> Result<()> {
    if s.universe() != &Universe::nat() {
        return Err(Error::UniverseMismatch { expected: "ℕ".into(), found: s.universe().to_string() });
    }
    Ok(())
}

fn offsets_below(offsets: &DescribedSet, window: usize) -> Result<Vec<Mono>> {
    let st = enumerate::ascending(offsets, &Universe::nat())
        .ok_or_else(|| Error::Unsupported("offsets cannot be enumerated".into()))?;
    Ok(st.take_while(|t| t.as_int().is_some_and(|t| t < window as i64)).collect())
}

/// Whether `candidate` lies in the Σ-span of `h`, judged on `0..window`.
pub fn sigma_span_window(h: &[Generator], candidate: &Series, window: usize) -> Result<SpanVerdict> {
    check_line(candidate)?;
    let born = candidate.bornology().clone();
    let target = match approximant(candidate, window) {
        Ok(v) => v,
        Err(e) => return Ok(SpanVerdict::Undecided(format!("candidate: {e}"))),
    };
    let mut cols: Vec<Vector> = Vec::new();
    let mut pattern_cols: Vec<Vector> = Vec::new();
    let mut singles = Vec::new();
    let mut patterns = Vec::new();
    for g in h {
        match g {
            Generator::Single(s) => {
                check_line(s)?;
                cols.push(approximant(s, window)?);
                singles.push(s.with_bornology(&born)?);
            }
            Generator::Pattern { template, offsets } => {
                check_line(template)?;
                let template = template.with_bornology(&born)?;
                let ts = offsets_below(offsets, window)?;
                for t in &ts {
                    pattern_cols.push(approximant(&template.shift(t)?, window)?);
                }
                patterns.push((template, offsets.clone(), ts));
            }
        }
    }
    cols.extend(pattern_cols);
    let Some(x) = linalg::solve(&cols, &target) else {
        return Ok(SpanVerdict::Rejected);
    };
    let mut x = x.into_iter();
    let single_w: Vec<Scalar> = x.by_ref().take(singles.len()).collect();
    let mut families = Vec::new();
    let mut parts = Vec::new();
    let fam = SummableFamily::finite(born.clone(), singles)?;
    let sw = Arc::new(single_w.clone());
    parts.push(fam.sum_checked(&weights_from(move |i| i.as_int().map(|k| sw[k as usize].clone())), window)?);
    families.push(fam);
    let mut pattern_w = Vec::new();
    for (template, offsets, ts) in patterns {
        let w: BTreeMap<Mono, Scalar> =
            ts.into_iter().zip(x.by_ref()).filter(|(_, c)| !c.is_zero()).collect();
        let fam = SummableFamily::translates(&template, offsets)?;
        let report = fam.check_summable(window);
        if !report.accepted() {
            return Ok(SpanVerdict::Undecided(format!("translate family: {}", report.notes.join("; "))));
        }
        let w2 = w.clone();
        parts.push(fam.sum_checked(&weights_from(move |i| w2.get(i).cloned()), window)?);
        families.push(fam);
        pattern_w.push(w);
    }
    let terms: Vec<(Scalar, Series)> = parts.into_iter().map(|p| (Scalar::one(), p)).collect();
    let sum = Series::linear_combination(&born, &terms)?;
    if approximant(&sum, window)? != target {
        return Ok(SpanVerdict::Undecided("certified sum disagrees on the window".into()));
    }
    Ok(SpanVerdict::Accepted(SpanWitness { singles: single_w, patterns: pattern_w, families, sum }))
}

fn weights_from<F>(f: F) -> crate::series::family::Weights
where
    F: Fn(&Mono) -> Option<Scalar> + Send + Sync + 'static,
{
    Arc::new(move |i| f(i).unwrap_or_else(Scalar::zero))
}

/// Named subspaces used by the idempotence check.
pub fn pattern_battery() -> Result<Vec<(&'static str, Vec<Generator>)>> {
    let born = Bornology::all(Universe::nat());
    let v = |xs: &[i64]| -> Result<Series> {
        Series::finite(born.clone(), xs.iter().enumerate().map(|(i, &c)| (Mono::int(i as i64), Scalar::int(c))))
    };
    let nat = DescribedSet::at_least(Mono::int(0));
    let evens = DescribedSet::progression(Mono::int(0), Mono::int(2));
    Ok(vec![
        ("empty", vec![]),
        ("e0", vec![Generator::Single(v(&[1])?)]),
        ("telescoping", vec![Generator::pattern(v(&[1, -1])?, nat.clone())]),
        ("even coordinates", vec![Generator::pattern(v(&[1])?, evens.clone())]),
        ("adjacent pairs", vec![Generator::pattern(v(&[1, 1])?, evens)]),
        ("second differences", vec![Generator::pattern(v(&[1, -2, 1])?, nat.clone())]),
        ("ones and e1", vec![Generator::Single(ones(&born)?), Generator::Single(v(&[0, 1])?)]),
    ])
}

/// The all-ones vector.
pub fn ones(born: &Bornology) -> Result<Series> {
    Series::lazy(born.clone(), DescribedSet::at_least(Mono::int(0)), |_| Ok(Scalar::one()))
}

/// Candidates tried against every battery subspace.
pub fn candidate_battery() -> Result<Vec<(&'static str, Series)>> {
    let born = Bornology::all(Universe::nat());
    let v = |xs: &[i64]| -> Result<Series> {
        Series::finite(born.clone(), xs.iter().enumerate().map(|(i, &c)| (Mono::int(i as i64), Scalar::int(c))))
    };
    let alt = Series::lazy(born.clone(), DescribedSet::at_least(Mono::int(0)), |m| {
        Ok(Scalar::int(if m.as_int().unwrap_or(0) % 2 == 0 { 1 } else { -1 }))
    })?;
    let evens = Series::lazy(born.clone(), DescribedSet::progression(Mono::int(0), Mono::int(2)), |m| {
        Ok(Scalar::int(i64::from(m.as_int().unwrap_or(1) % 2 == 0)))
    })?;
    let ramp = Series::lazy(born.clone(), DescribedSet::at_least(Mono::int(0)), |m| {
        Ok(Scalar::int(m.as_int().unwrap_or(0) + 1))
    })?;
    Ok(vec![
        ("zero", Series::zero(born.clone())),
        ("e0", v(&[1])?),
        ("e1", v(&[0, 1])?),
        ("e0+e1", v(&[1, 1])?),
        ("e3-e5", v(&[0, 0, 0, 1, 0, -1])?),
        ("ones", ones(&born)?),
        ("alternating", alt),
        ("even indicator", evens),
        ("ramp", ramp),
    ])
}

#[derive(Clone, Debug)]
pub struct IdempotenceRow {
    pub name: &'static str,
    pub first: Vec<bool>,
    pub second: Vec<bool>,
}

impl IdempotenceRow {
    pub fn pass(&self) -> bool {
        self.first == self.second
    }
}

/// Runs the candidate battery against `h`, then again against `h` plus
/// every accepted candidate; the accepted sets must coincide.
pub fn idempotence_check(
    name: &'static str,
    h: &[Generator],
    candidates: &[(&'static str, Series)],
    window: usize,
) -> Result<IdempotenceRow> {
    let mut first = Vec::new();
    let mut grown = h.to_vec();
    for (_, c) in candidates {
        let ok = sigma_span_window(h, c, window)?.is_accepted();
        if ok {
            grown.push(Generator::Single(c.clone()));
        }
        first.push(ok);
    }
    let second = candidates
        .iter()
        .map(|(_, c)| Ok(sigma_span_window(&grown, c, window)?.is_accepted()))
        .collect::<Result<Vec<_>>>()?;
    Ok(IdempotenceRow { name, first, second })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn born() -> Bornology {
        Bornology::all(Universe::nat())
    }

    fn e(i: i64) -> Series {
        Series::delta(born(), Mono::int(i)).unwrap()
    }

    #[test]
    fn coordinate_subspace() {
        let h = [Generator::Single(e(0))];
        assert!(matches!(sigma_span_window(&h, &e(1), 16).unwrap(), SpanVerdict::Rejected));
        assert!(sigma_span_window(&h, &e(0).scale(&Scalar::int(3)), 16).unwrap().is_accepted());
    }

    #[test]
    fn telescoping_reaches_e0_and_ones() {
        let t = Series::finite(born(), [(Mono::int(0), Scalar::one()), (Mono::int(1), Scalar::int(-1))]).unwrap();
        let h = [Generator::pattern(t, DescribedSet::at_least(Mono::int(0)))];
        let SpanVerdict::Accepted(w) = sigma_span_window(&h, &e(0), 16).unwrap() else { panic!() };
        assert_eq!(w.patterns[0].len(), 16);
        assert!(w.patterns[0].values().all(Scalar::is_one));
        assert!(w.sum.agrees_to_window(&e(0), 16).unwrap());
        assert!(sigma_span_window(&h, &ones(&born()).unwrap(), 16).unwrap().is_accepted());
    }

    #[test]
    fn empty_subspace_holds_only_zero() {
        assert!(sigma_span_window(&[], &Series::zero(born()), 8).unwrap().is_accepted());
        assert!(!sigma_span_window(&[], &e(2), 8).unwrap().is_accepted());
    }

    #[test]
    fn battery_is_idempotent() {
        let cands = candidate_battery().unwrap();
        for (name, h) in pattern_battery().unwrap() {
            let row = idempotence_check(name, &h, &cands, 16).unwrap();
            assert!(row.pass(), "{name}");
        }
    }

    #[test]
    fn other_universes_are_refused() {
        let z = Series::delta(Bornology::all(Universe::int()), Mono::int(0)).unwrap();
        assert!(sigma_span_window(&[], &z, 4).is_err());
    }
}
