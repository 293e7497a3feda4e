//! Kernels: the data `δ ↦ r_δ` of a strongly linear map, read by rows or
//! by columns, with support schemas in both directions.

use std::collections::BTreeMap;

use crate::bornology::{projections, Bornology, DescribedSet, Universe};
use crate::error::{Error, Result};
use crate::mono::Mono;
use crate::scalar::Scalar;
use crate::series::Series;
use crate::strmap::StrongLinearMap;

pub trait Kernel: Send + Sync {
    /// `r_δ`, built in `born` (a bornology on the source universe).
    fn row(&self, delta: &Mono, born: &Bornology) -> Result<Series>;
    /// `γ ↦ (δ ↦ r_δ(γ))`, built in `born` (on the target universe).
    fn col(&self, gamma: &Mono, born: &Bornology) -> Result<Series>;
    /// A set containing every `δ` whose row meets `s`.
    fn image(&self, s: &DescribedSet) -> Result<DescribedSet>;
    /// A set containing every `γ` whose column meets `t`.
    fn coimage(&self, t: &DescribedSet) -> Result<DescribedSet>;
    fn describe(&self) -> String;
}

pub struct Identity;

impl Kernel for Identity {
    fn row(&self, delta: &Mono, born: &Bornology) -> Result<Series> {
        Series::delta(born.clone(), delta.clone())
    }

    fn col(&self, gamma: &Mono, born: &Bornology) -> Result<Series> {
        Series::delta(born.clone(), gamma.clone())
    }

    fn image(&self, s: &DescribedSet) -> Result<DescribedSet> {
        Ok(s.clone())
    }

    fn coimage(&self, t: &DescribedSet) -> Result<DescribedSet> {
        Ok(t.clone())
    }

    fn describe(&self) -> String {
        "id".into()
    }
}

/// `(Ff)(δ) = f(δ + by)`.
pub struct Shift {
    pub by: Mono,
    pub universe: Universe,
}

impl Kernel for Shift {
    fn row(&self, delta: &Mono, born: &Bornology) -> Result<Series> {
        let src = delta + &self.by;
        if born.universe().contains(&src) {
            Series::delta(born.clone(), src)
        } else {
            Ok(Series::zero(born.clone()))
        }
    }

    fn col(&self, gamma: &Mono, born: &Bornology) -> Result<Series> {
        let dst = gamma - &self.by;
        if born.universe().contains(&dst) {
            Series::delta(born.clone(), dst)
        } else {
            Ok(Series::zero(born.clone()))
        }
    }

    fn image(&self, s: &DescribedSet) -> Result<DescribedSet> {
        Ok(s.translate(&-&self.by).restrict(&self.universe))
    }

    fn coimage(&self, t: &DescribedSet) -> Result<DescribedSet> {
        Ok(t.translate(&self.by).restrict(&self.universe))
    }

    fn describe(&self) -> String {
        format!("shift({})", self.by)
    }
}

/// Finitely many nonzero finite rows.
pub struct Matrix {
    pub source: Universe,
    pub target: Universe,
    pub rows: BTreeMap<Mono, BTreeMap<Mono, Scalar>>,
}

impl Matrix {
    /// Rows and columns indexed by `0, 1, …` in ℕ.
    pub fn dense(rows: &[Vec<Scalar>]) -> Matrix {
        let mut out = BTreeMap::new();
        for (i, r) in rows.iter().enumerate() {
            let entries: BTreeMap<Mono, Scalar> = r
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (Mono::int(j as i64), c.clone()))
                .collect();
            if !entries.is_empty() {
                out.insert(Mono::int(i as i64), entries);
            }
        }
        Matrix { source: Universe::nat(), target: Universe::nat(), rows: out }
    }
}

impl Kernel for Matrix {
    fn row(&self, delta: &Mono, born: &Bornology) -> Result<Series> {
        match self.rows.get(delta) {
            Some(r) => Series::finite(born.clone(), r.iter().map(|(m, c)| (m.clone(), c.clone()))),
            None => Ok(Series::zero(born.clone())),
        }
    }

    fn col(&self, gamma: &Mono, born: &Bornology) -> Result<Series> {
        Series::finite(
            born.clone(),
            self.rows.iter().filter_map(|(d, r)| r.get(gamma).map(|c| (d.clone(), c.clone()))),
        )
    }

    fn image(&self, s: &DescribedSet) -> Result<DescribedSet> {
        Ok(DescribedSet::finite(
            self.rows.iter().filter(|(_, r)| r.keys().any(|g| s.contains(&self.source, g))).map(|(d, _)| d.clone()),
        ))
    }

    fn coimage(&self, t: &DescribedSet) -> Result<DescribedSet> {
        Ok(DescribedSet::finite(
            self.rows.iter().filter(|(d, _)| t.contains(&self.target, d)).flat_map(|(_, r)| r.keys().cloned()),
        ))
    }

    fn describe(&self) -> String {
        format!("matrix({} rows)", self.rows.len())
    }
}

/// Rows supported on `[δ − width, δ + width]` of a line, with entries drawn
/// from a seeded hash.
pub struct Banded {
    pub universe: Universe,
    pub seed: u64,
    pub width: i64,
    /// Entries are integers in `[-range, range]`.
    pub range: i64,
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl Banded {
    pub fn entry(&self, delta: i64, gamma: i64) -> i64 {
        let h = mix(self.seed ^ mix(delta as u64 ^ mix(gamma as u64)));
        (h % (2 * self.range as u64 + 1)) as i64 - self.range
    }

    fn line(m: &Mono) -> Result<i64> {
        m.as_int().ok_or_else(|| Error::Unsupported(format!("banded kernels live on integer lines, not at {m}")))
    }
}

impl Kernel for Banded {
    fn row(&self, delta: &Mono, born: &Bornology) -> Result<Series> {
        let d = Banded::line(delta)?;
        let u = born.universe();
        Series::finite(
            born.clone(),
            (d - self.width..=d + self.width)
                .filter(|g| u.contains(&Mono::int(*g)))
                .map(|g| (Mono::int(g), Scalar::int(self.entry(d, g)))),
        )
    }

    fn col(&self, gamma: &Mono, born: &Bornology) -> Result<Series> {
        let g = Banded::line(gamma)?;
        let u = born.universe();
        Series::finite(
            born.clone(),
            (g - self.width..=g + self.width)
                .filter(|d| u.contains(&Mono::int(*d)))
                .map(|d| (Mono::int(d), Scalar::int(self.entry(d, g)))),
        )
    }

    fn image(&self, s: &DescribedSet) -> Result<DescribedSet> {
        let parts: Vec<DescribedSet> = (-self.width..=self.width).map(|j| s.translate(&Mono::int(j))).collect();
        Ok(DescribedSet::union_all(parts.iter()).restrict(&self.universe))
    }

    fn coimage(&self, t: &DescribedSet) -> Result<DescribedSet> {
        self.image(t)
    }

    fn describe(&self) -> String {
        format!("banded(seed {}, width {})", self.seed, self.width)
    }
}

/// `f ↦ ⟨f, g⟩` into the one-point space.
pub struct Functional {
    pub g: Series,
}

impl Kernel for Functional {
    fn row(&self, _delta: &Mono, born: &Bornology) -> Result<Series> {
        if born == self.g.bornology() {
            Ok(self.g.clone())
        } else {
            self.g.with_bornology(born)
        }
    }

    fn col(&self, gamma: &Mono, born: &Bornology) -> Result<Series> {
        Series::monomial(born.clone(), Mono::int(0), self.g.coeff(gamma)?)
    }

    fn image(&self, _s: &DescribedSet) -> Result<DescribedSet> {
        Ok(DescribedSet::point(Mono::int(0)))
    }

    fn coimage(&self, t: &DescribedSet) -> Result<DescribedSet> {
        if t.contains(&Universe::finite(&["*"]), &Mono::int(0)) {
            Ok(self.g.certificate())
        } else {
            Ok(DescribedSet::empty())
        }
    }

    fn describe(&self) -> String {
        "functional".into()
    }
}

/// `outer ∘ inner`.
pub struct Composed {
    pub outer: StrongLinearMap,
    pub inner: StrongLinearMap,
}

impl Kernel for Composed {
    fn row(&self, delta: &Mono, born: &Bornology) -> Result<Series> {
        let r = self.outer.row(delta)?;
        self.inner.dual().apply(&r)?.with_bornology(born)
    }

    fn col(&self, gamma: &Mono, born: &Bornology) -> Result<Series> {
        let c = self.inner.col(gamma)?;
        self.outer.apply(&c)?.with_bornology(born)
    }

    fn image(&self, s: &DescribedSet) -> Result<DescribedSet> {
        self.outer.image(&self.inner.image(s)?)
    }

    fn coimage(&self, t: &DescribedSet) -> Result<DescribedSet> {
        self.inner.coimage(&self.outer.coimage(t)?)
    }

    fn describe(&self) -> String {
        format!("compose({}, {})", self.outer.describe(), self.inner.describe())
    }
}

/// `r_{(δ, δ')} = r_δ ⊗ r_{δ'}`.
pub struct Tensor {
    pub left: StrongLinearMap,
    pub right: StrongLinearMap,
}

impl Tensor {
    fn through(
        &self,
        s: &DescribedSet,
        u: &Universe,
        f: impl Fn(&StrongLinearMap, &DescribedSet) -> Result<DescribedSet>,
    ) -> Result<DescribedSet> {
        let mut atoms = Vec::new();
        for a in s.atoms() {
            let (p, q) = projections(a, u)
                .ok_or_else(|| Error::Unsupported(format!("cannot project {}", a.format(u))))?;
            atoms.extend(DescribedSet::rect(f(&self.left, &p)?, f(&self.right, &q)?).atoms().iter().cloned());
        }
        Ok(DescribedSet::from_atoms(atoms))
    }
}

impl Kernel for Tensor {
    fn row(&self, delta: &Mono, born: &Bornology) -> Result<Series> {
        let (d, e) = delta.split(self.left.target().universe().arity());
        self.left.row(&d)?.tensor(&self.right.row(&e)?).with_bornology(born)
    }

    fn col(&self, gamma: &Mono, born: &Bornology) -> Result<Series> {
        let (g, h) = gamma.split(self.left.source().universe().arity());
        self.left.col(&g)?.tensor(&self.right.col(&h)?).with_bornology(born)
    }

    fn image(&self, s: &DescribedSet) -> Result<DescribedSet> {
        let u = Universe::product(
            self.left.source().universe().clone(),
            self.right.source().universe().clone(),
        );
        self.through(s, &u, |m, p| m.image(p))
    }

    fn coimage(&self, t: &DescribedSet) -> Result<DescribedSet> {
        let u = Universe::product(
            self.left.target().universe().clone(),
            self.right.target().universe().clone(),
        );
        self.through(t, &u, |m, p| m.coimage(p))
    }

    fn describe(&self) -> String {
        format!("tensor({}, {})", self.left.describe(), self.right.describe())
    }
}
