//! Finite shadows of dense Σ-closed subspaces.
//!
//! For `φ : k^n → k^w` the image `H = φ(k^n)` is the restriction to a
//! window of a subspace generated by `n` series. The record checks two
//! things on that window: whether `H` meets every target (density) and
//! whether sums of certified families drawn from `H` stay in `H`.

use crate::bornology::{Bornology, Universe};
use crate::closure::linalg::{self, Vector};
use crate::error::{Error, Result};
use crate::mono::Mono;
use crate::scalar::Scalar;
use crate::series::family::Weights;
use crate::series::{Series, SummableFamily};

pub const LABEL: &str = "finite shadow";

#[derive(Clone, Debug)]
pub struct ShadowRecord {
    pub label: &'static str,
    pub n: usize,
    pub window: usize,
    /// Columns of `φ`.
    pub generators: Vec<Vector>,
    /// Per target, a preimage when one exists.
    pub preimages: Vec<Option<Vector>>,
    /// Per sampled family, whether its sum lies in `H`.
    pub closed: Vec<bool>,
}

impl ShadowRecord {
    pub fn dense(&self) -> bool {
        self.preimages.iter().all(Option::is_some)
    }

    pub fn sigma_closed(&self) -> bool {
        self.closed.iter().all(|&b| b)
    }
}

fn as_series(v: &[Scalar]) -> Result<Series> {
    Series::finite(
        Bornology::all(Universe::nat()),
        v.iter().enumerate().map(|(i, c)| (Mono::int(i as i64), c.clone())),
    )
}

/// `generators` are the columns of `φ`; each family is a list of
/// `(v, weight)` with `v ∈ k^n`, summed as a certified family of `φ(v)`.
pub fn dense_sigma_closed_example(
    generators: &[Vector],
    window: usize,
    targets: &[Vector],
    families: &[Vec<(Vector, Scalar)>],
) -> Result<ShadowRecord> {
    let n = generators.len();
    if let Some(g) = generators.iter().find(|g| g.len() != window) {
        return Err(Error::Dimension(format!("generator of length {} for window {window}", g.len())));
    }
    let preimages = targets.iter().map(|t| linalg::solve(generators, t)).collect();
    let born = Bornology::all(Universe::nat());
    let mut closed = Vec::new();
    for fam in families {
        let mut members = Vec::new();
        for (v, _) in fam {
            if v.len() != n {
                return Err(Error::Dimension(format!("coefficient vector of length {} for n = {n}", v.len())));
            }
            let image: Vector = (0..window)
                .map(|i| generators.iter().zip(v).map(|(g, c)| c * &g[i]).sum())
                .collect();
            members.push(as_series(&image)?);
        }
        let ws: Vec<Scalar> = fam.iter().map(|(_, w)| w.clone()).collect();
        let w: Weights = std::sync::Arc::new(move |i| {
            i.as_int().and_then(|k| ws.get(k as usize).cloned()).unwrap_or_else(Scalar::zero)
        });
        let sum = SummableFamily::finite(born.clone(), members)?.sum_checked(&w, window)?;
        let sum = crate::closure::basis::approximant(&sum, window)?;
        closed.push(linalg::solve(generators, &sum).is_some());
    }
    Ok(ShadowRecord { label: LABEL, n, window, generators: generators.to_vec(), preimages, closed })
}

/// Unit vectors of `k^window`; hitting all of them is density.
pub fn unit_targets(window: usize) -> Vec<Vector> {
    (0..window).map(|i| linalg::unit(window, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn one_generator_is_not_dense() {
        let fams = vec![vec![(v(&[1]), Scalar::int(2)), (v(&[3]), Scalar::int(-1))]];
        let r = dense_sigma_closed_example(&[v(&[1, 1, 1])], 3, &unit_targets(3), &fams).unwrap();
        assert!(!r.dense());
        assert!(r.sigma_closed());
        assert_eq!(r.label, "finite shadow");
    }

    #[test]
    fn three_generic_generators_are_dense() {
        let gens = [v(&[1, 2, 0]), v(&[0, 1, 5]), v(&[3, 0, 1])];
        let fams = vec![vec![(v(&[1, 0, 0]), Scalar::one()), (v(&[0, 2, 1]), Scalar::int(4))]];
        let r = dense_sigma_closed_example(&gens, 3, &unit_targets(3), &fams).unwrap();
        assert!(r.dense());
        assert!(r.sigma_closed());
    }
}
