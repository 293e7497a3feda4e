//! Bases of `k^{⊕ℕ}` whose coordinate functionals span a given countable
//! family of functionals.
//!
//! The construction keeps vectors `b_k` and functionals `β_k` with
//! `β_j(b_k) = [j = k]`, and alternates two steps:
//!
//! * row step for `ξ_m`: `ξ' = ξ_m − Σ ξ_m(b_j) β_j`; if `ξ' ≠ 0` take the
//!   least coordinate `c` with `ξ'(e_c) ≠ 0`, set `b_k = π(e_c)/ξ'(e_c)`
//!   and `β_k = ξ'`;
//! * coordinate step for `e_m`: `v = π(e_m)`; if `v ≠ 0`, normalise `v` to
//!   coefficient 1 at its largest coordinate `c`, set `b_k = v` and
//!   `β_k = e_c^* ∘ π`.
//!
//! Here `π(v) = v − Σ β_j(v) b_j`. Later vectors lie in every earlier
//! kernel, so the `β_k` are the coordinate functionals of the final basis.

use crate::closure::linalg::{self, Echelon, Vector};
use crate::error::{Error, Result};
use crate::mono::Mono;
use crate::scalar::Scalar;
use crate::series::Series;

/// Finite-support functionals on the first `dim` coordinates.
#[derive(Clone, Debug)]
pub struct FunctionalFamily {
    dim: usize,
    rows: Vec<Vector>,
    ledger: Echelon,
    independent: Vec<bool>,
}

impl FunctionalFamily {
    pub fn new(dim: usize) -> FunctionalFamily {
        FunctionalFamily { dim, rows: Vec::new(), ledger: Echelon::new(), independent: Vec::new() }
    }

    pub fn push(&mut self, row: Vector) -> Result<()> {
        if row.len() != self.dim {
            return Err(Error::Dimension(format!("row of length {} in dimension {}", row.len(), self.dim)));
        }
        self.independent.push(self.ledger.insert(&row));
        self.rows.push(row);
        Ok(())
    }

    /// Rows read off series on ℕ, cut to the first `dim` coordinates.
    pub fn from_series(dim: usize, rows: &[Series]) -> Result<FunctionalFamily> {
        let mut h = FunctionalFamily::new(dim);
        for r in rows {
            h.push(approximant(r, dim)?)?;
        }
        Ok(h)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn rank(&self) -> usize {
        self.ledger.rank()
    }

    /// Whether row `m` was independent of the rows before it.
    pub fn is_independent(&self, m: usize) -> bool {
        self.independent[m]
    }
}

/// `g|_{0..dim}`.
pub fn approximant(g: &Series, dim: usize) -> Result<Vector> {
    (0..dim as i64).map(|i| g.coeff(&Mono::int(i))).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Row(usize),
    Coordinate(usize),
}

/// `ξ_m = Σ coeffs_j · δ_{b_j}`, and `ξ_m(b_n) = 0` for `n ≥ bound`.
#[derive(Clone, Debug, PartialEq)]
pub struct Recovery {
    pub coeffs: Vec<(usize, Scalar)>,
    pub bound: usize,
    /// The row added nothing new.
    pub dependent: bool,
}

#[derive(Clone, Debug)]
pub struct ConstructedBasis {
    pub dim: usize,
    pub vectors: Vec<Vector>,
    /// `duals[k]` is the coordinate functional of `vectors[k]`.
    pub duals: Vec<Vector>,
    /// Which step produced each vector.
    pub steps: Vec<Step>,
    /// Per row, once it has been processed.
    pub recoveries: Vec<Option<Recovery>>,
    /// Per coordinate `m`, once processed: `e_m` lies in the span of the
    /// first `spans[m]` vectors.
    pub spans: Vec<Option<usize>>,
}

impl ConstructedBasis {
    fn project(&self, v: &[Scalar]) -> Vector {
        let mut out = v.to_vec();
        for (b, beta) in self.vectors.iter().zip(&self.duals) {
            let c = linalg::dot(beta, v);
            if !c.is_zero() {
                out = linalg::axpy(&out, &-&c, b);
            }
        }
        out
    }

    fn row_step(&mut self, xi: &[Scalar]) -> Recovery {
        let mut rest = xi.to_vec();
        let mut coeffs = Vec::new();
        for (j, (b, beta)) in self.vectors.iter().zip(&self.duals).enumerate() {
            let c = linalg::dot(xi, b);
            if !c.is_zero() {
                rest = linalg::axpy(&rest, &-&c, beta);
                coeffs.push((j, c));
            }
        }
        let k = self.vectors.len();
        let Some(c) = rest.iter().position(|x| !x.is_zero()) else {
            return Recovery { coeffs, bound: k, dependent: true };
        };
        let e = linalg::unit(self.dim, c);
        let b = linalg::scale(&self.project(&e), &rest[c].inv().expect("nonzero"));
        self.vectors.push(b);
        self.duals.push(rest);
        coeffs.push((k, Scalar::one()));
        Recovery { coeffs, bound: k + 1, dependent: false }
    }

    fn coordinate_step(&mut self, m: usize) -> usize {
        let v = self.project(&linalg::unit(self.dim, m));
        let Some(c) = v.iter().rposition(|x| !x.is_zero()) else {
            return self.vectors.len();
        };
        let inv = v[c].inv().expect("nonzero");
        let b = linalg::scale(&v, &inv);
        // e_c^* ∘ π = e_c^* − Σ b_j[c] β_j
        let mut beta = linalg::unit(self.dim, c);
        for (bj, dj) in self.vectors.iter().zip(&self.duals) {
            if !bj[c].is_zero() {
                beta = linalg::axpy(&beta, &-&bj[c], dj);
            }
        }
        self.vectors.push(b);
        self.duals.push(linalg::scale(&beta, &inv));
        self.vectors.len()
    }
}

/// The first `depth` basis vectors, alternating row and coordinate steps.
pub fn dual_basis_construction(h: &FunctionalFamily, depth: usize) -> ConstructedBasis {
    let dim = h.dim();
    let mut out = ConstructedBasis {
        dim,
        vectors: Vec::new(),
        duals: Vec::new(),
        steps: Vec::new(),
        recoveries: vec![None; h.rows().len()],
        spans: vec![None; dim],
    };
    let (mut r, mut c) = (0, 0);
    let mut rows_turn = true;
    while out.vectors.len() < depth && (r < h.rows().len() || c < dim) {
        let before = out.vectors.len();
        if (rows_turn && r < h.rows().len()) || c == dim {
            out.recoveries[r] = Some(out.row_step(&h.rows()[r]));
            if out.vectors.len() > before {
                out.steps.push(Step::Row(r));
            }
            r += 1;
        } else {
            out.spans[c] = Some(out.coordinate_step(c));
            if out.vectors.len() > before {
                out.steps.push(Step::Coordinate(c));
            }
            c += 1;
        }
        rows_turn = !rows_turn;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    fn family(dim: usize, rows: &[Vector]) -> FunctionalFamily {
        let mut h = FunctionalFamily::new(dim);
        for r in rows {
            h.push(r.clone()).unwrap();
        }
        h
    }

    /// `δ_{b_j}(e_c)` by solving `B x = e_c` over the prefix.
    fn coordinates(basis: &ConstructedBasis, c: usize) -> Option<Vector> {
        linalg::solve(&basis.vectors, &linalg::unit(basis.dim, c))
    }

    fn check(h: &FunctionalFamily, basis: &ConstructedBasis) {
        assert_eq!(linalg::rank(&basis.vectors), basis.vectors.len());
        for (m, rec) in basis.recoveries.iter().enumerate() {
            let Some(rec) = rec else { continue };
            let xi = &h.rows()[m];
            for b in &basis.vectors[rec.bound.min(basis.vectors.len())..] {
                assert!(linalg::dot(xi, b).is_zero());
            }
            for (c, xc) in xi.iter().enumerate().take(basis.dim) {
                let Some(x) = coordinates(basis, c) else { continue };
                let mut want = Scalar::zero();
                for (j, k) in &rec.coeffs {
                    want = &want + &(k * &x[*j]);
                }
                assert_eq!(*xc, want, "row {m} at e_{c}");
            }
        }
    }

    #[test]
    fn coordinate_functional() {
        let h = family(5, &[v(&[1, 0, 0, 0, 0])]);
        let b = dual_basis_construction(&h, 5);
        assert_eq!(b.vectors[0], v(&[1, 0, 0, 0, 0]));
        assert_eq!(b.recoveries[0].as_ref().unwrap().coeffs, vec![(0, Scalar::one())]);
        check(&h, &b);
    }

    #[test]
    fn all_ones_row() {
        let dim = 8;
        let h = family(dim, &[v(&[1; 8])]);
        let b = dual_basis_construction(&h, dim);
        let rec = b.recoveries[0].as_ref().unwrap();
        assert_eq!(rec.coeffs, vec![(0, Scalar::one())]);
        assert_eq!(rec.bound, 1);
        assert_eq!(b.spans.iter().flatten().count(), dim);
        check(&h, &b);
    }

    #[test]
    fn two_rows_recovered() {
        let h = family(6, &[v(&[1, 1, 0, 0, 0, 0]), v(&[0, 1, 0, 0, 0, 0])]);
        let b = dual_basis_construction(&h, 4);
        assert_eq!(b.vectors.len(), 4);
        assert!(b.recoveries.iter().all(Option::is_some));
        check(&h, &b);
    }

    #[test]
    fn dependent_rows_are_absorbed() {
        let h = family(4, &[v(&[1, 2, 0, 0]), v(&[2, 4, 0, 0]), v(&[0, 0, 1, 0])]);
        assert!(!h.is_independent(1));
        let b = dual_basis_construction(&h, 4);
        assert!(b.recoveries[1].as_ref().unwrap().dependent);
        check(&h, &b);
    }
}
