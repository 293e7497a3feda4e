//! Dense exact linear algebra over the coefficient field.

use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

pub fn zeros(n: usize) -> Vector {
    vec![Scalar::zero(); n]
}

pub fn unit(n: usize, i: usize) -> Vector {
    let mut v = zeros(n);
    v[i] = Scalar::one();
    v
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| if x.is_zero() { acc } else { &acc + &(x * y) })
}

/// `a + c·b`.
pub fn axpy(a: &[Scalar], c: &Scalar, b: &[Scalar]) -> Vector {
    a.iter().zip(b).map(|(x, y)| if y.is_zero() { x.clone() } else { x + &(c * y) }).collect()
}

pub fn scale(a: &[Scalar], c: &Scalar) -> Vector {
    a.iter().map(|x| c * x).collect()
}

pub fn is_zero(a: &[Scalar]) -> bool {
    a.iter().all(Scalar::is_zero)
}

pub fn transpose(rows: &[Vector]) -> Vec<Vector> {
    let n = rows.first().map_or(0, Vec::len);
    (0..n).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let bt = transpose(b);
    a.iter().map(|r| bt.iter().map(|c| dot(r, c)).collect()).collect()
}

pub fn mat_vec(a: &[Vector], v: &[Scalar]) -> Vector {
    a.iter().map(|r| dot(r, v)).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vector]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        m[r] = scale(&m[r], &inv);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = -&m[i][c];
                m[i] = axpy(&m[i], &f, &m[r]);
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vector]) -> usize {
    rref(&mut rows.to_vec()).len()
}

/// Some `x` with `Σ x_j cols[j] = b`.
pub fn solve(cols: &[Vector], b: &[Scalar]) -> Option<Vector> {
    let n = cols.len();
    if n == 0 {
        return is_zero(b).then(Vec::new);
    }
    let mut aug: Vec<Vector> = (0..b.len())
        .map(|i| cols.iter().map(|c| c[i].clone()).chain([b[i].clone()]).collect())
        .collect();
    let pivots = rref(&mut aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = zeros(n);
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][n].clone();
    }
    Some(x)
}

/// A basis of `{x : rows·x = 0}`.
pub fn nullspace(rows: &[Vector], n: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = zeros(n);
            x[f] = Scalar::one();
            for (r, &c) in pivots.iter().enumerate() {
                x[c] = -&m[r][f];
            }
            x
        })
        .collect()
}

/// Incrementally maintained echelon basis of a row space.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    pub fn new() -> Echelon {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// `v` minus its component in the current span.
    pub fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let f = -&v[*p];
                v = axpy(&v, &f, r);
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        is_zero(&self.reduce(v))
    }

    /// Adds `v`; false when it was already in the span.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else { return false };
        let w = scale(&w, &w[p].inv().expect("nonzero"));
        for (_, r) in self.rows.iter_mut() {
            if !r[p].is_zero() {
                let f = -&r[p];
                *r = axpy(r, &f, &w);
            }
        }
        self.rows.push((p, w));
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vector {
        xs.iter().map(|&x| Scalar::int(x)).collect()
    }

    #[test]
    fn solve_and_rank() {
        let cols = vec![v(&[1, 0, 1]), v(&[0, 1, 1])];
        assert_eq!(solve(&cols, &v(&[2, 3, 5])), Some(v(&[2, 3])));
        assert_eq!(solve(&cols, &v(&[2, 3, 4])), None);
        assert_eq!(rank(&cols), 2);
        assert_eq!(solve(&[], &v(&[0, 0])), Some(vec![]));
        let ns = nullspace(&[v(&[1, 1, 1])], 3);
        assert_eq!(ns.len(), 2);
        for x in ns {
            assert!(dot(&x, &v(&[1, 1, 1])).is_zero());
        }
    }

    #[test]
    fn echelon_tracks_span() {
        let mut e = Echelon::new();
        assert!(e.insert(&v(&[1, 2, 0])));
        assert!(e.insert(&v(&[0, 1, 1])));
        assert!(!e.insert(&v(&[1, 3, 1])));
        assert!(e.contains(&v(&[2, 5, 1])));
        assert_eq!(e.rank(), 2);
    }
}
