//! Dense reference arithmetic: explicit coefficient maps multiplied term
//! by term, with optional truncation. Shares nothing with the lazy engine
//! beyond the scalar and exponent types.

use std::collections::BTreeMap;

use sigma_core::{Mono, Result, Scalar, Series};

pub type Dense = BTreeMap<Mono, Scalar>;

fn clean(mut d: Dense) -> Dense {
    d.retain(|_, c| !c.is_zero());
    d
}

pub fn of(s: &Series) -> Dense {
    clean(s.terms().cloned().unwrap_or_default())
}

pub fn from_terms<I: IntoIterator<Item = (Mono, Scalar)>>(terms: I) -> Dense {
    let mut d = Dense::new();
    for (m, c) in terms {
        let e = d.entry(m).or_insert_with(Scalar::zero);
        *e = &*e + &c;
    }
    clean(d)
}

pub fn one(arity: usize) -> Dense {
    from_terms([(Mono::zero(arity), Scalar::one())])
}

pub fn add(a: &Dense, b: &Dense) -> Dense {
    from_terms(a.iter().chain(b.iter()).map(|(m, c)| (m.clone(), c.clone())))
}

pub fn scale(a: &Dense, k: &Scalar) -> Dense {
    clean(a.iter().map(|(m, c)| (m.clone(), c * k)).collect())
}

pub fn sub(a: &Dense, b: &Dense) -> Dense {
    add(a, &scale(b, &Scalar::int(-1)))
}

/// Product, dropping exponents above `bound`.
pub fn mul(a: &Dense, b: &Dense, bound: Option<&Mono>) -> Dense {
    let mut out = Dense::new();
    for (x, c) in a {
        for (y, d) in b {
            let m = x + y;
            if bound.is_some_and(|b| &m > b) {
                continue;
            }
            let e = out.entry(m).or_insert_with(Scalar::zero);
            *e = &*e + &(c * d);
        }
    }
    clean(out)
}

pub fn pow(a: &Dense, n: u64, arity: usize, bound: Option<&Mono>) -> Dense {
    (0..n).fold(one(arity), |acc, _| mul(&acc, a, bound))
}

pub fn truncate(a: &Dense, bound: &Mono) -> Dense {
    a.range(..=bound.clone()).map(|(m, c)| (m.clone(), c.clone())).collect()
}

pub fn lowest(a: &Dense) -> Option<&Mono> {
    a.keys().next()
}

/// Inverse of `a` up to `bound`, by the triangular recurrence
/// `g_γ = −(Σ_{α ≠ v} a_α g_{γ−α}) / a_v` over the exponents reachable from
/// `−v` by adding exponent gaps of `a`. Univariate only.
pub fn inverse(a: &Dense, bound: &Mono) -> Option<Dense> {
    let (v, c) = a.iter().next().map(|(m, c)| (m.clone(), c.clone()))?;
    let c_inv = c.inv()?;
    let gaps: Vec<Mono> = a.keys().skip(1).map(|m| m - &v).collect();
    // exponents of the inverse: −v + ℕ-combinations of the gaps, up to bound
    let start = -&v;
    let mut support = std::collections::BTreeSet::new();
    let mut frontier = vec![start.clone()];
    while let Some(m) = frontier.pop() {
        if &m > bound || !support.insert(m.clone()) {
            continue;
        }
        for g in &gaps {
            frontier.push(&m + g);
        }
    }
    let mut g = Dense::new();
    for m in support {
        let mut acc = if m == start { Scalar::one() } else { Scalar::zero() };
        for (alpha, a_alpha) in a.iter().skip(1) {
            let prev = &(&m - alpha) + &v;
            if let Some(p) = g.get(&prev) {
                acc = &acc - &(a_alpha * p);
            }
        }
        g.insert(m, &acc * &c_inv);
    }
    Some(clean(g))
}

/// Compares a (possibly lazy) series with a dense oracle at the first
/// `window` certificate points and at every oracle exponent up to the last
/// such point. Returns a witness on mismatch.
pub fn agree(s: &Series, d: &Dense, window: usize) -> Result<Option<String>> {
    let pts = s.window(window)?;
    let exhausted = pts.len() < window;
    let last = pts.last().cloned();
    let mut check: Vec<Mono> = pts;
    check.extend(d.keys().filter(|m| exhausted || last.as_ref().is_some_and(|l| *m <= l)).cloned());
    check.sort();
    check.dedup();
    for m in check {
        let want = d.get(&m).cloned().unwrap_or_else(Scalar::zero);
        let got = s.coeff(&m)?;
        if got != want {
            return Ok(Some(format!("coefficient at {m}: got {got}, oracle {want}")));
        }
    }
    Ok(None)
}

pub fn show(d: &Dense) -> String {
    let parts: Vec<String> = d.iter().map(|(m, c)| format!("{c}@{m}")).collect();
    format!("[{}]", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Dense {
        from_terms(c.iter().enumerate().map(|(i, &k)| (Mono::int(i as i64), Scalar::int(k))))
    }

    #[test]
    fn fibonacci_inverse() {
        let g = inverse(&poly(&[1, -1, -1]), &Mono::int(6)).unwrap();
        let want: Vec<Scalar> = [1, 1, 2, 3, 5, 8, 13].iter().map(|&k| Scalar::int(k)).collect();
        assert_eq!(g.values().cloned().collect::<Vec<_>>(), want);
    }

    #[test]
    fn inverse_times_original_is_one() {
        let a = from_terms([(Mono::rat(-1, 2), Scalar::int(2)), (Mono::rat(1, 3), Scalar::int(3)), (Mono::int(1), Scalar::int(-1))]);
        let b = Mono::int(4);
        let g = inverse(&a, &b).unwrap();
        let p = mul(&a, &g, Some(&Mono::rat(7, 2)));
        assert_eq!(p, one(1));
    }

    #[test]
    fn binomial_square() {
        assert_eq!(pow(&poly(&[1, 1]), 2, 1, None), poly(&[1, 2, 1]));
        assert_eq!(pow(&poly(&[1, 1]), 3, 1, Some(&Mono::int(1))), poly(&[1, 3]));
    }
}
