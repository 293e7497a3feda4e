//! Nonnegative integer decompositions `t = Σ c_i g_i` over generators
//! that are strictly positive in the lexicographic order.
//!
//! Coordinates are solved in order. Generators whose first nonzero
//! coordinate is `d` are the only ones that move coordinate `d` once the
//! earlier coordinates are fixed, so each step is a bounded knapsack.

use std::ops::ControlFlow;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::mono::{Mono, Q};

/// Visit every `c` with `Σ c_i gens[i] = target`. Stops early on `Break`.
pub fn visit_decompositions<F>(gens: &[Mono], target: &Mono, visit: &mut F) -> ControlFlow<()>
where
    F: FnMut(&[u64]) -> ControlFlow<()>,
{
    assert!(gens.iter().all(Mono::is_positive), "generators must be positive");
    let n = target.arity();
    let leads: Vec<usize> = gens.iter().map(|g| g.lead_index().unwrap()).collect();
    let mut c = vec![0u64; gens.len()];
    let residual: Vec<Q> = target.coords().to_vec();
    rec(gens, &leads, 0, n, residual, &mut c, visit)
}

fn rec<F>(
    gens: &[Mono],
    leads: &[usize],
    d: usize,
    n: usize,
    residual: Vec<Q>,
    c: &mut Vec<u64>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[u64]) -> ControlFlow<()>,
{
    if d == n {
        return visit(c);
    }
    let active: Vec<usize> = (0..gens.len()).filter(|&i| leads[i] == d).collect();
    let r = residual[d];
    if active.is_empty() {
        if r.is_zero() {
            return rec(gens, leads, d + 1, n, residual, c, visit);
        }
        return ControlFlow::Continue(());
    }
    if r.is_negative() {
        return ControlFlow::Continue(());
    }
    let l = active
        .iter()
        .fold(*r.denom(), |l, &i| l.lcm(gens[i].coords()[d].denom()));
    let big_r = (r * l).to_integer();
    let a: Vec<i64> = active.iter().map(|&i| (gens[i].coords()[d] * l).to_integer()).collect();
    // suffix gcds prune dead branches
    let mut suffix = vec![0i64; a.len() + 1];
    for k in (0..a.len()).rev() {
        suffix[k] = suffix[k + 1].gcd(&a[k]);
    }
    knap(gens, leads, d, n, &active, &a, &suffix, 0, big_r, residual, c, visit)
}

#[allow(clippy::too_many_arguments)]
fn knap<F>(
    gens: &[Mono],
    leads: &[usize],
    d: usize,
    n: usize,
    active: &[usize],
    a: &[i64],
    suffix: &[i64],
    k: usize,
    rem: i64,
    residual: Vec<Q>,
    c: &mut Vec<u64>,
    visit: &mut F,
) -> ControlFlow<()>
where
    F: FnMut(&[u64]) -> ControlFlow<()>,
{
    if k == a.len() {
        if rem == 0 {
            return rec(gens, leads, d + 1, n, residual, c, visit);
        }
        return ControlFlow::Continue(());
    }
    if rem % suffix[k] != 0 {
        return ControlFlow::Continue(());
    }
    let gi = active[k];
    let max = rem / a[k];
    for m in 0..=max {
        let mut res = residual.clone();
        if m > 0 {
            let mq = Q::from_integer(m);
            for (j, slot) in res.iter_mut().enumerate().skip(d) {
                *slot -= gens[gi].coords()[j] * mq;
            }
        }
        c[gi] = m as u64;
        knap(gens, leads, d, n, active, a, suffix, k + 1, rem - m * a[k], res, c, visit)?;
    }
    c[gi] = 0;
    ControlFlow::Continue(())
}

/// All decompositions, failing when there are more than `limit`.
pub fn decompositions(gens: &[Mono], target: &Mono, limit: usize) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    let mut over = false;
    let _ = visit_decompositions(gens, target, &mut |c| {
        if out.len() == limit {
            over = true;
            return ControlFlow::Break(());
        }
        out.push(c.to_vec());
        ControlFlow::Continue(())
    });
    if over {
        return Err(Error::Unsupported(format!(
            "more than {limit} decompositions of {target}"
        )));
    }
    Ok(out)
}

pub fn is_decomposable(gens: &[Mono], target: &Mono) -> bool {
    if gens.is_empty() {
        return target.is_zero();
    }
    visit_decompositions(gens, target, &mut |_| ControlFlow::Break(())).is_break()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(gens: &[Mono], t: &Mono, bound: u64) -> usize {
        let m = gens.len();
        let mut count = 0;
        let total = (bound + 1).pow(m as u32);
        for code in 0..total {
            let mut x = code;
            let mut acc = Mono::zero(t.arity());
            for g in gens {
                let k = x % (bound + 1);
                x /= bound + 1;
                acc = &acc + &g.scale(Q::from_integer(k as i64));
            }
            if acc == *t {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn one_dimensional_counts() {
        let gens = [Mono::int(2), Mono::int(3)];
        assert_eq!(decompositions(&gens, &Mono::int(12), 100).unwrap().len(), 3);
        assert!(!is_decomposable(&gens, &Mono::int(1)));
        assert!(is_decomposable(&[Mono::rat(1, 2)], &Mono::rat(5, 2)));
    }

    #[test]
    fn agrees_with_brute_force_in_two_dims() {
        let gens = [Mono::ints(&[0, 1]), Mono::ints(&[1, -2]), Mono::ints(&[1, 1])];
        for a in 0..4 {
            for b in -6..6 {
                let t = Mono::ints(&[a, b]);
                let fast = decompositions(&gens, &t, 1000).unwrap();
                assert_eq!(fast.len(), brute(&gens, &t, 12), "target {t}");
                for c in fast {
                    let mut acc = Mono::zero(2);
                    for (g, k) in gens.iter().zip(&c) {
                        acc = &acc + &g.scale(Q::from_integer(*k as i64));
                    }
                    assert_eq!(acc, t);
                }
            }
        }
    }
}
