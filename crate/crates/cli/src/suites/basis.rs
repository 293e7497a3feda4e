//! Dual-basis construction checked by exact dense linear algebra, and
//! idempotence of the windowed Σ-span.

use rand::Rng as _;
use sigma_core::bornology::{Bornology, DescribedSet, Universe};
use sigma_core::closure::span::{candidate_battery, pattern_battery};
use sigma_core::closure::{dual_basis_construction, idempotence_check, FunctionalFamily, Generator};
use sigma_core::{Mono, Result, Scalar, Series};

use super::Cases;

const DIM: usize = 16;
const DEPTH: usize = 12;

fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rank by plain Gaussian elimination on a copy.
fn rank(rows: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] * &inv;
                let pivot = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        r += 1;
    }
    r
}

fn show(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("[{}]", parts.join(" "))
}

pub fn construction(c: &mut Cases) -> Result<()> {
    for i in 0..20 {
        let nrows = c.rng.gen_range(1..=6);
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for _ in 0..nrows {
            // sparse rows; sometimes a combination of earlier rows
            let row: Vec<Scalar> = if !rows.is_empty() && c.rng.gen_bool(0.2) {
                let (a, b) = (c.rng.gen_range(0..rows.len()), c.rng.gen_range(0..rows.len()));
                rows[a].iter().zip(&rows[b]).map(|(x, y)| &(x + y) + y).collect()
            } else {
                (0..DIM)
                    .map(|_| if c.rng.gen_bool(0.3) { Scalar::int(c.rng.gen_range(-3..=3)) } else { Scalar::zero() })
                    .collect()
            };
            rows.push(row);
        }
        let r = (|| -> Result<Option<String>> {
            let mut h = FunctionalFamily::new(DIM);
            for row in &rows {
                h.push(row.clone())?;
            }
            let b = dual_basis_construction(&h, DEPTH);
            let n = b.vectors.len();
            if n != DEPTH {
                return Ok(Some(format!("{n} vectors, wanted {DEPTH}")));
            }
            if rank(&b.vectors) != n {
                return Ok(Some(format!("prefix of {n} vectors has rank {}", rank(&b.vectors))));
            }
            for (j, beta) in b.duals.iter().enumerate() {
                for (k, v) in b.vectors.iter().enumerate() {
                    let want = if j == k { Scalar::one() } else { Scalar::zero() };
                    if dot(beta, v) != want {
                        return Ok(Some(format!("β{j}(b{k}) = {}", dot(beta, v))));
                    }
                }
            }
            let mut processed = 0;
            for (m, rec) in b.recoveries.iter().enumerate() {
                let Some(rec) = rec else { continue };
                processed += 1;
                let xi = &rows[m];
                for (k, v) in b.vectors.iter().enumerate().skip(rec.bound) {
                    if !dot(xi, v).is_zero() {
                        return Ok(Some(format!("ξ{m}(b{k}) = {} beyond bound {}", dot(xi, v), rec.bound)));
                    }
                }
                // ξ_m = Σ c_j β_j on all of k^DIM
                let mut comb = vec![Scalar::zero(); DIM];
                for (j, cj) in &rec.coeffs {
                    for (x, y) in comb.iter_mut().zip(&b.duals[*j]) {
                        *x = &*x + &(cj * y);
                    }
                }
                if &comb != xi {
                    return Ok(Some(format!("ξ{m} = {} but the recovery gives {}", show(xi), show(&comb))));
                }
            }
            if processed == 0 {
                return Ok(Some("no row was processed".into()));
            }
            Ok(None)
        })();
        let dump: Vec<String> = rows.iter().map(|r| show(r)).collect();
        c.check(format!("basis #{i} rows {}", dump.join(" ")), r);
    }
    Ok(())
}

pub fn idempotence(c: &mut Cases) -> Result<()> {
    let w = c.window;
    let cands = candidate_battery()?;
    let mut battery: Vec<(String, Vec<Generator>)> =
        pattern_battery()?.into_iter().map(|(n, h)| (n.to_string(), h)).collect();
    // seeded patterns: a short template translated along a progression
    let born = Bornology::all(Universe::nat());
    for k in 0..8 {
        let len = c.rng.gen_range(1..=3);
        let mut t: Vec<(Mono, Scalar)> =
            (0..len).map(|i| (Mono::int(i), Scalar::int(c.rng.gen_range(-2..=2)))).collect();
        t.push((Mono::int(0), Scalar::one()));
        let template = Series::finite(born.clone(), t)?;
        let (start, step) = (c.rng.gen_range(0..4), c.rng.gen_range(1..=3));
        let offsets = DescribedSet::progression(Mono::int(start), Mono::int(step));
        battery.push((format!("seeded pattern {k}"), vec![Generator::pattern(template, offsets)]));
    }
    for (name, h) in &battery {
        let r = (|| -> Result<Option<String>> {
            let row = idempotence_check("battery", h, &cands, w)?;
            if row.pass() {
                return Ok(None);
            }
            let gens: Vec<String> = h.iter().map(Generator::describe).collect();
            let moved: Vec<String> = cands
                .iter()
                .zip(row.first.iter().zip(&row.second))
                .filter(|(_, (a, b))| a != b)
                .map(|((n, _), (a, b))| format!("{n}: {a} then {b}"))
                .collect();
            Ok(Some(format!("generators [{}]; second round changed {}", gens.join("; "), moved.join(", "))))
        })();
        c.check(format!("idempotence on {name}"), r);
    }
    Ok(())
}
