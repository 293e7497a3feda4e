use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::mono::{Mono, Q};

/// Coordinate domain of a lattice universe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Domain {
    Nat,
    Int,
    Rat,
}

impl Domain {
    pub fn contains(self, c: &Q) -> bool {
        match self {
            Domain::Nat => c.is_integer() && !c.is_negative(),
            Domain::Int => c.is_integer(),
            Domain::Rat => true,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Domain::Nat => "N",
            Domain::Int => "Z",
            Domain::Rat => "Q",
        }
    }
}

/// An index set Γ. Every universe is totally ordered (lexicographically
/// for tuples and pairs); lattices and products of lattices also carry
/// coordinatewise addition as their monoid law.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Universe {
    Finite(Arc<[String]>),
    Lattice {
        domain: Domain,
        arity: usize,
        names: Option<Arc<[String]>>,
    },
    Product(Arc<Universe>, Arc<Universe>),
}

impl Universe {
    pub fn finite<S: AsRef<str>>(names: &[S]) -> Universe {
        Universe::Finite(names.iter().map(|s| s.as_ref().to_string()).collect())
    }

    pub fn nat() -> Universe {
        Universe::lattice(Domain::Nat, 1)
    }

    pub fn int() -> Universe {
        Universe::lattice(Domain::Int, 1)
    }

    pub fn rat() -> Universe {
        Universe::lattice(Domain::Rat, 1)
    }

    pub fn lattice(domain: Domain, arity: usize) -> Universe {
        assert!(arity > 0, "lattice arity must be positive");
        Universe::Lattice { domain, arity, names: None }
    }

    /// Free commutative monomials on `names` with exponents in `domain`.
    pub fn monomials<S: AsRef<str>>(names: &[S], domain: Domain) -> Universe {
        assert!(!names.is_empty(), "need at least one generator");
        Universe::Lattice {
            domain,
            arity: names.len(),
            names: Some(names.iter().map(|s| s.as_ref().to_string()).collect()),
        }
    }

    pub fn product(a: Universe, b: Universe) -> Universe {
        Universe::Product(Arc::new(a), Arc::new(b))
    }

    pub fn arity(&self) -> usize {
        match self {
            Universe::Finite(_) => 1,
            Universe::Lattice { arity, .. } => *arity,
            Universe::Product(a, b) => a.arity() + b.arity(),
        }
    }

    pub fn factors(&self) -> Option<(&Universe, &Universe)> {
        match self {
            Universe::Product(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// 1-D universes are decided exactly by the periodic engine.
    pub fn line_domain(&self) -> Option<Domain> {
        match self {
            Universe::Finite(_) => Some(Domain::Nat),
            Universe::Lattice { domain, arity: 1, .. } => Some(*domain),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            Universe::Finite(_) => true,
            Universe::Product(a, b) => a.is_finite() && b.is_finite(),
            Universe::Lattice { .. } => false,
        }
    }

    pub fn len(&self) -> Option<usize> {
        match self {
            Universe::Finite(n) => Some(n.len()),
            Universe::Product(a, b) => Some(a.len()? * b.len()?),
            Universe::Lattice { .. } => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == Some(0)
    }

    pub fn contains(&self, x: &Mono) -> bool {
        if x.arity() != self.arity() {
            return false;
        }
        match self {
            Universe::Finite(names) => {
                let c = x.coords()[0];
                c.is_integer() && !c.is_negative() && (c.to_integer() as usize) < names.len()
            }
            Universe::Lattice { domain, .. } => x.coords().iter().all(|c| domain.contains(c)),
            Universe::Product(a, b) => {
                let (l, r) = x.split(a.arity());
                a.contains(&l) && b.contains(&r)
            }
        }
    }

    pub fn is_monoid(&self) -> bool {
        match self {
            Universe::Finite(_) => false,
            Universe::Lattice { .. } => true,
            Universe::Product(a, b) => a.is_monoid() && b.is_monoid(),
        }
    }

    pub fn is_group(&self) -> bool {
        match self {
            Universe::Finite(_) => false,
            Universe::Lattice { domain, .. } => *domain != Domain::Nat,
            Universe::Product(a, b) => a.is_group() && b.is_group(),
        }
    }

    /// Monoid unit.
    pub fn unit(&self) -> Option<Mono> {
        self.is_monoid().then(|| Mono::zero(self.arity()))
    }

    pub fn check(&self, x: &Mono) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::NotInUniverse { elem: x.to_string(), universe: self.to_string() })
        }
    }

    pub fn format_elem(&self, x: &Mono) -> String {
        match self {
            Universe::Finite(names) => names
                .get(x.as_int().unwrap_or(-1) as usize)
                .cloned()
                .unwrap_or_else(|| format!("#{x}")),
            Universe::Lattice { names: Some(names), .. } => format_monomial(names, x),
            Universe::Lattice { .. } => x.to_string(),
            Universe::Product(a, b) => {
                let (l, r) = x.split(a.arity());
                format!("({}, {})", a.format_elem(&l), b.format_elem(&r))
            }
        }
    }

    pub fn parse_elem(&self, s: &str) -> Result<Mono> {
        let s = s.trim();
        let x = match self {
            Universe::Finite(names) => {
                let i = names
                    .iter()
                    .position(|n| n == s)
                    .ok_or_else(|| Error::Parse(format!("`{s}` is not an element of {self}")))?;
                Mono::int(i as i64)
            }
            Universe::Lattice { names: Some(names), .. } => parse_monomial(names, s)?,
            Universe::Lattice { arity: 1, .. } => Mono::new([parse_q(s)?]),
            Universe::Lattice { arity, .. } => {
                let parts = split_tuple(s)?;
                if parts.len() != *arity {
                    return Err(Error::Parse(format!("expected {arity} coordinates in `{s}`")));
                }
                Mono::new(parts.iter().map(|p| parse_q(p)).collect::<Result<Vec<_>>>()?)
            }
            Universe::Product(a, b) => {
                let parts = split_tuple(s)?;
                if parts.len() != 2 {
                    return Err(Error::Parse(format!("expected a pair, found `{s}`")));
                }
                a.parse_elem(&parts[0])?.concat(&b.parse_elem(&parts[1])?)
            }
        };
        self.check(&x)?;
        Ok(x)
    }
}

pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational `{s}`"));
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    let d: i64 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(Q::new(n, d))
}

/// Split `(a, b, c)` at top-level commas.
pub fn split_tuple(s: &str) -> Result<Vec<String>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| Error::Parse(format!("expected a parenthesized tuple, found `{s}`")))?;
    split_top(inner, ',')
}

pub fn split_top(s: &str, sep: char) -> Result<Vec<String>> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
        }
        if ch == sep && depth == 0 {
            parts.push(cur.trim().to_string());
            cur.clear();
        } else {
            cur.push(ch);
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced parentheses in `{s}`")));
    }
    if !cur.trim().is_empty() || !parts.is_empty() {
        parts.push(cur.trim().to_string());
    }
    Ok(parts)
}

pub fn format_exponent(e: &Q) -> String {
    if e.is_integer() {
        e.to_integer().to_string()
    } else {
        format!("({}/{})", e.numer(), e.denom())
    }
}

pub fn format_monomial(names: &[String], x: &Mono) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(x.coords())
        .filter(|(_, e)| !e.is_zero())
        .map(|(n, e)| {
            if *e == Q::from_integer(1) {
                n.clone()
            } else {
                format!("{n}^{}", format_exponent(e))
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn parse_monomial(names: &[String], s: &str) -> Result<Mono> {
    let mut exps = vec![Q::zero(); names.len()];
    if s == "1" {
        return Ok(Mono::new(exps));
    }
    for factor in s.split('*') {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e = e.trim();
                let e = e.strip_prefix('(').and_then(|t| t.strip_suffix(')')).unwrap_or(e);
                (n.trim(), parse_q(e)?)
            }
            None => (factor, Q::from_integer(1)),
        };
        let i = names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::Parse(format!("unknown generator `{name}`")))?;
        exps[i] += exp;
    }
    Ok(Mono::new(exps))
}

impl fmt::Display for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Universe::Finite(names) => write!(f, "finite({})", names.join(", ")),
            Universe::Lattice { domain, names: Some(names), .. } => {
                write!(f, "monomials({}; {})", names.join(", "), domain.symbol())
            }
            Universe::Lattice { domain, arity: 1, .. } => write!(f, "{}", domain.symbol()),
            Universe::Lattice { domain, arity, .. } => write!(f, "{}^{arity}", domain.symbol()),
            Universe::Product(a, b) => write!(f, "product({a}, {b})"),
        }
    }
}

impl FromStr for Universe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Universe> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown universe `{s}`"));
        let domain = |t: &str| match t.trim() {
            "N" => Ok(Domain::Nat),
            "Z" => Ok(Domain::Int),
            "Q" => Ok(Domain::Rat),
            _ => Err(bad()),
        };
        if let Some(body) = s.strip_prefix("finite(").and_then(|t| t.strip_suffix(')')) {
            let names: Vec<String> = split_top(body, ',')?;
            return Ok(Universe::finite(&names));
        }
        if let Some(body) = s.strip_prefix("monomials(").and_then(|t| t.strip_suffix(')')) {
            let (names, dom) = body.split_once(';').ok_or_else(bad)?;
            let names: Vec<String> = names.split(',').map(|n| n.trim().to_string()).collect();
            if names.iter().any(|n| n.is_empty()) {
                return Err(bad());
            }
            return Ok(Universe::monomials(&names, domain(dom)?));
        }
        if let Some(body) = s.strip_prefix("product(").and_then(|t| t.strip_suffix(')')) {
            let parts = split_top(body, ',')?;
            if parts.len() != 2 {
                return Err(bad());
            }
            return Ok(Universe::product(parts[0].parse()?, parts[1].parse()?));
        }
        if let Some((d, n)) = s.split_once('^') {
            let n: usize = n.trim().parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            return Ok(Universe::lattice(domain(d)?, n));
        }
        Ok(Universe::lattice(domain(s)?, 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codec_roundtrip() {
        for s in ["N", "Z", "Q", "Q^3", "finite(a, b)", "monomials(x, y; Q)", "product(N, Z)"] {
            let u: Universe = s.parse().unwrap();
            assert_eq!(u.to_string(), s);
        }
    }

    #[test]
    fn element_codec() {
        let u = Universe::monomials(&["x", "y"], Domain::Rat);
        for s in ["1", "x", "x^2*y^(1/3)", "y^-1", "x^(-1/2)"] {
            let m = u.parse_elem(s).unwrap();
            assert_eq!(u.format_elem(&m), s);
        }
        let p = Universe::product(Universe::nat(), Universe::lattice(Domain::Rat, 2));
        let m = p.parse_elem("(3, (1/2, -1))").unwrap();
        assert_eq!(p.format_elem(&m), "(3, (1/2, -1))");
        assert!(Universe::nat().parse_elem("-1").is_err());
        let f = Universe::finite(&["a", "b"]);
        assert_eq!(f.parse_elem("b").unwrap(), Mono::int(1));
    }

    #[test]
    fn structure_flags() {
        assert!(Universe::int().is_group());
        assert!(!Universe::nat().is_group());
        assert!(Universe::nat().is_monoid());
        assert!(!Universe::finite(&["a"]).is_monoid());
        assert_eq!(Universe::rat().unit(), Some(Mono::zero(1)));
    }
}
