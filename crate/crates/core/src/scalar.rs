//! Exact coefficients: rationals or residues modulo a prime below 2^31.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Coefficient field of a series space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u32),
}

impl Field {
    /// `p` must be a prime below 2^31.
    pub fn prime(p: u32) -> Result<Field> {
        if p >= 1 << 31 || !is_prime(p) {
            return Err(Error::Field(format!("{p} is not a prime below 2^31")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.int(0)
    }

    pub fn one(self) -> Scalar {
        self.int(1)
    }

    pub fn int(self, n: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::int(n),
            Field::Prime(p) => Scalar::Mod { v: n.rem_euclid(p as i64) as u32, p },
        }
    }

    pub fn ratio(self, n: i64, d: i64) -> Scalar {
        self.coerce(&Scalar::ratio(n, d))
    }

    /// Map a scalar into this field. Rationals reduce modulo `p`.
    pub fn coerce(self, s: &Scalar) -> Scalar {
        match self {
            Field::Rational => s.clone(),
            Field::Prime(p) => s.reduce(p),
        }
    }

    pub fn parse_scalar(self, s: &str) -> Result<Scalar> {
        Ok(self.coerce(&s.parse::<Scalar>()?))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "rational"),
            Field::Prime(p) => write!(f, "fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "rational" || s == "Q" {
            return Ok(Field::Rational);
        }
        if let Some(p) = s.strip_prefix("fp:") {
            let p: u32 = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in field `{s}`")))?;
            return Field::prime(p);
        }
        Err(Error::Parse(format!("unknown field `{s}`")))
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact field element. Rationals act as universal constants and
/// are reduced when combined with a residue.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Mod { v: u32, p: u32 },
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Scalar {
        Scalar::Rat(BigRational::one())
    }

    pub fn int(n: i64) -> Scalar {
        Scalar::Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(n: i64, d: i64) -> Scalar {
        assert!(d != 0, "zero denominator");
        Scalar::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_big(r: BigRational) -> Scalar {
        Scalar::Rat(r)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { v, .. } => *v == 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }

    pub fn modulus(&self) -> Option<u32> {
        match self {
            Scalar::Rat(_) => None,
            Scalar::Mod { p, .. } => Some(*p),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Rat(_) => Field::Rational,
            Scalar::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Mod { .. } => None,
        }
    }

    /// Residue modulo `p`. Panics when the denominator vanishes mod `p`.
    fn reduce(&self, p: u32) -> Scalar {
        match self {
            Scalar::Mod { v, p: q } => {
                assert_eq!(*q, p, "mixing residues modulo {q} and {p}");
                Scalar::Mod { v: *v, p }
            }
            Scalar::Rat(r) => {
                let m = BigInt::from(p);
                let n = r.numer().mod_floor(&m).to_u64().unwrap();
                let d = r.denom().mod_floor(&m).to_u64().unwrap();
                assert!(d != 0, "denominator of {r} vanishes modulo {p}");
                let v = n * pow_mod(d, p as u64 - 2, p as u64) % p as u64;
                Scalar::Mod { v: v as u32, p }
            }
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rat(r) => Scalar::Rat(r.recip()),
            Scalar::Mod { v, p } => Scalar::Mod {
                v: pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32,
                p: *p,
            },
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn binop(
        a: &Scalar,
        b: &Scalar,
        rat: impl Fn(&BigRational, &BigRational) -> BigRational,
        md: impl Fn(u64, u64, u64) -> u64,
    ) -> Scalar {
        match (a, b) {
            (Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(rat(x, y)),
            _ => {
                let p = a.modulus().or(b.modulus()).unwrap();
                let (Scalar::Mod { v: x, .. }, Scalar::Mod { v: y, .. }) = (a.reduce(p), b.reduce(p))
                else {
                    unreachable!()
                };
                Scalar::Mod { v: md(x as u64, y as u64, p as u64) as u32, p }
            }
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rat(x), Scalar::Rat(y)) => x == y,
            (Scalar::Mod { v: x, p }, Scalar::Mod { v: y, p: q }) => p == q && x == y,
            (Scalar::Mod { v, p }, r @ Scalar::Rat(_)) | (r @ Scalar::Rat(_), Scalar::Mod { v, p }) => {
                matches!(r.reduce(*p), Scalar::Mod { v: w, .. } if w == *v)
            }
        }
    }
}

impl Eq for Scalar {}

impl Default for Scalar {
    fn default() -> Scalar {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::int(n)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar::binop(self, o, |x, y| x + y, |x, y, p| (x + y) % p)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar::binop(self, o, |x, y| x - y, |x, y, p| (x + p - y) % p)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        Scalar::binop(self, o, |x, y| x * y, |x, y, p| x * y % p)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv().expect("division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(-r),
            Scalar::Mod { v, p } => Scalar::Mod { v: (p - v) % p, p: *p },
        }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar { (&self).$m(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(it: I) -> Scalar {
        it.fold(Scalar::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scalar> {
        let bad = || Error::Parse(format!("bad scalar `{s}`"));
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Scalar::Rat(BigRational::new(n, d)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let a = Scalar::ratio(1, 2);
        let b = Scalar::ratio(1, 3);
        assert_eq!(&a + &b, Scalar::ratio(5, 6));
        assert_eq!(&a * &b, Scalar::ratio(1, 6));
        assert_eq!(&a / &b, Scalar::ratio(3, 2));
        assert_eq!((&a - &a).to_string(), "0");
        assert_eq!(Scalar::ratio(-4, 6).to_string(), "-2/3");
    }

    #[test]
    fn prime_field() {
        let f = Field::prime(7).unwrap();
        let a = f.int(3);
        assert_eq!(&a * &a.inv().unwrap(), f.one());
        assert_eq!(f.ratio(1, 2), f.int(4));
        assert_eq!(&a + &Scalar::int(5), f.int(1));
        assert!(Field::prime(8).is_err());
        assert_eq!(Field::prime(7).unwrap().to_string(), "fp:7");
        assert_eq!("fp:7".parse::<Field>().unwrap(), Field::Prime(7));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["0", "-3", "7/9", "-12/5"] {
            assert_eq!(s.parse::<Scalar>().unwrap().to_string(), s);
        }
        assert!("1/0".parse::<Scalar>().is_err());
    }

    #[test]
    fn pow_small() {
        assert_eq!(Scalar::int(3).pow(4), Scalar::int(81));
        assert_eq!(Field::Prime(5).int(2).pow(4), Field::Prime(5).one());
    }
}
