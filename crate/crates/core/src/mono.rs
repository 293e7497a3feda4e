//! Universe elements as exponent vectors with rational entries.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use smallvec::SmallVec;

pub type Q = Ratio<i64>;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

/// An element of a universe. Finite-set elements are indices, lattice
/// elements are coordinate vectors, pairs are concatenations.
/// The derived order is lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono(SmallVec<[Q; 2]>);

impl Mono {
    pub fn new<I: IntoIterator<Item = Q>>(coords: I) -> Mono {
        Mono(coords.into_iter().collect())
    }

    pub fn int(n: i64) -> Mono {
        Mono::new([q(n)])
    }

    pub fn rat(n: i64, d: i64) -> Mono {
        Mono::new([Q::new(n, d)])
    }

    pub fn ints(v: &[i64]) -> Mono {
        Mono::new(v.iter().map(|&n| q(n)))
    }

    pub fn zero(arity: usize) -> Mono {
        Mono::new(std::iter::repeat_n(Q::zero(), arity))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coordinate.
    pub fn lead_index(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// Sign in the lexicographic order.
    pub fn sign(&self) -> Ordering {
        match self.lead_index() {
            None => Ordering::Equal,
            Some(i) => self.0[i].cmp(&Q::zero()),
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn scale(&self, k: Q) -> Mono {
        Mono::new(self.0.iter().map(|c| c * k))
    }

    pub fn concat(&self, other: &Mono) -> Mono {
        Mono::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn split(&self, at: usize) -> (Mono, Mono) {
        (Mono::new(self.0[..at].iter().copied()), Mono::new(self.0[at..].iter().copied()))
    }

    /// The single coordinate as an integer, when this is a 1-D integral point.
    pub fn as_int(&self) -> Option<i64> {
        match self.0.as_slice() {
            [c] if c.is_integer() => Some(c.to_integer()),
            _ => None,
        }
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|c| !c.is_negative())
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denom_lcm(&self) -> i64 {
        self.0.iter().fold(1, |l, c| l.lcm(c.denom()))
    }

    /// `k` with `self = k * step` and `k` a nonnegative integer.
    pub fn multiple_of(&self, step: &Mono) -> Option<i64> {
        let i = step.lead_index()?;
        let k = self.0[i] / step.0[i];
        if !k.is_integer() || k.is_negative() {
            return None;
        }
        (step.scale(k) == *self).then(|| k.to_integer())
    }
}

impl Add for &Mono {
    type Output = Mono;
    fn add(self, o: &Mono) -> Mono {
        assert_eq!(self.arity(), o.arity(), "arity mismatch");
        Mono::new(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b))
    }
}

impl Sub for &Mono {
    type Output = Mono;
    fn sub(self, o: &Mono) -> Mono {
        assert_eq!(self.arity(), o.arity(), "arity mismatch");
        Mono::new(self.0.iter().zip(o.0.iter()).map(|(a, b)| a - b))
    }
}

impl Neg for &Mono {
    type Output = Mono;
    fn neg(self) -> Mono {
        Mono::new(self.0.iter().map(|c| -c))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0.as_slice() {
            [c] => write!(f, "{c}"),
            cs => {
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lex_order_and_sign() {
        assert!(Mono::ints(&[0, 5]) < Mono::ints(&[1, -3]));
        assert!(Mono::ints(&[0, 1]).is_positive());
        assert!(!Mono::ints(&[-1, 9]).is_positive());
        assert_eq!(Mono::ints(&[0, 0]).sign(), Ordering::Equal);
    }

    #[test]
    fn multiples() {
        let step = Mono::ints(&[2, -1]);
        assert_eq!(Mono::ints(&[6, -3]).multiple_of(&step), Some(3));
        assert_eq!(Mono::ints(&[6, -2]).multiple_of(&step), None);
        assert_eq!(Mono::ints(&[-2, 1]).multiple_of(&step), None);
        assert_eq!(Mono::rat(3, 2).multiple_of(&Mono::rat(1, 2)), Some(3));
    }
}
