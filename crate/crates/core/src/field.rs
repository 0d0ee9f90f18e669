//! Exact scalar fields: prime fields `F_p` and the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Field descriptor, serialized as `{"type":"prime","p":…}` or `{"type":"rational"}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Field {
    Prime { p: u64 },
    Rational,
}

/// A field element. Prime-field elements carry their modulus so arithmetic
/// needs no outside context.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Mod(u64, u64),
    Rat(BigRational),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) || p >= (1 << 32) {
            return Err(Error::Parse(format!("modulus {p} is not a prime below 2^32")));
        }
        Ok(Field::Prime { p })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Field::Prime { p } => Field::prime(p).map(|_| ()),
            Field::Rational => Ok(()),
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Prime { p } => Scalar::Mod(v.rem_euclid(p as i64) as u64, p),
            Field::Rational => Scalar::Rat(BigRational::from_integer(BigInt::from(v))),
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn cardinality(&self) -> Option<u64> {
        match *self {
            Field::Prime { p } => Some(p),
            Field::Rational => None,
        }
    }

    /// Parses `"3"`, `"-2"` or `"num/den"`.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad scalar literal {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<BigInt>().map_err(|_| bad())?,
                d.trim().parse::<BigInt>().map_err(|_| bad())?,
            ),
            None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(bad());
        }
        match *self {
            Field::Prime { p } => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.try_into().expect("residue fits in u64")
                };
                let d = Scalar::Mod(reduce(&den), p);
                let dinv = d.inv().ok_or_else(|| {
                    Error::Parse(format!("denominator of {s:?} vanishes mod {p}"))
                })?;
                Ok(&Scalar::Mod(reduce(&num), p) * &dinv)
            }
            Field::Rational => Ok(Scalar::Rat(BigRational::new(num, den))),
        }
    }

    pub fn random<R: Rng>(&self, rng: &mut R) -> Scalar {
        match *self {
            Field::Prime { p } => Scalar::Mod(rng.gen_range(0..p), p),
            Field::Rational => self.from_i64(rng.gen_range(-8..=8)),
        }
    }

    /// Candidate eigenvalues scanned by the decomposition routine: every
    /// element of a small prime field, or the integers `-bound..=bound`.
    pub fn scan_values(&self, bound: i64) -> Vec<Scalar> {
        match *self {
            Field::Prime { p } if p <= 1024 => (0..p as i64).map(|v| self.from_i64(v)).collect(),
            _ => (-bound..=bound).map(|v| self.from_i64(v)).collect(),
        }
    }

    /// All coefficient vectors of length `n` (finite fields only).
    pub fn enumerate_vectors(&self, n: usize) -> Option<impl Iterator<Item = Vec<Scalar>> + '_> {
        let p = self.cardinality()?;
        let total = p.checked_pow(n as u32)?;
        Some((0..total).map(move |mut idx| {
            (0..n)
                .map(|_| {
                    let v = idx % p;
                    idx /= p;
                    self.from_i64(v as i64)
                })
                .collect()
        }))
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime { p } => write!(f, "GF({p})"),
            Field::Rational => write!(f, "Q"),
        }
    }
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(v, _) => *v == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Mod(v, _) => *v == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Scalar::Mod(_, p) => Field::Prime { p: *p },
            Scalar::Rat(_) => Field::Rational,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match self {
            Scalar::Mod(v, p) => {
                if *v == 0 {
                    return None;
                }
                // Fermat
                Some(Scalar::Mod(pow_mod(*v, p - 2, *p), *p))
            }
            Scalar::Rat(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(r.recip()))
                }
            }
        }
    }

    /// Integer value when the scalar is a small integer (rationals) or its
    /// canonical representative (prime fields).
    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Scalar::Mod(v, _) => Some(*v as i64),
            Scalar::Rat(r) if r.is_integer() => r.to_integer().try_into().ok(),
            _ => None,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Mod(v, _) => write!(f, "{v}"),
            Scalar::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic between scalars of different fields")
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) if p == q => Scalar::Mod((a + b) % p, *p),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => mismatch(),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) if p == q => Scalar::Mod((a + p - b) % p, *p),
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a - b),
            _ => mismatch(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Mod(a, p), Scalar::Mod(b, q)) if p == q => {
                Scalar::Mod(((*a as u128 * *b as u128) % *p as u128) as u64, *p)
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => mismatch(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Mod(a, p) => Scalar::Mod((p - a) % p, *p),
            Scalar::Rat(a) => Scalar::Rat(-a),
        }
    }
}

impl Scalar {
    pub fn abs_is_small(&self, bound: i64) -> bool {
        match self {
            Scalar::Mod(..) => true,
            Scalar::Rat(r) => r.abs() <= BigRational::from_integer(BigInt::from(bound)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_arithmetic() {
        let f = Field::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(&a + &b, f.from_i64(1));
        assert_eq!(&a * &b, f.from_i64(1));
        assert_eq!(a.inv().unwrap(), b);
        assert_eq!(-&a, f.from_i64(4));
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(4));
        assert!(f.parse("1/7").is_err());
    }

    #[test]
    fn rationals_stay_reduced() {
        let f = Field::Rational;
        let a = f.parse("2/4").unwrap();
        assert_eq!(a.to_string(), "1/2");
        assert_eq!(f.parse("3/-6").unwrap().to_string(), "-1/2");
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(2).is_ok());
    }

    #[test]
    fn enumerates_all_vectors() {
        let f = Field::prime(3).unwrap();
        assert_eq!(f.enumerate_vectors(2).unwrap().count(), 9);
    }
}
