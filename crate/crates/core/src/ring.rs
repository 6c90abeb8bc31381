//! Coefficient rings and exact scalars.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// The ground ring: ℤ, ℚ or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingSpec {
    Integers,
    Rationals,
    PrimeField(u32),
}

/// An exact ring element.
///
/// Integral values that fit in an `i64` are always stored as `Small`, so
/// structural equality is value equality. Prime field elements are stored
/// as their residue in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Small(i64),
    Big(Box<BigRational>),
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

fn canonical(r: BigRational) -> Scalar {
    if r.is_integer() {
        if let Some(v) = r.numer().to_i64() {
            return Scalar::Small(v);
        }
    }
    Scalar::Big(Box::new(r))
}

impl Scalar {
    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Small(v) => BigRational::from_integer(BigInt::from(*v)),
            Scalar::Big(b) => (**b).clone(),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Scalar::Small(v) => Some(*v),
            Scalar::Big(_) => None,
        }
    }

    pub fn is_integral(&self) -> bool {
        match self {
            Scalar::Small(_) => true,
            Scalar::Big(b) => b.is_integer(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(v) => write!(f, "{v}"),
            Scalar::Big(b) => {
                if b.is_integer() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
        }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::Rationals => write!(f, "Q"),
            RingSpec::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

impl std::str::FromStr for RingSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.trim() {
            "Z" | "ZZ" | "integers" => Ok(RingSpec::Integers),
            "Q" | "QQ" | "rationals" => Ok(RingSpec::Rationals),
            other => {
                let digits = other
                    .strip_prefix("F_")
                    .or_else(|| other.strip_prefix("GF"))
                    .or_else(|| other.strip_prefix('F'))
                    .ok_or_else(|| Error::Parse(format!("unknown ring `{other}`")))?;
                let p: u32 = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("unknown ring `{other}`")))?;
                RingSpec::prime_field(p)
            }
        }
    }
}

impl RingSpec {
    pub fn prime_field(p: u32) -> Result<Self, Error> {
        if p > (1 << 30) || !is_prime(p) {
            return Err(Error::BadParameter(format!("{p} is not a supported prime")));
        }
        Ok(RingSpec::PrimeField(p))
    }

    pub fn is_field(self) -> bool {
        !matches!(self, RingSpec::Integers)
    }

    pub fn characteristic(self) -> u32 {
        match self {
            RingSpec::PrimeField(p) => p,
            _ => 0,
        }
    }

    pub fn zero(self) -> Scalar {
        Scalar::Small(0)
    }

    pub fn one(self) -> Scalar {
        Scalar::Small(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            RingSpec::PrimeField(p) => Scalar::Small(v.rem_euclid(p as i64)),
            _ => Scalar::Small(v),
        }
    }

    pub fn from_bigint(self, v: BigInt) -> Scalar {
        match self {
            RingSpec::PrimeField(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Scalar::Small(r.to_i64().unwrap())
            }
            _ => canonical(BigRational::from_integer(v)),
        }
    }

    /// Converts a rational into the ring, if it lies there.
    pub fn from_rational(self, r: BigRational) -> Option<Scalar> {
        match self {
            RingSpec::Rationals => Some(canonical(r)),
            RingSpec::Integers => r.is_integer().then(|| canonical(r)),
            RingSpec::PrimeField(_) => {
                let n = self.from_bigint(r.numer().clone());
                let d = self.from_bigint(r.denom().clone());
                if self.is_zero(&d) {
                    return None;
                }
                Some(self.mul(&n, &self.inv(&d)?))
            }
        }
    }

    pub fn parse(self, text: &str) -> Result<Scalar, Error> {
        let text = text.trim();
        let bad = || Error::Parse(format!("bad scalar `{text}` for ring {self}"));
        let r = if let Some((n, d)) = text.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            BigRational::new(n, d)
        } else {
            BigRational::from_integer(text.parse::<BigInt>().map_err(|_| bad())?)
        };
        self.from_rational(r).ok_or_else(bad)
    }

    pub fn is_zero(self, a: &Scalar) -> bool {
        matches!(a, Scalar::Small(0))
    }

    pub fn is_one(self, a: &Scalar) -> bool {
        matches!(a, Scalar::Small(1))
    }

    pub fn is_unit(self, a: &Scalar) -> bool {
        match self {
            RingSpec::Integers => matches!(a, Scalar::Small(1) | Scalar::Small(-1)),
            _ => !self.is_zero(a),
        }
    }

    pub fn add(self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (RingSpec::PrimeField(p), Scalar::Small(x), Scalar::Small(y)) => {
                let s = x + y;
                Scalar::Small(if s >= p as i64 { s - p as i64 } else { s })
            }
            (_, Scalar::Small(x), Scalar::Small(y)) => match x.checked_add(*y) {
                Some(s) => Scalar::Small(s),
                None => canonical(a.to_rational() + b.to_rational()),
            },
            _ => canonical(a.to_rational() + b.to_rational()),
        }
    }

    pub fn neg(self, a: &Scalar) -> Scalar {
        match (self, a) {
            (RingSpec::PrimeField(p), Scalar::Small(x)) => {
                Scalar::Small(if *x == 0 { 0 } else { p as i64 - x })
            }
            (_, Scalar::Small(x)) => match x.checked_neg() {
                Some(v) => Scalar::Small(v),
                None => canonical(-a.to_rational()),
            },
            (_, Scalar::Big(b)) => canonical(-(**b).clone()),
        }
    }

    pub fn sub(self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn mul(self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (RingSpec::PrimeField(p), Scalar::Small(x), Scalar::Small(y)) => Scalar::Small(x * y % p as i64),
            (_, Scalar::Small(x), Scalar::Small(y)) => match x.checked_mul(*y) {
                Some(s) => Scalar::Small(s),
                None => canonical(a.to_rational() * b.to_rational()),
            },
            _ => canonical(a.to_rational() * b.to_rational()),
        }
    }

    /// Multiplicative inverse, if `a` is a unit.
    pub fn inv(self, a: &Scalar) -> Option<Scalar> {
        if !self.is_unit(a) {
            return None;
        }
        match (self, a) {
            (RingSpec::PrimeField(p), Scalar::Small(x)) => {
                let (mut t, mut new_t) = (0i64, 1i64);
                let (mut r, mut new_r) = (p as i64, *x);
                while new_r != 0 {
                    let q = r / new_r;
                    (t, new_t) = (new_t, t - q * new_t);
                    (r, new_r) = (new_r, r - q * new_r);
                }
                Some(self.from_i64(t))
            }
            (RingSpec::Integers, _) => Some(a.clone()),
            _ => Some(canonical(a.to_rational().recip())),
        }
    }

    /// `a / b` when `b` divides `a` in the ring.
    pub fn div_exact(self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        if self.is_zero(b) {
            return None;
        }
        match self {
            RingSpec::Integers => {
                if let (Scalar::Small(x), Scalar::Small(y)) = (a, b) {
                    if let Some(0) = x.checked_rem(*y) {
                        if let Some(q) = x.checked_div(*y) {
                            return Some(Scalar::Small(q));
                        }
                    }
                }
                let q = a.to_rational() / b.to_rational();
                q.is_integer().then(|| canonical(q))
            }
            _ => Some(self.mul(a, &self.inv(b)?)),
        }
    }

    /// Euclidean quotient over ℤ: `a = q·b + r` with `0 ≤ r < |b|`.
    pub fn div_floor_euclid(self, a: &Scalar, b: &Scalar) -> Scalar {
        debug_assert_eq!(self, RingSpec::Integers);
        if let (Scalar::Small(x), Scalar::Small(y)) = (a, b) {
            if let Some(q) = x.checked_div_euclid(*y) {
                return Scalar::Small(q);
            }
        }
        let x = a.to_rational().to_integer();
        let y = b.to_rational().to_integer();
        let r = x.mod_floor(&y.abs());
        let q = (x - r) / y;
        canonical(BigRational::from_integer(q))
    }

    /// Size used for pivot choice over ℤ.
    pub fn cmp_abs(self, a: &Scalar, b: &Scalar) -> Ordering {
        match (a, b) {
            (Scalar::Small(x), Scalar::Small(y)) => x.unsigned_abs().cmp(&y.unsigned_abs()),
            _ => a.to_rational().abs().cmp(&b.to_rational().abs()),
        }
    }

    pub fn is_negative(self, a: &Scalar) -> bool {
        match (self, a) {
            (RingSpec::PrimeField(_), _) => false,
            (_, Scalar::Small(x)) => *x < 0,
            (_, Scalar::Big(b)) => b.is_negative(),
        }
    }

    /// `(-1)^e` in the ring.
    pub fn sign(self, e: i64) -> Scalar {
        if e.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    pub fn gcd(self, a: &Scalar, b: &Scalar) -> Scalar {
        match self {
            RingSpec::Integers => {
                let g = a.to_rational().to_integer().gcd(&b.to_rational().to_integer());
                canonical(BigRational::from_integer(g))
            }
            _ => {
                if self.is_zero(a) && self.is_zero(b) {
                    self.zero()
                } else {
                    self.one()
                }
            }
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::Small(0)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Small(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_inverse() {
        let f7 = RingSpec::PrimeField(7);
        for a in 1..7 {
            let x = f7.from_i64(a);
            let y = f7.inv(&x).unwrap();
            assert_eq!(f7.mul(&x, &y), f7.one());
        }
    }

    #[test]
    fn overflow_promotes() {
        let z = RingSpec::Integers;
        let big = z.mul(&Scalar::Small(i64::MAX), &Scalar::Small(4));
        assert!(matches!(big, Scalar::Big(_)));
        let back = z.div_exact(&big, &Scalar::Small(4)).unwrap();
        assert_eq!(back, Scalar::Small(i64::MAX));
    }

    #[test]
    fn parse_and_print() {
        let q = RingSpec::Rationals;
        assert_eq!(q.parse("6/4").unwrap().to_string(), "3/2");
        assert!(RingSpec::Integers.parse("1/2").is_err());
        assert_eq!(RingSpec::PrimeField(3).parse("-1").unwrap(), Scalar::Small(2));
        assert_eq!("F_3".parse::<RingSpec>().unwrap(), RingSpec::PrimeField(3));
        assert!("F_4".parse::<RingSpec>().is_err());
    }

    #[test]
    fn euclid_big() {
        let z = RingSpec::Integers;
        let a = z.mul(&Scalar::Small(i64::MAX), &Scalar::Small(3));
        let b = Scalar::Small(-7);
        let q = z.div_floor_euclid(&a, &b);
        let r = z.sub(&a, &z.mul(&q, &b));
        assert!(!z.is_negative(&r));
        assert_eq!(z.cmp_abs(&r, &b), Ordering::Less);
    }
}
