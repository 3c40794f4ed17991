//! Exact field elements.
//!
//! Rationals carry an `i64` fast path and fall back to `BigRational` when a
//! numerator or denominator leaves the machine range. Prime-field residues
//! carry their modulus so that mixed expressions such as `-x` or `x * sign`
//! never need a field handle.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::LinalgError;

/// The ground field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rationals,
    PrimeField(u64),
}

impl Default for Field {
    fn default() -> Self {
        Field::Rationals
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, LinalgError> {
        if !is_prime(p) || p >= (1u64 << 62) {
            return Err(LinalgError::NotPrime(p));
        }
        Ok(Field::PrimeField(p))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Rationals => Scalar(Repr::Small(v, 1)),
            Field::PrimeField(p) => Scalar(Repr::Mod(reduce_i128(v as i128, p), p)),
        }
    }

    /// `(-1)^k` as a field element.
    pub fn sign(&self, k: i64) -> Scalar {
        if k.rem_euclid(2) == 0 {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    /// Parses `"a"`, `"a/b"` (rationals) or an integer residue (prime fields;
    /// fractions are accepted when the denominator is invertible).
    pub fn parse(&self, s: &str) -> Result<Scalar, LinalgError> {
        let s = s.trim();
        let bad = || LinalgError::Parse(s.to_string());
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
        let q = Scalar::from_big(BigRational::new(num, den));
        match *self {
            Field::Rationals => Ok(q),
            Field::PrimeField(p) => q.to_mod(p).ok_or_else(bad),
        }
    }

    /// True when `x` lives in this field (prime residues must match the modulus).
    pub fn contains(&self, x: &Scalar) -> bool {
        match (self, &x.0) {
            (Field::Rationals, Repr::Mod(..)) => false,
            (Field::Rationals, _) => true,
            (Field::PrimeField(p), Repr::Mod(_, q)) => p == q,
            (Field::PrimeField(_), _) => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::PrimeField(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(Clone)]
pub struct Scalar(Repr);

#[derive(Clone)]
enum Repr {
    /// numerator, denominator; denominator > 0 and coprime to the numerator
    Small(i64, i64),
    Big(Box<BigRational>),
    Mod(u64, u64),
}

fn reduce_i128(v: i128, p: u64) -> u64 {
    v.rem_euclid(p as i128) as u64
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    mod_pow(a, p - 2, p)
}

fn small_from_i128(num: i128, den: i128) -> Scalar {
    debug_assert!(den != 0);
    let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
    if n == 0 {
        return Scalar(Repr::Small(0, 1));
    }
    let g = n.gcd(&d);
    if g > 1 {
        n /= g;
        d /= g;
    }
    if n > i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128 {
        Scalar(Repr::Small(n as i64, d as i64))
    } else {
        Scalar(Repr::Big(Box::new(BigRational::new(
            BigInt::from(n),
            BigInt::from(d),
        ))))
    }
}

impl Scalar {
    fn from_big(q: BigRational) -> Scalar {
        match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN => Scalar(Repr::Small(n, d)),
            _ => Scalar(Repr::Big(Box::new(q))),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
            Repr::Mod(..) => panic!("prime-field residue used as a rational"),
        }
    }

    fn to_mod(&self, p: u64) -> Option<Scalar> {
        match &self.0 {
            Repr::Mod(v, q) => {
                assert_eq!(*q, p, "mixed prime fields");
                Some(Scalar(Repr::Mod(*v, p)))
            }
            Repr::Small(n, d) => {
                let dn = reduce_i128(*d as i128, p);
                if dn == 0 {
                    return None;
                }
                let nn = reduce_i128(*n as i128, p);
                Some(Scalar(Repr::Mod(
                    ((nn as u128 * mod_inv(dn, p) as u128) % p as u128) as u64,
                    p,
                )))
            }
            Repr::Big(b) => {
                let pb = BigInt::from(p);
                let dn = b.denom().mod_floor(&pb).to_u64().unwrap();
                if dn == 0 {
                    return None;
                }
                let nn = b.numer().mod_floor(&pb).to_u64().unwrap();
                Some(Scalar(Repr::Mod(
                    ((nn as u128 * mod_inv(dn, p) as u128) % p as u128) as u64,
                    p,
                )))
            }
        }
    }

    fn modulus(&self) -> Option<u64> {
        match self.0 {
            Repr::Mod(_, p) => Some(p),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n == 0,
            Repr::Big(b) => b.is_zero(),
            Repr::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Small(n, d) => *n == 1 && *d == 1,
            Repr::Big(b) => b.is_one(),
            Repr::Mod(v, _) => *v == 1,
        }
    }

    /// The field this element belongs to.
    pub fn field(&self) -> Field {
        match self.0 {
            Repr::Mod(_, p) => Field::PrimeField(p),
            _ => Field::Rationals,
        }
    }

    pub fn inv(&self) -> Scalar {
        assert!(!self.is_zero(), "division by zero");
        match &self.0 {
            Repr::Small(n, d) => small_from_i128(*d as i128, *n as i128),
            Repr::Big(b) => Scalar::from_big(b.recip()),
            Repr::Mod(v, p) => Scalar(Repr::Mod(mod_inv(*v, *p), *p)),
        }
    }

    /// Returns `self` negated when `odd` holds.
    pub fn signed(self, odd: bool) -> Scalar {
        if odd {
            -self
        } else {
            self
        }
    }

    fn binop(
        &self,
        other: &Scalar,
        small: fn(i128, i128, i128, i128) -> (i128, i128),
        big: fn(&BigRational, &BigRational) -> BigRational,
        modp: fn(u64, u64, u64) -> u64,
    ) -> Scalar {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (n, m) = small(*a as i128, *b as i128, *c as i128, *d as i128);
                small_from_i128(n, m)
            }
            (Repr::Mod(a, p), Repr::Mod(b, q)) => {
                assert_eq!(p, q, "mixed prime fields");
                Scalar(Repr::Mod(modp(*a, *b, *p), *p))
            }
            (Repr::Mod(_, p), _) => self.binop(
                &other.to_mod(*p).expect("denominator divisible by p"),
                small,
                big,
                modp,
            ),
            (_, Repr::Mod(_, p)) => self
                .to_mod(*p)
                .expect("denominator divisible by p")
                .binop(other, small, big, modp),
            _ => Scalar::from_big(big(&self.to_big(), &other.to_big())),
        }
    }
}

fn add_small(a: i128, b: i128, c: i128, d: i128) -> (i128, i128) {
    if b == d {
        (a + c, b)
    } else {
        (a * d + c * b, b * d)
    }
}
fn sub_small(a: i128, b: i128, c: i128, d: i128) -> (i128, i128) {
    if b == d {
        (a - c, b)
    } else {
        (a * d - c * b, b * d)
    }
}
fn mul_small(a: i128, b: i128, c: i128, d: i128) -> (i128, i128) {
    (a * c, b * d)
}
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - b as u128) % p as u128) as u64
}
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        if o.is_zero() && o.modulus().is_none() {
            return self.clone();
        }
        self.binop(o, add_small, |x, y| x + y, add_mod)
    }
}
impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self.binop(o, sub_small, |x, y| x - y, sub_mod)
    }
}
impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        self.binop(o, mul_small, |x, y| x * y, mul_mod)
    }
}
impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, o: &Scalar) -> Scalar {
        self * &o.inv()
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}
impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}
impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self.0 {
            Repr::Small(n, d) => small_from_i128(-(n as i128), d as i128),
            Repr::Big(b) => Scalar::from_big(-*b),
            Repr::Mod(v, p) => Scalar(Repr::Mod(if v == 0 { 0 } else { p - v }, p)),
        }
    }
}
impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -self.clone()
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Scalar) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            (Repr::Mod(a, p), Repr::Mod(b, q)) => a == b && p == q,
            _ => (self - other).is_zero(),
        }
    }
}
impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        match (&self.0, &other.0) {
            (Repr::Mod(a, _), Repr::Mod(b, _)) => a.partial_cmp(b),
            (Repr::Mod(..), _) | (_, Repr::Mod(..)) => None,
            _ => {
                let d = self - other;
                Some(if d.is_zero() {
                    Ordering::Equal
                } else if d.to_big().is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                })
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Scalar {
        Scalar(Repr::Small(v, 1))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) => {
                if b.denom().is_one() {
                    write!(f, "{}", b.numer())
                } else {
                    write!(f, "{}/{}", b.numer(), b.denom())
                }
            }
            Repr::Mod(v, _) => write!(f, "{v}"),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arithmetic_is_exact() {
        let q = Field::Rationals;
        let a = q.parse("1/3").unwrap();
        let b = q.parse("2/3").unwrap();
        assert!((&a + &b).is_one());
        assert_eq!(&a * &b, q.parse("2/9").unwrap());
        assert_eq!((&a / &b).to_string(), "1/2");
    }

    #[test]
    fn overflow_promotes_to_big() {
        let q = Field::Rationals;
        let big = q.from_i64(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.to_string(), "85070591730234615847396907784232501249");
        let back = &sq / &big;
        assert_eq!(back, big);
    }

    #[test]
    fn prime_field_uses_fermat_inverse() {
        let f = Field::prime(7).unwrap();
        let three = f.from_i64(3);
        assert_eq!(three.inv(), f.from_i64(5));
        assert!((f.from_i64(4) + f.from_i64(3)).is_zero());
        assert_eq!(f.parse("1/2").unwrap(), f.from_i64(4));
    }

    #[test]
    fn mixed_sign_constants_promote() {
        let f = Field::prime(5).unwrap();
        let x = f.from_i64(2);
        assert_eq!(-x.clone(), f.from_i64(3));
        assert_eq!(Scalar::from(-1) * x, f.from_i64(3));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(Field::prime(9).is_err());
        assert!(Field::prime(2).is_ok());
    }
}
