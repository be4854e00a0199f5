//! Base-field scalars: arbitrary-precision rationals and prime fields.
//!
//! A [`BaseField`] is a descriptor (the rationals, or ℤ/p for a prime p) and
//! acts as an arithmetic context for [`BaseElem`] values.  Elements do not
//! carry their field; the containing structures (field handles, matrices)
//! guarantee that elements are only combined within one field.

use crate::{Error, Result};
use num::bigint::Sign;
use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use std::fmt;

/// Descriptor of the ground field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseField {
    /// The field of rational numbers.
    Rationals,
    /// The prime field with `p` elements.
    Prime(u64),
}

/// An element of a [`BaseField`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseElem {
    /// A rational number (always fully reduced).
    Rat(BigRational),
    /// A residue in `0..p`.
    Mod(u64),
}

impl BaseField {
    /// Checks that the descriptor denotes an actual field.
    pub fn validate(&self) -> Result<()> {
        match *self {
            BaseField::Rationals => Ok(()),
            BaseField::Prime(p) => {
                if is_prime_u64(p) {
                    Ok(())
                } else {
                    Err(Error::NotAField(format!("{p} is not prime")))
                }
            }
        }
    }

    pub fn zero(&self) -> BaseElem {
        match self {
            BaseField::Rationals => BaseElem::Rat(BigRational::zero()),
            BaseField::Prime(_) => BaseElem::Mod(0),
        }
    }

    pub fn one(&self) -> BaseElem {
        match self {
            BaseField::Rationals => BaseElem::Rat(BigRational::one()),
            BaseField::Prime(_) => BaseElem::Mod(1),
        }
    }

    pub fn from_i64(&self, n: i64) -> BaseElem {
        match *self {
            BaseField::Rationals => BaseElem::Rat(BigRational::from_integer(BigInt::from(n))),
            BaseField::Prime(p) => BaseElem::Mod((n as i128).rem_euclid(p as i128) as u64),
        }
    }

    /// Converts an exact rational into this field.  Fails over ℤ/p when the
    /// denominator is divisible by p.
    pub fn from_rational(&self, q: &BigRational) -> Result<BaseElem> {
        match *self {
            BaseField::Rationals => Ok(BaseElem::Rat(q.clone())),
            BaseField::Prime(p) => {
                let pp = BigInt::from(p);
                let num = q.numer().mod_floor_big(&pp);
                let den = q.denom().mod_floor_big(&pp);
                if den == 0 {
                    return Err(Error::Parse(format!(
                        "denominator of {q} is divisible by the characteristic {p}"
                    )));
                }
                let den_inv = inv_mod(den, p).expect("nonzero residue mod a prime");
                Ok(BaseElem::Mod(mul_mod(num, den_inv, p)))
            }
        }
    }

    pub fn add(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        match (self, a, b) {
            (BaseField::Rationals, BaseElem::Rat(x), BaseElem::Rat(y)) => BaseElem::Rat(x + y),
            (BaseField::Prime(p), BaseElem::Mod(x), BaseElem::Mod(y)) => {
                BaseElem::Mod(add_mod(*x, *y, *p))
            }
            _ => panic!("base element does not belong to this field"),
        }
    }

    pub fn sub(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &BaseElem) -> BaseElem {
        match (self, a) {
            (BaseField::Rationals, BaseElem::Rat(x)) => BaseElem::Rat(-x),
            (BaseField::Prime(p), BaseElem::Mod(x)) => {
                BaseElem::Mod(if *x == 0 { 0 } else { p - x })
            }
            _ => panic!("base element does not belong to this field"),
        }
    }

    pub fn mul(&self, a: &BaseElem, b: &BaseElem) -> BaseElem {
        match (self, a, b) {
            (BaseField::Rationals, BaseElem::Rat(x), BaseElem::Rat(y)) => BaseElem::Rat(x * y),
            (BaseField::Prime(p), BaseElem::Mod(x), BaseElem::Mod(y)) => {
                BaseElem::Mod(mul_mod(*x, *y, *p))
            }
            _ => panic!("base element does not belong to this field"),
        }
    }

    pub fn inv(&self, a: &BaseElem) -> Result<BaseElem> {
        if self.is_zero(a) {
            return Err(Error::Singular("division by zero".into()));
        }
        match (self, a) {
            (BaseField::Rationals, BaseElem::Rat(x)) => Ok(BaseElem::Rat(x.recip())),
            (BaseField::Prime(p), BaseElem::Mod(x)) => {
                Ok(BaseElem::Mod(inv_mod(*x, *p).expect("nonzero residue")))
            }
            _ => panic!("base element does not belong to this field"),
        }
    }

    pub fn is_zero(&self, a: &BaseElem) -> bool {
        match a {
            BaseElem::Rat(x) => x.is_zero(),
            BaseElem::Mod(x) => *x == 0,
        }
    }

    pub fn is_one(&self, a: &BaseElem) -> bool {
        match a {
            BaseElem::Rat(x) => x.is_one(),
            BaseElem::Mod(x) => *x == 1,
        }
    }

    /// Parses an integer or `p/q` fraction.
    pub fn parse(&self, s: &str) -> Result<BaseElem> {
        let q = parse_rational(s)?;
        self.from_rational(&q)
    }

    pub fn format(&self, a: &BaseElem) -> String {
        match a {
            BaseElem::Rat(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            BaseElem::Mod(x) => x.to_string(),
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "Q"),
            BaseField::Prime(p) => write!(f, "F{p}"),
        }
    }
}

/// Parses a scalar from a JSON value: an integer number, or a string in the
/// syntax accepted by [`BaseField::parse`] (e.g. `"5/7"`).
pub fn scalar_from_json(field: &BaseField, v: &serde_json::Value) -> Result<BaseElem> {
    match v {
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(field.from_i64(i)),
            None => Err(Error::Parse(format!(
                "non-integer numeric scalar {n}; write fractions as strings like \"1/2\""
            ))),
        },
        serde_json::Value::String(s) => field.parse(s),
        other => Err(Error::Parse(format!("expected a scalar, got {other}"))),
    }
}

/// Renders a scalar as a JSON value: an integer number when it fits in an
/// `i64`, otherwise a string in the syntax [`BaseField::parse`] accepts.
pub fn scalar_to_json(field: &BaseField, a: &BaseElem) -> serde_json::Value {
    match a {
        BaseElem::Mod(x) => serde_json::Value::from(*x),
        BaseElem::Rat(q) => {
            if q.denom().is_one() {
                if let Some(i) = q.numer().to_i64() {
                    return serde_json::Value::from(i);
                }
            }
            serde_json::Value::from(field.format(a))
        }
    }
}

/// Parses `"-3"`, `"5/7"`, or similar into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num_str
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational: {s:?}")))?;
    let den: BigInt = den_str
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational: {s:?}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

trait ModFloorBig {
    fn mod_floor_big(&self, p: &BigInt) -> u64;
}

impl ModFloorBig for BigInt {
    fn mod_floor_big(&self, p: &BigInt) -> u64 {
        let mut r = self % p;
        if r.sign() == Sign::Minus {
            r += p;
        }
        let (_, digits) = r.to_u64_digits();
        match digits.len() {
            0 => 0,
            1 => digits[0],
            _ => unreachable!("residue below a u64 modulus"),
        }
    }
}

fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    (((a as u128) + (b as u128)) % (p as u128)) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (((a as u128) * (b as u128)) % (p as u128)) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        return None;
    }
    Some(pow_mod(a, p - 2, p))
}

/// Deterministic Miller–Rabin primality test, exact for all `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(3));
        assert!(is_prime_u64(5));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(0));
        assert!(!is_prime_u64(91)); // 7 * 13
        assert!(!is_prime_u64(1_000_000_001)); // divisible by 7
    }

    #[test]
    fn rational_roundtrip() {
        let f = BaseField::Rationals;
        let x = f.parse("-3/6").unwrap();
        assert_eq!(f.format(&x), "-1/2");
        let y = f.parse("4").unwrap();
        assert_eq!(f.format(&f.mul(&x, &y)), "-2");
    }

    #[test]
    fn mod_field_ops() {
        let f = BaseField::Prime(7);
        f.validate().unwrap();
        let x = f.parse("1/2").unwrap(); // 2^{-1} = 4 mod 7
        assert_eq!(f.format(&x), "4");
        let inv = f.inv(&f.from_i64(3)).unwrap();
        assert!(f.is_one(&f.mul(&inv, &f.from_i64(3))));
        assert!(f.is_zero(&f.add(&f.from_i64(5), &f.from_i64(2))));
        assert!(BaseField::Prime(6).validate().is_err());
    }

    #[test]
    fn negative_from_i64() {
        let f = BaseField::Prime(5);
        assert_eq!(f.from_i64(-1), BaseElem::Mod(4));
        assert_eq!(f.from_i64(-7), BaseElem::Mod(3));
    }
}
