//! Exact scalars: arbitrary-precision rationals and residues modulo an odd
//! prime.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The ground field. Characteristic 2 is rejected at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn make(kind: FieldKind, modulus: Option<u64>) -> Result<Self> {
        match (kind, modulus) {
            (FieldKind::Rationals, None) => Ok(Field::Rationals),
            (FieldKind::Rationals, Some(_)) => Err(Error::Parse {
                line: 0,
                column: 0,
                message: "the rational field takes no modulus".into(),
            }),
            (FieldKind::PrimeField, Some(p)) => Field::prime(p),
            (FieldKind::PrimeField, None) => Err(Error::Parse {
                line: 0,
                column: 0,
                message: "a prime field needs a modulus".into(),
            }),
        }
    }

    pub fn prime(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::CharTwo);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
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
            Field::Rationals => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Residue {
                value: (v as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(&self, v: &BigInt) -> Scalar {
        match *self {
            Field::Rationals => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor_u64(p);
                Scalar::Residue { value: r, modulus: p }
            }
        }
    }

    /// Parses a scalar literal: optional sign, digits, optional `/` and a
    /// positive denominator. Residues are reduced mod p.
    pub fn parse(&self, s: &str) -> Result<Scalar> {
        let bad = |message: &str| Error::Parse {
            line: 0,
            column: 0,
            message: format!("{message}: `{s}`"),
        };
        let t = s.trim();
        let (num_s, den_s) = match t.split_once('/') {
            Some((a, b)) => (a, Some(b)),
            None => (t, None),
        };
        let num = parse_signed_int(num_s).ok_or_else(|| bad("invalid scalar literal"))?;
        let den = match den_s {
            None => BigInt::one(),
            Some(d) => {
                if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(bad("denominator must be a positive integer"));
                }
                let d: BigInt = d.parse().map_err(|_| bad("invalid denominator"))?;
                if d.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                d
            }
        };
        let n = self.from_bigint(&num);
        let d = self.from_bigint(&den);
        Ok(&n * &d.inv()?)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `Q` or `Fp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rationals);
        }
        if let Some(p) = s.strip_prefix("Fp:") {
            let p: u64 = p.parse().map_err(|_| Error::Parse {
                line: 0,
                column: 0,
                message: format!("invalid modulus in `{s}`"),
            })?;
            return Field::prime(p);
        }
        Err(Error::Parse {
            line: 0,
            column: 0,
            message: format!("unknown field `{s}` (expected Q or Fp:<p>)"),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Rationals,
    PrimeField,
}

/// An exact element of a [`Field`]. Rationals are kept in lowest terms with a
/// positive denominator and residues in `[0, p)`, so structural equality is
/// field equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rationals,
            Scalar::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(r) => Scalar::Rational(r.recip()),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self * &other.inv()?)
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self + other)
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.same_field(other)?;
        Ok(self * other)
    }

    fn same_field(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

fn mismatch() -> ! {
    panic!("arithmetic on scalars from different fields")
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Residue {
                    value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                    modulus: *p,
                }
            }
            _ => mismatch(),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, modulus: p }, Scalar::Residue { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Residue {
                    value: mul_mod(*a, *b, *p),
                    modulus: *p,
                }
            }
            _ => mismatch(),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, modulus } => Scalar::Residue {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn parse_signed_int(s: &str) -> Option<BigInt> {
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.strip_prefix('+').unwrap_or(s).parse().ok()
}

trait ModFloorU64 {
    fn mod_floor_u64(&self, p: u64) -> u64;
}

impl ModFloorU64 for BigInt {
    fn mod_floor_u64(&self, p: u64) -> u64 {
        let m = BigInt::from(p);
        let r = ((self % &m) + &m) % &m;
        debug_assert!(!r.is_negative());
        r.to_u64().expect("residue fits in u64")
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
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

/// Deterministic Miller-Rabin for 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Scalar {
        Field::Rationals.parse(s).unwrap()
    }

    #[test]
    fn field_construction() {
        assert_eq!(Field::make(FieldKind::Rationals, None).unwrap(), Field::Rationals);
        assert_eq!(Field::make(FieldKind::PrimeField, Some(5)).unwrap(), Field::Prime(5));
        assert_eq!(Field::make(FieldKind::PrimeField, Some(2)), Err(Error::CharTwo));
        assert_eq!(Field::prime(9), Err(Error::NotPrime(9)));
        assert_eq!(Field::prime(1), Err(Error::NotPrime(1)));
        assert!(Field::prime(1_000_000_007).is_ok());
        assert_eq!("Fp:3".parse::<Field>().unwrap(), Field::Prime(3));
        assert_eq!("Q".parse::<Field>().unwrap(), Field::Rationals);
        assert!("Fp:4".parse::<Field>().is_err());
    }

    #[test]
    fn inverses_and_sums() {
        assert_eq!(q("2/3").inv().unwrap(), q("3/2"));
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.from_i64(3).inv().unwrap(), f5.from_i64(2));
        assert_eq!(q("1/2") + q("1/2"), q("1"));
        assert_eq!(q("0").inv(), Err(Error::DivisionByZero));
        assert_eq!(f5.zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn literals_are_canonical() {
        assert_eq!(q("-3/7").to_string(), "-3/7");
        assert_eq!(q("6/4").to_string(), "3/2");
        assert_eq!(q("+4").to_string(), "4");
        assert_eq!(q("-0").to_string(), "0");
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.parse("-1").unwrap().to_string(), "4");
        assert_eq!(f5.parse("12").unwrap().to_string(), "2");
        assert_eq!(f5.parse("1/2").unwrap().to_string(), "3");
        assert!(Field::Rationals.parse("1/-2").is_err());
        assert!(Field::Rationals.parse("1/0").is_err());
        assert!(Field::Rationals.parse("x").is_err());
        assert!(Field::Rationals.parse("").is_err());
        assert!(f5.parse("1/5").is_err());
    }

    #[test]
    fn residues_are_canonical() {
        let f7 = Field::prime(7).unwrap();
        assert_eq!(f7.from_i64(-1), f7.from_i64(6));
        assert_eq!(f7.from_i64(i64::MIN), f7.from_bigint(&BigInt::from(i64::MIN)));
        assert_eq!(-f7.zero(), f7.zero());
    }

    #[test]
    fn checked_ops_detect_mixed_fields() {
        let a = Field::Rationals.one();
        let b = Field::prime(3).unwrap().one();
        assert_eq!(a.checked_add(&b), Err(Error::FieldMismatch));
        assert_eq!(a.checked_mul(&b), Err(Error::FieldMismatch));
    }

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        let brute: Vec<u64> = (0..60u64)
            .filter(|&n| n >= 2 && (2..n).all(|d| n % d != 0))
            .collect();
        assert_eq!(small, brute);
        assert!(!is_prime(3_215_031_751));
        assert!(is_prime(18_446_744_073_709_551_557));
    }
}
