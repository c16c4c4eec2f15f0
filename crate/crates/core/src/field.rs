//! Exact scalar fields: the rationals and prime fields `F_p` with `p < 2^31`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::RingError;

/// Largest admissible prime modulus (exclusive). Products of two residues fit in a `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// The coefficient field of a ring context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FieldSpecRepr", into = "FieldSpecRepr")]
pub enum FieldSpec {
    Rationals,
    PrimeField(u32),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
enum FieldSpecRepr {
    Q,
    Fp { p: u64 },
}

impl TryFrom<FieldSpecRepr> for FieldSpec {
    type Error = RingError;

    fn try_from(repr: FieldSpecRepr) -> Result<Self, Self::Error> {
        match repr {
            FieldSpecRepr::Q => Ok(FieldSpec::Rationals),
            FieldSpecRepr::Fp { p } => FieldSpec::prime(p),
        }
    }
}

impl From<FieldSpec> for FieldSpecRepr {
    fn from(spec: FieldSpec) -> Self {
        match spec {
            FieldSpec::Rationals => FieldSpecRepr::Q,
            FieldSpec::PrimeField(p) => FieldSpecRepr::Fp { p: p as u64 },
        }
    }
}

/// Deterministic trial-division primality test; adequate below `2^31`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}

impl FieldSpec {
    /// The prime field `F_p`; rejects composite or oversized moduli.
    pub fn prime(p: u64) -> Result<Self, RingError> {
        if p >= MAX_MODULUS {
            return Err(RingError::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(RingError::NotPrime(p));
        }
        Ok(FieldSpec::PrimeField(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldSpec::Rationals => 0,
            FieldSpec::PrimeField(p) => *p,
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(&self) -> Option<u64> {
        match self {
            FieldSpec::Rationals => None,
            FieldSpec::PrimeField(p) => Some(*p as u64),
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElem {
        match *self {
            FieldSpec::Rationals => FieldElem::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField(p) => FieldElem::Residue {
                value: v.rem_euclid(p as i64) as u32,
                p,
            },
        }
    }

    /// Residue `value mod p` (or the integer `value` over Q).
    pub fn from_u64(&self, v: u64) -> FieldElem {
        match *self {
            FieldSpec::Rationals => FieldElem::Rational(BigRational::from_integer(BigInt::from(v))),
            FieldSpec::PrimeField(p) => FieldElem::Residue {
                value: (v % p as u64) as u32,
                p,
            },
        }
    }

    /// The rational `num/den`, reduced into this field.
    pub fn from_ratio(&self, num: BigInt, den: BigInt) -> Result<FieldElem, RingError> {
        if den.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        match *self {
            FieldSpec::Rationals => Ok(FieldElem::Rational(BigRational::new(num, den))),
            FieldSpec::PrimeField(p) => {
                let reduce = |x: &BigInt| -> u32 {
                    x.mod_floor(&BigInt::from(p)).to_u32().expect("residue below modulus")
                };
                let n = FieldElem::Residue { value: reduce(&num), p };
                let d = FieldElem::Residue { value: reduce(&den), p };
                n.div(&d)
            }
        }
    }

    /// Parses `"5"`, `"-3"` or `"5/6"` into this field.
    pub fn parse_elem(&self, s: &str) -> Result<FieldElem, RingError> {
        let s = s.trim();
        let bad = || RingError::Parse(format!("invalid coefficient `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (
                BigInt::from_str(n.trim()).map_err(|_| bad())?,
                BigInt::from_str(d.trim()).map_err(|_| bad())?,
            ),
            None => (BigInt::from_str(s).map_err(|_| bad())?, BigInt::one()),
        };
        self.from_ratio(num, den)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact scalar. Rationals are kept in lowest terms with a positive denominator;
/// residues are kept in `0..p`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Rational(BigRational),
    Residue { value: u32, p: u32 },
}

fn mod_inverse(a: u32, p: u32) -> Option<u32> {
    let (mut r0, mut r1) = (p as i64, a as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(p as i64) as u32)
}

impl FieldElem {
    pub fn field(&self) -> FieldSpec {
        match self {
            FieldElem::Rational(_) => FieldSpec::Rationals,
            FieldElem::Residue { p, .. } => FieldSpec::PrimeField(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_zero(),
            FieldElem::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Rational(r) => r.is_one(),
            FieldElem::Residue { value, .. } => *value == 1,
        }
    }

    /// The residue in `0..p`, if this is a prime-field element.
    pub fn residue(&self) -> Option<u32> {
        match self {
            FieldElem::Residue { value, .. } => Some(*value),
            FieldElem::Rational(_) => None,
        }
    }

    fn check(&self, other: &FieldElem) -> Result<(), RingError> {
        if self.field() != other.field() {
            return Err(RingError::FieldMismatch(self.field(), other.field()));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElem) -> Result<FieldElem, RingError> {
        self.check(other)?;
        Ok(self.add_same(other))
    }

    pub fn sub(&self, other: &FieldElem) -> Result<FieldElem, RingError> {
        self.check(other)?;
        Ok(self.sub_same(other))
    }

    pub fn mul(&self, other: &FieldElem) -> Result<FieldElem, RingError> {
        self.check(other)?;
        Ok(self.mul_same(other))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem, RingError> {
        self.check(other)?;
        let inv = other.inv()?;
        Ok(self.mul_same(&inv))
    }

    pub fn inv(&self) -> Result<FieldElem, RingError> {
        match self {
            FieldElem::Rational(r) => {
                if r.is_zero() {
                    Err(RingError::DivisionByZero)
                } else {
                    Ok(FieldElem::Rational(r.recip()))
                }
            }
            FieldElem::Residue { value, p } => mod_inverse(*value, *p)
                .map(|value| FieldElem::Residue { value, p: *p })
                .ok_or(RingError::DivisionByZero),
        }
    }

    pub fn neg(&self) -> FieldElem {
        match self {
            FieldElem::Rational(r) => FieldElem::Rational(-r),
            FieldElem::Residue { value, p } => FieldElem::Residue {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
        }
    }

    // Unchecked variants for callers that already validated the field (polynomial internals).

    pub(crate) fn add_same(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a + b),
            (FieldElem::Residue { value: a, p }, FieldElem::Residue { value: b, .. }) => {
                FieldElem::Residue {
                    value: ((*a as u64 + *b as u64) % *p as u64) as u32,
                    p: *p,
                }
            }
            _ => panic!("field mismatch in scalar addition"),
        }
    }

    pub(crate) fn sub_same(&self, other: &FieldElem) -> FieldElem {
        self.add_same(&other.neg())
    }

    pub(crate) fn mul_same(&self, other: &FieldElem) -> FieldElem {
        match (self, other) {
            (FieldElem::Rational(a), FieldElem::Rational(b)) => FieldElem::Rational(a * b),
            (FieldElem::Residue { value: a, p }, FieldElem::Residue { value: b, .. }) => {
                FieldElem::Residue {
                    value: ((*a as u64 * *b as u64) % *p as u64) as u32,
                    p: *p,
                }
            }
            _ => panic!("field mismatch in scalar multiplication"),
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElem::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            FieldElem::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl FieldElem {
    /// True for a negative rational; residues have no sign.
    pub(crate) fn is_negative(&self) -> bool {
        matches!(self, FieldElem::Rational(r) if r.is_negative())
    }
}
