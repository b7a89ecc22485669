//! Coefficient fields: prime fields F_p for small p, and the rationals.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::fmt;

/// Largest admitted prime modulus; keeps `u64` products exact.
const MAX_PRIME: u64 = (1 << 31) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldSpec {
    Fp(u64),
    Rational,
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn prime_field(p: u64) -> Result<FieldSpec> {
        if !is_prime_u64(p) || p > MAX_PRIME {
            return Err(Error::usage(format!("invalid prime field modulus {p}")));
        }
        Ok(FieldSpec::Fp(p))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Fp(p) => Scalar::Fp { val: 0, modulus: *p },
            FieldSpec::Rational => Scalar::Rat(BigRational::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Fp(p) => Scalar::Fp { val: 1, modulus: *p },
            FieldSpec::Rational => Scalar::Rat(BigRational::one()),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Fp(p) => {
                let p = *p as i128;
                let r = ((n as i128 % p) + p) % p;
                Scalar::Fp { val: r as u64, modulus: p as u64 }
            }
            FieldSpec::Rational => Scalar::Rat(BigRational::from(BigInt::from(n))),
        }
    }

    /// Builds `num/den` in the field; `den` must be invertible.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        if d.is_zero() {
            return Err(Error::usage(format!("denominator {den} is zero in {self}")));
        }
        Ok(self.from_i64(num).mul(&d.inv()))
    }

    pub fn label(&self) -> String {
        match self {
            FieldSpec::Fp(p) => format!("F{p}"),
            FieldSpec::Rational => "Q".to_string(),
        }
    }

    pub fn parse_label(s: &str) -> Result<FieldSpec> {
        if s == "Q" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(rest) = s.strip_prefix('F') {
            if let Ok(p) = rest.parse::<u64>() {
                return FieldSpec::prime_field(p);
            }
        }
        Err(Error::usage(format!("unknown field `{s}` (expected F<p> or Q)")))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// A field element. F_p elements carry their modulus so arithmetic never
/// needs an external field handle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Fp { val: u64, modulus: u64 },
    Rat(BigRational),
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Fp { modulus, .. } => FieldSpec::Fp(*modulus),
            Scalar::Rat(_) => FieldSpec::Rational,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Fp { val, .. } => *val == 0,
            Scalar::Rat(r) => r.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Fp { val, .. } => *val == 1,
            Scalar::Rat(r) => r.is_one(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Fp { val: a, modulus: p }, Scalar::Fp { val: b, modulus: q }) => {
                debug_assert_eq!(p, q, "mixed moduli");
                Scalar::Fp { val: (a + b) % p, modulus: *p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => panic!("mixed field arithmetic"),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Fp { val: a, modulus: p }, Scalar::Fp { val: b, modulus: q }) => {
                debug_assert_eq!(p, q, "mixed moduli");
                Scalar::Fp { val: (a * b) % p, modulus: *p }
            }
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            _ => panic!("mixed field arithmetic"),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Fp { val, modulus } => Scalar::Fp { val: (modulus - val) % modulus, modulus: *modulus },
            Scalar::Rat(r) => Scalar::Rat(-r),
        }
    }

    /// Multiplicative inverse. Panics on zero; callers guard.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Fp { val, modulus } => {
                assert!(*val != 0, "inverse of zero");
                // Fermat: val^(p-2) mod p.
                let mut base = *val;
                let mut exp = modulus - 2;
                let mut acc = 1u64;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % modulus;
                    }
                    base = base * base % modulus;
                    exp >>= 1;
                }
                Scalar::Fp { val: acc, modulus: *modulus }
            }
            Scalar::Rat(r) => {
                assert!(!r.is_zero(), "inverse of zero");
                Scalar::Rat(r.recip())
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    /// Total order used only for canonical tie-breaking, not field structure.
    pub fn canonical_cmp(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Fp { val: a, .. }, Scalar::Fp { val: b, .. }) => a.cmp(b),
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            (Scalar::Fp { .. }, Scalar::Rat(_)) => Ordering::Less,
            (Scalar::Rat(_), Scalar::Fp { .. }) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Fp { val, .. } => write!(f, "{val}"),
            Scalar::Rat(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else if r.is_negative() {
                    write!(f, "-{}/{}", r.numer().magnitude(), r.denom().magnitude())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_arithmetic() {
        let f = FieldSpec::prime_field(5).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(4);
        assert_eq!(a.add(&b), f.from_i64(2));
        assert_eq!(a.mul(&b), f.from_i64(2));
        assert_eq!(a.sub(&b), f.from_i64(4));
        assert_eq!(b.inv().mul(&b), f.one());
        assert_eq!(f.from_i64(-7), f.from_i64(3));
    }

    #[test]
    fn rational_arithmetic() {
        let f = FieldSpec::Rational;
        let half = f.from_ratio(1, 2).unwrap();
        assert_eq!(half.add(&half), f.one());
        assert_eq!(half.inv(), f.from_i64(2));
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(FieldSpec::prime_field(6).is_err());
        assert!(FieldSpec::prime_field(1).is_err());
    }
}
