//! Exact scalars over Q or a prime field F_p.
//!
//! Every value in the workbench is either a `BigRational` or a residue mod a
//! prime carried inside the scalar. Mixing scalars from different fields is a
//! programming error and panics; user-facing field validation happens where
//! fixture data is parsed, not here.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "p")]
pub enum FieldSpec {
    Rational,
    Prime(u32),
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("unknown field spec `{0}` (expected `q` or `f<p>`)")]
    Unparseable(String),
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    let p = p as u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl FieldSpec {
    pub fn rational() -> Self {
        FieldSpec::Rational
    }

    pub fn prime(p: u32) -> Result<Self, FieldError> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(FieldError::NotPrime(p))
        }
    }

    /// Parses the CLI/fixture notation: `q` for the rationals, `f2`, `f3`, ... for prime fields.
    pub fn parse(s: &str) -> Result<Self, FieldError> {
        if s == "q" || s == "Q" {
            return Ok(FieldSpec::Rational);
        }
        if let Some(rest) = s.strip_prefix('f').or_else(|| s.strip_prefix('F')) {
            if let Ok(p) = rest.parse::<u32>() {
                return FieldSpec::prime(p);
            }
        }
        Err(FieldError::Unparseable(s.to_string()))
    }

    pub fn zero(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::zero()),
            FieldSpec::Prime(p) => Scalar::Fp { p: *p, v: 0 },
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::one()),
            FieldSpec::Prime(p) => Scalar::Fp { p: *p, v: 1 },
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            FieldSpec::Rational => Scalar::Rat(BigRational::from(BigInt::from(n))),
            FieldSpec::Prime(p) => {
                let m = *p as i64;
                Scalar::Fp {
                    p: *p,
                    v: n.rem_euclid(m) as u64,
                }
            }
        }
    }

    /// Parses `"-3/4"`-style literals into this field.
    pub fn parse_scalar(&self, s: &str) -> Option<Scalar> {
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n.trim().parse::<i64>().ok()?, d.trim().parse::<i64>().ok()?),
            None => (s.trim().parse::<i64>().ok()?, 1),
        };
        if den == 0 {
            return None;
        }
        let num = self.from_i64(num);
        let den = self.from_i64(den);
        if den.is_zero() {
            return None;
        }
        Some(num.mul(&den.inv()))
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "q"),
            FieldSpec::Prime(p) => write!(f, "f{p}"),
        }
    }
}

/// An element of Q or of F_p. The prime rides along so values are
/// self-describing; binary operations panic on a field mismatch.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp { p: u32, v: u64 },
}

impl Scalar {
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::Rational,
            Scalar::Fp { p, .. } => FieldSpec::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Fp { v, .. } => *v == 1,
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: q, v: b }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp {
                    p: *p,
                    v: ((*a as u128 + *b as u128) % *p as u128) as u64,
                }
            }
            _ => panic!("field mismatch: {self:?} + {rhs:?}"),
        }
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: if *v == 0 { 0 } else { *p as u64 - *v },
            },
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: q, v: b }) => {
                assert_eq!(p, q, "field mismatch");
                Scalar::Fp {
                    p: *p,
                    v: ((*a as u128 * *b as u128) % *p as u128) as u64,
                }
            }
            _ => panic!("field mismatch: {self:?} * {rhs:?}"),
        }
    }

    /// Multiplicative inverse. Panics on zero; callers guard via `is_zero`.
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Rat(a.recip())
            }
            Scalar::Fp { p, v } => {
                assert!(*v != 0, "inverse of zero");
                // Fermat: v^(p-2) mod p.
                let mut base = *v as u128;
                let m = *p as u128;
                let mut exp = *p as u64 - 2;
                let mut acc: u128 = 1;
                while exp > 0 {
                    if exp & 1 == 1 {
                        acc = acc * base % m;
                    }
                    base = base * base % m;
                    exp >>= 1;
                }
                Scalar::Fp { p: *p, v: acc as u64 }
            }
        }
    }

    pub fn div(&self, rhs: &Scalar) -> Scalar {
        self.mul(&rhs.inv())
    }

    /// `true` when the scalar is 1 or -1, i.e. elimination against it stays
    /// fraction-free.
    pub fn is_unit_pivot(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.numer().abs().is_one() && r.denom().is_one(),
            Scalar::Fp { .. } => true,
        }
    }

    /// Rendered for reports: integers as `n`, fractions as `n/d`, residues as `n`.
    pub fn render(&self) -> String {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => v.to_string(),
        }
    }

    /// Exact integer value if the scalar is an integer (used by tests).
    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_i64()
                } else {
                    None
                }
            }
            Scalar::Fp { v, .. } => Some(*v as i64),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_validation() {
        assert!(FieldSpec::prime(2).is_ok());
        assert!(FieldSpec::prime(3).is_ok());
        assert!(FieldSpec::prime(97).is_ok());
        assert_eq!(FieldSpec::prime(1), Err(FieldError::NotPrime(1)));
        assert_eq!(FieldSpec::prime(4), Err(FieldError::NotPrime(4)));
        assert_eq!(FieldSpec::prime(91), Err(FieldError::NotPrime(91)));
    }

    #[test]
    fn parse_field_notation() {
        assert_eq!(FieldSpec::parse("q").unwrap(), FieldSpec::Rational);
        assert_eq!(FieldSpec::parse("f2").unwrap(), FieldSpec::Prime(2));
        assert_eq!(FieldSpec::parse("f3").unwrap(), FieldSpec::Prime(3));
        assert!(FieldSpec::parse("f4").is_err());
        assert!(FieldSpec::parse("r").is_err());
    }

    #[test]
    fn rational_arithmetic() {
        let f = FieldSpec::Rational;
        let half = f.parse_scalar("1/2").unwrap();
        let third = f.parse_scalar("1/3").unwrap();
        let sum = half.add(&third);
        assert_eq!(sum, f.parse_scalar("5/6").unwrap());
        assert_eq!(half.mul(&third), f.parse_scalar("1/6").unwrap());
        assert_eq!(half.inv(), f.from_i64(2));
        assert_eq!(f.from_i64(-3).neg(), f.from_i64(3));
        assert_eq!(sum.render(), "5/6");
        assert_eq!(f.from_i64(-2).render(), "-2");
    }

    #[test]
    fn fp_arithmetic() {
        let f = FieldSpec::prime(7).unwrap();
        let a = f.from_i64(3);
        let b = f.from_i64(5);
        assert_eq!(a.add(&b), f.from_i64(1));
        assert_eq!(a.mul(&b), f.from_i64(1));
        assert_eq!(a.inv(), f.from_i64(5));
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        for x in 1..7 {
            let s = f.from_i64(x);
            assert!(s.mul(&s.inv()).is_one());
        }
    }

    #[test]
    fn unit_pivot_detection() {
        let q = FieldSpec::Rational;
        assert!(q.from_i64(1).is_unit_pivot());
        assert!(q.from_i64(-1).is_unit_pivot());
        assert!(!q.from_i64(2).is_unit_pivot());
        assert!(!q.parse_scalar("1/2").unwrap().is_unit_pivot());
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = FieldSpec::Rational.one().add(&FieldSpec::Prime(2).one());
    }
}
