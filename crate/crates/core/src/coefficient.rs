//! Scalar ring shared by every series in the crate.
//!
//! A [`Coefficient`] is either an exact rational (GMP-backed, always kept in
//! lowest terms) or a multi-precision binary float. The two never mix:
//! the checked operations return [`Error::RingMismatch`] and the operator
//! impls panic, which is only reachable if a series was built from
//! heterogeneous coefficients behind the constructors' backs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Float, Rational};

use crate::error::{Error, Result};

/// Default float precision in significant decimal digits.
pub const DEFAULT_FLOAT_DIGITS: u32 = 50;

/// Relative agreement threshold used whenever float-ring values are compared.
pub const FLOAT_REL_TOL: f64 = 1e-12;

/// Which ring a coefficient (or a whole series) lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Rational,
    /// Binary precision in bits.
    Float { prec: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Rational,
    Float,
}

impl fmt::Display for RingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingKind::Rational => f.write_str("rational"),
            RingKind::Float => f.write_str("float"),
        }
    }
}

impl Ring {
    /// Float ring carrying at least `digits` significant decimal digits.
    pub fn float_digits(digits: u32) -> Ring {
        let bits = (f64::from(digits.max(1)) * std::f64::consts::LOG2_10).ceil() as u32;
        Ring::Float { prec: bits + 16 }
    }

    pub fn default_float() -> Ring {
        Ring::float_digits(DEFAULT_FLOAT_DIGITS)
    }

    pub fn kind(self) -> RingKind {
        match self {
            Ring::Rational => RingKind::Rational,
            Ring::Float { .. } => RingKind::Float,
        }
    }

    pub fn compatible(self, other: Ring) -> bool {
        self.kind() == other.kind()
    }

    /// Combine two compatible rings; floats keep the larger precision.
    pub fn join(self, other: Ring) -> Result<Ring> {
        match (self, other) {
            (Ring::Rational, Ring::Rational) => Ok(Ring::Rational),
            (Ring::Float { prec: a }, Ring::Float { prec: b }) => Ok(Ring::Float { prec: a.max(b) }),
            _ => Err(Error::RingMismatch { left: self.kind(), right: other.kind() }),
        }
    }

    pub fn zero(self) -> Coefficient {
        self.int(0)
    }

    pub fn one(self) -> Coefficient {
        self.int(1)
    }

    pub fn int(self, v: i64) -> Coefficient {
        match self {
            Ring::Rational => Coefficient::Rational(Rational::from(v)),
            Ring::Float { prec } => Coefficient::Float(Float::with_val(prec, v)),
        }
    }

    /// `num/den`; panics on a zero denominator.
    pub fn ratio(self, num: i64, den: i64) -> Coefficient {
        assert!(den != 0, "zero denominator");
        self.from_rational(&Rational::from((num, den)))
    }

    pub fn from_rational(self, q: &Rational) -> Coefficient {
        match self {
            Ring::Rational => Coefficient::Rational(q.clone()),
            Ring::Float { prec } => Coefficient::Float(Float::with_val(prec, q)),
        }
    }

    /// Parse `"p/q"`, `"p"`, or (float ring only) a decimal literal.
    pub fn parse(self, s: &str) -> Result<Coefficient> {
        let t = s.trim();
        if let Ok(q) = t.parse::<Rational>() {
            return Ok(self.from_rational(&q));
        }
        match self {
            Ring::Rational => Err(Error::Parse(format!("not an exact rational: {t:?}"))),
            Ring::Float { prec } => Float::parse(t)
                .map(|p| Coefficient::Float(Float::with_val(prec, p)))
                .map_err(|e| Error::Parse(format!("not a number: {t:?} ({e})"))),
        }
    }
}

/// An element of one of the two supported rings.
#[derive(Clone, Debug, PartialEq)]
pub enum Coefficient {
    Rational(Rational),
    Float(Float),
}

impl Coefficient {
    pub fn ring(&self) -> Ring {
        match self {
            Coefficient::Rational(_) => Ring::Rational,
            Coefficient::Float(f) => Ring::Float { prec: f.prec() },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Rational(q) => q.cmp0() == Ordering::Equal,
            Coefficient::Float(f) => f.is_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Coefficient::Rational(q) => Some(q),
            Coefficient::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coefficient::Rational(q) => q.to_f64(),
            Coefficient::Float(f) => f.to_f64(),
        }
    }

    /// Float view at `prec` bits, whatever the ring.
    pub fn to_float(&self, prec: u32) -> Float {
        match self {
            Coefficient::Rational(q) => Float::with_val(prec, q),
            Coefficient::Float(f) => Float::with_val(prec, f),
        }
    }

    pub fn abs(&self) -> Coefficient {
        match self {
            Coefficient::Rational(q) => Coefficient::Rational(Rational::from(q.abs_ref())),
            Coefficient::Float(f) => Coefficient::Float(Float::with_val(f.prec(), f.abs_ref())),
        }
    }

    fn check(&self, other: &Coefficient) -> Result<()> {
        if self.ring().compatible(other.ring()) {
            Ok(())
        } else {
            Err(Error::RingMismatch { left: self.ring().kind(), right: other.ring().kind() })
        }
    }

    pub fn try_add(&self, other: &Coefficient) -> Result<Coefficient> {
        self.check(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &Coefficient) -> Result<Coefficient> {
        self.check(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &Coefficient) -> Result<Coefficient> {
        self.check(other)?;
        Ok(self * other)
    }

    pub fn try_div(&self, other: &Coefficient) -> Result<Coefficient> {
        self.check(other)?;
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match (self, other) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => {
                Coefficient::Rational(Rational::from(a / b))
            }
            (Coefficient::Float(a), Coefficient::Float(b)) => {
                Coefficient::Float(Float::with_val(a.prec().max(b.prec()), a / b))
            }
            _ => unreachable!(),
        })
    }

    pub fn mul_int(&self, k: i64) -> Coefficient {
        match self {
            Coefficient::Rational(q) => Coefficient::Rational(Rational::from(q * k)),
            Coefficient::Float(f) => Coefficient::Float(Float::with_val(f.prec(), f * k)),
        }
    }

    /// Agreement test: exact equality for rationals, [`FLOAT_REL_TOL`]
    /// relative (with unit floor) for floats. Returns `(agrees, |a - b|)`.
    pub fn agrees_with(&self, other: &Coefficient) -> Result<(bool, f64)> {
        let diff = self.try_sub(other)?;
        let defect = diff.abs().to_f64();
        let ok = match diff {
            Coefficient::Rational(ref q) => q.cmp0() == Ordering::Equal,
            Coefficient::Float(_) => {
                let scale = 1f64.max(self.to_f64().abs()).max(other.to_f64().abs());
                defect <= FLOAT_REL_TOL * scale
            }
        };
        Ok((ok, defect))
    }
}

impl fmt::Display for Coefficient {
    /// Rationals print as `p/q` (or `p`); floats in decimal with enough
    /// digits to parse back to the same value at the same precision.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Rational(q) => write!(f, "{q}"),
            Coefficient::Float(x) => {
                let digits = 1 + (f64::from(x.prec()) / std::f64::consts::LOG2_10).ceil() as usize;
                f.write_str(&x.to_string_radix(10, Some(digits)))
            }
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<&Coefficient> for &Coefficient {
            type Output = Coefficient;
            fn $m(self, rhs: &Coefficient) -> Coefficient {
                match (self, rhs) {
                    (Coefficient::Rational(a), Coefficient::Rational(b)) => {
                        Coefficient::Rational(Rational::from(a $op b))
                    }
                    (Coefficient::Float(a), Coefficient::Float(b)) => {
                        Coefficient::Float(Float::with_val(a.prec().max(b.prec()), a $op b))
                    }
                    _ => panic!("ring mismatch in coefficient arithmetic"),
                }
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Neg for &Coefficient {
    type Output = Coefficient;
    fn neg(self) -> Coefficient {
        match self {
            Coefficient::Rational(q) => Coefficient::Rational(Rational::from(-q)),
            Coefficient::Float(f) => Coefficient::Float(Float::with_val(f.prec(), -f)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_canonical() {
        let q = Ring::Rational.ratio(6, -4);
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(Ring::Rational.ratio(4, 2).to_string(), "2");
    }

    #[test]
    fn mismatched_rings_are_rejected() {
        let a = Ring::Rational.one();
        let b = Ring::default_float().one();
        assert!(matches!(a.try_add(&b), Err(Error::RingMismatch { .. })));
        assert!(matches!(b.try_mul(&a), Err(Error::RingMismatch { .. })));
    }

    #[test]
    fn division_by_zero_errors() {
        let r = Ring::Rational;
        assert!(matches!(r.one().try_div(&r.zero()), Err(Error::DivisionByZero)));
    }

    #[test]
    fn float_precision_covers_requested_digits() {
        let Ring::Float { prec } = Ring::float_digits(50) else { unreachable!() };
        assert!(f64::from(prec) >= 50.0 * std::f64::consts::LOG2_10);
        let third = Ring::default_float().ratio(1, 3);
        // 1/3 at ~53 digits: the error is far below f64 resolution
        let back = third.mul_int(3);
        assert!(back.agrees_with(&Ring::default_float().one()).unwrap().0);
    }

    #[test]
    fn float_display_round_trips() {
        let ring = Ring::default_float();
        let x = ring.ratio(1, 7);
        assert_eq!(ring.parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn parse_accepts_fractions_and_rejects_garbage() {
        assert_eq!(Ring::Rational.parse("-1/5").unwrap(), Ring::Rational.ratio(-1, 5));
        assert!(Ring::Rational.parse("0.5").is_err());
        assert!(Ring::default_float().parse("0.5").is_ok());
        assert!(Ring::Rational.parse("x").is_err());
    }
}
