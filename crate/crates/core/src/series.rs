//! Truncated Laurent series with pessimistic truncation tracking.
//!
//! A [`LaurentSeries`] stores a dense run of coefficients for exponents
//! `min_exp..` together with a truncation order. Coefficients above the
//! truncation order are *unknown*, never assumed zero; a series with no
//! truncation order is exact (a Laurent polynomial). Every operation reports
//! the largest truncation order it can prove.

use std::fmt;

use crate::coefficient::{Coefficient, Ring};
use crate::error::{Error, Result};

/// The `±` label of the two supersymmetric sectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SectorSign {
    Plus,
    Minus,
}

impl SectorSign {
    pub const BOTH: [SectorSign; 2] = [SectorSign::Plus, SectorSign::Minus];

    pub fn flip(self) -> SectorSign {
        match self {
            SectorSign::Plus => SectorSign::Minus,
            SectorSign::Minus => SectorSign::Plus,
        }
    }

    /// `+1` or `-1`.
    pub fn signum(self) -> i64 {
        match self {
            SectorSign::Plus => 1,
            SectorSign::Minus => -1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SectorSign::Plus => "plus",
            SectorSign::Minus => "minus",
        }
    }
}

impl fmt::Display for SectorSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SectorSign::Plus => "+",
            SectorSign::Minus => "-",
        })
    }
}

#[derive(Clone, Debug)]
pub struct LaurentSeries {
    ring: Ring,
    min_exp: i64,
    coeffs: Vec<Coefficient>,
    /// `None` for an exact series.
    trunc_order: Option<i64>,
}

fn add_exp(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b).ok_or(Error::ExponentOverflow)
}

fn min_order(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

impl LaurentSeries {
    fn check_homogeneous(ring: Ring, coeffs: &[Coefficient]) -> Result<()> {
        match coeffs.iter().find(|c| !c.ring().compatible(ring)) {
            Some(c) => Err(Error::RingMismatch { left: ring.kind(), right: c.ring().kind() }),
            None => Ok(()),
        }
    }

    /// A Laurent polynomial: every coefficient outside the stored range is zero.
    pub fn exact(ring: Ring, min_exp: i64, coeffs: Vec<Coefficient>) -> Result<Self> {
        Self::check_homogeneous(ring, &coeffs)?;
        add_exp(min_exp, coeffs.len() as i64)?;
        Ok(LaurentSeries { ring, min_exp, coeffs, trunc_order: None })
    }

    /// A series known through `trunc_order`. Missing stored coefficients are
    /// filled with zeros and extra ones beyond the order are dropped.
    pub fn truncated(
        ring: Ring,
        min_exp: i64,
        mut coeffs: Vec<Coefficient>,
        trunc_order: i64,
    ) -> Result<Self> {
        Self::check_homogeneous(ring, &coeffs)?;
        let start = min_exp.min(add_exp(trunc_order, 1)?);
        let len = (trunc_order - start + 1).max(0) as usize;
        if start > min_exp {
            coeffs.clear();
        }
        coeffs.resize(len, ring.zero());
        Ok(LaurentSeries { ring, min_exp: start, coeffs, trunc_order: Some(trunc_order) })
    }

    pub fn zero(ring: Ring) -> Self {
        LaurentSeries { ring, min_exp: 0, coeffs: Vec::new(), trunc_order: None }
    }

    /// `O(z^{order+1})`: zero through `order`, unknown above.
    pub fn zero_through(ring: Ring, order: i64) -> Self {
        LaurentSeries {
            ring,
            min_exp: order.saturating_add(1),
            coeffs: Vec::new(),
            trunc_order: Some(order),
        }
    }

    pub fn monomial(c: Coefficient, exp: i64) -> Self {
        LaurentSeries { ring: c.ring(), min_exp: exp, coeffs: vec![c], trunc_order: None }
    }

    pub fn constant(c: Coefficient) -> Self {
        Self::monomial(c, 0)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn trunc_order(&self) -> Option<i64> {
        self.trunc_order
    }

    pub fn is_exact(&self) -> bool {
        self.trunc_order.is_none()
    }

    pub fn coeffs(&self) -> &[Coefficient] {
        &self.coeffs
    }

    /// Highest stored exponent (`min_exp - 1` when nothing is stored).
    pub fn max_stored(&self) -> i64 {
        self.min_exp + self.coeffs.len() as i64 - 1
    }

    /// Coefficient of `z^exp`, or `None` if it is beyond the truncation.
    pub fn coeff(&self, exp: i64) -> Option<Coefficient> {
        if let Some(t) = self.trunc_order {
            if exp > t {
                return None;
            }
        }
        Some(self.stored(exp).cloned().unwrap_or_else(|| self.ring.zero()))
    }

    fn stored(&self, exp: i64) -> Option<&Coefficient> {
        if exp < self.min_exp {
            return None;
        }
        self.coeffs.get((exp - self.min_exp) as usize)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &Coefficient)> + '_ {
        (self.min_exp..).zip(self.coeffs.iter())
    }

    /// Lowest exponent with a nonzero stored coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.iter().find(|(_, c)| !c.is_zero()).map(|(e, _)| e)
    }

    /// Lower bound on the exponent of any nonzero term; `None` for exact zero.
    fn effective_valuation(&self) -> Option<i64> {
        self.valuation().or_else(|| self.trunc_order.map(|t| t + 1))
    }

    /// Every known coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Coefficient::is_zero)
    }

    fn ensure_ring(&self, other: &LaurentSeries) -> Result<Ring> {
        self.ring.join(other.ring)
    }

    fn combine(&self, other: &LaurentSeries, negate: bool) -> Result<LaurentSeries> {
        let ring = self.ensure_ring(other)?;
        let trunc = min_order(self.trunc_order, other.trunc_order);
        let hi = trunc.unwrap_or_else(|| self.max_stored().max(other.max_stored()));
        let lo = self.min_exp.min(other.min_exp).min(hi + 1);
        let coeffs = (lo..=hi)
            .map(|e| {
                let a = self.stored(e);
                let b = other.stored(e);
                match (a, b, negate) {
                    (Some(x), Some(y), false) => x + y,
                    (Some(x), Some(y), true) => x - y,
                    (Some(x), None, _) => x.clone(),
                    (None, Some(y), false) => y.clone(),
                    (None, Some(y), true) => -y,
                    (None, None, _) => ring.zero(),
                }
            })
            .collect();
        Ok(LaurentSeries { ring, min_exp: lo, coeffs, trunc_order: trunc })
    }

    pub fn add(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        self.combine(other, true)
    }

    pub fn neg(&self) -> LaurentSeries {
        LaurentSeries { coeffs: self.coeffs.iter().map(|c| -c).collect(), ..self.clone() }
    }

    /// Product; the truncation order is `min(a.trunc + val(b), b.trunc + val(a))`
    /// with `val` the lowest nonzero exponent.
    pub fn mul(&self, other: &LaurentSeries) -> Result<LaurentSeries> {
        let ring = self.ensure_ring(other)?;
        let (Some(va), Some(vb)) = (self.effective_valuation(), other.effective_valuation()) else {
            return Ok(LaurentSeries::zero(ring));
        };
        let trunc = match (self.trunc_order, other.trunc_order) {
            (None, None) => None,
            (Some(t), None) => Some(add_exp(t, vb)?),
            (None, Some(t)) => Some(add_exp(t, va)?),
            (Some(ta), Some(tb)) => Some(add_exp(ta, vb)?.min(add_exp(tb, va)?)),
        };
        let lo = add_exp(va, vb)?;
        let hi = match trunc {
            Some(t) => t,
            None => add_exp(self.max_stored(), other.max_stored())?,
        };
        if hi < lo {
            return Ok(match trunc {
                Some(t) => LaurentSeries::zero_through(ring, t),
                None => LaurentSeries::zero(ring),
            });
        }
        let mut out = vec![ring.zero(); (hi - lo + 1) as usize];
        for (i, x) in self.iter().filter(|(i, _)| *i >= va) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in other.iter().filter(|(j, _)| *j >= vb) {
                let e = i + j;
                if e > hi {
                    break;
                }
                let slot = &mut out[(e - lo) as usize];
                *slot = &*slot + &(x * y);
            }
        }
        Ok(LaurentSeries { ring, min_exp: lo, coeffs: out, trunc_order: trunc })
    }

    /// Multiply by a scalar; the truncation order is unchanged (even for zero).
    pub fn scale(&self, c: &Coefficient) -> Result<LaurentSeries> {
        let ring = self.ring.join(c.ring())?;
        Ok(LaurentSeries {
            ring,
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            trunc_order: self.trunc_order,
        })
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Result<LaurentSeries> {
        Ok(LaurentSeries {
            ring: self.ring,
            min_exp: add_exp(self.min_exp, k)?,
            coeffs: self.coeffs.clone(),
            trunc_order: self.trunc_order.map(|t| add_exp(t, k)).transpose()?,
        })
    }

    /// Forget everything above `order`.
    pub fn truncate(&self, order: i64) -> LaurentSeries {
        let t = min_order(self.trunc_order, Some(order)).unwrap();
        let start = self.min_exp.min(t + 1);
        let keep: Vec<Coefficient> =
            (start..=t).map(|e| self.stored(e).cloned().unwrap_or_else(|| self.ring.zero())).collect();
        LaurentSeries { ring: self.ring, min_exp: start, coeffs: keep, trunc_order: Some(t) }
    }

    /// `z d/dz`: maps `f_e` to `e·f_e`.
    pub fn euler_derivative(&self) -> LaurentSeries {
        LaurentSeries {
            coeffs: self.iter().map(|(e, c)| c.mul_int(e)).collect(),
            ..self.clone()
        }
    }

    /// `(1/2πi)∮(dz/z) f g`, i.e. the `z^0` coefficient of `f·g`.
    pub fn pairing(&self, other: &LaurentSeries) -> Result<Coefficient> {
        let ring = self.ensure_ring(other)?;
        let (Some(va), Some(vb)) = (self.effective_valuation(), other.effective_valuation()) else {
            return Ok(ring.zero());
        };
        if let Some(ta) = self.trunc_order {
            if ta < -vb {
                return Err(Error::UndeterminedPairing { operand: "left", lo: ta + 1, hi: -vb });
            }
        }
        if let Some(tb) = other.trunc_order {
            if tb < -va {
                return Err(Error::UndeterminedPairing { operand: "right", lo: tb + 1, hi: -va });
            }
        }
        let mut acc = ring.zero();
        for (e, x) in self.iter() {
            if let Some(y) = other.stored(-e) {
                acc = &acc + &(x * y);
            }
        }
        Ok(acc)
    }

    /// `(f(1), f'(1))` for an exact series.
    pub fn boundary_values(&self) -> Result<(Coefficient, Coefficient)> {
        if let Some(t) = self.trunc_order {
            return Err(Error::TruncatedEvaluation(t));
        }
        let mut value = self.ring.zero();
        let mut deriv = self.ring.zero();
        for (e, c) in self.iter() {
            value = &value + c;
            deriv = &deriv + &c.mul_int(e);
        }
        Ok((value, deriv))
    }

    /// Exact quotient `f / (1 - z)` of a Laurent polynomial with `f(1) = 0`.
    pub fn divide_by_one_minus_z(&self) -> Result<LaurentSeries> {
        if let Some(t) = self.trunc_order {
            return Err(Error::TruncatedEvaluation(t));
        }
        if self.coeffs.is_empty() {
            return Ok(self.clone());
        }
        let mut running = self.ring.zero();
        let mut q = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            running = &running + c;
            q.push(running.clone());
        }
        // the last prefix sum is f(1)
        if !q.pop().is_none_or(|r| r.is_zero()) {
            return Err(Error::NotDivisible);
        }
        LaurentSeries::exact(self.ring, self.min_exp, q)
    }
}

impl PartialEq for LaurentSeries {
    /// Same ring kind, same truncation, same value at every known exponent.
    fn eq(&self, other: &Self) -> bool {
        if !self.ring.compatible(other.ring) || self.trunc_order != other.trunc_order {
            return false;
        }
        let lo = self.min_exp.min(other.min_exp);
        let hi = self.max_stored().max(other.max_stored());
        (lo..=hi).all(|e| match (self.stored(e), other.stored(e)) {
            (Some(a), Some(b)) => a == b,
            (Some(a), None) | (None, Some(a)) => a.is_zero(),
            (None, None) => true,
        })
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.iter().filter(|(_, c)| !c.is_zero()) {
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})z")?,
                _ => write!(f, "({c})z^{e}")?,
            }
        }
        match self.trunc_order {
            Some(t) if first => write!(f, "O(z^{})", t + 1),
            Some(t) => write!(f, " + O(z^{})", t + 1),
            None if first => f.write_str("0"),
            None => Ok(()),
        }
    }
}

/// Binary operation selector for [`series_arith`].
#[derive(Clone, Debug)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    /// Scales the left operand; the right one is ignored.
    Scale(Coefficient),
}

pub fn series_arith(a: &LaurentSeries, b: &LaurentSeries, op: SeriesOp) -> Result<LaurentSeries> {
    match op {
        SeriesOp::Add => a.add(b),
        SeriesOp::Sub => a.sub(b),
        SeriesOp::Mul => a.mul(b),
        SeriesOp::Scale(c) => a.scale(&c),
    }
}
