//! Truncated formal Laurent series in `t`.
//!
//! A series knows the coefficients of `t^n` for `valuation <= n < precision`
//! and nothing above. Exact series (finite Laurent polynomials) carry no
//! precision bound and only become truncated after meeting a truncated
//! operand. Every operation reports the largest precision it can vouch for.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct LaurentSeries<T> {
    valuation: i64,
    coeffs: Vec<T>,
    precision: Option<i64>,
}

impl<T: Scalar> LaurentSeries<T> {
    /// Series with coefficients `coeffs[k]` at `t^(valuation + k)`, known
    /// below `t^precision`. Coefficients at or above `precision` are dropped.
    pub fn new(valuation: i64, mut coeffs: Vec<T>, precision: i64) -> Self {
        let keep = (precision - valuation).max(0) as usize;
        coeffs.truncate(keep);
        while coeffs.len() < keep {
            coeffs.push(T::zero());
        }
        let mut s = LaurentSeries { valuation, coeffs, precision: Some(precision) };
        s.normalize();
        s
    }

    /// Finite Laurent polynomial with no truncation.
    pub fn exact(valuation: i64, coeffs: Vec<T>) -> Self {
        let mut s = LaurentSeries { valuation, coeffs, precision: None };
        s.normalize();
        s
    }

    pub fn zero() -> Self {
        LaurentSeries { valuation: 0, coeffs: Vec::new(), precision: None }
    }

    /// `O(t^precision)`.
    pub fn zero_to(precision: i64) -> Self {
        LaurentSeries::new(precision - 1, vec![T::zero()], precision)
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: T, power: i64) -> Self {
        Self::exact(power, vec![c])
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match (lead, self.precision) {
            (Some(k), _) => {
                self.coeffs.drain(..k);
                self.valuation += k as i64;
                if self.precision.is_none() {
                    while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                        self.coeffs.pop();
                    }
                }
            }
            (None, Some(p)) => {
                self.valuation = p - 1;
                self.coeffs = vec![T::zero()];
            }
            (None, None) => {
                self.valuation = 0;
                self.coeffs.clear();
            }
        }
    }

    /// Lowest power whose coefficient may be nonzero. For `O(t^p)` this is
    /// `p - 1`, keeping `valuation < precision`.
    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    /// Smallest power with a known nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|k| self.valuation + k as i64)
    }

    /// First untracked power, `None` for exact series.
    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// True when every tracked coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.order().is_none()
    }

    /// Stored coefficients from `t^valuation` upward.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    /// Coefficient of `t^n`, or `None` when it is beyond tracked precision.
    pub fn coeff(&self, n: i64) -> Option<T> {
        if self.precision.is_some_and(|p| n >= p) {
            return None;
        }
        if n < self.valuation {
            return Some(T::zero());
        }
        Some(self.coeffs.get((n - self.valuation) as usize).cloned().unwrap_or_else(T::zero))
    }

    fn coeff_or_zero(&self, n: i64) -> T {
        self.coeff(n).unwrap_or_else(T::zero)
    }

    /// Lower bound on the true order, used in precision bookkeeping.
    fn low(&self) -> i64 {
        match (self.order(), self.precision) {
            (Some(v), _) => v,
            (None, Some(p)) => p,
            (None, None) => i64::MAX / 4,
        }
    }

    /// Last stored power plus one (for exact series the end of the support).
    fn end(&self) -> i64 {
        self.valuation + self.coeffs.len() as i64
    }

    pub fn truncate(&self, precision: i64) -> Self {
        let p = self.precision.map_or(precision, |q| q.min(precision));
        LaurentSeries::new(self.valuation, self.coeffs.clone(), p)
    }

    pub fn add(&self, other: &Self) -> Self {
        let precision = min_precision(self.precision, other.precision);
        let lo = self.valuation.min(other.valuation);
        let hi = match precision {
            Some(p) => p,
            None => self.end().max(other.end()),
        };
        let coeffs = (lo..hi).map(|n| self.coeff_or_zero(n) + other.coeff_or_zero(n)).collect();
        let mut s = LaurentSeries { valuation: lo, coeffs, precision };
        if hi <= lo {
            s = match precision {
                Some(p) => LaurentSeries::zero_to(p),
                None => LaurentSeries::zero(),
            };
        }
        s.normalize();
        s
    }

    pub fn negate(&self) -> Self {
        LaurentSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.negate())
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut s = LaurentSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|x| x.clone() * c.clone()).collect(),
            precision: self.precision,
        };
        s.normalize();
        s
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            valuation: self.valuation + k,
            coeffs: self.coeffs.clone(),
            precision: self.precision.map(|p| p + k),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if (self.is_exact() && self.is_zero()) || (other.is_exact() && other.is_zero()) {
            return LaurentSeries::zero();
        }
        let precision = match (self.precision, other.precision) {
            (None, None) => None,
            (Some(pa), None) => Some(pa.saturating_add(other.low())),
            (None, Some(pb)) => Some(pb.saturating_add(self.low())),
            (Some(pa), Some(pb)) => Some((pa + other.low()).min(pb + self.low())),
        };
        let lo = self.valuation + other.valuation;
        let hi = precision.unwrap_or(self.end() + other.end() - 1);
        if hi <= lo {
            return LaurentSeries::zero_to(precision.unwrap());
        }
        let mut coeffs = vec![T::zero(); (hi - lo) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = i + j;
                if k >= coeffs.len() {
                    break;
                }
                coeffs[k] = coeffs[k].clone() + a.clone() * b.clone();
            }
        }
        let mut s = LaurentSeries { valuation: lo, coeffs, precision };
        s.normalize();
        s
    }

    /// Multiplicative inverse. Exact series must be monomials; truncate a
    /// longer polynomial first.
    pub fn invert(&self) -> Result<Self> {
        let v = self.order().ok_or(Error::ZeroLeadingCoefficient)?;
        let lead = self.coeff_or_zero(v);
        let Some(p) = self.precision else {
            if self.coeffs.len() == 1 {
                return Ok(LaurentSeries::monomial(T::one() / lead, -v));
            }
            return Err(Error::UnboundedPrecision);
        };
        let rel = (p - v) as usize;
        let inv_lead = T::one() / lead;
        let a: Vec<T> = (0..rel).map(|k| self.coeff_or_zero(v + k as i64)).collect();
        let mut b: Vec<T> = Vec::with_capacity(rel);
        b.push(inv_lead.clone());
        for k in 1..rel {
            let mut acc = T::zero();
            for j in 1..=k {
                acc = acc + a[j].clone() * b[k - j].clone();
            }
            b.push(-(acc * inv_lead.clone()));
        }
        Ok(LaurentSeries::new(-v, b, -v + rel as i64))
    }

    /// Term-wise `d/dt`; a truncated series loses one degree of precision.
    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.clone() * T::from_i64(self.valuation + k as i64))
            .collect();
        let mut s = LaurentSeries {
            valuation: self.valuation - 1,
            coeffs,
            precision: self.precision.map(|p| p - 1),
        };
        s.normalize();
        s
    }

    /// Substitution `t -> scale * t`: the coefficient of `t^n` is multiplied
    /// by `scale^n`.
    pub fn dilate(&self, scale: &T) -> Result<Self> {
        if scale.is_zero() {
            return Err(Error::ZeroScale);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.clone() * scale.powi(self.valuation + k as i64))
            .collect();
        Ok(LaurentSeries { valuation: self.valuation, coeffs, precision: self.precision })
    }

    /// Coefficient of `t^-1`.
    pub fn residue_coefficient(&self) -> Result<T> {
        self.coeff(-1).ok_or(Error::PrecisionExhausted { needed: 0, available: self.precision.unwrap_or(0) })
    }

    /// Agreement on every coefficient both operands track.
    pub fn congruent(&self, other: &Self) -> bool {
        let hi = match min_precision(self.precision, other.precision) {
            Some(p) => p,
            None => self.end().max(other.end()),
        };
        let lo = self.valuation.min(other.valuation);
        (lo..hi).all(|n| self.coeff_or_zero(n) == other.coeff_or_zero(n))
    }

    /// Component-free map of the coefficients (e.g. a change of field).
    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> LaurentSeries<U> {
        let mut s = LaurentSeries {
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(f).collect(),
            precision: self.precision,
        };
        s.normalize();
        s
    }
}

fn min_precision(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Equality of the recorded data (valuation, tracked coefficients and
/// precision). Use [`LaurentSeries::congruent`] to compare values known to
/// different precisions.
impl<T: Scalar> PartialEq for LaurentSeries<T> {
    fn eq(&self, other: &Self) -> bool {
        self.precision == other.precision && self.valuation == other.valuation && self.coeffs == other.coeffs
    }
}

impl<T: Scalar> Add for &LaurentSeries<T> {
    type Output = LaurentSeries<T>;
    fn add(self, rhs: Self) -> LaurentSeries<T> {
        LaurentSeries::add(self, rhs)
    }
}

impl<T: Scalar> Sub for &LaurentSeries<T> {
    type Output = LaurentSeries<T>;
    fn sub(self, rhs: Self) -> LaurentSeries<T> {
        LaurentSeries::sub(self, rhs)
    }
}

impl<T: Scalar> Mul for &LaurentSeries<T> {
    type Output = LaurentSeries<T>;
    fn mul(self, rhs: Self) -> LaurentSeries<T> {
        LaurentSeries::mul(self, rhs)
    }
}

impl<T: Scalar> Neg for &LaurentSeries<T> {
    type Output = LaurentSeries<T>;
    fn neg(self) -> LaurentSeries<T> {
        self.negate()
    }
}

impl<T: Scalar + fmt::Display> fmt::Display for LaurentSeries<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let n = self.valuation + k as i64;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{n}")?,
            }
        }
        match self.precision {
            Some(p) if first => write!(f, "O(t^{p})"),
            Some(p) => write!(f, " + O(t^{p})"),
            None if first => write!(f, "0"),
            None => Ok(()),
        }
    }
}

pub mod json {
    //! `{"valuation": int, "precision": int, "coeffs": ["p/q", ...]}`.
    //! Exact series are written with `precision` just past their support.

    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use super::LaurentSeries;
    use crate::scalar::Scalar;

    #[derive(Serialize, Deserialize)]
    struct Wire {
        valuation: i64,
        precision: i64,
        coeffs: Vec<String>,
    }

    impl<T: Scalar + Display> Serialize for LaurentSeries<T> {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            let precision = self.precision.unwrap_or(self.end().max(self.valuation + 1));
            let coeffs = (self.valuation..precision).map(|n| self.coeff_or_zero(n).to_string()).collect();
            Wire { valuation: self.valuation, precision, coeffs }.serialize(s)
        }
    }

    impl<'de, T: Scalar + FromStr> Deserialize<'de> for LaurentSeries<T> {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let w = Wire::deserialize(d)?;
            if w.precision <= w.valuation {
                return Err(serde::de::Error::custom("precision must exceed valuation"));
            }
            if w.coeffs.len() as i64 > w.precision - w.valuation {
                return Err(serde::de::Error::custom("more coefficients than the precision tracks"));
            }
            let coeffs = w
                .coeffs
                .iter()
                .map(|c| T::from_str(c.trim()).map_err(|_| serde::de::Error::custom(format!("bad coefficient `{c}`"))))
                .collect::<Result<Vec<T>, _>>()?;
            Ok(LaurentSeries::new(w.valuation, coeffs, w.precision))
        }
    }
}
