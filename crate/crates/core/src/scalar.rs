//! Coefficient fields.
//!
//! Everything above the root-system layer is generic over a [`Scalar`]. The
//! decision procedures (membership, canonical-form equality, character
//! identities) are only meaningful over an exact field such as
//! [`BigRational`]; the floating-point impls exist for quick numerical
//! experiments.

use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, ToPrimitive};

/// A coefficient field for series and Lie algebra elements.
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> + Send + Sync + 'static {
    fn from_i64(n: i64) -> Self;

    /// Embed an exact rational constant (structure constants, slice bases).
    fn from_rational(q: &BigRational) -> Self;

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }

    /// `self^n` for any integer `n`; `n < 0` requires `self != 0`.
    fn powi(&self, n: i64) -> Self {
        let mut base = if n < 0 { Self::one() / self.clone() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl Scalar for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl Scalar for Ratio<i64> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }

    fn from_rational(q: &BigRational) -> Self {
        let n = q.numer().to_i64().expect("numerator overflows i64");
        let d = q.denom().to_i64().expect("denominator overflows i64");
        Ratio::new(n, d)
    }
}

macro_rules! impl_float_scalar {
    ($($t:ty),*) => {
        $(
            impl Scalar for $t {
                fn from_i64(n: i64) -> Self {
                    n as $t
                }

                fn from_rational(q: &BigRational) -> Self {
                    q.to_f64().expect("rational not representable") as $t
                }
            }
        )*
    };
}

impl_float_scalar!(f32, f64);

/// Shorthand used throughout for exact rationals built from small integers.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
