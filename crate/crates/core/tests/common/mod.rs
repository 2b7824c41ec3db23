#![allow(dead_code)]

use num_rational::BigRational;
use opercalc::chevalley::{BasisKind, LoopElement, UnipotentGauge};
use opercalc::formal::LaurentSeries;
use opercalc::oper::{OperOperator, OperSpace};
use opercalc::scalar::q;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;
pub type S = LaurentSeries<Q>;

pub fn rational(rng: &mut ChaCha8Rng) -> Q {
    q(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Q {
    loop {
        let x = rational(rng);
        if x != q(0, 1) {
            return x;
        }
    }
}

/// Random coefficients for `t^val .. t^(prec-1)`.
pub fn series(rng: &mut ChaCha8Rng, val: i64, prec: i64) -> S {
    let coeffs = (val..prec).map(|_| rational(rng)).collect();
    S::new(val, coeffs, prec)
}

/// Random `v` in `b((t))` with poles of order at most `pole`.
pub fn random_oper(space: &OperSpace, rng: &mut ChaCha8Rng, pole: i64, prec: i64) -> OperOperator<Q> {
    let lie = space.lie();
    let mut v = LoopElement::zero();
    for k in 0..lie.dim() {
        if matches!(lie.kind(k), BasisKind::F(_)) {
            continue;
        }
        v.set(k, series(rng, -pole, prec));
    }
    space.operator(v).unwrap()
}

/// Random element of `N(O)` as one factor per positive root.
pub fn random_gauge(space: &OperSpace, rng: &mut ChaCha8Rng, prec: i64) -> UnipotentGauge<Q> {
    let n = space.lie().n_positive();
    UnipotentGauge::ordered((0..n).map(|r| (r, series(rng, 0, prec))).collect()).unwrap()
}
