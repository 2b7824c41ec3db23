//! Truncated integer q-series and the principal characters built from
//! Euler products.

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_traits::Num;

use crate::error::{Error, Result};
use crate::rootdata::{RootSystem, Weight};

pub const DEFAULT_ORDER: usize = 40;

/// Integer coefficient rings that q-series may use.
pub trait QCoeff: Clone + Debug + Display + PartialOrd + Num + Neg<Output = Self> + From<i64> {}

impl<T: Clone + Debug + Display + PartialOrd + Num + Neg<Output = T> + From<i64>> QCoeff for T {}

/// `sum_{n < order} coeffs[n] q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSeries<T> {
    coeffs: Vec<T>,
}

impl<T: QCoeff> QSeries<T> {
    pub fn one(order: usize) -> Self {
        let mut coeffs = vec![T::zero(); order];
        if order > 0 {
            coeffs[0] = T::one();
        }
        QSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![T::zero(); order] }
    }

    /// Pads or truncates to `order` terms.
    pub fn from_coeffs(mut coeffs: Vec<T>, order: usize) -> Self {
        coeffs.resize(order, T::zero());
        QSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> T {
        self.coeffs.get(n).cloned().unwrap_or_else(T::zero)
    }

    /// Multiply by `(1 - q^k)`.
    pub fn times_binomial(&mut self, k: usize) {
        if k == 0 {
            self.coeffs.iter_mut().for_each(|c| *c = T::zero());
            return;
        }
        for n in (k..self.coeffs.len()).rev() {
            let d = self.coeffs[n - k].clone();
            self.coeffs[n] = self.coeffs[n].clone() - d;
        }
    }

    /// Multiply by `(1 - q^k)^-1`, `k >= 1`.
    pub fn over_binomial(&mut self, k: usize) {
        assert!(k >= 1, "(1 - q^0) is not invertible");
        for n in k..self.coeffs.len() {
            let d = self.coeffs[n - k].clone();
            self.coeffs[n] = self.coeffs[n].clone() + d;
        }
    }

    /// Multiply by `prod_{n >= start} (1 - q^n)^-1`, stopping at the order.
    pub fn over_euler_from(&mut self, start: usize) {
        for k in start.max(1)..self.coeffs.len() {
            self.over_binomial(k);
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![T::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        QSeries { coeffs: out }
    }

    /// Exact quotient; fails unless every coefficient divides out.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let n = self.order().min(other.order());
        let b0 = other.coeff(0);
        if b0.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let mut out: Vec<T> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc = acc - other.coeffs[j].clone() * out[k - j].clone();
            }
            if !(acc.clone() % b0.clone()).is_zero() {
                return Err(Error::Parse(format!("q-series quotient is not integral at q^{k}")));
            }
            out.push(acc / b0.clone());
        }
        Ok(QSeries { coeffs: out })
    }

    /// First power where the two series differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let n = self.order().max(other.order());
        (0..n).find(|&k| self.coeff(k) != other.coeff(k))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| *c >= T::zero())
    }

    pub fn to_json(&self) -> String {
        let body: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("{{\"order\":{},\"coeffs\":[{}]}}", self.order(), body.join(","))
    }

    pub fn from_json(s: &str) -> Result<Self>
    where
        T: std::str::FromStr,
    {
        #[derive(serde::Deserialize)]
        struct Wire {
            order: usize,
            coeffs: Vec<serde_json::Number>,
        }
        let w: Wire = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if w.coeffs.len() > w.order {
            return Err(Error::Parse("more coefficients than the order".into()));
        }
        let coeffs = w
            .coeffs
            .iter()
            .map(|c| T::from_str(&c.to_string()).map_err(|_| Error::Parse(format!("bad coefficient {c}"))))
            .collect::<Result<Vec<T>>>()?;
        Ok(Self::from_coeffs(coeffs, w.order))
    }
}

impl<T: QCoeff> Display for QSeries<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match n {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}q")?,
                _ => write!(f, "{c}q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order())
    }
}

/// `<alpha^vee, lambda + rho>` for every positive coroot.
fn shifted_heights(rs: &RootSystem, lambda: &Weight) -> Result<Vec<usize>> {
    if lambda.0.len() != rs.rank() {
        return Err(Error::Mismatch { expected: rs.rank(), got: lambda.0.len() });
    }
    if !lambda.is_dominant_integral() {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    Ok(rs
        .positive_coroots()
        .iter()
        .map(|c| c.iter().zip(&lambda.0).map(|(a, l)| a * (l + 1)).sum::<i64>() as usize)
        .collect())
}

fn coroot_heights(rs: &RootSystem) -> Vec<usize> {
    rs.positive_coroots().iter().map(|c| c.iter().sum::<i64>() as usize).collect()
}

/// `prod_{n>0} (1-q^n)^-l * prod_{alpha^vee} (1 - q^<alpha^vee, lambda+rho>)`.
pub fn char_z_reg<T: QCoeff>(rs: &RootSystem, lambda: &Weight, order: usize) -> Result<QSeries<T>> {
    let mut s = QSeries::one(order);
    for h in shifted_heights(rs, lambda)? {
        s.times_binomial(h);
    }
    for _ in 0..rs.rank() {
        s.over_euler_from(1);
    }
    Ok(s)
}

pub fn char_operator_space<T: QCoeff>(rs: &RootSystem, lambda: &Weight, order: usize) -> Result<QSeries<T>> {
    let mut s = QSeries::one(order);
    for _ in 0..rs.rank() {
        s.over_euler_from(1);
    }
    for h in shifted_heights(rs, lambda)? {
        s.over_euler_from(h + 1);
    }
    Ok(s)
}

pub fn char_conjugated_n<T: QCoeff>(rs: &RootSystem, lambda: &Weight, order: usize) -> Result<QSeries<T>> {
    let mut s = QSeries::one(order);
    for h in shifted_heights(rs, lambda)? {
        s.over_euler_from(h);
    }
    Ok(s)
}

pub fn char_z_reg_via_quotient<T: QCoeff>(rs: &RootSystem, lambda: &Weight, order: usize) -> Result<QSeries<T>> {
    char_operator_space(rs, lambda, order)?.div(&char_conjugated_n(rs, lambda, order)?)
}

/// Exact polynomial quotient `prod (1 - q^a) / prod (1 - q^b)`.
fn binomial_quotient<T: QCoeff>(num: &[usize], den: &[usize]) -> Result<Vec<T>> {
    let deg: usize = num.iter().sum();
    let mut p = QSeries::<T>::one(deg + 1);
    for &a in num {
        p.times_binomial(a);
    }
    let mut c = p.coeffs;
    for &b in den {
        // divide by (1 - q^b): c_n = p_n + c_{n-b}
        for n in b..c.len() {
            let d = c[n - b].clone();
            c[n] = c[n].clone() + d;
        }
        let top: usize = c.len() - b;
        if c[top..].iter().any(|x| !x.is_zero()) {
            return Err(Error::Parse("principal character is not a polynomial".into()));
        }
        c.truncate(top);
    }
    Ok(c)
}

/// Principal-graded character of the irreducible module `V_lambda`.
pub fn q_dim<T: QCoeff>(rs: &RootSystem, lambda: &Weight, order: usize) -> Result<QSeries<T>> {
    let num = shifted_heights(rs, lambda)?;
    let poly = binomial_quotient(&num, &coroot_heights(rs))?;
    Ok(QSeries::from_coeffs(poly, order))
}

/// `prod_i prod_{m >= d_i + 1} (1 - q^m)^-1`.
pub fn char_v_a_minus<T: QCoeff>(rs: &RootSystem, order: usize) -> QSeries<T> {
    let mut s = QSeries::one(order);
    for &d in rs.exponents() {
        s.over_euler_from(d as usize + 1);
    }
    s
}

/// `prod_{alpha^vee} (1 - q^ht) = prod_i prod_{m=1}^{d_i} (1 - q^m)` as polynomials.
pub fn exponent_identity_check(rs: &RootSystem) -> bool {
    let heights = coroot_heights(rs);
    let deg: usize = heights.iter().sum();
    let mut lhs = QSeries::<num_bigint::BigInt>::one(deg + 1);
    for h in heights {
        lhs.times_binomial(h);
    }
    let mut rhs = QSeries::<num_bigint::BigInt>::one(deg + 1);
    for &d in rs.exponents() {
        for m in 1..=d as usize {
            rhs.times_binomial(m);
        }
    }
    lhs == rhs
}

/// `q_dim(lambda) * char_V_a_minus == char_z_reg` through `q^(order-1)`.
pub fn theorem_si_coh_check(rs: &RootSystem, lambda: &Weight, order: usize) -> Result<bool> {
    Ok(character_identity_divergence(rs, lambda, order)?.is_none())
}

/// First power at which the two sides of the character identity differ.
pub fn character_identity_divergence(rs: &RootSystem, lambda: &Weight, order: usize) -> Result<Option<usize>> {
    let lhs = q_dim::<num_bigint::BigInt>(rs, lambda, order)?.mul(&char_v_a_minus(rs, order));
    let rhs = char_z_reg(rs, lambda, order)?;
    Ok(lhs.first_difference(&rhs))
}

/// First power at which the quotient route differs from `char_z_reg`.
pub fn quotient_divergence(rs: &RootSystem, lambda: &Weight, order: usize) -> Result<Option<usize>> {
    let lhs = char_z_reg_via_quotient::<num_bigint::BigInt>(rs, lambda, order)?;
    Ok(lhs.first_difference(&char_z_reg(rs, lambda, order)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::build_root_system;
    use num_bigint::BigInt;

    fn rs(label: &str) -> RootSystem {
        build_root_system(label).unwrap()
    }

    fn w(v: &[i64]) -> Weight {
        Weight(v.to_vec())
    }

    fn ints(c: &[i64], order: usize) -> QSeries<i64> {
        QSeries::from_coeffs(c.to_vec(), order)
    }

    /// Partitions of `n` into parts `>= min`.
    fn partitions(n: usize, min: usize) -> i64 {
        if n == 0 {
            return 1;
        }
        (min..=n).map(|p| partitions(n - p, p)).sum()
    }

    #[test]
    fn a1_z_reg_counts_partitions_into_parts_at_least_two() {
        let got: QSeries<i64> = char_z_reg(&rs("A1"), &w(&[0]), 8).unwrap();
        assert_eq!(got, ints(&[1, 0, 1, 1, 2, 2, 4, 4], 8));
        let oracle: Vec<i64> = (0..30).map(|n| partitions(n, 2)).collect();
        assert_eq!(char_z_reg::<i64>(&rs("A1"), &w(&[0]), 30).unwrap().coeffs(), &oracle[..]);
    }

    #[test]
    fn a1_z_reg_closed_form() {
        for m in 0..5i64 {
            let mut want = QSeries::<BigInt>::one(40);
            want.times_binomial(m as usize + 1);
            want.over_euler_from(1);
            assert_eq!(char_z_reg::<BigInt>(&rs("A1"), &w(&[m]), 40).unwrap(), want);
        }
    }

    #[test]
    fn operator_space_examples() {
        let a1: QSeries<i64> = char_operator_space(&rs("A1"), &w(&[0]), 4).unwrap();
        assert_eq!(a1, ints(&[1, 1, 3, 5], 4));
        let a2: QSeries<i64> = char_operator_space(&rs("A2"), &w(&[0, 0]), 4).unwrap();
        assert_eq!(a2.coeff(1), 2);
    }

    #[test]
    fn conjugated_n_examples() {
        let mut euler = QSeries::<i64>::one(20);
        euler.over_euler_from(1);
        assert_eq!(char_conjugated_n(&rs("A1"), &w(&[0]), 20).unwrap(), euler);
        let mut from2 = QSeries::<i64>::one(20);
        from2.over_euler_from(2);
        assert_eq!(char_conjugated_n(&rs("A1"), &w(&[1]), 20).unwrap(), from2);
    }

    #[test]
    fn v_a_minus_examples() {
        let mut a2 = QSeries::<i64>::one(25);
        a2.over_euler_from(2);
        a2.over_euler_from(3);
        assert_eq!(char_v_a_minus(&rs("A2"), 25), a2);
        assert_eq!(char_v_a_minus::<i64>(&rs("G2"), 25).coeff(0), 1);
    }

    #[test]
    fn q_dim_examples() {
        for m in 0..6i64 {
            let got: QSeries<i64> = q_dim(&rs("A1"), &w(&[m]), 10).unwrap();
            let want: Vec<i64> = (0..10).map(|k| if k <= m { 1 } else { 0 }).collect();
            assert_eq!(got.coeffs(), &want[..]);
        }
        let adj: QSeries<i64> = q_dim(&rs("A2"), &w(&[1, 1]), 10).unwrap();
        assert_eq!(adj.coeffs().iter().sum::<i64>(), 8);
        assert_eq!(q_dim::<i64>(&rs("G2"), &w(&[0, 0]), 5).unwrap(), QSeries::one(5));
    }

    #[test]
    fn exponent_identity_for_all_types() {
        for label in ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "F4", "G2"] {
            assert!(exponent_identity_check(&rs(label)), "{label}");
        }
    }

    #[test]
    fn quotient_division_is_exact() {
        let a = ints(&[1, 3, 3, 1], 4);
        let b = ints(&[1, 1], 4);
        assert_eq!(a.div(&b).unwrap(), ints(&[1, 2, 1, 0], 4));
        assert!(ints(&[1, 0], 2).div(&ints(&[2, 1], 2)).is_err());
    }

    #[test]
    fn coefficient_types_agree() {
        let r = rs("B2");
        let a: QSeries<i64> = char_z_reg(&r, &w(&[1, 2]), 30).unwrap();
        let b: QSeries<i128> = char_z_reg(&r, &w(&[1, 2]), 30).unwrap();
        let c: QSeries<BigInt> = char_z_reg(&r, &w(&[1, 2]), 30).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert_eq!(a.to_json(), c.to_json());
    }

    #[test]
    fn json_roundtrip() {
        let s = ints(&[1, 0, -2, 7], 5);
        assert_eq!(s.to_json(), r#"{"order":5,"coeffs":[1,0,-2,7,0]}"#);
        assert_eq!(QSeries::<i64>::from_json(&s.to_json()).unwrap(), s);
        assert!(QSeries::<i64>::from_json(r#"{"order":1,"coeffs":[1,2]}"#).is_err());
    }

    #[test]
    fn character_identity_small_cases() {
        assert!(theorem_si_coh_check(&rs("A2"), &w(&[2, 1]), 40).unwrap());
        for m in 0..4 {
            assert!(theorem_si_coh_check(&rs("A1"), &w(&[m]), 40).unwrap());
        }
        assert!(matches!(char_z_reg::<i64>(&rs("A1"), &w(&[-1]), 5), Err(Error::NotDominant(_))));
    }
}
