//! Cartan connections `d/dt + u(t)` and the Miura map `u -> [d/dt + p_- + u]`.

use std::fmt::Display;

use num_rational::BigRational;

use crate::chevalley::LoopElement;
use crate::error::{Error, Result};
use crate::formal::LaurentSeries;
use crate::oper::{is_lambda_regular, CanonicalOper, Membership, OperOperator, OperSpace};
use crate::rootdata::{CartanType, Coweight};
use crate::scalar::Scalar;

/// `u` in the `h_i` basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CartanConnection<T: Scalar> {
    pub cartan_type: CartanType,
    pub u: Vec<LaurentSeries<T>>,
}

impl<T: Scalar> CartanConnection<T> {
    pub fn new(cartan_type: CartanType, u: Vec<LaurentSeries<T>>) -> Self {
        CartanConnection { cartan_type, u }
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Self) -> Self {
        CartanConnection { cartan_type: self.cartan_type, u: self.u.iter().zip(&other.u).map(|(a, b)| a.add(b)).collect() }
    }
}

/// `d/dt + p_- + u` as an oper operator.
pub fn miura_operator<T: Scalar>(space: &OperSpace, conn: &CartanConnection<T>) -> Result<OperOperator<T>> {
    if conn.u.len() != space.root_system().rank() {
        return Err(Error::Mismatch { expected: space.root_system().rank(), got: conn.u.len() });
    }
    let lie = space.lie();
    let mut v = LoopElement::zero();
    for (i, s) in conn.u.iter().enumerate() {
        v.set(lie.h(i), s.clone());
    }
    let mut op = space.operator(v)?;
    op.cartan_type = conn.cartan_type;
    Ok(op)
}

pub fn miura_transform<T: Scalar>(space: &OperSpace, conn: &CartanConnection<T>) -> Result<CanonicalOper<T>> {
    space.reduce_to_canonical(&miura_operator(space, conn)?)
}

/// `t^-1` coefficients of `u`, in the `h_i` basis.
pub fn connection_residue<T: Scalar>(conn: &CartanConnection<T>) -> Result<Vec<T>> {
    conn.u
        .iter()
        .map(|s| {
            if let Some(o) = s.order() {
                if o < -1 {
                    return Err(Error::IrregularSingularity { order: -o, max: 1 });
                }
            }
            s.coeff(-1).ok_or(Error::PrecisionExhausted { needed: 0, available: s.precision().unwrap_or(i64::MAX) })
        })
        .collect()
}

/// Whether the Miura image of `conn` lies in the `lambda`-regular locus;
/// requires the residue of `conn` to be `-lambda`.
pub fn check_miura_image<T: Scalar + Display>(
    space: &OperSpace,
    conn: &CartanConnection<T>,
    lambda: &Coweight,
) -> Result<bool> {
    if !lambda.is_dominant_integral() {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    let rs = space.root_system();
    let lam: Vec<BigRational> = lambda.0.iter().map(|&c| BigRational::from_integer(c.into())).collect();
    let expected: Vec<T> = rs.coweight_in_coroot_basis(&lam).iter().map(|c| T::from_rational(&-c)).collect();
    let found = connection_residue(conn)?;
    if found != expected {
        return Err(Error::ResidueMismatch {
            expected: expected.iter().map(|c| c.to_string()).collect(),
            found: found.iter().map(|c| c.to_string()).collect(),
        });
    }
    let op = miura_operator(space, conn)?;
    Ok(match space.to_lambda_nilpotent(&op, lambda)? {
        Membership::Member(form) => is_lambda_regular(&form),
        Membership::NotMember { .. } => false,
    })
}
