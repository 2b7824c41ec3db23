//! Single-shot commands. Each takes parsed JSON and returns the payload.

use opercalc::json::{
    canonical_from_value, canonical_to_value, cartan_type_of, connection_from_value, form_to_value,
    operator_from_value,
};
use opercalc::miura::miura_transform;
use opercalc::oper::{CanonicalOper, Membership, OperOperator, OperSpace};
use opercalc::qchar::{char_operator_space, char_z_reg, char_z_reg_via_quotient, q_dim};
use opercalc::rootdata::{build_root_system, Coweight, Weight};
use opercalc::Q;
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::CliError;

fn space_of(input: &Value) -> Result<OperSpace, CliError> {
    let label = cartan_type_of(input)?.to_string();
    Ok(OperSpace::for_label(&label)?)
}

/// Accept an operator (`v`), a canonical oper (`coords`) or a Cartan
/// connection (`u`, sent through the Miura map).
fn operator_of(space: &OperSpace, input: &Value) -> Result<OperOperator<Q>, CliError> {
    if input.get("coords").is_some() {
        let c: CanonicalOper<Q> = canonical_from_value(space, input)?;
        Ok(space.embed_canonical(&c)?)
    } else if input.get("u").is_some() {
        let conn = connection_from_value::<Q>(space, input)?;
        Ok(space.embed_canonical(&miura_transform(space, &conn)?)?)
    } else {
        Ok(operator_from_value(space, input)?)
    }
}

fn canonical_of(space: &OperSpace, input: &Value) -> Result<CanonicalOper<Q>, CliError> {
    if input.get("coords").is_some() {
        Ok(canonical_from_value(space, input)?)
    } else {
        Ok(space.reduce_to_canonical(&operator_of(space, input)?)?)
    }
}

pub fn reduce(input: &Value, precision: Option<i64>) -> Result<Value, CliError> {
    let space = space_of(input)?;
    let op = operator_of(&space, input)?;
    let c = match precision {
        Some(p) => space.reduce_to_precision(&op, p)?,
        None => space.reduce_to_canonical(&op)?,
    };
    Ok(canonical_to_value(&c))
}

pub fn miura(input: &Value) -> Result<Value, CliError> {
    let space = space_of(input)?;
    let conn = connection_from_value::<Q>(&space, input)?;
    Ok(canonical_to_value(&miura_transform(&space, &conn)?))
}

pub fn classify(input: &Value, bound: i64) -> Result<Value, CliError> {
    let space = space_of(input)?;
    let c = canonical_of(&space, input)?;
    Ok(match space.classify_monodromy_free(&c, bound)? {
        Some(cw) => json!(cw.0),
        None => Value::Null,
    })
}

pub fn nilpotent(input: &Value, lambda: &[i64]) -> Result<Value, CliError> {
    let space = space_of(input)?;
    let op = operator_of(&space, input)?;
    Ok(match space.to_lambda_nilpotent(&op, &Coweight(lambda.to_vec()))? {
        Membership::Member(f) => form_to_value(&space, &f),
        Membership::NotMember { degree, reason } => json!({
            "member": false,
            "degree": degree,
            "reason": format!("{reason:?}").to_lowercase(),
        }),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SeriesKind {
    /// Regular invariants `z^{lambda,reg}`.
    ZReg,
    /// Same series through the quotient construction.
    Quotient,
    /// Functions on the oper space.
    Opers,
    /// Principal graded dimension of `V_lambda`.
    QDim,
}

pub fn qchar(label: &str, lambda: &[i64], order: usize, kind: SeriesKind) -> Result<String, CliError> {
    let rs = build_root_system(label)?;
    let w = Weight(lambda.to_vec());
    let s = match kind {
        SeriesKind::ZReg => char_z_reg::<BigInt>(&rs, &w, order)?,
        SeriesKind::Quotient => char_z_reg_via_quotient::<BigInt>(&rs, &w, order)?,
        SeriesKind::Opers => char_operator_space::<BigInt>(&rs, &w, order)?,
        SeriesKind::QDim => q_dim::<BigInt>(&rs, &w, order)?,
    };
    Ok(s.to_json())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canonical_a1(val: i64, coeffs: &[&str], prec: i64) -> Value {
        json!({"type": "A1", "coords": [{"valuation": val, "precision": prec, "coeffs": coeffs}]})
    }

    #[test]
    fn classify_sl2_examples() {
        assert_eq!(classify(&canonical_a1(0, &["1", "2"], 4), 4).unwrap(), json!([0]));
        assert_eq!(classify(&canonical_a1(-2, &["2"], 4), 4).unwrap(), json!([2]));
        assert_eq!(classify(&canonical_a1(-2, &["1"], 4), 4).unwrap(), Value::Null);
    }

    #[test]
    fn reduce_is_identity_on_canonical_input() {
        let input = canonical_a1(-2, &["3/4", "0", "5"], 3);
        let out = reduce(&input, None).unwrap();
        // known zeros up to the precision bound are written out
        let space = OperSpace::for_label("A1").unwrap();
        let parse = |v: &Value| canonical_from_value::<Q>(&space, v).unwrap();
        assert_eq!(parse(&out), parse(&input));
    }

    #[test]
    fn nilpotent_reports_obstruction() {
        let out = nilpotent(&canonical_a1(-3, &["1"], 2), &[0]).unwrap();
        assert_eq!(out["member"], json!(false));
        assert_eq!(out["reason"], json!("irregular"));
    }
}
