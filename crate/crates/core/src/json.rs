//! JSON encodings of opers, connections and normal forms.
//!
//! Series use the wire format of [`crate::formal::json`]; Lie algebra
//! components are keyed by basis label (`e[1,1]`, `f[0,1]`, `h2`).

use std::fmt::Display;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::chevalley::{LieElement, LoopElement};
use crate::error::{Error, Result};
use crate::formal::LaurentSeries;
use crate::miura::CartanConnection;
use crate::oper::{CanonicalOper, LambdaNilpotentForm, OperOperator, OperSpace};
use crate::rootdata::{CartanType, Coweight};
use crate::scalar::Scalar;

fn parse_err(e: impl Display) -> Error {
    Error::Parse(e.to_string())
}

/// The `"type"` field of a payload.
pub fn cartan_type_of(v: &Value) -> Result<CartanType> {
    let label = v.get("type").and_then(Value::as_str).ok_or_else(|| parse_err("missing string field `type`"))?;
    CartanType::parse(label)
}

fn series_value<T: Scalar + Display>(s: &LaurentSeries<T>) -> Value {
    serde_json::to_value(s).expect("series serialize")
}

fn series_from<T: Scalar + FromStr>(v: &Value) -> Result<LaurentSeries<T>> {
    serde_json::from_value(v.clone()).map_err(parse_err)
}

fn series_list<T: Scalar + FromStr>(v: &Value, field: &str, len: usize) -> Result<Vec<LaurentSeries<T>>> {
    let arr = v.get(field).and_then(Value::as_array).ok_or_else(|| parse_err(format!("missing array field `{field}`")))?;
    if arr.len() != len {
        return Err(Error::Mismatch { expected: len, got: arr.len() });
    }
    arr.iter().map(series_from).collect()
}

pub fn loop_to_value<T: Scalar + Display>(space: &OperSpace, x: &LoopElement<T>) -> Value {
    let mut m = Map::new();
    for (&k, s) in &x.0 {
        m.insert(space.lie().label(k).to_string(), series_value(s));
    }
    Value::Object(m)
}

pub fn loop_from_value<T: Scalar + FromStr>(space: &OperSpace, v: &Value) -> Result<LoopElement<T>> {
    let obj = v.as_object().ok_or_else(|| parse_err("expected an object of basis labels"))?;
    let mut out = LoopElement::zero();
    for (label, s) in obj {
        let k = space.lie().index_of(label).ok_or_else(|| parse_err(format!("unknown basis label `{label}`")))?;
        out.add_at(k, &series_from(s)?);
    }
    Ok(out)
}

pub fn lie_to_value<T: Scalar + Display>(space: &OperSpace, x: &LieElement<T>) -> Value {
    let mut m = Map::new();
    for (k, c) in x.0.iter().enumerate() {
        if !c.is_zero() {
            m.insert(space.lie().label(k).to_string(), Value::String(c.to_string()));
        }
    }
    Value::Object(m)
}

pub fn canonical_to_value<T: Scalar + Display>(c: &CanonicalOper<T>) -> Value {
    json!({
        "type": c.cartan_type.to_string(),
        "coords": c.coords.iter().map(series_value).collect::<Vec<_>>(),
    })
}

pub fn canonical_from_value<T: Scalar + FromStr>(space: &OperSpace, v: &Value) -> Result<CanonicalOper<T>> {
    let t = cartan_type_of(v)?;
    expect_type(space, t)?;
    Ok(CanonicalOper { cartan_type: t, coords: series_list(v, "coords", space.root_system().rank())? })
}

pub fn connection_to_value<T: Scalar + Display>(c: &CartanConnection<T>) -> Value {
    json!({
        "type": c.cartan_type.to_string(),
        "u": c.u.iter().map(series_value).collect::<Vec<_>>(),
    })
}

pub fn connection_from_value<T: Scalar + FromStr>(space: &OperSpace, v: &Value) -> Result<CartanConnection<T>> {
    let t = cartan_type_of(v)?;
    expect_type(space, t)?;
    Ok(CartanConnection::new(t, series_list(v, "u", space.root_system().rank())?))
}

pub fn operator_to_value<T: Scalar + Display>(space: &OperSpace, op: &OperOperator<T>) -> Value {
    json!({ "type": op.cartan_type.to_string(), "v": loop_to_value(space, &op.v) })
}

pub fn operator_from_value<T: Scalar + FromStr>(space: &OperSpace, v: &Value) -> Result<OperOperator<T>> {
    let t = cartan_type_of(v)?;
    expect_type(space, t)?;
    let body = v.get("v").ok_or_else(|| parse_err("missing field `v`"))?;
    space.operator(loop_from_value(space, body)?)
}

pub fn coweight_to_value(c: &Coweight) -> Value {
    json!(c.0)
}

pub fn coweight_from_value(v: &Value) -> Result<Coweight> {
    serde_json::from_value::<Vec<i64>>(v.clone()).map(Coweight).map_err(parse_err)
}

pub fn form_to_value<T: Scalar + Display>(space: &OperSpace, f: &LambdaNilpotentForm<T>) -> Value {
    json!({
        "type": space.cartan_type().to_string(),
        "lambda": coweight_to_value(&f.lambda),
        "b_part": loop_to_value(space, &f.b_part),
        "nilpotent_residue": lie_to_value(space, &f.nilpotent_residue),
    })
}

fn expect_type(space: &OperSpace, t: CartanType) -> Result<()> {
    if space.cartan_type() == t {
        Ok(())
    } else {
        Err(Error::TypeMismatch { expected: space.cartan_type().to_string(), got: t.to_string() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;
    use num_rational::BigRational;

    type S = LaurentSeries<BigRational>;

    #[test]
    fn operator_roundtrip() {
        let space = OperSpace::for_label("A2").unwrap();
        let lie = space.lie();
        let mut v = LoopElement::zero();
        v.add_at(lie.h(1), &S::new(-1, vec![q(1, 2), q(3, 1)], 4));
        v.add_at(lie.e(2), &S::monomial(q(-7, 3), -2));
        let op = space.operator(v).unwrap();
        let val = operator_to_value(&space, &op);
        assert!(val["v"].get("e[1,1]").is_some());
        assert_eq!(operator_from_value::<BigRational>(&space, &val).unwrap(), operator_to_canon(&op));
    }

    fn operator_to_canon(op: &OperOperator<BigRational>) -> OperOperator<BigRational> {
        // exact series come back with finite precision just past their support
        let mut v = LoopElement::zero();
        for (&k, s) in &op.v.0 {
            let p = s.precision().unwrap_or(s.valuation() + s.coeffs().len() as i64);
            v.set(k, S::new(s.valuation(), s.coeffs().to_vec(), p));
        }
        OperOperator { cartan_type: op.cartan_type, v }
    }

    #[test]
    fn rejects_bad_payloads() {
        let space = OperSpace::for_label("A1").unwrap();
        let bad_label = serde_json::json!({"type": "A1", "v": {"e[9]": {"valuation":0,"precision":1,"coeffs":["1"]}}});
        assert!(operator_from_value::<BigRational>(&space, &bad_label).is_err());
        let wrong_type = serde_json::json!({"type": "A2", "coords": []});
        assert!(canonical_from_value::<BigRational>(&space, &wrong_type).is_err());
        let f_part = serde_json::json!({"type": "A1", "v": {"f[1]": {"valuation":0,"precision":1,"coeffs":["1"]}}});
        assert!(operator_from_value::<BigRational>(&space, &f_part).is_err());
    }

    #[test]
    fn canonical_roundtrip() {
        let space = OperSpace::for_label("B2").unwrap();
        let c = CanonicalOper {
            cartan_type: space.cartan_type(),
            coords: vec![S::new(-2, vec![q(1, 1)], 3), S::new(0, vec![q(2, 5), q(0, 1)], 2)],
        };
        let v = canonical_to_value(&c);
        assert_eq!(canonical_from_value::<BigRational>(&space, &v).unwrap(), c);
    }
}
