//! JSON documents. Integers are numbers when they fit in an `i64` and
//! decimal strings otherwise; rationals are strings `"p/q"`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};

use crate::atypical::{AtypicalRecord, ZPReport};
use crate::axiom_lab::{Flat, FlatModel};
use crate::curve::{ClosureReport, ParamCurve};
use crate::error::{Error, Result};
use crate::lattice::IntLattice;
use crate::poly::Poly;
use crate::scalar::CycloRat;
use crate::torus::{GeneralCoset, TorusPoint};

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn rational(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn vector(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn poly(p: &Poly) -> Value {
    json!({
        "text": p.to_string(),
        "coeffs": p.coeffs().iter().map(rational).collect::<Vec<_>>(),
    })
}

/// HNF rows.
pub fn lattice(l: &IntLattice) -> Value {
    Value::Array(l.basis_rows().map(vector).collect())
}

pub fn coset(c: &GeneralCoset) -> Value {
    json!({
        "ambient": c.ambient_dim(),
        "dim": c.dim(),
        "torsion": c.is_torsion(),
        "lattice": lattice(c.lattice()),
        "values": c.values().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    })
}

pub fn point(p: &TorusPoint) -> Value {
    json!({
        "ambient": p.ambient_dim(),
        "coords": p.coords().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
    })
}

pub fn curve(c: &ParamCurve) -> Value {
    json!({
        "ambient": c.ambient_dim(),
        "coords": c.coords().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
    })
}

pub fn closures(r: &ClosureReport) -> Value {
    json!({
        "ws_closure": coset(&r.ws_closure),
        "sp_closure": coset(r.sp_closure.as_coset()),
        "defect": r.defect,
        "weak_defect": r.weak_defect,
        "special": r.is_special(),
        "weakly_special": r.is_weakly_special(),
    })
}

pub fn record(r: &AtypicalRecord) -> Value {
    json!({
        "defining_poly": poly(&r.defining_poly),
        "witnessed_lattice": lattice(&r.witnessed_lattice),
        "defect_upper_bound": r.defect_upper_bound,
        "witnesses": r.witnesses.iter().map(|w| json!({
            "vector": vector(&w.vector),
            "order": w.order,
        })).collect::<Vec<_>>(),
    })
}

pub fn records(rs: &[AtypicalRecord]) -> Value {
    Value::Array(rs.iter().map(record).collect())
}

pub fn zp_report(r: &ZPReport) -> Value {
    json!({
        "bounds": {"B": r.b, "N": r.n, "d": r.d},
        "threshold": r.threshold(),
        "closures": closures(&r.closures),
        "records": records(&r.records),
        "optimal_records": records(&r.optimal_records),
        "stability": {
            "counts": r.stability.counts.iter().map(|(b, n, k)| json!({"B": b, "N": n, "records": k})).collect::<Vec<_>>(),
            "monotone": r.stability.monotone,
        },
    })
}

pub fn model(m: &FlatModel) -> Value {
    json!({
        "ambient_dim": m.ambient_dim(),
        "flats": m.flats().iter().map(|f| json!({
            "label": f.label,
            "dim": f.dim,
            "special": f.special,
            "weakly_special": f.weakly_special,
        })).collect::<Vec<_>>(),
        "containments": m.containments().iter().map(|(i, j)| json!([i, j])).collect::<Vec<_>>(),
        "meets": m.meets().iter().map(|((i, j), c)| json!({"pair": [i, j], "components": c})).collect::<Vec<_>>(),
    })
}

fn object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| bad(format!("{what} must be an object")))
}

fn field<'a>(o: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    o.get(key)
        .ok_or_else(|| bad(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array")))
}

fn string<'a>(v: &'a Value, what: &str) -> Result<&'a str> {
    v.as_str()
        .ok_or_else(|| bad(format!("{what} must be a string")))
}

fn usize_of(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| bad(format!("{what} must be a non-negative integer")))
}

fn bool_of(v: &Value, what: &str) -> Result<bool> {
    v.as_bool()
        .ok_or_else(|| bad(format!("{what} must be a boolean")))
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| bad(format!("{n} is not an integer"))),
        Value::String(s) => s
            .trim()
            .parse()
            .map_err(|_| bad(format!("{s:?} is not an integer"))),
        _ => Err(bad("integer expected")),
    }
}

fn ambient(o: &Map<String, Value>, found: usize) -> Result<usize> {
    match o.get("ambient") {
        None => Ok(found),
        Some(v) => {
            let n = usize_of(v, "ambient")?;
            if n != found {
                return Err(Error::DimensionMismatch { expected: n, found });
            }
            Ok(n)
        }
    }
}

/// `{ "ambient": n, "coords": ["(t^2-1)/(t+2)", ...] }`.
pub fn parse_curve(v: &Value) -> Result<ParamCurve> {
    let o = object(v, "curve")?;
    let coords = array(field(o, "coords")?, "coords")?;
    let coords = coords
        .iter()
        .map(|c| string(c, "coordinate"))
        .collect::<Result<Vec<_>>>()?;
    ambient(o, coords.len())?;
    ParamCurve::parse(&coords)
}

/// `{ "ambient": n, "coords": ["q@a/b", ...] }`.
pub fn parse_point(v: &Value) -> Result<TorusPoint> {
    let o = object(v, "point")?;
    let coords = array(field(o, "coords")?, "coords")?
        .iter()
        .map(|c| string(c, "coordinate")?.parse::<CycloRat>())
        .collect::<Result<Vec<_>>>()?;
    ambient(o, coords.len())?;
    if coords.is_empty() {
        return Err(Error::InvalidArgument("point has no coordinates".into()));
    }
    Ok(TorusPoint::new(coords))
}

/// `{ "ambient": n, "lattice": [[...]], "values": ["q@a/b", ...] }`: the
/// set where the character of each row takes the matching value. It must
/// be a single coset.
pub fn parse_coset(v: &Value) -> Result<GeneralCoset> {
    let o = object(v, "coset")?;
    let n = usize_of(field(o, "ambient")?, "ambient")?;
    let rows = array(field(o, "lattice")?, "lattice")?
        .iter()
        .map(|r| {
            array(r, "lattice row")?
                .iter()
                .map(parse_int)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let values = array(field(o, "values")?, "values")?
        .iter()
        .map(|c| string(c, "value")?.parse::<CycloRat>())
        .collect::<Result<Vec<_>>>()?;
    if rows.len() != values.len() {
        return Err(Error::DimensionMismatch {
            expected: rows.len(),
            found: values.len(),
        });
    }
    for r in &rows {
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
    }
    let mut comps = GeneralCoset::solve(n, &rows, &values)?;
    match comps.len() {
        1 => Ok(comps.pop().expect("one component")),
        0 => Err(Error::InvalidArgument(
            "the equations have no common solution".into(),
        )),
        k => Err(Error::InvalidArgument(format!(
            "the equations describe {k} cosets; use a saturated lattice"
        ))),
    }
}

/// `{ "ambient_dim": n, "flats": [{"label", "dim", "special",
/// "weakly_special"}], "containments": [[i, j], ...], "meets": [{"pair":
/// [i, j], "components": [...]}] }`. The model is validated.
pub fn parse_model(v: &Value) -> Result<FlatModel> {
    let o = object(v, "model")?;
    let n = usize_of(field(o, "ambient_dim")?, "ambient_dim")?;
    let flats = array(field(o, "flats")?, "flats")?
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let f = object(f, "flat")?;
            let label = match f.get("label") {
                Some(l) => string(l, "label")?.to_string(),
                None => format!("F{i}"),
            };
            Ok(Flat::new(
                label,
                usize_of(field(f, "dim")?, "dim")?,
                bool_of(field(f, "special")?, "special")?,
                bool_of(field(f, "weakly_special")?, "weakly_special")?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let pair = |v: &Value| -> Result<(usize, usize)> {
        match array(v, "pair")?.as_slice() {
            [a, b] => Ok((usize_of(a, "flat index")?, usize_of(b, "flat index")?)),
            _ => Err(bad("a pair needs two flat indices")),
        }
    };
    let containments = match o.get("containments") {
        Some(c) => array(c, "containments")?
            .iter()
            .map(pair)
            .collect::<Result<Vec<_>>>()?,
        None => vec![],
    };
    let meets = match o.get("meets") {
        Some(m) => array(m, "meets")?
            .iter()
            .map(|e| {
                let e = object(e, "meet")?;
                let comps = array(field(e, "components")?, "components")?
                    .iter()
                    .map(|x| usize_of(x, "flat index"))
                    .collect::<Result<Vec<_>>>()?;
                Ok((pair(field(e, "pair")?)?, comps))
            })
            .collect::<Result<Vec<_>>>()?,
        None => vec![],
    };
    FlatModel::new(n, flats, &containments, &meets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_integers_become_strings() {
        assert_eq!(int(&BigInt::from(-5)), json!(-5));
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        assert_eq!(int(&big), json!("123456789012345678901234567890"));
        assert_eq!(parse_int(&int(&big)).unwrap(), big);
    }

    #[test]
    fn poly_coefficients() {
        let p = Poly::from_i64(&[1, -1, 1]);
        assert_eq!(
            poly(&p),
            json!({"text": "t^2 - t + 1", "coeffs": ["1/1", "-1/1", "1/1"]})
        );
    }

    #[test]
    fn coset_round_trip() {
        let doc = json!({"ambient": 2, "lattice": [[2, 0]], "values": ["1@1/2"]});
        let c = parse_coset(&doc).unwrap_err();
        assert!(matches!(c, Error::InvalidArgument(_)));
        let doc = json!({"ambient": 2, "lattice": [[1, 1]], "values": ["3@1/2"]});
        let c = parse_coset(&doc).unwrap();
        assert_eq!(c.dim(), 1);
        let back = parse_coset(&coset(&c)).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn curve_documents() {
        let c = parse_curve(&json!({"ambient": 2, "coords": ["t", "1-t"]})).unwrap();
        assert_eq!(c.ambient_dim(), 2);
        assert!(matches!(
            parse_curve(&json!({"ambient": 3, "coords": ["t", "1-t"]})),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(parse_curve(&json!({"coords": "t"}))
            .unwrap_err()
            .is_malformed_input());
        assert!(parse_curve(&json!({"coords": ["2t"]}))
            .unwrap_err()
            .is_malformed_input());
    }

    #[test]
    fn model_round_trip() {
        let m = crate::axiom_lab::defect_negative_control();
        assert_eq!(parse_model(&model(&m)).unwrap(), m);
    }
}
