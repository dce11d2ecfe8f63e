//! JSON wire formats.
//!
//! Conics are `{"field": "<spec>", "coeffs": [x², y², z², xy, xz, yz]}`,
//! points and lines are 3-element arrays at canonical scale. Prime-field
//! residues and integers are JSON numbers, extension-field elements are
//! coefficient arrays low to high, everything else is a string in the
//! field's canonical rendering. Readers accept all three forms.

use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::char2::{CanonicalForm2, QuadraticForm2};
use crate::ecurve::{BiquadraticForm, ECurveShape};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::BinaryForm;
use crate::poncelet::{Outcome, PorismReport, ProcessResult, PonceletState};
use crate::projective::{
    Classification, Conic, IntersectionType, NormalizedPair, P1Point, PointSet, ProjLine,
    ProjPoint,
};

fn bad(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn elem_to_json(e: &Elem) -> Value {
    if let Some(r) = e.residue() {
        return json!(r);
    }
    if let Some(c) = e.coefficients() {
        return json!(c);
    }
    if let Some((r, s)) = e.rational_parts() {
        if s.is_zero() {
            return match r.to_integer().to_i64().filter(|_| r.is_integer()) {
                Some(i) => json!(i),
                None => json!(r.to_string()),
            };
        }
    }
    json!(e.to_string())
}

pub fn elem_from_json(field: &Field, v: &Value) -> Result<Elem> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|i| field.from_i64(i))
            .ok_or_else(|| bad(format!("expected an integer, got {n}"))),
        Value::String(s) => field.parse_element(s),
        Value::Array(cs) => {
            let p = field.characteristic();
            if p == 0 {
                return Err(bad("coefficient arrays need a finite field"));
            }
            let coeffs = cs
                .iter()
                .map(|c| {
                    c.as_i64()
                        .map(|i| i.rem_euclid(p as i64) as u64)
                        .ok_or_else(|| bad(format!("bad coefficient {c}")))
                })
                .collect::<Result<Vec<u64>>>()?;
            field.from_coefficients(&coeffs)
        }
        other => Err(bad(format!("bad field element {other}"))),
    }
}

fn elems_from_json<const N: usize>(field: &Field, v: &Value) -> Result<[Elem; N]> {
    let arr = v.as_array().ok_or_else(|| bad(format!("expected an array, got {v}")))?;
    if arr.len() != N {
        return Err(bad(format!("expected {N} entries, got {}", arr.len())));
    }
    let es = arr.iter().map(|x| elem_from_json(field, x)).collect::<Result<Vec<_>>>()?;
    Ok(es.try_into().expect("length checked"))
}

fn elems_to_json(es: &[Elem]) -> Value {
    Value::Array(es.iter().map(elem_to_json).collect())
}

pub fn field_from_json(v: &Value) -> Result<Field> {
    Field::parse(v.as_str().ok_or_else(|| bad("field must be a spec string"))?)
}

pub fn point_to_json(p: &ProjPoint) -> Value {
    elems_to_json(p.coords())
}

pub fn point_from_json(field: &Field, v: &Value) -> Result<ProjPoint> {
    ProjPoint::new(elems_from_json::<3>(field, v)?)
}

pub fn line_to_json(l: &ProjLine) -> Value {
    elems_to_json(l.coeffs())
}

pub fn p1_to_json(p: &P1Point) -> Value {
    json!([elem_to_json(p.s()), elem_to_json(p.w())])
}

pub fn p1_from_json(field: &Field, v: &Value) -> Result<P1Point> {
    let [s, w] = elems_from_json::<2>(field, v)?;
    P1Point::new(s, w)
}

pub fn binary_form_to_json(f: &BinaryForm) -> Value {
    Value::Array((0..=f.degree()).map(|i| elem_to_json(&f.coeff(i))).collect())
}

pub fn conic_to_json(c: &Conic) -> Value {
    json!({"field": c.field().to_string(), "coeffs": elems_to_json(c.coeffs())})
}

/// Reads a conic object, or a bare coefficient array over `default`.
pub fn conic_from_json(v: &Value, default: Option<&Field>) -> Result<Conic> {
    let (field, coeffs) = match v {
        Value::Array(_) => (default.cloned().ok_or_else(|| bad("conic needs a field"))?, v),
        Value::Object(o) => {
            let field = match o.get("field") {
                Some(f) => field_from_json(f)?,
                None => default.cloned().ok_or_else(|| bad("conic needs a field"))?,
            };
            (field, o.get("coeffs").ok_or_else(|| bad("conic needs coeffs"))?)
        }
        _ => return Err(bad(format!("bad conic {v}"))),
    };
    Conic::new(elems_from_json::<6>(&field, coeffs)?)
}

/// Reads `{"c": .., "d": ..}` with an optional shared `"field"`.
pub fn pair_from_json(v: &Value) -> Result<(Conic, Conic)> {
    let o = v.as_object().ok_or_else(|| bad("expected an object with c and d"))?;
    let field = o.get("field").map(field_from_json).transpose()?;
    let get = |k: &str| o.get(k).ok_or_else(|| bad(format!("missing {k:?}")));
    let c = conic_from_json(get("c")?, field.as_ref())?;
    let d = conic_from_json(get("d")?, field.as_ref())?;
    if c.field() != d.field() {
        return Err(Error::FieldMismatch(c.field().to_string(), d.field().to_string()));
    }
    Ok((c, d))
}

pub fn pair_to_json(c: &Conic, d: &Conic) -> Value {
    json!({"c": conic_to_json(c), "d": conic_to_json(d)})
}

pub fn point_set_to_json(s: &PointSet) -> Value {
    json!({
        "field": s.embedding.target().to_string(),
        "points": s.points.iter().map(point_to_json).collect::<Vec<_>>(),
    })
}

pub fn normalized_to_json(n: &NormalizedPair) -> Value {
    let m = n.transform.matrix();
    json!({
        "t": elem_to_json(&n.t),
        "a": elem_to_json(&n.a),
        "b": elem_to_json(&n.b),
        "delta": elem_to_json(&n.delta),
        "point": point_to_json(&n.point),
        "transform": m.iter().map(|r| elems_to_json(r)).collect::<Vec<_>>(),
    })
}

pub fn classification_to_json(c: &Classification) -> Value {
    let mut o = json!({
        "type": c.itype.to_string(),
        "tangency": point_set_to_json(&c.tangency),
    });
    if let Some(n) = &c.normalized {
        o["normalized"] = normalized_to_json(n);
    }
    o
}

pub fn itype_from_json(v: &Value) -> Result<IntersectionType> {
    v.as_str().ok_or_else(|| bad("type must be a string"))?.parse()
}

pub fn state_to_json(s: &PonceletState) -> Value {
    json!({"index": s.index, "c": point_to_json(&s.c), "d": point_to_json(&s.d)})
}

pub fn outcome_to_json(o: &Outcome) -> Value {
    match o {
        Outcome::Closed { period } => json!({"status": "closed", "period": period}),
        Outcome::Open { steps } => json!({"status": "open", "steps": steps}),
        Outcome::HitDegenerate { step } => json!({"status": "hit_degenerate", "step": step}),
    }
}

pub fn process_result_to_json(r: &ProcessResult) -> Value {
    let mut o = outcome_to_json(&r.outcome);
    o["field"] = json!(r.field.to_string());
    o["lifted"] = json!(r.lifted);
    o["orbit_complete"] = json!(r.orbit_complete);
    o["orbit"] = Value::Array(r.orbit.iter().map(state_to_json).collect());
    o
}

pub fn porism_report_to_json(r: &PorismReport) -> Value {
    json!({
        "type": r.itype.to_string(),
        "pass": r.pass,
        "exhaustive": r.exhaustive,
        "period": r.period(),
        "runs": r.runs.iter().map(|s| {
            let mut o = outcome_to_json(&s.result.outcome);
            o["c1"] = point_to_json(&s.c1);
            o["lifted"] = json!(s.result.lifted);
            o
        }).collect::<Vec<_>>(),
    })
}

pub fn biquadratic_to_json(h: &BiquadraticForm) -> Value {
    Value::Array(h.coeffs().iter().map(|r| elems_to_json(r)).collect())
}

pub fn ecurve_shape_to_json(h: &BiquadraticForm, s: &ECurveShape) -> Value {
    let sing: Vec<Value> = s
        .singular
        .points
        .iter()
        .map(|(u, v)| json!([p1_to_json(u), p1_to_json(v)]))
        .collect();
    let mut o = json!({
        "field": h.field().to_string(),
        "h": biquadratic_to_json(h),
        "shape": s.kind.tag(),
        "singular": {"field": s.singular.embedding.target().to_string(), "points": sing},
        "reducible": s.reducible.is_some(),
    });
    if let Some(r) = &s.reducible {
        o["factors"] = json!({
            "field": r.embedding.target().to_string(),
            "lifted": r.lifted,
            "forms": r.factors.iter().map(|f| f.k.iter().map(|row| elems_to_json(row)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        });
    }
    o
}

/// Reads `{"field": "F2k:3", "n": 3, "coeffs": {"i,j": c, ..}}`.
pub fn quadratic_form2_from_json(v: &Value) -> Result<QuadraticForm2> {
    let o = v.as_object().ok_or_else(|| bad("expected a quadratic form object"))?;
    let field = field_from_json(o.get("field").ok_or_else(|| bad("missing \"field\""))?)?;
    let n = o
        .get("n")
        .and_then(Value::as_u64)
        .ok_or_else(|| bad("missing or bad \"n\""))? as usize;
    let mut q = QuadraticForm2::zero(&field, n)?;
    let coeffs = o
        .get("coeffs")
        .and_then(Value::as_object)
        .ok_or_else(|| bad("coeffs must be an object keyed \"i,j\""))?;
    for (k, c) in coeffs {
        let (i, j) = k.split_once(',').ok_or_else(|| bad(format!("bad key {k:?}")))?;
        let parse = |s: &str| s.trim().parse::<usize>().map_err(|_| bad(format!("bad key {k:?}")));
        let (i, j) = (parse(i)?, parse(j)?);
        if i >= n || j >= n {
            return Err(bad(format!("index {k:?} out of range for n = {n}")));
        }
        q.set(i, j, elem_from_json(&field, c)?);
    }
    Ok(q)
}

pub fn quadratic_form2_to_json(q: &QuadraticForm2) -> Value {
    let mut coeffs = Map::new();
    for i in 0..q.dim() {
        for j in i..q.dim() {
            if !q.coeff(i, j).is_zero() {
                coeffs.insert(format!("{i},{j}"), elem_to_json(q.coeff(i, j)));
            }
        }
    }
    json!({"field": q.field().to_string(), "n": q.dim(), "coeffs": coeffs})
}

pub fn canonical_form2_to_json(cf: &CanonicalForm2) -> Value {
    json!({
        "l": cf.l,
        "has_square_term": cf.has_square_term,
        "lifted": cf.lifted,
        "field": cf.embedding.target().to_string(),
        "basis": cf.basis.iter().map(|r| elems_to_json(r)).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conic_round_trip() {
        for spec in ["Fp:13", "Fq:5^2", "F2k:3", "Q", "Qsqrt:2"] {
            let f = Field::parse(spec).unwrap();
            let g = f.generator().unwrap_or_else(|| f.from_i64(3));
            let half = f.from_i64(1).checked_div(&f.from_i64(3)).unwrap_or_else(|_| f.one());
            let c = Conic::new([f.one(), g.clone(), f.from_i64(-2), half, f.zero(), g]).unwrap();
            let j = conic_to_json(&c);
            assert_eq!(conic_from_json(&j, None).unwrap(), c, "{spec}");
            let text = serde_json::to_string(&j).unwrap();
            let back: Value = serde_json::from_str(&text).unwrap();
            assert_eq!(conic_from_json(&back, None).unwrap(), c);
        }
    }

    #[test]
    fn element_encodings() {
        let f = Field::prime(7).unwrap();
        assert_eq!(elem_to_json(&f.from_i64(-1)), json!(6));
        let q = Field::rational();
        let e = q.from_i64(1).checked_div(&q.from_i64(2)).unwrap();
        assert_eq!(elem_to_json(&e), json!("1/2"));
        assert_eq!(elem_to_json(&q.from_i64(-4)), json!(-4));
        assert_eq!(elem_from_json(&q, &json!("-3/4")).unwrap(), q.from_i64(-3).checked_div(&q.from_i64(4)).unwrap());
        let f4 = Field::gf(2, 2).unwrap();
        let w = f4.generator().unwrap();
        assert_eq!(elem_from_json(&f4, &elem_to_json(&w)).unwrap(), w);
    }

    #[test]
    fn pair_with_shared_field() {
        let v = json!({"field": "Fp:5", "c": [1, 0, 0, 0, 0, -1], "d": {"coeffs": [1, 0, 0, 0, 0, -1]}});
        let (c, d) = pair_from_json(&v).unwrap();
        assert_eq!(c, d);
        assert!(pair_from_json(&json!({"c": [1, 0, 0, 0, 0, 1]})).is_err());
    }

    #[test]
    fn quadratic_form_round_trip() {
        let v = json!({"field": "F2k:3", "n": 3, "coeffs": {"0,1": 1, "2,2": 1}});
        let q = quadratic_form2_from_json(&v).unwrap();
        assert!(q.coeff(0, 1).is_one() && q.coeff(2, 2).is_one() && q.coeff(0, 0).is_zero());
        assert_eq!(quadratic_form2_from_json(&quadratic_form2_to_json(&q)).unwrap(), q);
        assert!(quadratic_form2_from_json(&json!({"field": "F2k:3", "n": 2, "coeffs": {"0,2": 1}})).is_err());
    }
}
