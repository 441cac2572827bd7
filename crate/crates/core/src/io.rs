//! JSON interchange: elements as arrays of rational strings, fields as
//! {"cyclotomic": n}, points as coordinate triples, curves as sorted
//! coefficient lists. Output is canonical: object keys and set elements are
//! always emitted in their deterministic order.

use serde_json::{json, Map, Value};

use crate::census::SingularityCensus;
use crate::error::{Error, Result};
use crate::exactfield::{parse_rat, rat_to_string, CyclotomicElement, CyclotomicField};
use crate::plane::{Mono, PlaneCurve, ProjectivePoint};
use crate::search::{ConfigurationType, CurveSet, IncidenceProfile, PointSet};

pub fn field_to_json(f: &CyclotomicField) -> Value {
    json!({ "cyclotomic": f.conductor() })
}

pub fn field_from_json(v: &Value) -> Result<CyclotomicField> {
    let n = v
        .get("cyclotomic")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::DataError("field must be {\"cyclotomic\": n}".into()))?;
    if n == 0 {
        return Err(Error::DataError("conductor must be positive".into()));
    }
    Ok(CyclotomicField::new(n as u32))
}

pub fn element_to_json(e: &CyclotomicElement) -> Value {
    Value::Array(
        e.coords()
            .iter()
            .map(|r| Value::String(rat_to_string(r)))
            .collect(),
    )
}

pub fn element_from_json(v: &Value, field: &CyclotomicField) -> Result<CyclotomicElement> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::DataError("element must be an array of rationals".into()))?;
    let coords = arr
        .iter()
        .map(|s| {
            s.as_str()
                .ok_or_else(|| Error::DataError("element coordinates are strings".into()))
                .and_then(parse_rat)
        })
        .collect::<Result<Vec<_>>>()?;
    field.element_from_coords(coords)
}

pub fn point_to_json(p: &ProjectivePoint) -> Value {
    Value::Array(p.coords().iter().map(element_to_json).collect())
}

pub fn point_from_json(v: &Value, field: &CyclotomicField) -> Result<ProjectivePoint> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 3)
        .ok_or_else(|| Error::DataError("a point is an array of three elements".into()))?;
    let coords = [
        element_from_json(&arr[0], field)?,
        element_from_json(&arr[1], field)?,
        element_from_json(&arr[2], field)?,
    ];
    ProjectivePoint::new(coords)
}

/// Coefficients in descending graded-lex order, leading term first.
pub fn curve_to_json(c: &PlaneCurve) -> Value {
    let coeffs: Vec<Value> = c
        .coeffs()
        .iter()
        .rev()
        .map(|(&(a, b, z), e)| json!([[a, b, z], element_to_json(e)]))
        .collect();
    json!({ "degree": c.degree(), "coeffs": coeffs })
}

pub fn curve_from_json(v: &Value, field: &CyclotomicField) -> Result<PlaneCurve> {
    let degree = v
        .get("degree")
        .and_then(Value::as_u64)
        .ok_or_else(|| Error::DataError("curve needs a degree".into()))? as u32;
    let coeffs = v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::DataError("curve needs a coeffs array".into()))?;
    let mut pairs: Vec<(Mono, CyclotomicElement)> = Vec::with_capacity(coeffs.len());
    for item in coeffs {
        let pair = item
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::DataError("coeff entries are [[a,b,c], element]".into()))?;
        let mono = pair[0]
            .as_array()
            .filter(|a| a.len() == 3)
            .ok_or_else(|| Error::DataError("monomial is [a, b, c]".into()))?;
        let expo = |i: usize| -> Result<u32> {
            mono[i]
                .as_u64()
                .map(|e| e as u32)
                .ok_or_else(|| Error::DataError("exponents are nonnegative integers".into()))
        };
        pairs.push((
            (expo(0)?, expo(1)?, expo(2)?),
            element_from_json(&pair[1], field)?,
        ));
    }
    PlaneCurve::new(field.clone(), degree, pairs)
}

pub fn point_set_to_json(ps: &PointSet) -> Value {
    let mut obj = Map::new();
    obj.insert("field".into(), field_to_json(ps.field()));
    if let Some(name) = ps.name() {
        obj.insert("name".into(), Value::String(name.to_string()));
    }
    obj.insert(
        "points".into(),
        Value::Array(ps.points().iter().map(point_to_json).collect()),
    );
    Value::Object(obj)
}

pub fn point_set_from_json(v: &Value) -> Result<PointSet> {
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| Error::DataError("point file needs a field".into()))?,
    )?;
    let raw = v
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::DataError("point file needs a points array".into()))?;
    if raw.is_empty() {
        return Err(Error::DataError("point file has no points".into()));
    }
    let points = raw
        .iter()
        .map(|p| point_from_json(p, &field))
        .collect::<Result<Vec<_>>>()?;
    let name = v.get("name").and_then(Value::as_str).map(str::to_owned);
    PointSet::new(field, points, name)
}

pub fn point_set_from_json_str(s: &str) -> Result<PointSet> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| Error::DataError(format!("bad JSON: {e}")))?;
    point_set_from_json(&v)
}

pub fn curve_set_to_json(cs: &CurveSet) -> Value {
    let mut obj = Map::new();
    if let Some(first) = cs.curves().first() {
        obj.insert("field".into(), field_to_json(first.field()));
    }
    obj.insert("count".into(), json!(cs.len()));
    obj.insert(
        "provenance".into(),
        json!({
            "degree": cs.provenance.degree,
            "min_count": cs.provenance.min_count,
            "source": cs.provenance.source,
        }),
    );
    obj.insert(
        "curves".into(),
        Value::Array(cs.curves().iter().map(curve_to_json).collect()),
    );
    Value::Object(obj)
}

/// {"field": ..., "curves": [...]}; used by the census subcommand.
pub fn curves_from_json_str(s: &str) -> Result<Vec<PlaneCurve>> {
    let v: Value =
        serde_json::from_str(s).map_err(|e| Error::DataError(format!("bad JSON: {e}")))?;
    let field = field_from_json(
        v.get("field")
            .ok_or_else(|| Error::DataError("curve file needs a field".into()))?,
    )?;
    let raw = v
        .get("curves")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::DataError("curve file needs a curves array".into()))?;
    raw.iter().map(|c| curve_from_json(c, &field)).collect()
}

pub fn profile_to_json(profile: &IncidenceProfile) -> Value {
    json!({
        "per_curve_histogram": profile
            .curve_histogram()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<std::collections::BTreeMap<String, usize>>(),
        "per_point_histogram": profile
            .point_histogram()
            .into_iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<std::collections::BTreeMap<String, usize>>(),
        "per_curve": profile.per_curve,
        "per_point": profile.per_point,
    })
}

pub fn configuration_to_json(ct: &ConfigurationType) -> Value {
    match ct {
        ConfigurationType::Uniform { n, r, m, s } => {
            json!({ "uniform": { "n": n, "r": r, "m": m, "s": s } })
        }
        ConfigurationType::NonUniform {
            point_histogram,
            curve_histogram,
        } => json!({
            "non_uniform": {
                "point_histogram": point_histogram
                    .iter()
                    .map(|(k, v)| (k.to_string(), *v))
                    .collect::<std::collections::BTreeMap<String, usize>>(),
                "curve_histogram": curve_histogram
                    .iter()
                    .map(|(k, v)| (k.to_string(), *v))
                    .collect::<std::collections::BTreeMap<String, usize>>(),
            }
        }),
    }
}

pub fn census_to_json(census: &SingularityCensus, debug: bool) -> Value {
    let mut obj = Map::new();
    obj.insert(
        "t".into(),
        Value::Object(
            census
                .t
                .iter()
                .map(|(r, tr)| (r.to_string(), json!(tr)))
                .collect(),
        ),
    );
    obj.insert("total_points".into(), json!(census.total_points()));
    obj.insert("total_degree".into(), json!(census.total_degree));
    obj.insert("members".into(), json!(census.member_count));
    obj.insert("tangential".into(), json!(census.tangential_count));
    if let Ok(h) = crate::census::harbourne(census) {
        obj.insert("H".into(), Value::String(rat_to_string(&h.h)));
        obj.insert("H_approx".into(), json!(h.h_approx));
    }
    if debug {
        obj.insert(
            "clusters".into(),
            Value::Array(
                census
                    .clusters
                    .iter()
                    .map(|c| {
                        let mut cl = Map::new();
                        cl.insert("degree".into(), json!(c.degree()));
                        cl.insert("membership".into(), json!(c.multiplicity()));
                        cl.insert("tangential".into(), json!(c.tangential));
                        cl.insert(
                            "m".into(),
                            Value::Array(
                                c.cluster
                                    .modulus()
                                    .coeffs()
                                    .iter()
                                    .map(element_to_json)
                                    .collect(),
                            ),
                        );
                        cl.insert(
                            "r".into(),
                            Value::Array(
                                c.cluster
                                    .parametrization()
                                    .coeffs()
                                    .iter()
                                    .map(element_to_json)
                                    .collect(),
                            ),
                        );
                        Value::Object(cl)
                    })
                    .collect(),
            ),
        );
    }
    Value::Object(obj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::rat;

    #[test]
    fn element_roundtrip() {
        let f8 = CyclotomicField::new(8);
        let e = f8
            .element_from_coords(vec![rat(1, 2), rat(-3, 1), rat(0, 1), rat(7, 5)])
            .unwrap();
        let v = element_to_json(&e);
        assert_eq!(v, json!(["1/2", "-3", "0", "7/5"]));
        assert_eq!(element_from_json(&v, &f8).unwrap(), e);
    }

    #[test]
    fn point_roundtrip_preserves_canonical_form() {
        let f = CyclotomicField::rationals();
        let p = ProjectivePoint::from_ints(&f, 2, 4, 2);
        let v = point_to_json(&p);
        let q = point_from_json(&v, &f).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn curve_roundtrip_and_order() {
        let f = CyclotomicField::rationals();
        let c = PlaneCurve::new(
            f.clone(),
            2,
            [
                ((0, 0, 2), f.int(-1)),
                ((2, 0, 0), f.one()),
                ((0, 2, 0), f.one()),
            ],
        )
        .unwrap();
        let v = curve_to_json(&c);
        // leading term (2,0,0) first
        assert_eq!(v["coeffs"][0][0], json!([2, 0, 0]));
        let back = curve_from_json(&v, &f).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn point_set_roundtrip() {
        let f = CyclotomicField::new(4);
        let ps = PointSet::new(
            f.clone(),
            vec![
                ProjectivePoint::from_ints(&f, 1, 2, 1),
                ProjectivePoint::new([f.zeta(), f.one(), f.one()]).unwrap(),
            ],
            Some("demo".into()),
        )
        .unwrap();
        let v = point_set_to_json(&ps);
        let back = point_set_from_json(&v).unwrap();
        assert_eq!(back.points(), ps.points());
        assert_eq!(back.name(), Some("demo"));
    }

    #[test]
    fn canonical_output_is_stable() {
        let f = CyclotomicField::rationals();
        let c = PlaneCurve::new(f.clone(), 1, [((1, 0, 0), f.one()), ((0, 0, 1), f.int(5))])
            .unwrap();
        let s1 = serde_json::to_string(&curve_to_json(&c)).unwrap();
        let s2 = serde_json::to_string(&curve_to_json(&c)).unwrap();
        assert_eq!(s1, s2);
    }
}
