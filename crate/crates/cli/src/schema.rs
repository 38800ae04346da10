//! JSON file schemas for subalgebras, extension problems and fixtures.

use cr_core::exterior::{form_from_coeff_entries, AltForm};
use cr_core::liealg::{self, Ambient, LieElement, Subalgebra};
use cr_core::scalar::{scalar_from_value, Scalar};
use cr_core::{CoreError, Result};
use serde_json::Value;

pub fn parse_ambient(v: &Value) -> Result<Ambient> {
    let obj = v
        .as_object()
        .ok_or_else(|| CoreError::InvalidInput("\"ambient\" must be an object".into()))?;
    let ty = obj
        .get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| CoreError::InvalidInput("ambient needs a \"type\"".into()))?;
    match ty {
        "su" => {
            let n = obj
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| CoreError::InvalidInput("su ambient needs \"n\"".into()))?;
            Ok(Ambient::su(n as usize))
        }
        "sl2" => Ok(Ambient::sl2()),
        "product" => {
            let k = obj
                .get("torus_dim")
                .and_then(Value::as_u64)
                .ok_or_else(|| {
                    CoreError::InvalidInput("product ambient needs \"torus_dim\"".into())
                })?;
            let n = obj
                .get("n")
                .and_then(Value::as_u64)
                .ok_or_else(|| CoreError::InvalidInput("product ambient needs \"n\"".into()))?;
            Ok(Ambient::product(k as usize, n as usize))
        }
        other => Err(CoreError::InvalidInput(format!("unknown ambient type `{other}`"))),
    }
}

pub fn parse_element(ambient: &Ambient, v: &Value) -> Result<LieElement> {
    let obj = v
        .as_object()
        .ok_or_else(|| CoreError::InvalidInput("basis element must be an object".into()))?;
    let n = ambient.matrix_dim;
    let matrix_v = obj
        .get("matrix")
        .and_then(Value::as_array)
        .ok_or_else(|| CoreError::InvalidInput("basis element needs a \"matrix\"".into()))?;
    if matrix_v.len() != n {
        return Err(CoreError::InvalidInput(format!(
            "matrix must have {n} rows"
        )));
    }
    let mut matrix = Vec::with_capacity(n);
    for row_v in matrix_v {
        let row_arr = row_v
            .as_array()
            .ok_or_else(|| CoreError::InvalidInput("matrix rows must be arrays".into()))?;
        if row_arr.len() != n {
            return Err(CoreError::InvalidInput(format!("matrix rows must have {n} entries")));
        }
        let row: Vec<Scalar> = row_arr
            .iter()
            .map(scalar_from_value)
            .collect::<Result<_>>()?;
        matrix.push(row);
    }
    let mut e = LieElement::from_matrix(ambient.clone(), matrix)?;
    if let Some(tv) = obj.get("torus") {
        let arr = tv
            .as_array()
            .ok_or_else(|| CoreError::InvalidInput("\"torus\" must be an array".into()))?;
        if arr.len() != ambient.torus_dim {
            return Err(CoreError::InvalidInput(format!(
                "torus coordinates must have {} entries",
                ambient.torus_dim
            )));
        }
        e.torus = arr.iter().map(scalar_from_value).collect::<Result<_>>()?;
    }
    Ok(e)
}

pub fn element_to_value(e: &LieElement) -> Value {
    let matrix: Vec<Value> = e
        .matrix
        .iter()
        .map(|row| {
            Value::Array(row.iter().map(cr_core::scalar::scalar_to_value).collect())
        })
        .collect();
    let mut obj = serde_json::Map::new();
    obj.insert("matrix".into(), Value::Array(matrix));
    if !e.torus.is_empty() {
        obj.insert(
            "torus".into(),
            Value::Array(e.torus.iter().map(cr_core::scalar::scalar_to_value).collect()),
        );
    }
    Value::Object(obj)
}

pub struct SubalgebraFile {
    pub algebra: Subalgebra,
    pub notes: Vec<String>,
}

/// Parse `{"fixture": name}` or
/// `{"ambient": {...}, "label": ..., "basis": [...], "notes": [...]}`.
pub fn parse_subalgebra_file(v: &Value) -> Result<SubalgebraFile> {
    if let Some(name) = v.get("fixture").and_then(Value::as_str) {
        return fixture_subalgebra(name);
    }
    let ambient = parse_ambient(
        v.get("ambient")
            .ok_or_else(|| CoreError::InvalidInput("file needs an \"ambient\"".into()))?,
    )?;
    let label = v
        .get("label")
        .and_then(Value::as_str)
        .unwrap_or("input")
        .to_string();
    let basis_v = v
        .get("basis")
        .and_then(Value::as_array)
        .ok_or_else(|| CoreError::InvalidInput("file needs a \"basis\" array".into()))?;
    let basis: Vec<LieElement> = basis_v
        .iter()
        .map(|e| parse_element(&ambient, e))
        .collect::<Result<_>>()?;
    let notes = v
        .get("notes")
        .and_then(Value::as_array)
        .map(|a| {
            a.iter()
                .filter_map(Value::as_str)
                .map(str::to_string)
                .collect()
        })
        .unwrap_or_default();
    Ok(SubalgebraFile { algebra: Subalgebra::new(ambient, label, basis)?, notes })
}

pub fn fixture_subalgebra(name: &str) -> Result<SubalgebraFile> {
    match name {
        "su2-cr0" => Ok(SubalgebraFile { algebra: liealg::su2_cr0(), notes: Vec::new() }),
        "su2-cr1" => Ok(SubalgebraFile { algebra: liealg::su2_cr1(), notes: Vec::new() }),
        "sl2-cr1" => Ok(SubalgebraFile {
            algebra: Subalgebra::new(
                liealg::sl2_ambient(),
                "CR1",
                vec![liealg::sl2_cr1_element()],
            )?,
            notes: Vec::new(),
        }),
        "example3" => {
            let ex = liealg::example3();
            Ok(SubalgebraFile {
                algebra: ex.h,
                notes: vec![format!(
                    "printed generating set {{Z1 Z2, L1, ..., L3}} reads as 5 generators \
                     of dimension {}; the adopted basis {{Z1, Z2, L1..L6}} has dimension 8 \
                     = [17/2]",
                    ex.printed_dim
                )],
            })
        }
        other => Err(CoreError::InvalidInput(format!("unknown fixture `{other}`"))),
    }
}

pub struct ExtendFile {
    pub h: Subalgebra,
    pub m: Subalgebra,
    pub ideal: Subalgebra,
    pub form: AltForm,
    pub notes: Vec<String>,
}

/// Parse an extension problem: a toric form plus the `m (+) ideal` split.
///
/// Either `{"fixture": "example3", "form": {...}}` or explicit
/// `{"ambient": ..., "m": [...], "ideal": [...], "form": {"q": q, "coeffs": [...]}}`.
pub fn parse_extend_file(v: &Value) -> Result<ExtendFile> {
    let (ambient, m, ideal, notes) = if let Some(name) = v.get("fixture").and_then(Value::as_str)
    {
        match name {
            "example3" => {
                let ex = liealg::example3();
                (ex.ambient.clone(), ex.m, ex.ideal, Vec::new())
            }
            other => {
                return Err(CoreError::InvalidInput(format!(
                    "unknown extend fixture `{other}`"
                )))
            }
        }
    } else {
        let ambient = parse_ambient(
            v.get("ambient")
                .ok_or_else(|| CoreError::InvalidInput("file needs an \"ambient\"".into()))?,
        )?;
        let parse_list = |key: &str| -> Result<Vec<LieElement>> {
            v.get(key)
                .and_then(Value::as_array)
                .ok_or_else(|| CoreError::InvalidInput(format!("file needs \"{key}\"")))?
                .iter()
                .map(|e| parse_element(&ambient, e))
                .collect()
        };
        let m = Subalgebra::new(ambient.clone(), "toric part", parse_list("m")?)?;
        let ideal = Subalgebra::new(ambient.clone(), "ideal", parse_list("ideal")?)?;
        (ambient, m, ideal, Vec::new())
    };

    let form_v = v
        .get("form")
        .ok_or_else(|| CoreError::InvalidInput("file needs a \"form\"".into()))?;
    let q = form_v
        .get("q")
        .and_then(Value::as_u64)
        .ok_or_else(|| CoreError::InvalidInput("form needs a degree \"q\"".into()))?
        as usize;
    let coeffs = form_v
        .get("coeffs")
        .and_then(Value::as_array)
        .ok_or_else(|| CoreError::InvalidInput("form needs \"coeffs\"".into()))?;
    let form = form_from_coeff_entries(q, m.dim() as u32, coeffs)?;

    let mut basis = m.basis.clone();
    basis.extend(ideal.basis.iter().cloned());
    let h = Subalgebra::new(ambient, "m (+) ideal", basis)?;
    Ok(ExtendFile { h, m, ideal, form, notes })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn element_json_roundtrip() {
        for name in ["su2-cr0", "su2-cr1", "sl2-cr1", "example3"] {
            let f = fixture_subalgebra(name).unwrap();
            for e in &f.algebra.basis {
                let v = element_to_value(e);
                let back = parse_element(&f.algebra.ambient, &v).unwrap();
                assert_eq!(back.raw_coords(), e.raw_coords(), "{name}");
            }
        }
    }

    #[test]
    fn ambient_parse_errors() {
        let bad = serde_json::json!({"type": "so", "n": 3});
        assert!(parse_ambient(&bad).is_err());
        let missing = serde_json::json!({"type": "su"});
        assert!(parse_ambient(&missing).is_err());
    }
}
