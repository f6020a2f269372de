//! A small JSON-Schema subset validator, enough to check the shipped
//! config and summary schemas against real documents in tests: `type`
//! (string or array of strings), `properties`, `required`,
//! `additionalProperties: false`, `items`, `enum`, and `minimum`.

use serde_json::Value;

fn type_matches(name: &str, doc: &Value) -> bool {
    match name {
        "object" => doc.is_object(),
        "array" => doc.is_array(),
        "string" => doc.is_string(),
        "number" => doc.is_number(),
        "integer" => doc.as_i64().is_some() || doc.as_u64().is_some(),
        "boolean" => doc.is_boolean(),
        "null" => doc.is_null(),
        _ => false,
    }
}

/// Validate `doc` against `schema`; the error names the failing path.
pub fn validate(schema: &Value, doc: &Value, path: &str) -> Result<(), String> {
    let obj = match schema {
        Value::Object(o) => o,
        Value::Bool(true) => return Ok(()),
        Value::Bool(false) => return Err(format!("{path}: schema forbids any value")),
        _ => return Err(format!("{path}: unsupported schema node")),
    };

    if let Some(ty) = obj.get("type") {
        let names: Vec<&str> = match ty {
            Value::String(s) => vec![s.as_str()],
            Value::Array(xs) => xs.iter().filter_map(Value::as_str).collect(),
            _ => return Err(format!("{path}: malformed type")),
        };
        if !names.iter().any(|n| type_matches(n, doc)) {
            return Err(format!("{path}: expected type {names:?}"));
        }
    }

    if let Some(allowed) = obj.get("enum").and_then(Value::as_array) {
        if !allowed.contains(doc) {
            return Err(format!("{path}: value not in enum"));
        }
    }

    if let Some(min) = obj.get("minimum").and_then(Value::as_f64) {
        if let Some(x) = doc.as_f64() {
            if x < min {
                return Err(format!("{path}: {x} below minimum {min}"));
            }
        }
    }

    if let Some(doc_obj) = doc.as_object() {
        if let Some(required) = obj.get("required").and_then(Value::as_array) {
            for name in required.iter().filter_map(Value::as_str) {
                if !doc_obj.contains_key(name) {
                    return Err(format!("{path}: missing required field '{name}'"));
                }
            }
        }
        let props = obj.get("properties").and_then(Value::as_object);
        if let Some(props) = props {
            for (name, sub) in props {
                if let Some(v) = doc_obj.get(name) {
                    validate(sub, v, &format!("{path}/{name}"))?;
                }
            }
        }
        if obj.get("additionalProperties") == Some(&Value::Bool(false)) {
            for key in doc_obj.keys() {
                if !props.is_some_and(|p| p.contains_key(key)) {
                    return Err(format!("{path}: unexpected field '{key}'"));
                }
            }
        }
    }

    if let (Some(items), Some(arr)) = (obj.get("items"), doc.as_array()) {
        for (i, v) in arr.iter().enumerate() {
            validate(items, v, &format!("{path}[{i}]"))?;
        }
    }

    Ok(())
}
