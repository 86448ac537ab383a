use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::Error;

/// Default slack allowed between the two sides of a check.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Outcome of one numeric check of the form `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub params: Map<String, Value>,
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs ≤ rhs + tolerance`, and false whenever `error` is set.
    pub satisfied: bool,
    /// `rhs − lhs`.
    pub slack: f64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CheckReport {
    pub fn new(name: &str, params: Value, lhs: f64, rhs: f64) -> Self {
        Self::with_tolerance(name, params, lhs, rhs, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(name: &str, params: Value, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        CheckReport {
            name: name.to_owned(),
            params: into_map(params),
            lhs,
            rhs,
            satisfied: lhs <= rhs + tolerance,
            slack: rhs - lhs,
            tolerance,
            error: None,
        }
    }

    /// A check that could not be evaluated; never satisfied.
    pub fn failed(name: &str, params: Value, err: &Error) -> Self {
        CheckReport {
            name: name.to_owned(),
            params: into_map(params),
            lhs: f64::NAN,
            rhs: f64::NAN,
            satisfied: false,
            slack: f64::NAN,
            tolerance: DEFAULT_TOLERANCE,
            error: Some(err.to_string()),
        }
    }

    /// One JSON object on a single line. Non-finite numbers become `null`.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("reports serialize")
    }
}

fn into_map(params: Value) -> Map<String, Value> {
    match params {
        Value::Object(map) => map,
        Value::Null => Map::new(),
        other => {
            let mut map = Map::new();
            map.insert("value".into(), other);
            map
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn satisfaction_rule() {
        assert!(CheckReport::new("x", json!({}), 1.0, 1.0).satisfied);
        assert!(CheckReport::new("x", json!({}), 1.0 + 5e-11, 1.0).satisfied);
        assert!(!CheckReport::new("x", json!({}), 1.0 + 2e-10, 1.0).satisfied);
        assert!(!CheckReport::with_tolerance("x", json!({}), 1.0 + 5e-11, 1.0, 0.0).satisfied);
        assert!(!CheckReport::new("x", json!({}), f64::NAN, 1.0).satisfied);
    }

    #[test]
    fn json_line_shape() {
        let r = CheckReport::new("demo", json!({"ell": 2}), 0.25, 0.5);
        let line = r.to_json_line();
        assert_eq!(
            line,
            r#"{"name":"demo","params":{"ell":2},"lhs":0.25,"rhs":0.5,"satisfied":true,"slack":0.25,"tolerance":1e-10}"#
        );
        let f = CheckReport::failed("demo", json!({}), &Error::params("bad"));
        assert!(f.to_json_line().contains(r#""lhs":null"#));
        assert!(f.to_json_line().contains(r#""error":"#));
    }
}
