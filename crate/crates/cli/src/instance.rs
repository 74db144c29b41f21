//! The on-disk instance format: JSON with rationals as strings, unknown
//! keys rejected. Parsing and serialization round-trip exactly.

use serde::{Deserialize, Serialize};

use pdc_core::dcfunc::{AffinePiece, PolyhedralDC};
use pdc_core::rational::parse_rational;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub dimension: usize,
    pub plus: Vec<PlusPiece>,
    pub minus: Vec<MinusPiece>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlusPiece {
    pub a: String,
    pub v: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinusPiece {
    pub b: String,
    pub w: Vec<String>,
}

impl InstanceFile {
    pub fn load(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("parse error: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances serialize infallibly")
    }

    /// Validates and converts into the exact in-memory form.
    pub fn to_function(&self) -> Result<PolyhedralDC, CliError> {
        let piece = |constant: &str, gradient: &[String], what: &str| {
            let c = parse_rational(constant)
                .map_err(|e| CliError::usage(format!("{what}: {e}")))?;
            let g = gradient
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::usage(format!("{what}: {e}")))?;
            Ok::<_, CliError>(AffinePiece::new(c, g))
        };
        let plus = self
            .plus
            .iter()
            .enumerate()
            .map(|(k, p)| piece(&p.a, &p.v, &format!("plus piece {}", k + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        let minus = self
            .minus
            .iter()
            .enumerate()
            .map(|(k, p)| piece(&p.b, &p.w, &format!("minus piece {}", k + 1)))
            .collect::<Result<Vec<_>, _>>()?;
        PolyhedralDC::new(self.dimension, plus, minus)
            .map_err(|e| CliError::usage(format!("invalid instance: {e}")))
    }

    pub fn from_function(label: Option<String>, f: &PolyhedralDC) -> Self {
        Self {
            label,
            dimension: f.dimension(),
            plus: f
                .plus_pieces()
                .iter()
                .map(|p| PlusPiece {
                    a: p.constant.to_string(),
                    v: p.gradient.iter().map(|g| g.to_string()).collect(),
                })
                .collect(),
            minus: f
                .minus_pieces()
                .iter()
                .map(|p| MinusPiece {
                    b: p.constant.to_string(),
                    w: p.gradient.iter().map(|g| g.to_string()).collect(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use pdc_core::rational::int;

    const EXAMPLE: &str = r#"{
        "label": "example1",
        "dimension": 1,
        "plus": [
            {"a": "-4", "v": ["2"]},
            {"a": "0", "v": ["0"]},
            {"a": "-4", "v": ["-2"]}
        ],
        "minus": [
            {"b": "-1", "w": ["1"]},
            {"b": "0", "w": ["0"]},
            {"b": "-1", "w": ["-1"]}
        ]
    }"#;

    #[test]
    fn parses_and_roundtrips() {
        let file = InstanceFile::parse(EXAMPLE).unwrap();
        let f = file.to_function().unwrap();
        assert_eq!(f.dimension(), 1);
        assert_eq!(f.eval(&[int(3)]).unwrap(), int(0));
        let reparsed = InstanceFile::parse(&file.to_json()).unwrap();
        assert_eq!(file, reparsed);
        let rebuilt = InstanceFile::from_function(file.label.clone(), &f);
        assert_eq!(rebuilt.to_function().unwrap(), f);
    }

    #[test]
    fn rejects_unknown_keys() {
        let bad = r#"{"dimension": 1, "plus": [], "minus": [], "extra": 1}"#;
        let err = InstanceFile::parse(bad).unwrap_err();
        assert!(err.message.contains("extra"));
    }

    #[test]
    fn rejects_bad_rationals_with_context() {
        let bad = r#"{"dimension": 1,
            "plus": [{"a": "1/0", "v": ["0"]}],
            "minus": [{"b": "0", "w": ["0"]}]}"#;
        let err = InstanceFile::parse(bad).unwrap().to_function().unwrap_err();
        assert!(err.message.contains("plus piece 1"), "{}", err.message);
    }

    #[test]
    fn decimal_entries_convert_exactly() {
        let text = r#"{"dimension": 1,
            "plus": [{"a": "0.25", "v": ["-0.5"]}],
            "minus": [{"b": "0", "w": ["0"]}]}"#;
        let f = InstanceFile::parse(text).unwrap().to_function().unwrap();
        assert_eq!(f.plus_pieces()[0].constant, pdc_core::rational::ratio(1, 4));
        assert_eq!(f.plus_pieces()[0].gradient[0], pdc_core::rational::ratio(-1, 2));
    }
}
