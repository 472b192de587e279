//! Scenario documents: the JSON input format, its parser and serializer.
//!
//! Parsing happens in two passes. `serde_json` checks the shape of the
//! document (key names, value types, required keys) and reports positions
//! itself. The second pass builds the algebra and modules from the typed
//! document; its failures carry a JSON path, which is mapped back to a line
//! and column of the original text.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::error::Category;

use crate::locate::{position, Seg};
use crate::setup::Setup;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub field: FieldSpec,
    #[serde(default, skip_serializing_if = "AlgebraSpec::is_base_field")]
    pub algebra: AlgebraSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default, skip_serializing_if = "Scenario::is_empty")]
    pub scenario: Scenario,
}

/// `"rational"` or `{"prime": p}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldSpec {
    Named(String),
    Prime { prime: u64 },
}

/// A field element written as an integer or as a string such as `"-3/7"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Int(i64),
    Text(String),
}

impl fmt::Display for Num {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Num::Int(n) => write!(f, "{n}"),
            Num::Text(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum AlgebraSpec {
    #[default]
    BaseField,
    /// `k[x]/(x^degree)`.
    TruncatedPolynomial { degree: usize },
    /// The cyclic quiver on `vertices` vertices modulo paths of length
    /// `loewy_length`.
    Nakayama { vertices: usize, loewy_length: usize },
    Quiver {
        vertices: Vec<String>,
        arrows: Vec<ArrowSpec>,
        #[serde(default)]
        relations: Vec<Vec<TermSpec>>,
    },
    /// `products[i][j]` holds the coordinates of `b_i b_j`.
    StructureConstants {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<String>>,
        products: Vec<Vec<Vec<Num>>>,
        unit: Vec<Num>,
    },
}

impl AlgebraSpec {
    fn is_base_field(&self) -> bool {
        *self == AlgebraSpec::BaseField
    }

    pub fn kind(&self) -> &'static str {
        match self {
            AlgebraSpec::BaseField => "base_field",
            AlgebraSpec::TruncatedPolynomial { .. } => "truncated_polynomial",
            AlgebraSpec::Nakayama { .. } => "nakayama",
            AlgebraSpec::Quiver { .. } => "quiver",
            AlgebraSpec::StructureConstants { .. } => "structure_constants",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowSpec {
    pub name: String,
    pub from: String,
    pub to: String,
}

/// `coeff` times the path through the named arrows, read left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coeff: Num,
    pub path: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    Regular,
    Simple {
        class: usize,
    },
    Projective {
        class: usize,
    },
    /// One `dim x dim` matrix per basis element of the algebra, acting on row
    /// vectors from the right.
    Representation {
        dim: usize,
        action: Vec<Vec<Vec<Num>>>,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub x: Vec<SummandRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub t: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub surjection: Option<SurjectionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[i64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub audits: Vec<AuditKind>,
}

impl Scenario {
    fn is_empty(&self) -> bool {
        *self == Scenario::default()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandRef {
    pub module: String,
    #[serde(default = "one")]
    pub multiplicity: usize,
    #[serde(default, skip_serializing_if = "is_false")]
    pub projective: bool,
}

fn one() -> usize {
    1
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurjectionSpec {
    pub ideal: IdealSpec,
}

/// `"radical"`, or generators of a two-sided ideal in basis coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IdealSpec {
    Named(String),
    Generators(Vec<Vec<Num>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuditKind {
    Resolve,
    Ext,
    Tor,
    Spherical,
    Twist,
    Tilting,
    All,
}

impl AuditKind {
    pub const CONCRETE: [AuditKind; 6] =
        [AuditKind::Resolve, AuditKind::Ext, AuditKind::Tor, AuditKind::Spherical, AuditKind::Twist, AuditKind::Tilting];

    pub fn name(self) -> &'static str {
        match self {
            AuditKind::Resolve => "resolve",
            AuditKind::Ext => "ext",
            AuditKind::Tor => "tor",
            AuditKind::Spherical => "spherical",
            AuditKind::Twist => "twist",
            AuditKind::Tilting => "tilting",
            AuditKind::All => "all",
        }
    }

    /// `All` replaced by every concrete audit, duplicates removed, in the
    /// canonical order.
    pub fn expand(list: &[AuditKind]) -> Vec<AuditKind> {
        if list.contains(&AuditKind::All) {
            return AuditKind::CONCRETE.to_vec();
        }
        AuditKind::CONCRETE.iter().copied().filter(|k| list.contains(k)).collect()
    }
}

/// The schema rule a document violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Key names, value types and required keys.
    Structure,
    Field,
    Number,
    Algebra,
    Module,
    Reference,
    Multiplicity,
    Degree,
    Window,
    Requirement,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Structure => "structure",
            Rule::Field => "field",
            Rule::Number => "number",
            Rule::Algebra => "algebra",
            Rule::Module => "module",
            Rule::Reference => "reference",
            Rule::Multiplicity => "multiplicity",
            Rule::Degree => "degree",
            Rule::Window => "window",
            Rule::Requirement => "requirement",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("schema error at line {line}, column {column} (rule: {rule}): {message}")]
    Schema { line: usize, column: usize, rule: Rule, message: String },
}

impl FormatError {
    pub fn location(&self) -> (usize, usize) {
        match self {
            FormatError::Parse { line, column, .. } | FormatError::Schema { line, column, .. } => (*line, *column),
        }
    }
}

/// A semantic error found while building a document, located by its path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    pub path: Vec<Seg>,
    pub rule: Rule,
    pub message: String,
}

impl Located {
    pub fn new(path: Vec<Seg>, rule: Rule, message: impl Into<String>) -> Located {
        Located { path, rule, message: message.into() }
    }
}

/// Parses and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioDoc, FormatError> {
    let doc: ScenarioDoc = serde_json::from_str(text).map_err(|e| {
        let message = strip_position(&e.to_string());
        let (line, column) = (e.line().max(1), e.column().max(1));
        match e.classify() {
            Category::Data => FormatError::Schema { line, column, rule: Rule::Structure, message },
            _ => FormatError::Parse { line, column, message },
        }
    })?;
    validate(&doc, text)?;
    Ok(doc)
}

/// The semantic checks on a typed document, with positions taken from
/// `text`. Paths missing from `text` (after command-line overrides) point at
/// their deepest existing ancestor.
pub fn validate(doc: &ScenarioDoc, text: &str) -> Result<(), FormatError> {
    Setup::build(doc).map(drop).map_err(|l| {
        let (line, column) = position(text, &l.path);
        FormatError::Schema { line, column, rule: l.rule, message: l.message }
    })
}

/// Parses raw bytes, rejecting invalid UTF-8 with the offending position.
pub fn parse_scenario_bytes(bytes: &[u8]) -> Result<ScenarioDoc, FormatError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse_scenario(text),
        Err(e) => {
            let (line, column) = crate::locate::line_col(&String::from_utf8_lossy(&bytes[..e.valid_up_to()]), usize::MAX);
            Err(FormatError::Parse { line, column, message: "invalid UTF-8".into() })
        }
    }
}

pub fn serialize_scenario(doc: &ScenarioDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document_is_the_base_field() {
        let doc = parse_scenario(r#"{"field": "rational"}"#).unwrap();
        assert_eq!(doc.algebra, AlgebraSpec::BaseField);
        assert!(doc.modules.is_empty());
        assert_eq!(doc.scenario, Scenario::default());
        assert_eq!(serialize_scenario(&doc), "{\n  \"field\": \"rational\"\n}\n");
    }

    #[test]
    fn truncated_text_is_a_parse_error() {
        let err = parse_scenario("{\"field\": \"rational\",\n \"algebra\": {\"kind\": ").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn wrong_types_are_schema_errors() {
        let err =
            parse_scenario("{\"field\": \"rational\",\n  \"modules\": {\"S\": {\"kind\": \"simple\", \"class\": \"one\"}}}").unwrap_err();
        assert!(matches!(err, FormatError::Schema { line: 2, rule: Rule::Structure, .. }), "{err}");
        let err = parse_scenario(r#"{"field": "rational", "colour": 3}"#).unwrap_err();
        assert!(matches!(err, FormatError::Schema { rule: Rule::Structure, .. }), "{err}");
    }

    #[test]
    fn semantic_errors_point_at_the_offending_value() {
        let text = "{\n  \"field\": {\"prime\": 9}\n}";
        let err = parse_scenario(text).unwrap_err();
        assert_eq!(err, FormatError::Schema { line: 2, column: 22, rule: Rule::Field, message: "9 is not a prime below 2^32".into() });

        let text = r#"{
  "field": "rational",
  "algebra": {"kind": "truncated_polynomial", "degree": 2},
  "modules": {"A": {"kind": "regular"}},
  "scenario": {"x": [{"module": "A", "projective": true}, {"module": "T"}], "t": [2]}
}"#;
        let err = parse_scenario(text).unwrap_err();
        assert!(matches!(err, FormatError::Schema { line: 5, column: 70, rule: Rule::Reference, .. }), "{err}");
    }

    #[test]
    fn multiplicities_and_degrees_are_checked() {
        let base = |scenario: &str| {
            format!(
                r#"{{"field": "rational", "algebra": {{"kind": "truncated_polynomial", "degree": 2}},
"modules": {{"A": {{"kind": "regular"}}, "S": {{"kind": "simple", "class": 0}}}},
"scenario": {scenario}}}"#
            )
        };
        let err = parse_scenario(&base(r#"{"x": [{"module": "A", "projective": true}, {"module": "S", "multiplicity": 0}], "t": [2]}"#))
            .unwrap_err();
        assert!(matches!(err, FormatError::Schema { rule: Rule::Multiplicity, line: 3, .. }), "{err}");
        let err = parse_scenario(&base(r#"{"x": [{"module": "A", "projective": true}, {"module": "S"}], "t": [1]}"#)).unwrap_err();
        assert!(matches!(err, FormatError::Schema { rule: Rule::Degree, .. }), "{err}");
        let err =
            parse_scenario(&base(r#"{"x": [{"module": "A", "projective": true}, {"module": "S"}], "audits": ["spherical"]}"#)).unwrap_err();
        assert!(matches!(err, FormatError::Schema { rule: Rule::Requirement, .. }), "{err}");
        let err = parse_scenario(&base(r#"{"audits": ["twist"]}"#)).unwrap_err();
        assert!(matches!(err, FormatError::Schema { rule: Rule::Requirement, .. }), "{err}");
        let err = parse_scenario(&base(r#"{"window": [2, -1]}"#)).unwrap_err();
        assert!(matches!(err, FormatError::Schema { rule: Rule::Window, .. }), "{err}");
        assert!(
            parse_scenario(&base(r#"{"x": [{"module": "A", "projective": true}, {"module": "S"}], "t": [2], "audits": ["all"]}"#)).is_ok()
        );
    }

    #[test]
    fn bad_numbers_are_located() {
        let text = r#"{"field": "rational", "algebra": {"kind": "structure_constants",
  "products": [[["1"]]], "unit": ["1/0"]}}"#;
        let err = parse_scenario(text).unwrap_err();
        assert!(matches!(err, FormatError::Schema { rule: Rule::Number, line: 2, column: 35, .. }), "{err}");
    }

    #[test]
    fn invalid_utf8_is_a_parse_error() {
        let err = parse_scenario_bytes(b"{\"field\":\n \"\xff\"}").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, column: 3, .. }), "{err}");
    }

    #[test]
    fn audit_lists_expand() {
        assert_eq!(
            AuditKind::expand(&[AuditKind::Twist, AuditKind::Resolve, AuditKind::Twist]),
            vec![AuditKind::Resolve, AuditKind::Twist]
        );
        assert_eq!(AuditKind::expand(&[AuditKind::All]).len(), 6);
    }
}
