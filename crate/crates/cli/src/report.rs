//! Machine-readable reports.

use coopinfo::{Coalition, ModeKind, NumericMode, Scalar};
use serde::Serialize;
use serde_json::{json, Value};

pub const FINITE_REALIZATION: &str = "finite-Ω realization";
pub const CONJECTURE_EVIDENCE: &str = "conjecture-evidence";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub property: String,
    pub verdict: Value,
    pub certificate: Value,
    pub mode: ModeKind,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(property: &str, verdict: impl Into<Value>, certificate: Value, mode: NumericMode) -> Self {
        Report {
            property: property.to_string(),
            verdict: verdict.into(),
            certificate,
            mode: mode.kind,
            tolerance: mode.tolerance,
            notes: Vec::new(),
        }
    }

    pub fn float(property: &str, verdict: impl Into<Value>, certificate: Value, tolerance: f64) -> Self {
        Self::new(
            property,
            verdict,
            certificate,
            NumericMode {
                kind: ModeKind::Float,
                tolerance,
            },
        )
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.notes.push(note.to_string());
        self
    }
}

/// Rationals as `"p/q"` strings, floats as JSON numbers.
pub fn scalar<T: Scalar>(x: &T) -> Value {
    match T::KIND {
        ModeKind::Rational => Value::String(x.to_string()),
        ModeKind::Float => json!(x.to_f64()),
    }
}

pub fn vector<T: Scalar>(xs: &[T]) -> Value {
    Value::Array(xs.iter().map(scalar).collect())
}

/// One-based member list.
pub fn coalition(s: Coalition) -> Value {
    json!(s.players().map(|i| i + 1).collect::<Vec<_>>())
}

pub fn fmt_scalar<T: Scalar>(x: &T) -> String {
    match T::KIND {
        ModeKind::Rational => x.to_string(),
        ModeKind::Float => format!("{:.6}", x.to_f64()),
    }
}

pub fn fmt_vector<T: Scalar>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(fmt_scalar).collect();
    format!("({})", parts.join(", "))
}
