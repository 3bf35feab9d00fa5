//! Structured reports and their JSON and text renderings.

use brauer_core::brauer::BrauerClass;
use brauer_core::cdvf::{CdvfElement, CdvfModel, TruncatedUnit};
use brauer_core::Error;
use serde::Serialize;
use serde_json::Value;

use crate::request::RequestEcho;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// The input is outside the domain of the operation.
    Rejected,
    /// A certificate failed to check or a self test failed.
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub request: RequestEcho,
    pub status: Status,
    pub verdict: Option<String>,
    pub result: Value,
    pub certificates: Vec<String>,
    pub error: Option<ErrorInfo>,
    pub timing_ms: f64,
}

/// Short machine-readable name of a core error.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZero => "division_by_zero",
        Error::UnsupportedPrime(_) => "unsupported_prime",
        Error::InvalidField(_) => "invalid_field",
        Error::DependentGenerators => "dependent_generators",
        Error::HypothesisFailed(_) => "hypothesis_failed",
        Error::ZeroEntry => "zero_entry",
        Error::NonUnit => "non_unit",
        Error::LevelOutOfRange { .. } => "level_out_of_range",
        Error::NotInLevel(_) => "not_in_level",
        Error::NotInBr1(_) => "not_in_br1",
        Error::UnresolvedK2(_) => "unresolved_k2",
        Error::BadSpecialization(_) => "bad_specialization",
        Error::ExpansionBudget => "expansion_budget",
        Error::Mismatch(_) => "mismatch",
    }
}

/// Rejections are statements about the input; the rest are failures of the
/// engine to certify its own answer.
pub fn error_status(e: &Error) -> Status {
    match e {
        Error::UnresolvedK2(_) | Error::ExpansionBudget | Error::Mismatch(_) => Status::Failed,
        _ => Status::Rejected,
    }
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Ok => 0,
            Status::Rejected => 2,
            Status::Failed => 3,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("command: {}\n", self.command));
        out.push_str(&format!("status: {}\n", status_name(self.status)));
        if let Some(v) = &self.verdict {
            out.push_str(&format!("verdict: {v}\n"));
        }
        if let Some(e) = &self.error {
            out.push_str(&format!("error: {} ({})\n", e.message, e.kind));
        }
        if !self.result.is_null() {
            out.push_str("result:\n");
            write_value(&mut out, &self.result, 1);
        }
        if !self.certificates.is_empty() {
            out.push_str("certificates:\n");
            for c in &self.certificates {
                out.push_str(&format!("  - {c}\n"));
            }
        }
        out.push_str(&format!("timing_ms: {:.3}\n", self.timing_ms));
        out
    }
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Ok => "ok",
        Status::Rejected => "rejected",
        Status::Failed => "failed",
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(m) if !m.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_value(out, x, depth + 1);
                    }
                    Value::Array(a) if !a.is_empty() => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        write_value(out, x, depth + 1);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar(x))),
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if x.is_object() {
                    out.push_str(&format!("{pad}-\n"));
                    write_value(out, x, depth + 1);
                } else {
                    out.push_str(&format!("{pad}- {}\n", scalar(x)));
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other))),
    }
}

/// A unit in the input grammar, `num` or `(num)/(den)`.
pub fn format_unit(model: &CdvfModel, u: &TruncatedUnit) -> String {
    let names = model.residue().var_names();
    let num = brauer_core::field::format_poly(u.num(), names);
    if u.den().is_one() {
        num
    } else {
        format!(
            "({num})/({})",
            brauer_core::field::format_poly(u.den(), names)
        )
    }
}

/// An element in the input grammar, with the `pi` power spelled out only
/// when present.
pub fn format_element(model: &CdvfModel, x: &CdvfElement) -> String {
    let pi = match x.val {
        0 => return format_unit(model, &x.unit),
        1 => "pi".to_string(),
        v => format!("pi^{v}"),
    };
    if x.unit.is_one() {
        pi
    } else {
        format!("{pi} * ({})", format_unit(model, &x.unit))
    }
}

pub fn format_class(c: &BrauerClass) -> String {
    if c.is_empty() {
        return "0".into();
    }
    let m = c.model();
    c.entries()
        .iter()
        .map(|(x, y)| format!("sym({}, {})", format_element(m, x), format_element(m, y)))
        .collect::<Vec<_>>()
        .join(" + ")
}
