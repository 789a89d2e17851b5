//! Machine-readable reports. Every rational is a `"p/q"` string and maps are
//! key-sorted, so a report is a deterministic function of its inputs.

use mbfun::ann::BFunctionReport;
use mbfun::mero::{Certificate, Certification, MeroBFunction};
use mbfun::BFunction;
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA: &str = "mbfun-report/1";

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: Vec<String>,
    pub inputs: Value,
    pub result: Value,
    pub status: Certification,
    /// Wall-clock milliseconds; only with `--timing`, since it breaks
    /// byte-for-byte reproducibility.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u64>,
}

impl Report {
    pub fn new(command: &[String], inputs: Value, result: Value, status: Certification) -> Self {
        Report { schema: SCHEMA, command: command.to_vec(), inputs, result, status, timing_ms: None }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// `key: value` lines, one per result field.
    pub fn to_table(&self) -> String {
        let mut out = format!("command: {}\n", self.command.join(" "));
        let status = serde_json::to_value(self.status).expect("status serializes");
        out.push_str(&format!("status: {}\n", status.as_str().unwrap_or_default()));
        if let Value::Object(map) = &self.result {
            for (k, v) in map {
                match v {
                    Value::String(s) => out.push_str(&format!("{k}: {s}\n")),
                    // b-functions read best factored
                    Value::Object(o) if o.contains_key("factored") => {
                        out.push_str(&format!("{k}: {}\n", o["factored"].as_str().unwrap_or_default()))
                    }
                    other => out.push_str(&format!("{k}: {other}\n")),
                }
            }
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("time: {ms} ms\n"));
        }
        out
    }
}

pub fn bfunction(b: &BFunction) -> Value {
    serde_json::to_value(BFunctionReport::from(b)).expect("b-function serializes")
}

pub fn certificate(c: &Certificate) -> Value {
    json!({
        "n": c.n,
        "witness": c.witness.ops.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "rejected_roots": c.rejected,
        "accepted_roots": c.accepted,
    })
}

pub fn engine_result(r: &MeroBFunction) -> Value {
    let mut v = json!({
        "b": bfunction(&r.b),
        "certificate": certificate(&r.certificate),
        "presentation_stabilized": r.presentation_stabilized,
    });
    if let Some(p) = &r.p_theta {
        v["p_theta"] = json!(p.to_string());
    }
    v
}
