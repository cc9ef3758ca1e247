use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    pub seed: u64,
    pub config: RunConfig,
}

impl Meta {
    pub fn new(config: &RunConfig) -> Self {
        Self {
            tool: "noncross",
            version: env!("CARGO_PKG_VERSION"),
            config_hash: config.hash(),
            seed: config.seed,
            config: config.clone(),
        }
    }

    pub fn comment_line(&self) -> String {
        format!(
            "# tool={} version={} config_hash={} seed={}\n",
            self.tool, self.version, self.config_hash, self.seed
        )
    }
}

/// `{"meta": ..., "data": ...}`, pretty printed.
pub fn json_document(meta: &Meta, data: &impl Serialize) -> String {
    let doc = serde_json::json!({ "meta": meta, "data": data });
    let mut text = serde_json::to_string_pretty(&doc).expect("output serializes");
    text.push('\n');
    text
}

/// JSON lines: the metadata object first, then one object per record.
pub fn json_lines(meta: &Meta, records: &[Value]) -> String {
    let mut text = serde_json::to_string(&serde_json::json!({ "meta": meta })).expect("serializes");
    text.push('\n');
    for r in records {
        text.push_str(&serde_json::to_string(r).expect("serializes"));
        text.push('\n');
    }
    text
}

/// A metadata comment line followed by a CSV table.
pub fn csv_document(meta: &Meta, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut text = meta.comment_line();
    text.push_str(&csv_table(header, rows));
    text
}

pub fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// Shortest round-trip rendering; NaN and infinities spelled out.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        serde_json::to_string(&x).expect("finite float")
    }
}
