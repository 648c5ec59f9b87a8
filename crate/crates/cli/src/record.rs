use std::io::{self, Write};
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

/// One output line. Fields serialize in declaration order, object keys
/// inside `inputs` and `outputs` in sorted order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub kind: String,
    pub inputs: Value,
    pub outputs: Value,
    pub version: String,
    pub timing: Timing,
}

impl ResultRecord {
    pub fn new(kind: &str, inputs: Value, outputs: impl Serialize, elapsed: Duration) -> Self {
        ResultRecord {
            kind: kind.to_string(),
            inputs,
            outputs: serde_json::to_value(outputs).expect("outputs serialize"),
            version: VERSION.to_string(),
            timing: Timing { elapsed_ms: elapsed.as_secs_f64() * 1e3 },
        }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

/// Owns the sink; each record goes out as one complete line.
pub struct RecordWriter<W: Write> {
    out: W,
    written: usize,
}

impl<W: Write> RecordWriter<W> {
    pub fn new(out: W) -> Self {
        RecordWriter { out, written: 0 }
    }

    pub fn emit(&mut self, record: &ResultRecord) -> io::Result<()> {
        let mut line = record.to_line();
        line.push('\n');
        self.out.write_all(line.as_bytes())?;
        self.written += 1;
        Ok(())
    }

    pub fn written(&self) -> usize {
        self.written
    }

    pub fn finish(mut self) -> io::Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// A record line with the timing field removed, for replay comparisons.
pub fn strip_timing(line: &str) -> Option<Value> {
    let mut v: Value = serde_json::from_str(line).ok()?;
    v.as_object_mut()?.remove("timing");
    Some(v)
}
