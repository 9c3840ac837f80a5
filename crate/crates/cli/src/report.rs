//! Machine-readable run reports.

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use forest_complexes::GradedHomology;

/// One homology group entry in the JSON schema.
#[derive(Debug, Serialize)]
pub struct HomologyEntry {
    pub degree: i64,
    pub betti: usize,
    pub torsion: Vec<u64>,
}

/// Serialize graded homology as a per-degree list covering 0..=top, so
/// trivial groups are visible.
pub fn homology_entries(h: &GradedHomology, top: i64) -> Vec<HomologyEntry> {
    let top = top.max(h.max_degree().unwrap_or(0));
    (0..=top)
        .map(|degree| {
            let group = h.group(degree);
            HomologyEntry {
                degree,
                betti: group.betti,
                torsion: group.torsion,
            }
        })
        .collect()
}

/// Accumulates the report for one CLI run: command echo, inputs, result
/// payloads, wall-clock timings.
pub struct RunReport {
    command: String,
    inputs: Value,
    results: Vec<Value>,
    timings_ms: Vec<(String, f64)>,
    started: Instant,
}

impl RunReport {
    pub fn new(command: &str, inputs: Value) -> Self {
        RunReport {
            command: command.to_string(),
            inputs,
            results: Vec::new(),
            timings_ms: Vec::new(),
            started: Instant::now(),
        }
    }

    pub fn add_result(&mut self, value: Value) {
        self.results.push(value);
    }

    /// Time a closure and record it under `label`.
    pub fn timed<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let t0 = Instant::now();
        let out = f();
        self.timings_ms
            .push((label.to_string(), t0.elapsed().as_secs_f64() * 1e3));
        out
    }

    pub fn finish(mut self) -> Value {
        self.timings_ms.push((
            "total".to_string(),
            self.started.elapsed().as_secs_f64() * 1e3,
        ));
        let timings: serde_json::Map<String, Value> = self
            .timings_ms
            .into_iter()
            .map(|(k, v)| (k, json!(v)))
            .collect();
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "timings_ms": Value::Object(timings),
        })
    }
}
