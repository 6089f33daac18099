use std::collections::BTreeMap;
use std::time::Instant;

use quasiwide::Graph;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Serialize)]
pub struct InputSummary {
    pub n: usize,
    pub m: usize,
    pub degeneracy: usize,
}

impl InputSummary {
    pub fn of(g: &Graph) -> Self {
        InputSummary { n: g.n(), m: g.m(), degeneracy: g.degeneracy() }
    }
}

/// JSON document printed by every subcommand. Everything except
/// `timings_ms` is a deterministic function of the inputs.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: Vec<String>,
    pub input: Option<InputSummary>,
    pub timings_ms: BTreeMap<String, f64>,
    pub result: Value,
    pub verified: BTreeMap<String, bool>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Report {
            command: std::env::args().skip(1).collect(),
            input: None,
            timings_ms: BTreeMap::new(),
            result: Value::Null,
            verified: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings_ms.insert(stage.to_string(), elapsed_ms(start));
        out
    }

    pub fn verify(&mut self, stage: &str, ok: bool) -> bool {
        self.verified.insert(stage.to_string(), ok);
        ok
    }

    pub fn all_verified(&self) -> bool {
        self.verified.values().all(|&ok| ok)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn elapsed_ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}
