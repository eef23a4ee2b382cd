use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::{json, Map, Value};

/// Everything a command reports. Identical inputs and flags give identical
/// reports apart from `timings`.
pub struct RunReport {
    command: String,
    inputs: BTreeMap<String, String>,
    verdicts: Map<String, Value>,
    timings: BTreeMap<String, u128>,
    config: Map<String, Value>,
    phase: Option<(String, Instant)>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            inputs: BTreeMap::new(),
            verdicts: Map::new(),
            timings: BTreeMap::new(),
            config: Map::new(),
            phase: None,
        }
    }

    pub fn input(&mut self, name: &str, sha256: String) {
        self.inputs.insert(name.to_string(), sha256);
    }

    pub fn verdict(&mut self, key: &str, value: impl Into<Value>) {
        self.verdicts.insert(key.to_string(), value.into());
    }

    pub fn config(&mut self, key: &str, value: impl Into<Value>) {
        self.config.insert(key.to_string(), value.into());
    }

    /// Starts timing `name`, closing the previous phase.
    pub fn phase(&mut self, name: &str) {
        self.end_phase();
        self.phase = Some((name.to_string(), Instant::now()));
    }

    fn end_phase(&mut self) {
        if let Some((name, start)) = self.phase.take() {
            self.timings.insert(name, start.elapsed().as_millis());
        }
    }

    pub fn finish(&mut self) -> Value {
        self.end_phase();
        json!({
            "command": self.command,
            "inputs": self.inputs,
            "verdicts": self.verdicts,
            "timings": self.timings,
            "config": self.config,
        })
    }

    pub fn print(&mut self, as_json: bool) {
        let v = self.finish();
        if as_json {
            println!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
            return;
        }
        println!("{}", self.command);
        let width = self.verdicts.keys().map(|k| k.len()).max().unwrap_or(0);
        for (k, v) in &self.verdicts {
            println!("  {k:<width$}  {}", human(v));
        }
        for (k, ms) in &self.timings {
            println!("  time {k}: {ms} ms");
        }
    }
}

fn human(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(_) | Value::Object(_) => serde_json::to_string(v).expect("serializable"),
        other => other.to_string(),
    }
}
