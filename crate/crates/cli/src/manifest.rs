//! Record of one run: inputs, versions, outputs and timings.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;
use serde_json::Value;

use crate::commands::Outcome;

/// Everything but `timings` is reproduced byte for byte by the same command.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub versions: BTreeMap<String, String>,
    pub outputs: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_paper: Option<bool>,
    pub timings: BTreeMap<String, f64>,
}

impl RunManifest {
    pub fn new(command_line: Vec<String>, outcome: &Outcome, total: Duration) -> Self {
        let versions = BTreeMap::from([
            ("quartic-lines".to_string(), quartic_lines_version()),
            ("quartic-lines-cli".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ]);
        let mut timings: BTreeMap<String, f64> =
            outcome.timings.iter().map(|(name, d)| (name.clone(), d.as_secs_f64())).collect();
        timings.insert("total".into(), total.as_secs_f64());
        RunManifest { command_line, versions, outputs: outcome.json.clone(), matches_paper: outcome.matches_paper, timings }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, text + "\n")
    }
}

fn quartic_lines_version() -> String {
    quartic_lines::VERSION.to_string()
}
