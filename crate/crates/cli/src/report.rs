//! Machine-readable run reports: one check line per verified identity,
//! rendered as structured text or JSON.

use std::collections::BTreeMap;

use serde::Serialize;

/// One verified identity. `identity` names the mathematical statement being
/// checked, so every line is traceable to the claim it tests.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub identity: String,
    pub pass: bool,
    pub details: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.parameters.insert(key.to_string(), value.to_string());
        self
    }

    pub fn check(&mut self, name: &str, identity: &str, pass: bool, details: impl ToString) {
        self.passed &= pass;
        self.checks.push(Check {
            name: name.to_string(),
            identity: identity.to_string(),
            pass,
            details: details.to_string(),
        });
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("== {} ==\n", self.command));
        for (k, v) in &self.parameters {
            out.push_str(&format!("   {k} = {v}\n"));
        }
        if let Some(seed) = self.seed {
            out.push_str(&format!("   seed = {seed}\n"));
        }
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("[{tag}] {} :: {}", c.name, c.identity));
            if !c.details.is_empty() {
                out.push_str(&format!(" :: {}", c.details));
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "result: {} ({} checks)\n",
            if self.passed { "all passed" } else { "FAILURES" },
            self.checks.len()
        ));
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
