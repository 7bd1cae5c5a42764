use std::collections::BTreeMap;
use std::str::FromStr;

use maxmin_core::rational;
use maxmin_core::{Assignment, Rational};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// An exact value with an informative decimal rendering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metric {
    pub exact: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decimal: Option<String>,
}

impl Metric {
    pub fn rational(value: &Rational) -> Self {
        Metric {
            exact: rational::format(value),
            decimal: Some(rational::decimal(value)),
        }
    }

    pub fn count(value: usize) -> Self {
        Metric {
            exact: value.to_string(),
            decimal: None,
        }
    }

    pub fn flag(value: bool) -> Self {
        Metric {
            exact: value.to_string(),
            decimal: None,
        }
    }

    pub fn render(&self) -> String {
        match &self.decimal {
            Some(d) if *d != self.exact => format!("{} ({d})", self.exact),
            _ => self.exact.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentValue {
    pub agent: usize,
    #[serde(flatten)]
    pub value: Metric,
}

/// Everything needed to re-run a command and compare its results.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default)]
    pub inputs: Vec<String>,
    #[serde(default)]
    pub outputs: Vec<String>,
    pub metrics: BTreeMap<String, Metric>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub assignment: Vec<AgentValue>,
    pub exit_status: u8,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            seed: None,
            inputs: Vec::new(),
            outputs: Vec::new(),
            metrics: BTreeMap::new(),
            assignment: Vec::new(),
            exit_status: 0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn metric(&mut self, key: &str, value: Metric) {
        self.metrics.insert(key.to_string(), value);
    }

    pub fn set_assignment(&mut self, x: &Assignment) {
        self.assignment = x
            .iter()
            .map(|(v, value)| AgentValue {
                agent: v.0,
                value: Metric::rational(value),
            })
            .collect();
    }

    pub fn get_param<T: FromStr>(&self, key: &str) -> Result<T, CliError> {
        let raw = self
            .parameters
            .get(key)
            .ok_or_else(|| CliError::Input(format!("manifest lacks parameter `{key}`")))?;
        raw.parse()
            .map_err(|_| CliError::Input(format!("manifest parameter `{key}` = {raw:?} is not valid")))
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        text
    }

    /// Human summary: metrics, then the assignment.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for (key, m) in &self.metrics {
            out.push_str(&format!("{key} = {}\n", m.render()));
        }
        for entry in &self.assignment {
            out.push_str(&format!("x[{}] = {}\n", entry.agent, entry.value.render()));
        }
        out
    }
}
