//! JSON documents for behaviors, functionals and correlation tables.
//!
//! ```json
//! {"scenario": {"N": 2, "M": 2, "K": 2}, "p": [0.25, ...]}
//! {"scenario": {"N": 2, "M": 2, "K": 2}, "c": [1, -1, ...], "label": "chsh"}
//! {"M": 2, "c": [[0.7071, 0.7071], [0.7071, -0.7071]]}
//! ```
//!
//! Flat tables use index `s * K^N + x`, where setting and outcome strings are
//! mixed-radix numbers with party 0 as the least significant digit.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use extremal_core::{BellFunctional, Behavior, Scenario};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScenarioDoc {
    #[serde(rename = "N")]
    pub parties: usize,
    #[serde(rename = "M")]
    pub settings: usize,
    #[serde(rename = "K")]
    pub outcomes: usize,
}

impl ScenarioDoc {
    pub fn to_scenario(self) -> Result<Scenario> {
        Scenario::new(self.parties, self.settings, self.outcomes).context("invalid scenario")
    }
}

impl From<Scenario> for ScenarioDoc {
    fn from(s: Scenario) -> Self {
        Self { parties: s.parties(), settings: s.settings(), outcomes: s.outcomes() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BehaviorDoc {
    pub scenario: ScenarioDoc,
    pub p: Vec<f64>,
}

impl BehaviorDoc {
    pub fn to_behavior(&self) -> Result<Behavior> {
        Behavior::new(self.scenario.to_scenario()?, self.p.clone()).context("probability table does not match scenario")
    }
}

impl From<&Behavior> for BehaviorDoc {
    fn from(b: &Behavior) -> Self {
        Self { scenario: b.scenario().into(), p: b.probabilities().to_vec() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FunctionalDoc {
    pub scenario: ScenarioDoc,
    pub c: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl FunctionalDoc {
    pub fn to_functional(&self) -> Result<BellFunctional> {
        let label = self.label.clone().unwrap_or_else(|| "functional".into());
        BellFunctional::new(self.scenario.to_scenario()?, self.c.clone(), label)
            .context("coefficient table does not match scenario")
    }
}

impl From<&BellFunctional> for FunctionalDoc {
    fn from(f: &BellFunctional) -> Self {
        Self { scenario: f.scenario().into(), c: f.coefficients().to_vec(), label: Some(f.label().into()) }
    }
}

/// Correlators `c[i][j] = <A_i B_j>`, with optional single-party expectations
/// `a[i] = <A_i>`, `b[j] = <B_j>` (zero when absent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorrelationDoc {
    #[serde(rename = "M")]
    pub settings: usize,
    pub c: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<f64>>,
}

impl CorrelationDoc {
    /// Row-major correlators after shape checks.
    pub fn flat(&self) -> Result<Vec<f64>> {
        let m = self.settings;
        if m == 0 || self.c.len() != m || self.c.iter().any(|row| row.len() != m) {
            bail!("correlation table must be {m} x {m}");
        }
        for v in [&self.a, &self.b].into_iter().flatten() {
            if v.len() != m {
                bail!("marginal vectors must have length {m}");
            }
        }
        Ok(self.c.iter().flatten().copied().collect())
    }

    pub fn marginals(&self) -> Vec<f64> {
        self.a.iter().chain(&self.b).flatten().copied().collect()
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("cannot parse {}", path.display()))
}
