//! Experiment configuration: one TOML document describes the instance
//! and the experiment to run on it. Unknown keys are rejected so typos
//! surface as errors instead of silently ignored settings.

use anyhow::{bail, Context, Result};
use fluidmatch::dist::PatienceDistribution;
use fluidmatch::sim::ArrivalKind;
use fluidmatch::Network;
use serde::{Deserialize, Serialize};
use std::path::Path;

/// Whole config file: the instance, the experiment, and an optional
/// patience axis that re-parameterizes every node per entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub instance: InstanceConfig,
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub patience: Vec<PatienceAxisEntry>,
}

/// Declarative form of a [`Network`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub cost_demand: Vec<f64>,
    pub cost_supply: Vec<f64>,
    pub demand_patience: Vec<PatienceDistribution>,
    pub supply_patience: Vec<PatienceDistribution>,
}

/// One entry of the patience axis: a label for output rows and the
/// distribution applied to every node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatienceAxisEntry {
    pub label: String,
    pub all_nodes: PatienceDistribution,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Solve,
    PrioritySets,
    Simulate,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyKind {
    RateBased,
    Priority,
    Lp,
}

impl std::fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            PolicyKind::RateBased => "rate-based",
            PolicyKind::Priority => "priority",
            PolicyKind::Lp => "lp",
        })
    }
}

fn default_replications() -> u32 {
    1
}

fn default_arrival() -> ArrivalKind {
    ArrivalKind::Poisson
}

/// Experiment parameters. Scalar fields configure `simulate`; the
/// `*_values` lists are sweep axes (an absent axis falls back to the
/// scalar field). `mu_values` rescales the single supply node and is
/// only valid for single-supply instances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default = "default_replications")]
    pub replications: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub review_base: Option<f64>,
    #[serde(default)]
    pub review_exponent: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyKind>,
    #[serde(default = "default_arrival")]
    pub arrival: ArrivalKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_values: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policies: Option<Vec<PolicyKind>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_values: Option<Vec<f64>>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let cfg: FileConfig = toml::from_str(&text)
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        cfg.check()?;
        Ok(cfg)
    }

    /// Structural validation beyond what the parser enforces.
    pub fn check(&self) -> Result<()> {
        // Building the network validates dimensions, signs, and patience
        // parameters in one place.
        self.instance.build(None)?;
        for entry in &self.patience {
            if entry.label.is_empty() {
                bail!("patience axis entries need a nonempty label");
            }
            self.instance.build(Some(&entry.all_nodes))?;
        }
        let e = &self.experiment;
        match e.kind {
            ExperimentKind::Solve | ExperimentKind::PrioritySets => {}
            ExperimentKind::Simulate => {
                for (name, missing) in [
                    ("n", e.n.is_none()),
                    ("review_base", e.review_base.is_none()),
                    ("horizon", e.horizon.is_none()),
                    ("policy", e.policy.is_none()),
                ] {
                    if missing {
                        bail!("simulate requires `{name}` in [experiment]");
                    }
                }
            }
            ExperimentKind::Sweep => {
                if e.n.is_none() && e.n_values.as_deref().map_or(true, |v| v.is_empty()) {
                    bail!("sweep requires `n` or a nonempty `n_values`");
                }
                if e.review_base.is_none() && e.l_values.as_deref().map_or(true, |v| v.is_empty())
                {
                    bail!("sweep requires `review_base` or a nonempty `l_values`");
                }
                if e.horizon.is_none() {
                    bail!("sweep requires `horizon`");
                }
                if e.policy.is_none() && e.policies.as_deref().map_or(true, |v| v.is_empty()) {
                    bail!("sweep requires `policy` or a nonempty `policies`");
                }
            }
        }
        if let Some(mus) = &e.mu_values {
            if self.instance.mu.len() != 1 {
                bail!(
                    "`mu_values` sweeps the single supply node; this instance has {}",
                    self.instance.mu.len()
                );
            }
            if mus.is_empty() {
                bail!("`mu_values` must be nonempty when present");
            }
        }
        if e.replications == 0 {
            bail!("`replications` must be at least 1");
        }
        Ok(())
    }
}

impl InstanceConfig {
    /// Build the network, optionally re-parameterizing every node's
    /// patience and/or replacing the single supply rate.
    pub fn build_with(
        &self,
        patience: Option<&PatienceDistribution>,
        mu_override: Option<f64>,
    ) -> Result<Network> {
        let mut mu = self.mu.clone();
        if let Some(m) = mu_override {
            mu = vec![m];
        }
        let (pd, ps) = match patience {
            Some(d) => {
                (vec![d.clone(); self.lambda.len()], vec![d.clone(); mu.len()])
            }
            None => (self.demand_patience.clone(), self.supply_patience.clone()),
        };
        Network::new(
            self.lambda.clone(),
            mu,
            self.values.clone(),
            self.cost_demand.clone(),
            self.cost_supply.clone(),
            pd,
            ps,
        )
        .map_err(|e| anyhow::anyhow!("invalid instance: {e}"))
    }

    pub fn build(&self, patience: Option<&PatienceDistribution>) -> Result<Network> {
        self.build_with(patience, None)
    }

    /// Same instance with holding costs zeroed, used for the fluid
    /// unmatched-share columns.
    pub fn zero_cost(&self) -> InstanceConfig {
        let mut c = self.clone();
        c.cost_demand = vec![0.0; c.cost_demand.len()];
        c.cost_supply = vec![0.0; c.cost_supply.len()];
        c
    }
}
