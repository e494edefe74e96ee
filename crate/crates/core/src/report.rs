//! JSON run reports.

use serde::{Deserialize, Serialize};

use crate::ga::{GaConfig, Model, SolveResult};
use crate::graph::Graph;
use crate::metrics::ObjectiveSpec;
use crate::peeling::PeelingReport;
use crate::variants::VariantKind;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sense: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<VariantKind>,
    /// Raw objective value; `null` when nothing feasible was found.
    pub value: Option<f64>,
    pub feasible: bool,
    pub edge_labels: Vec<usize>,
    /// Tree edges as vertex-name pairs, in `edge_labels` order.
    pub edges: Vec<(String, String)>,
    pub generations: usize,
    pub evaluations: u64,
    pub wall_time_ms: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<GaConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub peeling: Option<PeelingReport>,
}

impl Report {
    /// Report for a finished search. `cfg` is `None` for exhaustive runs.
    pub fn from_solve(
        command: &str,
        g: &Graph,
        spec: &ObjectiveSpec,
        result: &SolveResult,
        cfg: Option<&GaConfig>,
        wall_time_ms: u64,
    ) -> Report {
        let labels = result.best_selection.sorted();
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            objective: Some(spec.kind.to_string()),
            sense: Some(spec.sense.to_string()),
            variant: None,
            value: result.feasible.then_some(result.best_value),
            feasible: result.feasible,
            edges: named_edges(g, &labels),
            edge_labels: labels,
            generations: result.generations_run,
            evaluations: result.evaluations,
            wall_time_ms,
            seed: cfg.map(|c| c.seed),
            model: cfg.map(|c| c.model),
            config: cfg.cloned(),
            peeling: None,
        }
    }

    pub fn from_peeling(
        command: &str,
        spec: &ObjectiveSpec,
        peeling: PeelingReport,
        cfg: &GaConfig,
        wall_time_ms: u64,
    ) -> Report {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            objective: Some(spec.kind.to_string()),
            sense: Some(spec.sense.to_string()),
            variant: None,
            value: Some(peeling.strength_score as f64),
            feasible: true,
            edge_labels: Vec::new(),
            edges: Vec::new(),
            generations: 0,
            evaluations: 0,
            wall_time_ms,
            seed: Some(cfg.seed),
            model: Some(cfg.model),
            config: Some(cfg.clone()),
            peeling: Some(peeling),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Vertex-name pairs of the given labels.
pub fn named_edges(g: &Graph, labels: &[usize]) -> Vec<(String, String)> {
    labels
        .iter()
        .map(|&l| {
            let e = g.edge(l);
            (g.name(e.u).to_string(), g.name(e.v).to_string())
        })
        .collect()
}
