//! Recursive peeling: repeatedly find a dense spanning tree, cut the edges
//! around its hubs out of the network, and count the runs until the network
//! falls apart. More runs means a more strongly connected network.

use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::{solve, GaConfig};
use crate::graph::Graph;
use crate::metrics::ObjectiveSpec;
use crate::tree::tree_from_labels;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeelMode {
    /// Remove the tree path between the two highest-degree tree vertices.
    Nodes,
    /// Remove the tree edges with the largest endpoint degree sum.
    Edges,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodeDegree {
    pub node: String,
    pub tree_degree: usize,
    /// Degree in the working network at the start of the run.
    pub network_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeelRun {
    /// 1-based run number.
    pub run: usize,
    /// Objective value of the tree found in this run.
    pub tree_value: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub top_nodes: Vec<NodeDegree>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub removed_path: Vec<String>,
    pub removed_edges: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeelingReport {
    pub mode: PeelMode,
    pub runs: Vec<PeelRun>,
    pub terminated_reason: String,
    pub strength_score: usize,
}

impl PeelingReport {
    /// Human-readable table, one row per run.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        match self.mode {
            PeelMode::Nodes => {
                let _ = writeln!(out, "{:<5} {:<32} Removed Path", "Run", "(Node, Degree)");
                for r in &self.runs {
                    let nodes: Vec<String> = r
                        .top_nodes
                        .iter()
                        .map(|n| format!("({}, {})", n.node, n.network_degree))
                        .collect();
                    let _ = writeln!(
                        out,
                        "{:<5} {:<32} {}",
                        r.run,
                        nodes.join(", "),
                        r.removed_path.join("-")
                    );
                }
            }
            PeelMode::Edges => {
                let _ = writeln!(out, "{:<5} Removed Edges", "Run");
                for r in &self.runs {
                    let edges: Vec<String> = r.removed_edges.iter().map(|(a, b)| format!("({a}, {b})")).collect();
                    let _ = writeln!(out, "{:<5} {}", r.run, edges.join(", "));
                }
            }
        }
        let _ = writeln!(
            out,
            "strength score: {} ({})",
            self.strength_score, self.terminated_reason
        );
        out
    }
}

pub fn peel_nodes(g: &Graph, spec: &ObjectiveSpec, cfg: &GaConfig) -> Result<PeelingReport> {
    peel(g, spec, cfg, PeelMode::Nodes)
}

pub fn peel_edges(g: &Graph, spec: &ObjectiveSpec, cfg: &GaConfig) -> Result<PeelingReport> {
    peel(g, spec, cfg, PeelMode::Edges)
}

pub fn peel(g: &Graph, spec: &ObjectiveSpec, cfg: &GaConfig, mode: PeelMode) -> Result<PeelingReport> {
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut alive = vec![true; g.edge_count()];
    let mut runs = Vec::new();
    loop {
        let (network, origin) = g.edge_subgraph(|l| alive[l - 1]);
        if !network.is_connected() {
            break;
        }
        let run_cfg = GaConfig {
            seed: cfg.seed.wrapping_add(runs.len() as u64),
            ..cfg.clone()
        };
        let result = solve(&network, spec, &run_cfg)?;
        let tree = tree_from_labels(&network, result.best_selection.labels(), 1);
        let degrees = tree.degrees();

        let mut run = PeelRun {
            run: runs.len() + 1,
            tree_value: result.best_value,
            top_nodes: Vec::new(),
            removed_path: Vec::new(),
            removed_edges: Vec::new(),
        };
        let removed: Vec<usize> = match mode {
            PeelMode::Nodes => {
                let mut rng = ChaCha8Rng::seed_from_u64(run_cfg.seed);
                let [a, b] = top_two(degrees, &mut rng);
                for v in [a, b] {
                    run.top_nodes.push(NodeDegree {
                        node: g.name(v).to_string(),
                        tree_degree: degrees[v],
                        network_degree: network.degree(v),
                    });
                }
                let path = tree.path_between(a, b);
                run.removed_path = path.iter().map(|&v| g.name(v).to_string()).collect();
                path.windows(2).map(|w| network.label_between(w[0], w[1])).collect()
            }
            PeelMode::Edges => {
                let sum = |l: usize| {
                    let e = network.edge(l);
                    degrees[e.u] + degrees[e.v]
                };
                let labels = tree.edge_labels();
                let best = labels.iter().map(|&l| sum(l)).max().expect("tree has an edge");
                labels.iter().copied().filter(|&l| sum(l) == best).collect()
            }
        };
        for &l in &removed {
            let e = network.edge(l);
            run.removed_edges
                .push((g.name(e.u).to_string(), g.name(e.v).to_string()));
            alive[origin[l - 1] - 1] = false;
        }
        runs.push(run);
    }
    Ok(PeelingReport {
        mode,
        strength_score: runs.len(),
        runs,
        terminated_reason: "disconnected".to_string(),
    })
}

/// Two vertices of highest degree; ties inside the deciding degree class are
/// broken by `rng`.
fn top_two(degrees: &[usize], rng: &mut ChaCha8Rng) -> [usize; 2] {
    let mut classes: Vec<usize> = degrees.to_vec();
    classes.sort_unstable_by(|a, b| b.cmp(a));
    classes.dedup();
    let mut picked = Vec::with_capacity(2);
    for d in classes {
        let mut group: Vec<usize> = (0..degrees.len()).filter(|&v| degrees[v] == d).collect();
        group.shuffle(rng);
        picked.extend(group.into_iter().take(2 - picked.len()));
        if picked.len() == 2 {
            break;
        }
    }
    [picked[0], picked[1]]
}
