//! Labeled undirected graphs.
//!
//! Edges carry 1-based labels assigned in input order. Those labels are the
//! alphabet of every chromosome and every report, so they never change once a
//! graph is built.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::io::BufRead;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(u: usize, v: usize) -> Self {
        Edge { u, v, weight: 1.0 }
    }

    pub fn weighted(u: usize, v: usize, weight: f64) -> Self {
        Edge { u, v, weight }
    }

    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// Immutable undirected simple graph with labeled edges.
#[derive(Debug, Clone)]
pub struct Graph {
    names: Vec<String>,
    edges: Vec<Edge>,
    incidence: Vec<Vec<usize>>,
    label_matrix: Vec<usize>,
}

impl Graph {
    /// Builds a graph from a vertex name table and an edge list. Edge `k` (0-based
    /// position) receives label `k + 1`. Connectivity is not required here.
    pub fn new(names: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let n = names.len();
        let mut label_matrix = vec![0usize; n * n];
        let mut incidence = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            for &x in &[e.u, e.v] {
                if x >= n {
                    return Err(Error::VertexOutOfRange {
                        index: x,
                        vertex_count: n,
                    });
                }
            }
            if e.u == e.v {
                return Err(Error::SelfLoop {
                    line: k + 1,
                    vertex: names[e.u].clone(),
                });
            }
            if !e.weight.is_finite() || e.weight < 0.0 {
                return Err(Error::InvalidWeight(e.weight));
            }
            if label_matrix[e.u * n + e.v] != 0 {
                return Err(Error::DuplicateEdge {
                    line: k + 1,
                    u: names[e.u].clone(),
                    v: names[e.v].clone(),
                });
            }
            let label = k + 1;
            label_matrix[e.u * n + e.v] = label;
            label_matrix[e.v * n + e.u] = label;
            incidence[e.u].push(label);
            incidence[e.v].push(label);
        }
        Ok(Graph {
            names,
            edges,
            incidence,
            label_matrix,
        })
    }

    /// Graph on vertices named `0..n` with unit-weight edges.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let names = (0..n).map(|i| i.to_string()).collect();
        let edges = pairs.iter().map(|&(u, v)| Edge::new(u, v)).collect();
        Graph::new(names, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge by 1-based label.
    pub fn edge(&self, label: usize) -> &Edge {
        &self.edges[label - 1]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, vertex: usize) -> &str {
        &self.names[vertex]
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Labels of the edges incident to `vertex`.
    pub fn incident(&self, vertex: usize) -> &[usize] {
        &self.incidence[vertex]
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.incidence[vertex].len()
    }

    /// Label of edge `{u, v}`, or 0 when absent.
    pub fn label_between(&self, u: usize, v: usize) -> usize {
        self.label_matrix[u * self.vertex_count() + v]
    }

    /// Row-major N×N matrix with edge labels as nonzero entries.
    pub fn label_matrix(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        self.label_matrix
            .chunks(n.max(1))
            .take(n)
            .map(<[usize]>::to_vec)
            .collect()
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count());
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        uf.count()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() > 0 && self.component_count() == 1
    }

    /// Subgraph on the same vertices keeping the edges whose labels satisfy `keep`.
    /// Returns the new graph and, for each new label, the original label.
    pub fn edge_subgraph(&self, mut keep: impl FnMut(usize) -> bool) -> (Graph, Vec<usize>) {
        let mut edges = Vec::new();
        let mut origin = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if keep(k + 1) {
                edges.push(*e);
                origin.push(k + 1);
            }
        }
        let g = Graph::new(self.names.clone(), edges).expect("subgraph of a valid graph");
        (g, origin)
    }

    /// Serializes as an edge list readable by [`load_graph`].
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for e in &self.edges {
            if e.weight == 1.0 {
                let _ = writeln!(out, "{} {}", self.names[e.u], self.names[e.v]);
            } else {
                let _ = writeln!(out, "{} {} {}", self.names[e.u], self.names[e.v], e.weight);
            }
        }
        out
    }
}

/// Ordered vector of distinct 1-based edge labels: the chromosome of both models.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct EdgeSelection(Vec<usize>);

impl EdgeSelection {
    pub fn new(labels: Vec<usize>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(labels.len());
        for &l in &labels {
            if l == 0 {
                return Err(Error::InvalidSelection("label 0 is not a valid edge label".into()));
            }
            if !seen.insert(l) {
                return Err(Error::InvalidSelection(format!("label {l} appears twice")));
            }
        }
        Ok(EdgeSelection(labels))
    }

    pub(crate) fn from_vec_unchecked(labels: Vec<usize>) -> Self {
        EdgeSelection(labels)
    }

    pub fn labels(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<usize> {
        self.0
    }

    /// Checks every label lies in `1..=|E|` of `g`.
    pub fn check_range(&self, g: &Graph) -> Result<()> {
        match self.0.iter().find(|&&l| l > g.edge_count()) {
            Some(l) => Err(Error::InvalidSelection(format!(
                "label {l} exceeds edge count {}",
                g.edge_count()
            ))),
            None => Ok(()),
        }
    }

    pub fn sorted(&self) -> Vec<usize> {
        let mut v = self.0.clone();
        v.sort_unstable();
        v
    }
}

impl Serialize for EdgeSelection {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.labels().serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeSelection {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        EdgeSelection::new(labels).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    AdjacencyCsv,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge-list" | "edges" => Ok(GraphFormat::EdgeList),
            "adjacency-csv" | "csv" => Ok(GraphFormat::AdjacencyCsv),
            other => Err(Error::InvalidConfig(format!("unknown graph format `{other}`"))),
        }
    }
}

/// Parses a graph and rejects empty or disconnected inputs.
pub fn load_graph<R: BufRead>(source: R, format: GraphFormat) -> Result<Graph> {
    let g = match format {
        GraphFormat::EdgeList => parse_edge_list(source)?,
        GraphFormat::AdjacencyCsv => parse_adjacency_csv(source)?,
    };
    if g.edge_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    Ok(g)
}

fn parse_edge_list<R: BufRead>(source: R) -> Result<Graph> {
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut names: Vec<String> = Vec::new();
    let mut edges = Vec::new();
    let mut seen: HashSet<(usize, usize)> = HashSet::new();

    let mut intern = |name: &str, names: &mut Vec<String>| -> usize {
        *ids.entry(name.to_string()).or_insert_with(|| {
            names.push(name.to_string());
            names.len() - 1
        })
    };

    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() < 2 || tokens.len() > 3 {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected `u v [w]`, found {} fields", tokens.len()),
            });
        }
        let weight = match tokens.get(2) {
            Some(w) => {
                let w: f64 = w.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad weight `{w}`"),
                })?;
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("weight must be nonnegative, found {w}"),
                    });
                }
                w
            }
            None => 1.0,
        };
        if tokens[0] == tokens[1] {
            return Err(Error::SelfLoop {
                line: line_no,
                vertex: tokens[0].to_string(),
            });
        }
        let u = intern(tokens[0], &mut names);
        let v = intern(tokens[1], &mut names);
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::DuplicateEdge {
                line: line_no,
                u: tokens[0].to_string(),
                v: tokens[1].to_string(),
            });
        }
        edges.push(Edge::weighted(u, v, weight));
    }
    Graph::new(names, edges)
}

fn parse_adjacency_csv<R: BufRead>(source: R) -> Result<Graph> {
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let row = content
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("bad matrix entry `{t}`"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push((line_no, row));
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    for (line_no, row) in &rows {
        if row.len() != n {
            return Err(Error::Parse {
                line: *line_no,
                message: format!("row has {} entries, expected {n}", row.len()),
            });
        }
    }
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    for i in 0..n {
        let (line_no, row) = &rows[i];
        if row[i] != 0.0 {
            return Err(Error::SelfLoop {
                line: *line_no,
                vertex: names[i].clone(),
            });
        }
        for j in (i + 1)..n {
            let w = row[j];
            if w != rows[j].1[i] {
                return Err(Error::Parse {
                    line: *line_no,
                    message: format!("matrix is not symmetric at ({i}, {j})"),
                });
            }
            if w != 0.0 {
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::Parse {
                        line: *line_no,
                        message: format!("weight must be nonnegative, found {w}"),
                    });
                }
                edges.push(Edge::weighted(i, j, w));
            }
        }
    }
    Graph::new(names, edges)
}

/// Graphviz rendering. Tree edges are drawn solid; when `show_host` is set the
/// remaining host edges are drawn gray.
pub fn to_dot(g: &Graph, tree_labels: Option<&[usize]>, show_host: bool) -> String {
    let in_tree: HashSet<usize> = tree_labels.map(|t| t.iter().copied().collect()).unwrap_or_default();
    let mut out = String::from("graph G {\n");
    for name in g.names() {
        let _ = writeln!(out, "  \"{}\";", escape(name));
    }
    for (k, e) in g.edges().iter().enumerate() {
        let label = k + 1;
        let (u, v) = (escape(g.name(e.u)), escape(g.name(e.v)));
        if tree_labels.is_none() || in_tree.contains(&label) {
            let _ = writeln!(out, "  \"{u}\" -- \"{v}\" [label=\"{label}\"];");
        } else if show_host {
            let _ = writeln!(out, "  \"{u}\" -- \"{v}\" [color=gray, style=dashed];");
        }
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
