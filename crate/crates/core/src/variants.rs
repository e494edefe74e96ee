//! Constrained dense/sparse tree problems: k-vertex subtrees, Steiner trees,
//! conflicting edge pairs and bounded maximum degree.
//!
//! Each variant reuses the generational loop from [`crate::ga`] with its own
//! decoding and penalties. Constraint violations cost one penalty base each,
//! on top of the sense-normalized objective, so violating trees always rank
//! behind feasible ones while still being ordered among themselves.

use std::collections::VecDeque;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ga::{
    decode_spanning, exact_over, exact_result, run, seeded_chromosome, Evaluation, GaConfig, Model, Problem,
    SolveResult,
};
use crate::graph::{EdgeSelection, Graph};
use crate::metrics::{evaluate, ObjectiveSpec};
use crate::spanning::{enumerate_spanning_trees, kruskal_decode};
use crate::tree::{subtree_from_labels, tree_from_labels, TreeView};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VariantKind {
    /// Subtree with exactly `k` vertices.
    KSubtree { k: usize },
    /// Subtree connecting every terminal vertex.
    Steiner { terminals: Vec<usize> },
    /// Spanning tree holding at most one label of each pair.
    ConflictPairs { pairs: Vec<(usize, usize)> },
    /// Spanning tree with every degree at most `k`.
    DegreeBound { k: usize },
}

impl VariantKind {
    /// Parses `k-subtree:6`, `steiner:a,b,c`, `conflicts:13-16,2-5` or
    /// `degree-bound:3`. Steiner terminals are vertex names of `g`.
    pub fn parse(s: &str, g: &Graph) -> Result<VariantKind> {
        let bad = |m: String| Error::InvalidVariant(m);
        let (head, tail) = s
            .split_once(':')
            .ok_or_else(|| bad(format!("expected `kind:args`, found `{s}`")))?;
        let int = |t: &str| -> Result<usize> { t.trim().parse().map_err(|_| bad(format!("bad integer `{t}`"))) };
        match head {
            "k-subtree" => Ok(VariantKind::KSubtree { k: int(tail)? }),
            "degree-bound" => Ok(VariantKind::DegreeBound { k: int(tail)? }),
            "steiner" => {
                let terminals = tail
                    .split(',')
                    .map(|name| {
                        g.vertex_by_name(name.trim())
                            .ok_or_else(|| bad(format!("unknown vertex `{}`", name.trim())))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(VariantKind::Steiner { terminals })
            }
            "conflicts" => {
                let pairs = tail
                    .split(',')
                    .map(|p| {
                        let (a, b) = p
                            .split_once('-')
                            .ok_or_else(|| bad(format!("expected `a-b`, found `{p}`")))?;
                        Ok((int(a)?, int(b)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(VariantKind::ConflictPairs { pairs })
            }
            other => Err(bad(format!("unknown variant `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantSpec {
    pub kind: VariantKind,
    pub base: ObjectiveSpec,
}

impl VariantSpec {
    pub fn new(kind: VariantKind, base: ObjectiveSpec) -> Self {
        VariantSpec { kind, base }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        let n = g.vertex_count();
        let bad = |m: String| Err(Error::InvalidVariant(m));
        match &self.kind {
            VariantKind::KSubtree { k } => {
                if *k == 0 || *k > n {
                    return bad(format!("k = {k} must lie in 1..={n}"));
                }
            }
            VariantKind::Steiner { terminals } => {
                if terminals.len() < 2 {
                    return bad("a Steiner tree needs at least two terminals".into());
                }
                let mut sorted = terminals.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != terminals.len() {
                    return bad("terminals repeat".into());
                }
                if let Some(&t) = terminals.iter().find(|&&t| t >= n) {
                    return bad(format!("terminal {t} out of range"));
                }
            }
            VariantKind::ConflictPairs { pairs } => {
                for &(a, b) in pairs {
                    if a == b {
                        return bad(format!("pair {a}-{b} repeats a label"));
                    }
                    if a == 0 || b == 0 || a > g.edge_count() || b > g.edge_count() {
                        return bad(format!("pair {a}-{b} has a label outside 1..={}", g.edge_count()));
                    }
                }
            }
            VariantKind::DegreeBound { k } => {
                if *k == 0 {
                    return bad("degree bound must be positive".into());
                }
            }
        }
        Ok(())
    }
}

/// Number of conflict pairs fully contained in `labels`.
pub fn conflict_violations(labels: &[usize], pairs: &[(usize, usize)]) -> usize {
    pairs
        .iter()
        .filter(|(a, b)| labels.contains(a) && labels.contains(b))
        .count()
}

/// Number of tree vertices whose degree exceeds `k`.
pub fn degree_violations(tree: &TreeView, k: usize) -> usize {
    tree.degrees().iter().filter(|&&d| d > k).count()
}

/// Repeatedly strips leaves that are not terminals. `labels` must form a tree
/// containing every terminal; the result is the minimal subtree spanning them.
pub fn prune_to_terminals(g: &Graph, labels: &[usize], terminals: &[usize]) -> Vec<usize> {
    let n = g.vertex_count();
    let mut is_terminal = vec![false; n];
    for &t in terminals {
        is_terminal[t] = true;
    }
    let mut degree = vec![0usize; n];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (idx, &l) in labels.iter().enumerate() {
        let e = g.edge(l);
        degree[e.u] += 1;
        degree[e.v] += 1;
        incident[e.u].push(idx);
        incident[e.v].push(idx);
    }
    let mut removed = vec![false; labels.len()];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| degree[v] == 1 && !is_terminal[v]).collect();
    while let Some(v) = queue.pop_front() {
        if degree[v] != 1 {
            continue;
        }
        let idx = *incident[v].iter().find(|&&i| !removed[i]).expect("leaf keeps one edge");
        removed[idx] = true;
        degree[v] = 0;
        let w = g.edge(labels[idx]).other(v);
        degree[w] -= 1;
        if degree[w] == 1 && !is_terminal[w] {
            queue.push_back(w);
        }
    }
    labels
        .iter()
        .zip(&removed)
        .filter(|(_, &r)| !r)
        .map(|(&l, _)| l)
        .collect()
}

/// Runs the genetic algorithm for a constrained variant.
pub fn solve_variant(g: &Graph, v: &VariantSpec, cfg: &GaConfig) -> Result<SolveResult> {
    cfg.validate()?;
    v.validate(g)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let spec = &v.base;
    match &v.kind {
        VariantKind::KSubtree { k: 1 } => single_vertex_result(spec),
        VariantKind::KSubtree { k } => run(
            &KSubtreeProblem {
                g,
                spec,
                k: *k,
                depth: spec.required_depth(*k),
                base: spec.penalty_base(*k),
            },
            cfg,
        ),
        VariantKind::Steiner { terminals } => {
            let model2 = GaConfig {
                model: Model::Kruskal,
                ..cfg.clone()
            };
            run(
                &SteinerProblem {
                    g,
                    spec,
                    terminals,
                    len: model2.chromosome_len(g),
                    depth: spec.required_depth(n),
                    base: spec.penalty_base(n),
                },
                &model2,
            )
        }
        VariantKind::ConflictPairs { .. } | VariantKind::DegreeBound { .. } => run(
            &ConstrainedSpanning {
                g,
                spec,
                kind: &v.kind,
                model: cfg.model,
                len: cfg.chromosome_len(g),
                depth: spec.required_depth(n),
                base: spec.penalty_base(n),
            },
            cfg,
        ),
    }
}

/// Exhaustive optimum of a variant, for small graphs.
pub fn solve_variant_exact(g: &Graph, v: &VariantSpec, cap: u64) -> Result<SolveResult> {
    v.validate(g)?;
    let n = g.vertex_count();
    let spec = &v.base;
    let depth = spec.required_depth(n);
    match &v.kind {
        VariantKind::KSubtree { k: 1 } => single_vertex_result(spec),
        VariantKind::KSubtree { k } => exact_k_subtree(g, spec, *k, cap),
        VariantKind::Steiner { terminals } => exact_over(g, cap, |sel| {
            let pruned = prune_to_terminals(g, sel.labels(), terminals);
            let tree = subtree_from_labels(g, &pruned, depth);
            let raw = evaluate(&tree, spec).ok()?;
            Some(Evaluation::feasible(spec, raw, pruned))
        }),
        VariantKind::ConflictPairs { pairs } => exact_over(g, cap, |sel| {
            if conflict_violations(sel.labels(), pairs) > 0 {
                return None;
            }
            let tree = tree_from_labels(g, sel.labels(), depth);
            Some(Evaluation::feasible(
                spec,
                evaluate(&tree, spec).ok()?,
                sel.labels().to_vec(),
            ))
        }),
        VariantKind::DegreeBound { k } => exact_over(g, cap, |sel| {
            let tree = tree_from_labels(g, sel.labels(), depth);
            if degree_violations(&tree, *k) > 0 {
                return None;
            }
            Some(Evaluation::feasible(
                spec,
                evaluate(&tree, spec).ok()?,
                sel.labels().to_vec(),
            ))
        }),
    }
}

fn single_vertex_result(spec: &ObjectiveSpec) -> Result<SolveResult> {
    let t = TreeView::from_edges(1, &[], 1)?;
    let raw = evaluate(&t, spec)?;
    exact_result(Some(Evaluation::feasible(spec, raw, Vec::new())), 1)
}

fn exact_k_subtree(g: &Graph, spec: &ObjectiveSpec, k: usize, cap: u64) -> Result<SolveResult> {
    let n = g.vertex_count();
    let depth = spec.required_depth(k);
    let mut best: Option<Evaluation> = None;
    let mut evaluations = 0u64;
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let mut inside = vec![false; n];
        for &v in &subset {
            inside[v] = true;
        }
        let (induced, origin) = g.edge_subgraph(|l| {
            let e = g.edge(l);
            inside[e.u] && inside[e.v]
        });
        // induced keeps all n vertices; only the subset must be connected
        let mut uf = UnionFind::new(n);
        for e in induced.edges() {
            uf.union(e.u, e.v);
        }
        if uf.count() == n - k + 1 {
            let local = induced_on(&induced, &subset);
            for sel in enumerate_spanning_trees(&local, cap)? {
                evaluations += 1;
                let labels: Vec<usize> = sel.labels().iter().map(|&l| origin[l - 1]).collect();
                let tree = subtree_from_labels(g, &labels, depth);
                let raw = evaluate(&tree, spec)?;
                let e = Evaluation::feasible(spec, raw, labels);
                if best.as_ref().is_none_or(|b| e.fitness < b.fitness) {
                    best = Some(e);
                }
            }
        }
        if !next_combination(&mut subset, n) {
            break;
        }
    }
    exact_result(best, evaluations)
}

/// `sub` restricted to the vertices in `subset`, keeping edge order.
fn induced_on(sub: &Graph, subset: &[usize]) -> Graph {
    let index = |x: usize| subset.binary_search(&x).expect("endpoint inside subset");
    let names = subset.iter().map(|&v| sub.name(v).to_string()).collect();
    let edges = sub
        .edges()
        .iter()
        .map(|e| crate::graph::Edge::weighted(index(e.u), index(e.v), e.weight))
        .collect();
    Graph::new(names, edges).expect("induced subgraph is simple")
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

struct KSubtreeProblem<'a> {
    g: &'a Graph,
    spec: &'a ObjectiveSpec,
    k: usize,
    depth: usize,
    base: f64,
}

impl Problem for KSubtreeProblem<'_> {
    fn label_count(&self) -> usize {
        self.g.edge_count()
    }

    fn chromosome_len(&self) -> usize {
        self.k - 1
    }

    /// Grows a random subtree edge by edge from a random start vertex.
    fn initial(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let g = self.g;
        let mut inside = vec![false; g.vertex_count()];
        let start = rng.gen_range(0..g.vertex_count());
        inside[start] = true;
        let mut labels = Vec::with_capacity(self.k - 1);
        while labels.len() + 1 < self.k {
            let frontier: Vec<usize> = (1..=g.edge_count())
                .filter(|&l| {
                    let e = g.edge(l);
                    inside[e.u] != inside[e.v]
                })
                .collect();
            let l = frontier[rng.gen_range(0..frontier.len())];
            let e = g.edge(l);
            inside[e.u] = true;
            inside[e.v] = true;
            labels.push(l);
        }
        labels
    }

    fn evaluate(&self, genes: &[usize]) -> Evaluation {
        let mut touched: Vec<usize> = genes
            .iter()
            .flat_map(|&l| {
                let e = self.g.edge(l);
                [e.u, e.v]
            })
            .collect();
        touched.sort_unstable();
        touched.dedup();
        let mut uf = UnionFind::new(self.g.vertex_count());
        let unions = genes
            .iter()
            .filter(|&&l| {
                let e = self.g.edge(l);
                uf.union(e.u, e.v)
            })
            .count();
        let cycles = genes.len() - unions;
        let components = touched.len() - unions;
        if cycles == 0 && components == 1 {
            let tree = subtree_from_labels(self.g, genes, self.depth);
            let raw = evaluate(&tree, self.spec).expect("depth matches objective");
            Evaluation::feasible(self.spec, raw, genes.to_vec())
        } else {
            Evaluation::penalized(self.base, cycles + components - 1, genes.to_vec())
        }
    }
}

struct SteinerProblem<'a> {
    g: &'a Graph,
    spec: &'a ObjectiveSpec,
    terminals: &'a [usize],
    len: usize,
    depth: usize,
    base: f64,
}

impl Problem for SteinerProblem<'_> {
    fn label_count(&self) -> usize {
        self.g.edge_count()
    }

    fn chromosome_len(&self) -> usize {
        self.len
    }

    fn initial(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        seeded_chromosome(self.g, self.len, rng)
    }

    /// Decodes a Kruskal forest and keeps the component of the first terminal;
    /// every terminal outside it costs one penalty step.
    fn evaluate(&self, genes: &[usize]) -> Evaluation {
        let g = self.g;
        let sel = EdgeSelection::from_vec_unchecked(genes.to_vec());
        let forest = kruskal_decode(g, &sel).expect("genes within label range").tree_labels;
        let mut uf = UnionFind::new(g.vertex_count());
        for &l in &forest {
            let e = g.edge(l);
            uf.union(e.u, e.v);
        }
        let root = uf.find(self.terminals[0]);
        let missing = self.terminals.iter().filter(|&&t| uf.find(t) != root).count();
        if missing > 0 {
            return Evaluation::penalized(self.base, missing, genes.to_vec());
        }
        let component: Vec<usize> = forest.into_iter().filter(|&l| uf.find(g.edge(l).u) == root).collect();
        let pruned = prune_to_terminals(g, &component, self.terminals);
        let tree = subtree_from_labels(g, &pruned, self.depth);
        let raw = evaluate(&tree, self.spec).expect("depth matches objective");
        Evaluation::feasible(self.spec, raw, pruned)
    }
}

struct ConstrainedSpanning<'a> {
    g: &'a Graph,
    spec: &'a ObjectiveSpec,
    kind: &'a VariantKind,
    model: Model,
    len: usize,
    depth: usize,
    base: f64,
}

impl Problem for ConstrainedSpanning<'_> {
    fn label_count(&self) -> usize {
        self.g.edge_count()
    }

    fn chromosome_len(&self) -> usize {
        self.len
    }

    fn initial(&self, rng: &mut ChaCha8Rng) -> Vec<usize> {
        seeded_chromosome(self.g, self.len, rng)
    }

    fn evaluate(&self, genes: &[usize]) -> Evaluation {
        let tree = match decode_spanning(self.g, genes, self.model, self.depth) {
            Ok(t) => t,
            Err(components) => return Evaluation::penalized(self.base, components - 1, genes.to_vec()),
        };
        let violations = match self.kind {
            VariantKind::ConflictPairs { pairs } => conflict_violations(tree.edge_labels(), pairs),
            VariantKind::DegreeBound { k } => degree_violations(&tree, *k),
            _ => unreachable!("only spanning-tree constraints reach here"),
        };
        let raw = evaluate(&tree, self.spec).expect("depth matches objective");
        let mut e = Evaluation::feasible(self.spec, raw, tree.edge_labels().to_vec());
        if violations > 0 {
            // objectives are nonnegative, so normalized + base > every feasible value
            e.fitness += self.base * violations as f64;
            e.feasible = false;
            e.raw = f64::NAN;
        }
        e
    }
}
