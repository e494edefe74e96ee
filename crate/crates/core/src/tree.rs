//! Decoded trees, degree sequences, greedy trees and majorization.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{EdgeSelection, Graph};
use crate::unionfind::UnionFind;

/// A tree together with per-vertex degrees and the vertex pairs at each tree
/// distance up to a truncation depth.
///
/// Vertices are indexed locally `0..order()`; `host_vertex` maps them back to
/// the graph the tree was taken from.
#[derive(Debug, Clone, PartialEq)]
pub struct TreeView {
    vertices: Vec<usize>,
    edges: Vec<(usize, usize)>,
    edge_labels: Vec<usize>,
    degrees: Vec<usize>,
    depth: usize,
    dist_pairs: Vec<Vec<(usize, usize)>>,
}

impl TreeView {
    /// Builds a view of a tree on local vertices `0..n`. Fails unless `edges`
    /// has exactly `n - 1` entries forming a connected acyclic graph.
    pub fn from_edges(n: usize, edges: &[(usize, usize)], i_max: usize) -> Result<TreeView> {
        if n == 0 {
            return Err(Error::InvalidSelection("a tree needs at least one vertex".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::SelectionSize {
                expected: n - 1,
                found: edges.len(),
            });
        }
        let mut uf = UnionFind::new(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange {
                    index: u.max(v),
                    vertex_count: n,
                });
            }
            if !uf.union(u, v) {
                return Err(Error::InvalidSelection("edges contain a cycle".into()));
            }
        }
        let labels = (1..=edges.len()).collect();
        Ok(TreeView::build((0..n).collect(), edges.to_vec(), labels, i_max))
    }

    /// Caller guarantees `edges` is a spanning tree of the local vertices.
    pub(crate) fn build(
        vertices: Vec<usize>,
        edges: Vec<(usize, usize)>,
        edge_labels: Vec<usize>,
        i_max: usize,
    ) -> TreeView {
        let n = vertices.len();
        let mut adj = vec![Vec::new(); n];
        let mut degrees = vec![0; n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
            degrees[u] += 1;
            degrees[v] += 1;
        }
        let mut dist_pairs = vec![Vec::new(); i_max];
        if i_max == 1 {
            dist_pairs[0] = edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
            dist_pairs[0].sort_unstable();
        } else if i_max > 1 {
            let mut dist = vec![usize::MAX; n];
            let mut queue = VecDeque::new();
            let mut touched = Vec::new();
            for s in 0..n {
                dist[s] = 0;
                touched.push(s);
                queue.push_back(s);
                while let Some(x) = queue.pop_front() {
                    let d = dist[x];
                    if x > s {
                        dist_pairs[d - 1].push((s, x));
                    }
                    if d == i_max {
                        continue;
                    }
                    for &y in &adj[x] {
                        if dist[y] == usize::MAX {
                            dist[y] = d + 1;
                            touched.push(y);
                            queue.push_back(y);
                        }
                    }
                }
                for &t in &touched {
                    dist[t] = usize::MAX;
                }
                touched.clear();
            }
        }
        TreeView {
            vertices,
            edges,
            edge_labels,
            degrees,
            depth: i_max,
            dist_pairs,
        }
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn host_vertex(&self, local: usize) -> usize {
        self.vertices[local]
    }

    pub fn host_vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_labels(&self) -> &[usize] {
        &self.edge_labels
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    /// Largest distance for which pairs were collected.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Unordered pairs `(u, v)`, `u < v`, at tree distance exactly `i`.
    pub fn dist_pairs(&self, i: usize) -> Result<&[(usize, usize)]> {
        if i == 0 || i > self.depth {
            return Err(Error::DepthExceeded {
                requested: i,
                available: self.depth,
            });
        }
        Ok(&self.dist_pairs[i - 1])
    }

    /// ℓ_i, the number of pairs at distance `i`.
    pub fn pair_count(&self, i: usize) -> Result<usize> {
        self.dist_pairs(i).map(<[_]>::len)
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.order()];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn degree_sequence(&self) -> DegreeSequence {
        DegreeSequence::new(self.degrees.clone())
    }

    /// Local vertices on the unique path from `a` to `b`, both included.
    pub fn path_between(&self, a: usize, b: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut prev = vec![usize::MAX; self.order()];
        prev[a] = a;
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            if x == b {
                break;
            }
            for &y in &adj[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![b];
        let mut cur = b;
        while cur != a {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Same tree with pairs collected up to `i_max`.
    pub fn with_depth(&self, i_max: usize) -> TreeView {
        TreeView::build(
            self.vertices.clone(),
            self.edges.clone(),
            self.edge_labels.clone(),
            i_max,
        )
    }
}

/// Outcome of decoding a selection of `N - 1` labels.
#[derive(Debug, Clone, PartialEq)]
pub enum Decoded {
    Tree(TreeView),
    Infeasible { components: usize },
}

impl Decoded {
    pub fn tree(self) -> Option<TreeView> {
        match self {
            Decoded::Tree(t) => Some(t),
            Decoded::Infeasible { .. } => None,
        }
    }
}

/// Interprets `sel` as a candidate spanning tree of `g`, collecting distances up
/// to `i_max`. A selection that is not a spanning tree yields the number of
/// connected components of the selected subgraph instead.
pub fn decode_tree(g: &Graph, sel: &EdgeSelection, i_max: usize) -> Result<Decoded> {
    let n = g.vertex_count();
    if sel.len() + 1 != n {
        return Err(Error::SelectionSize {
            expected: n.saturating_sub(1),
            found: sel.len(),
        });
    }
    sel.check_range(g)?;
    let mut uf = UnionFind::new(n);
    for &l in sel.labels() {
        let e = g.edge(l);
        uf.union(e.u, e.v);
    }
    if uf.count() != 1 {
        return Ok(Decoded::Infeasible { components: uf.count() });
    }
    Ok(Decoded::Tree(tree_from_labels(g, sel.labels(), i_max)))
}

/// Spanning tree view from labels already known to form a spanning tree.
pub(crate) fn tree_from_labels(g: &Graph, labels: &[usize], i_max: usize) -> TreeView {
    let edges = labels
        .iter()
        .map(|&l| {
            let e = g.edge(l);
            (e.u, e.v)
        })
        .collect();
    TreeView::build((0..g.vertex_count()).collect(), edges, labels.to_vec(), i_max)
}

/// Tree on a subset of host vertices, relabelled locally in ascending host order.
pub(crate) fn subtree_from_labels(g: &Graph, labels: &[usize], i_max: usize) -> TreeView {
    let mut vertices: Vec<usize> = labels
        .iter()
        .flat_map(|&l| {
            let e = g.edge(l);
            [e.u, e.v]
        })
        .collect();
    vertices.sort_unstable();
    vertices.dedup();
    let local = |x: usize| vertices.binary_search(&x).expect("endpoint in vertex set");
    let edges = labels
        .iter()
        .map(|&l| {
            let e = g.edge(l);
            (local(e.u), local(e.v))
        })
        .collect();
    TreeView::build(vertices.clone(), edges, labels.to_vec(), i_max)
}

/// Degrees sorted into nonincreasing order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeSequence(Vec<usize>);

impl DegreeSequence {
    pub fn new(mut degrees: Vec<usize>) -> Self {
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        DegreeSequence(degrees)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Whether some tree on `len()` vertices has exactly these degrees.
    pub fn is_tree_realizable(&self) -> bool {
        self.check_tree().is_ok()
    }

    fn check_tree(&self) -> Result<()> {
        let n = self.0.len();
        match n {
            0 => Err(Error::UnrealizableDegrees("empty sequence".into())),
            1 if self.0[0] == 0 => Ok(()),
            1 => Err(Error::UnrealizableDegrees("a single vertex has degree 0".into())),
            _ => {
                if self.0.contains(&0) {
                    return Err(Error::UnrealizableDegrees("zero degree in a tree of order ≥ 2".into()));
                }
                let sum: usize = self.0.iter().sum();
                if sum != 2 * (n - 1) {
                    return Err(Error::UnrealizableDegrees(format!(
                        "degree sum {sum} differs from 2(n-1) = {}",
                        2 * (n - 1)
                    )));
                }
                Ok(())
            }
        }
    }
}

/// Greedy tree of a degree sequence: vertices are created breadth-first and each
/// receives the largest degree still available, so large degrees sit next to
/// the root and to each other. Vertex 0 is the root and local ids follow
/// breadth-first order.
pub fn greedy_tree(seq: &DegreeSequence) -> Result<TreeView> {
    seq.check_tree()?;
    let degrees = seq.as_slice();
    let n = degrees.len();
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut next = 1;
    for v in 0..n {
        let children = if v == 0 { degrees[0] } else { degrees[v] - 1 };
        for _ in 0..children {
            edges.push((v, next));
            next += 1;
        }
    }
    debug_assert_eq!(next, n);
    TreeView::from_edges(n, &edges, n - 1)
}

/// True when `a` majorizes `b`: equal totals and every prefix sum of `a` at
/// least the matching prefix sum of `b`.
pub fn majorizes(a: &DegreeSequence, b: &DegreeSequence) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let (mut pa, mut pb) = (0usize, 0usize);
    for (&x, &y) in a.as_slice().iter().zip(b.as_slice()) {
        pa += x;
        pb += y;
        if pa < pb {
            return Ok(false);
        }
    }
    Ok(pa == pb)
}
