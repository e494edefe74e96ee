//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's algorithms; graphs are plain edge lists.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Edges = Vec<(usize, usize)>;

/// Tree on `0..seq.len() + 2` encoded by a Prüfer sequence.
pub fn prufer_decode(seq: &[usize]) -> Edges {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Every labelled tree on `n >= 2` vertices.
pub fn all_labelled_trees(n: usize) -> impl Iterator<Item = Edges> {
    let len = n - 2;
    let total = n.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut seq = vec![0; len];
        for s in seq.iter_mut() {
            *s = code % n;
            code /= n;
        }
        prufer_decode(&seq)
    })
}

pub fn random_tree(n: usize, rng: &mut impl Rng) -> Edges {
    if n == 1 {
        return Vec::new();
    }
    if n == 2 {
        return vec![(0, 1)];
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    prufer_decode(&seq)
}

pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    adj
}

/// All-pairs distances by BFS; `usize::MAX` when unreachable.
pub fn distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let adj = adjacency(n, edges);
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(x) = q.pop_front() {
                for &y in &adj[x] {
                    if d[y] == usize::MAX {
                        d[y] = d[x] + 1;
                        q.push_back(y);
                    }
                }
            }
            d
        })
        .collect()
}

pub fn degrees(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut d = vec![0; n];
    for &(u, v) in edges {
        d[u] += 1;
        d[v] += 1;
    }
    d
}

/// Sum over unordered pairs at distance `i` of `deg(u)^j + deg(v)^j`.
pub fn brute_c_ij(n: usize, edges: &[(usize, usize)], i: usize, j: f64) -> f64 {
    let dist = distances(n, edges);
    let deg = degrees(n, edges);
    let mut total = 0.0;
    for u in 0..n {
        for v in u + 1..n {
            if dist[u][v] == i {
                total += (deg[u] as f64).powf(j) + (deg[v] as f64).powf(j);
            }
        }
    }
    total
}

/// Number of unordered pairs at distance exactly `i`.
pub fn pairs_at(n: usize, edges: &[(usize, usize)], i: usize) -> usize {
    let dist = distances(n, edges);
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).filter(|&(u, v)| dist[u][v] == i).count()
}

pub fn brute_wiener(n: usize, edges: &[(usize, usize)]) -> u64 {
    let dist = distances(n, edges);
    (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).map(|(u, v)| dist[u][v] as u64).sum()
}

pub fn brute_power_sum(n: usize, edges: &[(usize, usize)], p: f64) -> f64 {
    degrees(n, edges).iter().map(|&d| (d as f64).powf(p)).sum()
}

/// Nonempty vertex subsets inducing a connected subgraph, by exhaustion.
pub fn brute_subtree_count(n: usize, edges: &[(usize, usize)]) -> u64 {
    assert!(n <= 20);
    let adj = adjacency(n, edges);
    let mut count = 0;
    for mask in 1u32..(1 << n) {
        let start = mask.trailing_zeros() as usize;
        let mut seen = 1u32 << start;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                let bit = 1 << y;
                if mask & bit != 0 && seen & bit == 0 {
                    seen |= bit;
                    stack.push(y);
                }
            }
        }
        if seen == mask {
            count += 1;
        }
    }
    count
}

/// True when `edges` form a tree on exactly the vertices they touch, or on
/// all of `0..n` when `spanning` is set.
pub fn is_tree(n: usize, edges: &[(usize, usize)], spanning: bool) -> bool {
    let touched: BTreeSet<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let order = if spanning { n } else { touched.len().max(1) };
    if edges.len() + 1 != order {
        return false;
    }
    if spanning && n == 1 {
        return edges.is_empty();
    }
    let adj = adjacency(n, edges);
    let start = *touched.iter().next().unwrap_or(&0);
    let mut seen = HashSet::from([start]);
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for &y in &adj[x] {
            if seen.insert(y) {
                stack.push(y);
            }
        }
    }
    seen.len() == order
}

/// AHU encoding of a rooted tree.
fn encode(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v].iter().filter(|&&w| w != parent).map(|&w| encode(adj, w, v)).collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Isomorphism-invariant string for a tree on `0..n`, rooted at its center(s).
pub fn canonical_form(n: usize, edges: &[(usize, usize)]) -> String {
    if n == 1 {
        return "()".into();
    }
    let adj = adjacency(n, edges);
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &w in &adj[leaf] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    layer
        .iter()
        .map(|&c| encode(&adj, c, usize::MAX))
        .min()
        .unwrap()
}

/// Random connected simple graph: random tree plus uniform extra edges.
pub fn random_connected(n: usize, m: usize, rng: &mut impl Rng) -> Edges {
    let max = n * (n - 1) / 2;
    let m = m.clamp(n - 1, max);
    let mut set: BTreeSet<(usize, usize)> =
        random_tree(n, rng).into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
    while set.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            set.insert((u.min(v), u.max(v)));
        }
    }
    let mut edges: Edges = set.into_iter().collect();
    // shuffle so labels are not sorted by endpoint
    for i in (1..edges.len()).rev() {
        edges.swap(i, rng.gen_range(0..=i));
    }
    edges
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn edge_list_text(edges: &[(usize, usize)]) -> String {
    edges.iter().map(|(u, v)| format!("{u} {v}\n")).collect()
}

/// Constraint check for constrained-tree results, written against plain edge
/// lists. `labels` index `host` 1-based.
pub enum Constraint<'a> {
    KSubtree(usize),
    Steiner(&'a [usize]),
    Conflicts(&'a [(usize, usize)]),
    DegreeBound(usize),
}

pub fn satisfies(n: usize, host: &[(usize, usize)], labels: &[usize], c: &Constraint) -> bool {
    let mut distinct = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != labels.len() || labels.iter().any(|&l| l == 0 || l > host.len()) {
        return false;
    }
    let edges: Edges = labels.iter().map(|&l| host[l - 1]).collect();
    let touched: BTreeSet<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    match c {
        Constraint::KSubtree(k) => {
            if *k == 1 {
                return edges.is_empty();
            }
            touched.len() == *k && is_tree(n, &edges, false)
        }
        Constraint::Steiner(terminals) => {
            if !is_tree(n, &edges, false) || !terminals.iter().all(|t| touched.contains(t)) {
                return false;
            }
            // every leaf must be a terminal, otherwise the tree is not pruned
            let deg = degrees(n, &edges);
            touched.iter().all(|&v| deg[v] != 1 || terminals.contains(&v))
        }
        Constraint::Conflicts(pairs) => {
            is_tree(n, &edges, true) && pairs.iter().all(|(a, b)| !(labels.contains(a) && labels.contains(b)))
        }
        Constraint::DegreeBound(k) => is_tree(n, &edges, true) && degrees(n, &edges).iter().all(|d| d <= k),
    }
}
