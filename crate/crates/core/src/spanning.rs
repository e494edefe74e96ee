//! Kruskal decoding, random spanning trees, exhaustive enumeration and the
//! matrix-tree count.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{EdgeSelection, Graph};
use crate::unionfind::UnionFind;

/// Default refusal threshold for [`enumerate_spanning_trees`].
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KruskalResult {
    /// Accepted labels in acceptance order.
    pub tree_labels: Vec<usize>,
    pub component_count: usize,
    pub is_spanning_tree: bool,
}

/// Kruskal restricted to the selected edges. Edges are taken by ascending
/// weight, ties broken by position in the chromosome, and kept whenever they
/// join two components. The result is the maximal forest of the selection.
pub fn kruskal_decode(g: &Graph, sel: &EdgeSelection) -> Result<KruskalResult> {
    sel.check_range(g)?;
    let mut order: Vec<usize> = sel.labels().to_vec();
    // stable: equal weights keep chromosome order
    order.sort_by(|&a, &b| g.edge(a).weight.total_cmp(&g.edge(b).weight));
    Ok(kruskal_in_order(g, &order))
}

fn kruskal_in_order(g: &Graph, order: &[usize]) -> KruskalResult {
    let n = g.vertex_count();
    let mut uf = UnionFind::new(n);
    let mut tree_labels = Vec::with_capacity(n.saturating_sub(1));
    for &l in order {
        let e = g.edge(l);
        if uf.union(e.u, e.v) {
            tree_labels.push(l);
            if tree_labels.len() + 1 == n {
                break;
            }
        }
    }
    let component_count = uf.count();
    KruskalResult {
        is_spanning_tree: component_count == 1,
        tree_labels,
        component_count,
    }
}

/// A spanning tree obtained by running union-find over a uniformly shuffled
/// edge order (weights ignored). Every spanning tree has positive probability,
/// though the distribution is not uniform.
pub fn random_spanning_tree<R: Rng + ?Sized>(g: &Graph, rng: &mut R) -> Result<EdgeSelection> {
    let mut order: Vec<usize> = (1..=g.edge_count()).collect();
    order.shuffle(rng);
    let result = kruskal_in_order(g, &order);
    if !result.is_spanning_tree {
        return Err(Error::Disconnected);
    }
    Ok(EdgeSelection::from_vec_unchecked(result.tree_labels))
}

/// Number of spanning trees by the matrix-tree theorem: the determinant of the
/// Laplacian with the first row and column removed, computed with fraction-free
/// (Bareiss) elimination over the integers.
pub fn spanning_tree_count(g: &Graph) -> BigUint {
    let n = g.vertex_count();
    if n == 0 {
        return BigUint::zero();
    }
    if n == 1 {
        return BigUint::from(1u32);
    }
    let m = n - 1;
    let mut a = vec![vec![BigInt::zero(); m]; m];
    for e in g.edges() {
        let (u, v) = (e.u, e.v);
        if u > 0 {
            a[u - 1][u - 1] += 1;
        }
        if v > 0 {
            a[v - 1][v - 1] += 1;
        }
        if u > 0 && v > 0 {
            a[u - 1][v - 1] -= 1;
            a[v - 1][u - 1] -= 1;
        }
    }
    let det = bareiss_determinant(a);
    match det.sign() {
        Sign::Minus => unreachable!("Laplacian minors are nonnegative"),
        _ => det.magnitude().clone(),
    }
}

fn bareiss_determinant(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let m = a.len();
    let mut sign = 1i32;
    let mut prev = BigInt::from(1);
    for k in 0..m {
        if a[k][k].is_zero() {
            match (k + 1..m).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = num / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = a[m - 1][m - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Every spanning tree of `g` exactly once, after checking the count against
/// `cap`.
pub fn enumerate_spanning_trees(g: &Graph, cap: u64) -> Result<SpanningTrees<'_>> {
    let count = spanning_tree_count(g);
    if count > BigUint::from(cap) {
        return Err(Error::TooManyTrees { count, cap });
    }
    Ok(SpanningTrees::new(g, count.to_u64().unwrap_or(0)))
}

/// Depth-first include/exclude search over edges in label order. A branch is
/// only opened when it can still complete to a spanning tree, so every leaf
/// of the search is a tree.
pub struct SpanningTrees<'g> {
    g: &'g Graph,
    stack: Vec<(usize, Vec<usize>)>,
    remaining: u64,
}

impl<'g> SpanningTrees<'g> {
    fn new(g: &'g Graph, count: u64) -> Self {
        let stack = if count > 0 { vec![(0, Vec::new())] } else { Vec::new() };
        SpanningTrees {
            g,
            stack,
            remaining: count,
        }
    }

    fn union_find_of(&self, chosen: &[usize]) -> UnionFind {
        let mut uf = UnionFind::new(self.g.vertex_count());
        for &l in chosen {
            let e = self.g.edge(l);
            uf.union(e.u, e.v);
        }
        uf
    }

    /// Whether `chosen` plus the edges from position `from` still connect the graph.
    fn can_complete(&self, chosen: &[usize], from: usize) -> bool {
        let mut uf = self.union_find_of(chosen);
        for e in &self.g.edges()[from..] {
            uf.union(e.u, e.v);
            if uf.count() == 1 {
                return true;
            }
        }
        uf.count() == 1
    }
}

impl Iterator for SpanningTrees<'_> {
    type Item = EdgeSelection;

    fn next(&mut self) -> Option<EdgeSelection> {
        let target = self.g.vertex_count().saturating_sub(1);
        while let Some((pos, chosen)) = self.stack.pop() {
            if chosen.len() == target {
                self.remaining = self.remaining.saturating_sub(1);
                return Some(EdgeSelection::from_vec_unchecked(chosen));
            }
            if pos >= self.g.edge_count() {
                continue;
            }
            if self.can_complete(&chosen, pos + 1) {
                self.stack.push((pos + 1, chosen.clone()));
            }
            let e = self.g.edge(pos + 1);
            let mut uf = self.union_find_of(&chosen);
            if uf.union(e.u, e.v) {
                let mut with = chosen;
                with.push(pos + 1);
                self.stack.push((pos + 1, with));
            }
        }
        None
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = self.remaining as usize;
        (r, Some(r))
    }
}
