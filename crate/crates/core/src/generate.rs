//! Seeded random host graphs, optionally with a planted spanning star and
//! Hamiltonian path so that the extremal trees are known to be present.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GenFlags {
    pub connected: bool,
    /// Some vertex is adjacent to every other vertex.
    pub planted_star: bool,
    /// The edges of a Hamiltonian path are present.
    pub planted_path: bool,
}

/// Fewest edges the planted structures need on `n` vertices.
fn planted_edges(n: usize, flags: GenFlags) -> usize {
    match (flags.planted_star, flags.planted_path) {
        // the star center sits inside the path, sharing two edges with it
        (true, true) if n >= 3 => 2 * n - 4,
        (true, _) | (_, true) => n - 1,
        _ => 0,
    }
}

/// Random simple graph on vertices named `0..n` with exactly `m` edges, listed
/// in sorted order. Edges beyond the requested structures are uniform over the
/// remaining vertex pairs.
pub fn gen_random_graph(n: usize, m: usize, seed: u64, flags: GenFlags) -> Result<Graph> {
    let bad = |msg: String| Err(Error::InvalidGenerator(msg));
    if n == 0 {
        return bad("n must be positive".into());
    }
    let max = n * (n - 1) / 2;
    if m + 1 < n {
        return bad(format!("m = {m} is below n - 1 = {}", n - 1));
    }
    if m > max {
        return bad(format!("m = {m} exceeds the {max} pairs on {n} vertices"));
    }
    let need = planted_edges(n, flags);
    if m < need {
        return bad(format!("planted structures need {need} edges, m = {m}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: HashSet<(usize, usize)> = HashSet::with_capacity(m);
    let add = |a: usize, b: usize, set: &mut HashSet<(usize, usize)>| {
        set.insert((a.min(b), a.max(b)));
    };
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    if flags.planted_path {
        for w in order.windows(2) {
            add(w[0], w[1], &mut chosen);
        }
    }
    if flags.planted_star {
        let center = if flags.planted_path && n >= 3 {
            order[rng.gen_range(1..n - 1)]
        } else {
            order[0]
        };
        for v in (0..n).filter(|&v| v != center) {
            add(center, v, &mut chosen);
        }
    }
    if flags.connected && !flags.planted_path && !flags.planted_star {
        // random recursive tree over the shuffled order
        for i in 1..n {
            let parent = order[rng.gen_range(0..i)];
            add(order[i], parent, &mut chosen);
        }
    }

    let remaining = m - chosen.len();
    if remaining * 2 <= max - chosen.len() {
        while chosen.len() < m {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                add(a, b, &mut chosen);
            }
        }
    } else {
        let mut free: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|p| !chosen.contains(p))
            .collect();
        free.shuffle(&mut rng);
        chosen.extend(free.into_iter().take(remaining));
    }

    let mut pairs: Vec<(usize, usize)> = chosen.into_iter().collect();
    pairs.sort_unstable();
    Graph::from_pairs(n, &pairs)
}
