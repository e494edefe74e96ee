//! Genetic algorithm over edge-label chromosomes, plus the exhaustive solver.
//!
//! Model 1 reads a chromosome of `N - 1` distinct labels directly as a
//! candidate spanning tree. Model 2 reads a longer label set and decodes it with
//! Kruskal's algorithm, so only the decoded tree is ever evaluated.
//!
//! Fitness follows the minimization convention: maximized objectives are
//! negated, and structurally infeasible individuals receive a penalty that
//! exceeds every feasible value, graded by how far they are from feasible.
//!
//! Randomness is drawn from a single seeded generator in a fixed sequential
//! order. Only fitness evaluation runs in parallel, and it is pure, so results
//! do not depend on the worker count.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeSelection, Graph};
use crate::metrics::{evaluate, ObjectiveSpec};
use crate::spanning::{enumerate_spanning_trees, kruskal_decode, random_spanning_tree};
use crate::tree::{tree_from_labels, TreeView};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Model {
    /// Chromosome is the tree itself.
    EdgeSet = 1,
    /// Chromosome is decoded by Kruskal's algorithm.
    Kruskal = 2,
}

impl From<Model> for u8 {
    fn from(m: Model) -> u8 {
        match m {
            Model::EdgeSet => 1,
            Model::Kruskal => 2,
        }
    }
}

impl TryFrom<u8> for Model {
    type Error = Error;

    fn try_from(v: u8) -> Result<Model> {
        match v {
            1 => Ok(Model::EdgeSet),
            2 => Ok(Model::Kruskal),
            other => Err(Error::InvalidConfig(format!("model must be 1 or 2, got {other}"))),
        }
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Model> {
        let v: u8 = s
            .trim()
            .parse()
            .map_err(|_| Error::InvalidConfig(format!("model must be 1 or 2, got `{s}`")))?;
        Model::try_from(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaConfig {
    pub model: Model,
    pub population_size: usize,
    pub max_generations: usize,
    pub stall_generations: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability; `None` means `1 / chromosome length`.
    pub mutation_rate: Option<f64>,
    pub elitism_count: usize,
    /// Model 2 chromosome length factor: `min(|E|, ceil(alpha (N - 1)))`.
    pub alpha: f64,
    pub seed: u64,
    /// Worker threads for fitness evaluation. Never affects results.
    #[serde(skip)]
    pub threads: Option<usize>,
}

impl Default for GaConfig {
    fn default() -> Self {
        GaConfig {
            model: Model::Kruskal,
            population_size: 200,
            max_generations: 500,
            stall_generations: 50,
            tournament_size: 3,
            crossover_rate: 0.9,
            mutation_rate: None,
            elitism_count: 2,
            alpha: 2.0,
            seed: 0,
            threads: None,
        }
    }
}

impl GaConfig {
    pub fn with_model(model: Model) -> Self {
        GaConfig {
            model,
            ..GaConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.to_string()));
        if self.population_size == 0 {
            return bad("population_size must be positive");
        }
        if self.max_generations == 0 || self.stall_generations == 0 {
            return bad("generation limits must be positive");
        }
        if self.tournament_size == 0 {
            return bad("tournament_size must be positive");
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad("crossover_rate must lie in [0, 1]");
        }
        if let Some(r) = self.mutation_rate {
            if !(0.0..=1.0).contains(&r) {
                return bad("mutation_rate must lie in [0, 1]");
            }
        }
        if self.elitism_count >= self.population_size {
            return bad("elitism_count must be smaller than population_size");
        }
        if !self.alpha.is_finite() || self.alpha < 1.0 {
            return bad("alpha must be at least 1");
        }
        if self.threads == Some(0) {
            return bad("threads must be positive");
        }
        Ok(())
    }

    /// Chromosome length used on `g` under this configuration.
    pub fn chromosome_len(&self, g: &Graph) -> usize {
        let tree_len = g.vertex_count().saturating_sub(1);
        match self.model {
            Model::EdgeSet => tree_len,
            Model::Kruskal => {
                let scaled = (self.alpha * tree_len as f64).ceil() as usize;
                scaled.min(g.edge_count()).max(tree_len)
            }
        }
    }

    /// Applies `key = value` lines on top of `self`. `#` starts a comment.
    pub fn apply_key_values(&mut self, text: &str) -> Result<()> {
        for (idx, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                message: "expected `key = value`".into(),
            })?;
            self.set(key.trim(), value.trim()).map_err(|e| Error::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("bad value `{value}` for `{key}`")))
        }
        match key {
            "model" => self.model = value.parse()?,
            "population_size" | "pop" => self.population_size = num(key, value)?,
            "max_generations" | "gens" => self.max_generations = num(key, value)?,
            "stall_generations" | "stall" => self.stall_generations = num(key, value)?,
            "tournament_size" => self.tournament_size = num(key, value)?,
            "crossover_rate" => self.crossover_rate = num(key, value)?,
            "mutation_rate" => self.mutation_rate = Some(num(key, value)?),
            "elitism_count" | "elitism" => self.elitism_count = num(key, value)?,
            "alpha" => self.alpha = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "threads" => self.threads = Some(num(key, value)?),
            other => return Err(Error::InvalidConfig(format!("unknown key `{other}`"))),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    /// Labels of the best decoded tree.
    pub best_selection: EdgeSelection,
    /// Raw objective value of the best tree (NaN when nothing was feasible).
    pub best_value: f64,
    pub generations_run: usize,
    pub evaluations: u64,
    /// Best-so-far fitness after each generation, generation 0 first.
    pub history: Vec<f64>,
    pub feasible: bool,
}

/// Result of evaluating one chromosome.
#[derive(Debug, Clone)]
pub(crate) struct Evaluation {
    pub fitness: f64,
    pub feasible: bool,
    pub raw: f64,
    /// Labels of the decoded structure (or the chromosome when undecodable).
    pub labels: Vec<usize>,
}

impl Evaluation {
    pub fn feasible(spec: &ObjectiveSpec, raw: f64, labels: Vec<usize>) -> Self {
        Evaluation {
            fitness: spec.sense.normalize(raw),
            feasible: true,
            raw,
            labels,
        }
    }

    pub fn penalized(base: f64, steps: usize, labels: Vec<usize>) -> Self {
        Evaluation {
            fitness: penalty(base, steps),
            feasible: false,
            raw: f64::NAN,
            labels,
        }
    }
}

/// `base + steps`, with the step widened when `base` is so large that adding 1
/// would be lost to rounding.
pub(crate) fn penalty(base: f64, steps: usize) -> f64 {
    let step = (base * f64::EPSILON * 2.0).max(1.0);
    base + steps as f64 * step
}

/// Search space the generational loop runs over.
pub(crate) trait Problem: Sync {
    /// Labels are drawn from `1..=label_count()`.
    fn label_count(&self) -> usize;
    fn chromosome_len(&self) -> usize;
    fn initial(&self, rng: &mut ChaCha8Rng) -> Vec<usize>;
    fn evaluate(&self, genes: &[usize]) -> Evaluation;
}

/// Decodes a chromosome into a spanning tree under `model`, or returns the
/// number of components of what was selected.
pub(crate) fn decode_spanning(
    g: &Graph,
    genes: &[usize],
    model: Model,
    i_max: usize,
) -> std::result::Result<TreeView, usize> {
    match model {
        Model::EdgeSet => {
            let mut uf = UnionFind::new(g.vertex_count());
            for &l in genes {
                let e = g.edge(l);
                uf.union(e.u, e.v);
            }
            if uf.count() == 1 && genes.len() + 1 == g.vertex_count() {
                Ok(tree_from_labels(g, genes, i_max))
            } else {
                Err(uf.count())
            }
        }
        Model::Kruskal => {
            let sel = EdgeSelection::from_vec_unchecked(genes.to_vec());
            let k = kruskal_decode(g, &sel).expect("genes within label range");
            if k.is_spanning_tree {
                Ok(tree_from_labels(g, &k.tree_labels, i_max))
            } else {
                Err(k.component_count)
            }
        }
    }
}

/// Initial chromosome: a random spanning tree, padded with random unused labels
/// up to `len`.
pub(crate) fn seeded_chromosome(g: &Graph, len: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut genes = random_spanning_tree(g, rng)
        .expect("solver inputs are connected")
        .into_inner();
    pad_with_unused(&mut genes, len, g.edge_count(), rng);
    genes
}

pub(crate) fn pad_with_unused(genes: &mut Vec<usize>, len: usize, label_count: usize, rng: &mut ChaCha8Rng) {
    if genes.len() >= len {
        return;
    }
    let mut used = vec![false; label_count + 1];
    for &l in genes.iter() {
        used[l] = true;
    }
    let mut pool: Vec<usize> = (1..=label_count).filter(|&l| !used[l]).collect();
    pool.shuffle(rng);
    let missing = len - genes.len();
    genes.extend(pool.into_iter().take(missing));
}

struct SpanningProblem<'a> {
    g: &'a Graph,
    spec: &'a ObjectiveSpec,
    model: Model,
    len: usize,
    depth: usize,
    base: f64,
}

impl Problem for SpanningProblem<'_> {
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
        match decode_spanning(self.g, genes, self.model, self.depth) {
            Ok(tree) => {
                let raw = evaluate(&tree, self.spec).expect("depth matches objective");
                Evaluation::feasible(self.spec, raw, tree.edge_labels().to_vec())
            }
            Err(components) => Evaluation::penalized(self.base, components - 1, genes.to_vec()),
        }
    }
}

/// Sense-normalized fitness of one chromosome. Model 1 chromosomes must have
/// `N - 1` labels; Model 2 chromosomes any nonzero length up to `|E|`.
pub fn fitness(g: &Graph, chromosome: &EdgeSelection, spec: &ObjectiveSpec, model: Model) -> Result<f64> {
    let n = g.vertex_count();
    match model {
        Model::EdgeSet if chromosome.len() + 1 != n => {
            return Err(Error::SelectionSize {
                expected: n.saturating_sub(1),
                found: chromosome.len(),
            })
        }
        Model::Kruskal if chromosome.is_empty() || chromosome.len() > g.edge_count() => {
            return Err(Error::SelectionSize {
                expected: n.saturating_sub(1),
                found: chromosome.len(),
            })
        }
        _ => {}
    }
    chromosome.check_range(g)?;
    let problem = SpanningProblem {
        g,
        spec,
        model,
        len: chromosome.len(),
        depth: spec.required_depth(n),
        base: spec.penalty_base(n),
    };
    Ok(problem.evaluate(chromosome.labels()).fitness)
}

/// Runs the genetic algorithm for `spec` on `g`.
pub fn solve(g: &Graph, spec: &ObjectiveSpec, cfg: &GaConfig) -> Result<SolveResult> {
    cfg.validate()?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let problem = SpanningProblem {
        g,
        spec,
        model: cfg.model,
        len: cfg.chromosome_len(g),
        depth: spec.required_depth(n),
        base: spec.penalty_base(n),
    };
    if g.edge_count() + 1 == n {
        // the graph is its own unique spanning tree
        let all: Vec<usize> = (1..=g.edge_count()).collect();
        let eval = problem.evaluate(&all);
        return Ok(SolveResult {
            best_selection: EdgeSelection::from_vec_unchecked(eval.labels),
            best_value: eval.raw,
            generations_run: 0,
            evaluations: 1,
            history: vec![eval.fitness],
            feasible: true,
        });
    }
    run(&problem, cfg)
}

/// The generational loop shared by every solver.
pub(crate) fn run<P: Problem>(problem: &P, cfg: &GaConfig) -> Result<SolveResult> {
    cfg.validate()?;
    let pool = match cfg.threads {
        Some(t) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::InvalidConfig(e.to_string()))?,
        ),
        None => None,
    };
    let eval_all = |pop: &[Vec<usize>]| -> Vec<Evaluation> {
        let work = || pop.par_iter().map(|genes| problem.evaluate(genes)).collect();
        match &pool {
            Some(p) => p.install(work),
            None => work(),
        }
    };

    let len = problem.chromosome_len();
    let label_count = problem.label_count();
    let mutation_rate = cfg
        .mutation_rate
        .unwrap_or(if len == 0 { 0.0 } else { 1.0 / len as f64 });
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);

    let mut population: Vec<Vec<usize>> = (0..cfg.population_size).map(|_| problem.initial(&mut rng)).collect();
    let mut evals = eval_all(&population);
    let mut evaluations = evals.len() as u64;

    let mut best = best_of(&evals).clone();
    let mut history = vec![best.fitness];
    let mut stall = 0;
    let mut generations_run = 0;

    for _ in 0..cfg.max_generations {
        let mut ranked: Vec<usize> = (0..population.len()).collect();
        ranked.sort_by(|&a, &b| evals[a].fitness.total_cmp(&evals[b].fitness).then(a.cmp(&b)));

        let mut next: Vec<Vec<usize>> = Vec::with_capacity(cfg.population_size);
        let mut next_evals: Vec<Option<Evaluation>> = Vec::with_capacity(cfg.population_size);
        for &i in ranked.iter().take(cfg.elitism_count) {
            next.push(population[i].clone());
            next_evals.push(Some(evals[i].clone()));
        }
        while next.len() < cfg.population_size {
            let a = tournament(&evals, cfg.tournament_size, &mut rng);
            let b = tournament(&evals, cfg.tournament_size, &mut rng);
            let mut child = if rng.gen::<f64>() < cfg.crossover_rate {
                crossover(&population[a], &population[b], len, label_count, &mut rng)
            } else {
                population[a].clone()
            };
            mutate(&mut child, mutation_rate, label_count, &mut rng);
            next.push(child);
            next_evals.push(None);
        }

        let fresh: Vec<Vec<usize>> = next
            .iter()
            .zip(&next_evals)
            .filter(|(_, e)| e.is_none())
            .map(|(g, _)| g.clone())
            .collect();
        let mut fresh_evals = eval_all(&fresh).into_iter();
        evaluations += fresh.len() as u64;
        evals = next_evals
            .into_iter()
            .map(|e| e.unwrap_or_else(|| fresh_evals.next().expect("one evaluation per child")))
            .collect();
        population = next;
        generations_run += 1;

        let gen_best = best_of(&evals);
        if gen_best.fitness < best.fitness {
            best = gen_best.clone();
            stall = 0;
        } else {
            stall += 1;
        }
        history.push(best.fitness);
        if stall >= cfg.stall_generations {
            break;
        }
    }

    Ok(SolveResult {
        best_selection: EdgeSelection::from_vec_unchecked(best.labels),
        best_value: best.raw,
        generations_run,
        evaluations,
        history,
        feasible: best.feasible,
    })
}

fn best_of(evals: &[Evaluation]) -> &Evaluation {
    let mut best = &evals[0];
    for e in &evals[1..] {
        if e.fitness < best.fitness {
            best = e;
        }
    }
    best
}

fn tournament(evals: &[Evaluation], size: usize, rng: &mut ChaCha8Rng) -> usize {
    let mut winner = rng.gen_range(0..evals.len());
    for _ in 1..size {
        let c = rng.gen_range(0..evals.len());
        if evals[c].fitness < evals[winner].fitness || (evals[c].fitness == evals[winner].fitness && c < winner) {
            winner = c;
        }
    }
    winner
}

/// Set crossover: genes shared by both parents are kept (in the first parent's
/// order), the rest of the child is drawn uniformly from the remaining genes of
/// either parent, and any shortfall is padded with random unused labels.
pub(crate) fn crossover(a: &[usize], b: &[usize], len: usize, label_count: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut in_b = vec![false; label_count + 1];
    for &l in b {
        in_b[l] = true;
    }
    let mut in_child = vec![false; label_count + 1];
    let mut child = Vec::with_capacity(len);
    let mut rest = Vec::new();
    for &l in a {
        if in_b[l] {
            child.push(l);
            in_child[l] = true;
        } else {
            rest.push(l);
        }
    }
    for &l in b {
        if !in_child[l] {
            rest.push(l);
        }
    }
    rest.shuffle(rng);
    for l in rest {
        if child.len() == len {
            break;
        }
        if !in_child[l] {
            in_child[l] = true;
            child.push(l);
        }
    }
    child.truncate(len);
    pad_with_unused(&mut child, len, label_count, rng);
    child
}

/// Each gene is replaced, with probability `rate`, by a uniformly random label
/// absent from the chromosome. When every label is already present the gene is
/// swapped with another position instead, which still changes Kruskal's order.
pub(crate) fn mutate(genes: &mut [usize], rate: f64, label_count: usize, rng: &mut ChaCha8Rng) {
    if genes.is_empty() || rate <= 0.0 {
        return;
    }
    let mut used = vec![false; label_count + 1];
    for &l in genes.iter() {
        used[l] = true;
    }
    let full = genes.len() >= label_count;
    for i in 0..genes.len() {
        if rng.gen::<f64>() >= rate {
            continue;
        }
        if full {
            let j = rng.gen_range(0..genes.len());
            genes.swap(i, j);
        } else {
            let mut l = rng.gen_range(1..=label_count);
            while used[l] {
                l = rng.gen_range(1..=label_count);
            }
            used[genes[i]] = false;
            used[l] = true;
            genes[i] = l;
        }
    }
}

/// Exhaustive optimum over every spanning tree of `g`.
pub fn solve_exact(g: &Graph, spec: &ObjectiveSpec, cap: u64) -> Result<SolveResult> {
    let depth = spec.required_depth(g.vertex_count());
    exact_over(g, cap, |sel| {
        let tree = tree_from_labels(g, sel.labels(), depth);
        let raw = evaluate(&tree, spec).expect("depth matches objective");
        Some(Evaluation::feasible(spec, raw, sel.labels().to_vec()))
    })
}

/// Best over all spanning trees for which `eval` returns a feasible evaluation.
pub(crate) fn exact_over<F>(g: &Graph, cap: u64, eval: F) -> Result<SolveResult>
where
    F: Fn(&EdgeSelection) -> Option<Evaluation>,
{
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let mut best: Option<Evaluation> = None;
    let mut evaluations = 0u64;
    for sel in enumerate_spanning_trees(g, cap)? {
        evaluations += 1;
        if let Some(e) = eval(&sel).filter(|e| e.feasible) {
            if best.as_ref().is_none_or(|b| e.fitness < b.fitness) {
                best = Some(e);
            }
        }
    }
    exact_result(best, evaluations)
}

pub(crate) fn exact_result(best: Option<Evaluation>, evaluations: u64) -> Result<SolveResult> {
    let best = best.ok_or(Error::NoFeasible)?;
    Ok(SolveResult {
        history: vec![best.fitness],
        best_selection: EdgeSelection::from_vec_unchecked(best.labels),
        best_value: best.raw,
        generations_run: 0,
        evaluations,
        feasible: true,
    })
}
