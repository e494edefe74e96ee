//! C ABI for `densetree`.
//!
//! Graphs and results are opaque handles created by `dt_*` constructors and
//! released by the matching `*_free` function. Every fallible call returns a
//! [`DtStatus`]; on failure `dt_last_error_message` describes the problem for
//! the calling thread. Strings returned through out-parameters are owned by
//! the caller and must be released with [`dt_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use densetree::ga::{GaConfig, Model, SolveResult};
use densetree::graph::{load_graph, EdgeSelection, Graph, GraphFormat};
use densetree::metrics::{evaluate, ObjectiveSpec, Sense};
use densetree::peeling::{peel, PeelMode};
use densetree::spanning::spanning_tree_count;
use densetree::tree::{decode_tree, Decoded};
use densetree::variants::{solve_variant, VariantKind, VariantSpec};
use densetree::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidGraph = 4,
    Disconnected = 5,
    InvalidArgument = 6,
    TooManyTrees = 7,
    NoFeasible = 8,
    Io = 9,
    Panic = 10,
}

/// Opaque graph handle.
pub struct DtGraph(Graph);

/// Opaque search result handle.
pub struct DtResult(SolveResult);

/// Search settings. Obtain defaults from [`dt_config_default`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct DtConfig {
    /// 1: direct edge set, 2: Kruskal-decoded.
    pub model: u8,
    pub population_size: usize,
    pub max_generations: usize,
    pub stall_generations: usize,
    pub tournament_size: usize,
    pub crossover_rate: f64,
    /// Per-gene mutation probability; zero or negative selects 1 / length.
    pub mutation_rate: f64,
    pub elitism_count: usize,
    pub alpha: f64,
    pub seed: u64,
    /// Worker threads; zero uses the global pool.
    pub threads: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DtPeelMode {
    Nodes = 0,
    Edges = 1,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(DtStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } | Error::SelfLoop { .. } | Error::DuplicateEdge { .. } => DtStatus::Parse,
            Error::EmptyGraph | Error::VertexOutOfRange { .. } | Error::InvalidWeight(_) => DtStatus::InvalidGraph,
            Error::Disconnected => DtStatus::Disconnected,
            Error::TooManyTrees { .. } => DtStatus::TooManyTrees,
            Error::NoFeasible => DtStatus::NoFeasible,
            Error::Io(_) => DtStatus::Io,
            Error::SelectionSize { .. }
            | Error::InvalidSelection(_)
            | Error::UnrealizableDegrees(_)
            | Error::LengthMismatch { .. }
            | Error::DepthExceeded { .. }
            | Error::InvalidConfig(_)
            | Error::InvalidObjective(_)
            | Error::InvalidVariant(_)
            | Error::InvalidGenerator(_) => DtStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = c);
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> DtStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_last_error("");
            DtStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            DtStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(DtStatus::NullArgument, "null pointer argument".into())
}

unsafe fn borrow<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(DtStatus::InvalidUtf8, "string is not valid UTF-8".into()))
}

unsafe fn objective(kind: *const c_char, sense: *const c_char) -> Result<ObjectiveSpec, Failure> {
    let sense: Sense = text(sense)?.parse()?;
    Ok(ObjectiveSpec::parse(text(kind)?, sense)?)
}

unsafe fn put<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior NUL").into_raw()
}

fn ga_config(c: &DtConfig) -> Result<GaConfig, Failure> {
    let cfg = GaConfig {
        model: Model::try_from(c.model)?,
        population_size: c.population_size,
        max_generations: c.max_generations,
        stall_generations: c.stall_generations,
        tournament_size: c.tournament_size,
        crossover_rate: c.crossover_rate,
        mutation_rate: (c.mutation_rate > 0.0).then_some(c.mutation_rate),
        elitism_count: c.elitism_count,
        alpha: c.alpha,
        seed: c.seed,
        threads: (c.threads > 0).then_some(c.threads),
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next `dt_*` call on the same thread.
#[no_mangle]
pub extern "C" fn dt_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[no_mangle]
pub extern "C" fn dt_config_default() -> DtConfig {
    let d = GaConfig::default();
    DtConfig {
        model: d.model.into(),
        population_size: d.population_size,
        max_generations: d.max_generations,
        stall_generations: d.stall_generations,
        tournament_size: d.tournament_size,
        crossover_rate: d.crossover_rate,
        mutation_rate: 0.0,
        elitism_count: d.elitism_count,
        alpha: d.alpha,
        seed: d.seed,
        threads: 0,
    }
}

unsafe fn graph_from(text_ptr: *const c_char, format: GraphFormat, out: *mut *mut DtGraph) -> DtStatus {
    guard(|| {
        let g = load_graph(text(text_ptr)?.as_bytes(), format)?;
        put(out, Box::into_raw(Box::new(DtGraph(g))))
    })
}

/// Parses an edge list (`u v [w]` per line, `#` comments).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn dt_graph_from_edge_list(text: *const c_char, out: *mut *mut DtGraph) -> DtStatus {
    graph_from(text, GraphFormat::EdgeList, out)
}

/// Parses a symmetric adjacency matrix in CSV form.
///
/// # Safety
/// As [`dt_graph_from_edge_list`].
#[no_mangle]
pub unsafe extern "C" fn dt_graph_from_adjacency_csv(text: *const c_char, out: *mut *mut DtGraph) -> DtStatus {
    graph_from(text, GraphFormat::AdjacencyCsv, out)
}

/// # Safety
/// `g` must come from a `dt_graph_from_*` call and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dt_graph_free(g: *mut DtGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live graph handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn dt_graph_vertex_count(g: *const DtGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// # Safety
/// `g` must be a live graph handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn dt_graph_edge_count(g: *const DtGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Number of spanning trees as a decimal string.
///
/// # Safety
/// `g` must be a live graph handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_spanning_tree_count(g: *const DtGraph, out: *mut *mut c_char) -> DtStatus {
    guard(|| {
        let g = borrow(g)?;
        put(out, to_c_string(spanning_tree_count(&g.0).to_string()))
    })
}

/// Genetic search for the objective `kind` (`spow:2`, `wiener`, ...) under
/// `sense` (`min` or `max`). A null `config` uses the defaults.
///
/// # Safety
/// Pointers must be valid; `kind` and `sense` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn dt_solve(
    g: *const DtGraph,
    kind: *const c_char,
    sense: *const c_char,
    config: *const DtConfig,
    out: *mut *mut DtResult,
) -> DtStatus {
    guard(|| {
        let g = borrow(g)?;
        let spec = objective(kind, sense)?;
        let cfg = config_or_default(config)?;
        let r = densetree::ga::solve(&g.0, &spec, &cfg)?;
        put(out, Box::into_raw(Box::new(DtResult(r))))
    })
}

/// Exhaustive optimum; fails with `TooManyTrees` above `cap` spanning trees.
///
/// # Safety
/// As [`dt_solve`].
#[no_mangle]
pub unsafe extern "C" fn dt_solve_exact(
    g: *const DtGraph,
    kind: *const c_char,
    sense: *const c_char,
    cap: u64,
    out: *mut *mut DtResult,
) -> DtStatus {
    guard(|| {
        let g = borrow(g)?;
        let spec = objective(kind, sense)?;
        let r = densetree::ga::solve_exact(&g.0, &spec, cap)?;
        put(out, Box::into_raw(Box::new(DtResult(r))))
    })
}

/// Constrained search; `variant` uses the CLI syntax, e.g. `degree-bound:3`.
///
/// # Safety
/// As [`dt_solve`]; `variant` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn dt_solve_variant(
    g: *const DtGraph,
    kind: *const c_char,
    sense: *const c_char,
    variant: *const c_char,
    config: *const DtConfig,
    out: *mut *mut DtResult,
) -> DtStatus {
    guard(|| {
        let g = borrow(g)?;
        let spec = objective(kind, sense)?;
        let cfg = config_or_default(config)?;
        let v = VariantSpec::new(VariantKind::parse(text(variant)?, &g.0)?, spec);
        let r = solve_variant(&g.0, &v, &cfg)?;
        put(out, Box::into_raw(Box::new(DtResult(r))))
    })
}

unsafe fn config_or_default(config: *const DtConfig) -> Result<GaConfig, Failure> {
    match config.as_ref() {
        Some(c) => ga_config(c),
        None => Ok(GaConfig::default()),
    }
}

/// Raw objective value of the best tree, NaN when none was feasible.
///
/// # Safety
/// `r` must be a live result handle.
#[no_mangle]
pub unsafe extern "C" fn dt_result_value(r: *const DtResult) -> f64 {
    r.as_ref().map_or(f64::NAN, |r| r.0.best_value)
}

/// # Safety
/// `r` must be a live result handle or null (which yields false).
#[no_mangle]
pub unsafe extern "C" fn dt_result_feasible(r: *const DtResult) -> bool {
    r.as_ref().is_some_and(|r| r.0.feasible)
}

/// # Safety
/// `r` must be a live result handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn dt_result_generations(r: *const DtResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.generations_run)
}

/// # Safety
/// `r` must be a live result handle or null (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn dt_result_label_count(r: *const DtResult) -> usize {
    r.as_ref().map_or(0, |r| r.0.best_selection.len())
}

/// Copies up to `len` tree edge labels, ascending, into `buf` and returns the
/// number copied.
///
/// # Safety
/// `r` must be a live result handle and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn dt_result_labels(r: *const DtResult, buf: *mut usize, len: usize) -> usize {
    let (Some(r), false) = (r.as_ref(), buf.is_null()) else {
        return 0;
    };
    let labels = r.0.best_selection.sorted();
    let n = labels.len().min(len);
    ptr::copy_nonoverlapping(labels.as_ptr(), buf, n);
    n
}

/// Result as JSON (selection, value, generations, evaluations, history).
///
/// # Safety
/// `r` must be a live result handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn dt_result_to_json(r: *const DtResult, out: *mut *mut c_char) -> DtStatus {
    guard(|| {
        let r = borrow(r)?;
        let json = result_json(&r.0);
        put(out, to_c_string(json))
    })
}

fn result_json(r: &SolveResult) -> String {
    densetree::report::Report {
        schema_version: densetree::report::SCHEMA_VERSION,
        command: "ffi".into(),
        objective: None,
        sense: None,
        variant: None,
        value: r.feasible.then_some(r.best_value),
        feasible: r.feasible,
        edge_labels: r.best_selection.sorted(),
        edges: Vec::new(),
        generations: r.generations_run,
        evaluations: r.evaluations,
        wall_time_ms: 0,
        seed: None,
        model: None,
        config: None,
        peeling: None,
    }
    .to_json()
}

/// # Safety
/// `r` must come from a `dt_solve*` call and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dt_result_free(r: *mut DtResult) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Objective value of the spanning tree made of `labels`.
///
/// # Safety
/// `labels` must be valid for `len` reads; other pointers as [`dt_solve`].
#[no_mangle]
pub unsafe extern "C" fn dt_evaluate(
    g: *const DtGraph,
    labels: *const usize,
    len: usize,
    kind: *const c_char,
    sense: *const c_char,
    out: *mut f64,
) -> DtStatus {
    guard(|| {
        let g = borrow(g)?;
        if labels.is_null() && len > 0 {
            return Err(null());
        }
        let labels = if len == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(labels, len)
        };
        let spec = objective(kind, sense)?;
        let sel = EdgeSelection::new(labels.to_vec())?;
        let depth = spec.required_depth(g.0.vertex_count());
        let tree = match decode_tree(&g.0, &sel, depth)? {
            Decoded::Tree(t) => t,
            Decoded::Infeasible { components } => {
                return Err(Failure(
                    DtStatus::InvalidArgument,
                    format!("labels do not form a spanning tree ({components} components)"),
                ))
            }
        };
        put(out, evaluate(&tree, &spec)?)
    })
}

/// Recursive peeling; writes the report as JSON to `out`.
///
/// # Safety
/// As [`dt_solve`].
#[no_mangle]
pub unsafe extern "C" fn dt_peel(
    g: *const DtGraph,
    kind: *const c_char,
    sense: *const c_char,
    mode: DtPeelMode,
    config: *const DtConfig,
    out: *mut *mut c_char,
) -> DtStatus {
    guard(|| {
        let g = borrow(g)?;
        let spec = objective(kind, sense)?;
        let cfg = config_or_default(config)?;
        let mode = match mode {
            DtPeelMode::Nodes => PeelMode::Nodes,
            DtPeelMode::Edges => PeelMode::Edges,
        };
        let report = peel(&g.0, &spec, &cfg, mode)?;
        let json = serde_json::to_string(&report).expect("reports serialize");
        put(out, to_c_string(json))
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn dt_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
