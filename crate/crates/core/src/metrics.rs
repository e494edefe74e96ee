//! Degree-based and distance-based objectives evaluated on trees.
//!
//! All functions return raw values. The optimization sense is applied by the
//! solvers, never here.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tree::TreeView;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectiveKind {
    /// C⟨j⟩ with one exponent per distance 1, 2, …
    CVector {
        j: Vec<f64>,
    },
    /// S_p, the sum of p-th powers of vertex degrees.
    PowerSum {
        p: f64,
    },
    Wiener,
    SubtreeCount,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    #[serde(rename = "min")]
    Minimize,
    #[serde(rename = "max")]
    Maximize,
}

impl Sense {
    /// Maps a raw value onto the minimization convention.
    pub fn normalize(self, raw: f64) -> f64 {
        match self {
            Sense::Minimize => raw,
            Sense::Maximize => -raw,
        }
    }
}

impl FromStr for Sense {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "min" | "minimize" => Ok(Sense::Minimize),
            "max" | "maximize" => Ok(Sense::Maximize),
            other => Err(Error::InvalidObjective(format!("unknown sense `{other}`"))),
        }
    }
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Minimize => "min",
            Sense::Maximize => "max",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveSpec {
    pub kind: ObjectiveKind,
    pub sense: Sense,
}

impl ObjectiveSpec {
    pub fn new(kind: ObjectiveKind, sense: Sense) -> Result<Self> {
        match &kind {
            ObjectiveKind::CVector { j } => {
                if j.is_empty() {
                    return Err(Error::InvalidObjective("cvec needs at least one exponent".into()));
                }
                if j.iter().any(|&x| !x.is_finite() || x < 0.0) {
                    return Err(Error::InvalidObjective("cvec exponents must be nonnegative".into()));
                }
            }
            ObjectiveKind::PowerSum { p } => {
                if !p.is_finite() || *p <= 0.0 {
                    return Err(Error::InvalidObjective("spow exponent must be positive".into()));
                }
            }
            ObjectiveKind::Wiener | ObjectiveKind::SubtreeCount => {}
        }
        Ok(ObjectiveSpec { kind, sense })
    }

    /// Parses `cvec:4,2,2,2`, `spow:2`, `spow:1/2`, `wiener` or `subtrees`.
    pub fn parse(kind: &str, sense: Sense) -> Result<Self> {
        ObjectiveSpec::new(kind.parse()?, sense)
    }

    pub fn minimize(kind: ObjectiveKind) -> Self {
        ObjectiveSpec::new(kind, Sense::Minimize).expect("valid objective")
    }

    pub fn maximize(kind: ObjectiveKind) -> Self {
        ObjectiveSpec::new(kind, Sense::Maximize).expect("valid objective")
    }

    /// Distance depth a tree of order `n` must carry for this objective.
    /// Depths past `n - 1` are allowed and simply hold no pairs.
    pub fn required_depth(&self, n: usize) -> usize {
        match &self.kind {
            ObjectiveKind::CVector { j } => j.len(),
            ObjectiveKind::PowerSum { .. } | ObjectiveKind::SubtreeCount => 1,
            ObjectiveKind::Wiener => n.saturating_sub(1).max(1),
        }
    }

    /// A value strictly larger than the absolute value of the objective on any
    /// tree of order `n`. Used as the base infeasibility penalty.
    pub fn penalty_base(&self, n: usize) -> f64 {
        let nf = n as f64;
        let max_deg = (n.saturating_sub(1)).max(1) as f64;
        match &self.kind {
            ObjectiveKind::CVector { j } => {
                let jmax = j.iter().copied().fold(0.0, f64::max);
                2.0 * nf * nf * max_deg.powf(jmax) + 1.0
            }
            ObjectiveKind::PowerSum { p } => 2.0 * nf * nf * max_deg.powf(*p) + 1.0,
            ObjectiveKind::Wiener => nf * nf * nf + 1.0,
            // the star maximizes the count at 2^(n-1) + n - 1
            ObjectiveKind::SubtreeCount => 2f64.powi(n.saturating_sub(1) as i32) + nf + 1.0,
        }
    }
}

impl FromStr for ObjectiveKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, tail) = match s.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (s, None),
        };
        match (head, tail) {
            ("wiener", None) => Ok(ObjectiveKind::Wiener),
            ("subtrees", None) => Ok(ObjectiveKind::SubtreeCount),
            ("spow", Some(p)) => Ok(ObjectiveKind::PowerSum { p: parse_real(p)? }),
            ("cvec", Some(list)) => {
                let j = list.split(',').map(parse_real).collect::<Result<Vec<_>>>()?;
                Ok(ObjectiveKind::CVector { j })
            }
            _ => Err(Error::InvalidObjective(format!("cannot parse `{s}`"))),
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveKind::CVector { j } => {
                let parts: Vec<String> = j.iter().map(|x| x.to_string()).collect();
                write!(f, "cvec:{}", parts.join(","))
            }
            ObjectiveKind::PowerSum { p } => write!(f, "spow:{p}"),
            ObjectiveKind::Wiener => f.write_str("wiener"),
            ObjectiveKind::SubtreeCount => f.write_str("subtrees"),
        }
    }
}

fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::InvalidObjective(format!("bad number `{s}`"));
    match s.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0.0 {
                return Err(bad());
            }
            Ok(num / den)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// `deg^j`, exact for integer exponents.
fn degree_power(deg: usize, j: f64) -> f64 {
    if j == 0.0 {
        1.0
    } else if j.fract() == 0.0 && j <= i32::MAX as f64 {
        (deg as f64).powi(j as i32)
    } else {
        (deg as f64).powf(j)
    }
}

/// C_{i,j}: over unordered pairs at distance `i`, the sum of `deg(u)^j + deg(v)^j`.
pub fn c_ij(t: &TreeView, i: usize, j: f64) -> Result<f64> {
    if t.order() == 1 {
        return Ok(0.0);
    }
    let pairs = t.dist_pairs(i)?;
    let deg = t.degrees();
    if j == 0.0 {
        return Ok(2.0 * pairs.len() as f64);
    }
    let powers: Vec<f64> = deg.iter().map(|&d| degree_power(d, j)).collect();
    Ok(pairs.iter().map(|&(u, v)| powers[u] + powers[v]).sum())
}

/// C⟨j⟩ = Σ_i C_{i, j_i}.
pub fn c_vector(t: &TreeView, j: &[f64]) -> Result<f64> {
    if t.order() == 1 {
        return Ok(0.0);
    }
    j.iter().enumerate().map(|(k, &jk)| c_ij(t, k + 1, jk)).sum()
}

/// S_p = Σ_v deg(v)^p.
pub fn power_sum(t: &TreeView, p: f64) -> f64 {
    if t.order() == 1 {
        return 0.0;
    }
    t.degrees().iter().map(|&d| degree_power(d, p)).sum()
}

/// Sum of distances over all unordered vertex pairs.
pub fn wiener(t: &TreeView) -> Result<f64> {
    let n = t.order();
    if n == 1 {
        return Ok(0.0);
    }
    if t.depth() < n - 1 {
        return Err(Error::DepthExceeded {
            requested: n - 1,
            available: t.depth(),
        });
    }
    let mut total: u64 = 0;
    for i in 1..n {
        total += i as u64 * t.pair_count(i)? as u64;
    }
    Ok(total as f64)
}

/// Number of nonempty subtrees, counted by topmost vertex: with the tree rooted
/// anywhere, `f(v) = Π_children (1 + f(c))` counts subtrees whose highest vertex
/// is `v`, and the total is `Σ_v f(v)`.
pub fn subtree_count(t: &TreeView) -> BigUint {
    let n = t.order();
    let adj = t.adjacency();
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    parent[0] = 0;
    let mut stack = vec![0];
    while let Some(x) = stack.pop() {
        order.push(x);
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                stack.push(y);
            }
        }
    }
    let mut f: Vec<BigUint> = vec![BigUint::one(); n];
    let mut total = BigUint::default();
    for &v in order.iter().rev() {
        total += &f[v];
        if v != 0 {
            let contribution = &f[v] + 1u32;
            let p = parent[v];
            f[p] *= contribution;
        }
    }
    total
}

/// Raw objective value of `spec` on `t`.
pub fn evaluate(t: &TreeView, spec: &ObjectiveSpec) -> Result<f64> {
    match &spec.kind {
        ObjectiveKind::CVector { j } => c_vector(t, j),
        ObjectiveKind::PowerSum { p } => Ok(power_sum(t, *p)),
        ObjectiveKind::Wiener => wiener(t),
        ObjectiveKind::SubtreeCount => Ok(subtree_count(t).to_f64().unwrap_or(f64::INFINITY)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> TreeView {
        let edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        TreeView::from_edges(n, &edges, n - 1).unwrap()
    }

    fn star(n: usize) -> TreeView {
        let edges: Vec<_> = (1..n).map(|i| (0, i)).collect();
        TreeView::from_edges(n, &edges, n - 1).unwrap()
    }

    #[test]
    fn c_ij_on_p3() {
        let t = path(3);
        assert_eq!(c_ij(&t, 1, 1.0).unwrap(), 6.0);
        assert_eq!(c_ij(&t, 2, 1.0).unwrap(), 2.0);
        assert_eq!(c_ij(&t, 1, 0.0).unwrap(), 4.0);
        assert!(c_ij(&t, 3, 1.0).is_err());
    }

    #[test]
    fn c_vector_on_p4() {
        let t = path(4);
        assert!(c_vector(&t, &[4.0, 2.0, 2.0, 2.0]).is_err());
        let t = path(4).with_depth(4);
        // degrees 1,2,2,1: C_{1,4} = 17 + 32 + 17, C_{2,2} = 5 + 5, C_{3,2} = 1 + 1
        assert_eq!(c_ij(&t, 1, 4.0).unwrap(), 66.0);
        assert_eq!(c_vector(&t, &[4.0, 2.0, 2.0, 2.0]).unwrap(), 78.0);
        assert_eq!(c_vector(&t, &[4.0, 2.0, 0.0, 0.0]).unwrap(), 78.0);
        assert_eq!(c_vector(&star(7), &[0.0]).unwrap(), 12.0);
    }

    #[test]
    fn power_sums_from_table() {
        assert_eq!(power_sum(&star(10), 2.0), 90.0);
        assert_eq!(power_sum(&star(10), 3.0), 738.0);
        assert_eq!(power_sum(&star(10), 0.5), 12.0);
        assert_eq!(power_sum(&path(10), 2.0), 34.0);
        assert_eq!(power_sum(&path(10), 3.0), 66.0);
        assert!((power_sum(&path(10), 0.5) - 13.3137).abs() < 1e-4);
    }

    #[test]
    fn wiener_values() {
        assert_eq!(wiener(&path(2)).unwrap(), 1.0);
        assert_eq!(wiener(&star(10)).unwrap(), 81.0);
        assert_eq!(wiener(&path(10)).unwrap(), 165.0);
        let shallow = path(5).with_depth(2);
        assert!(matches!(wiener(&shallow), Err(Error::DepthExceeded { .. })));
    }

    #[test]
    fn subtree_counts() {
        let single = TreeView::from_edges(1, &[], 0).unwrap();
        assert_eq!(subtree_count(&single), BigUint::from(1u32));
        assert_eq!(subtree_count(&star(4)), BigUint::from(11u32));
        assert_eq!(subtree_count(&path(4)), BigUint::from(10u32));
        // 2^(n-1) + n - 1 for stars
        assert_eq!(subtree_count(&star(70)), (BigUint::one() << 69usize) + 69u32);
    }

    #[test]
    fn single_vertex_objectives_are_zero() {
        let single = TreeView::from_edges(1, &[], 0).unwrap();
        assert_eq!(power_sum(&single, 2.0), 0.0);
        assert_eq!(wiener(&single).unwrap(), 0.0);
        assert_eq!(c_vector(&single, &[4.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn evaluate_dispatch() {
        let p = ObjectiveSpec::parse("spow:2", Sense::Minimize).unwrap();
        assert_eq!(evaluate(&path(10), &p).unwrap(), 34.0);
        let p = ObjectiveSpec::parse("spow:3", Sense::Maximize).unwrap();
        assert_eq!(evaluate(&star(10), &p).unwrap(), 738.0);
        let p = ObjectiveSpec::parse("spow:1/2", Sense::Maximize).unwrap();
        assert!((evaluate(&path(10), &p).unwrap() - 13.3137).abs() < 1e-4);
        let w = ObjectiveSpec::parse("wiener", Sense::Minimize).unwrap();
        assert!(evaluate(&path(10).with_depth(3), &w).is_err());
    }

    #[test]
    fn objective_parsing() {
        assert_eq!(
            "cvec:4,2,2,2".parse::<ObjectiveKind>().unwrap(),
            ObjectiveKind::CVector {
                j: vec![4.0, 2.0, 2.0, 2.0]
            }
        );
        assert_eq!(
            "spow:0.5".parse::<ObjectiveKind>().unwrap(),
            ObjectiveKind::PowerSum { p: 0.5 }
        );
        assert_eq!(
            "subtrees".parse::<ObjectiveKind>().unwrap(),
            ObjectiveKind::SubtreeCount
        );
        assert!("spow".parse::<ObjectiveKind>().is_err());
        assert!("cvec:".parse::<ObjectiveKind>().is_err());
        assert!(ObjectiveSpec::parse("spow:-1", Sense::Minimize).is_err());
        assert!(ObjectiveSpec::parse("cvec:-1,2", Sense::Minimize).is_err());
        assert_eq!("max".parse::<Sense>().unwrap(), Sense::Maximize);
        let k = ObjectiveKind::CVector { j: vec![4.0, 2.0] };
        assert_eq!(k.to_string().parse::<ObjectiveKind>().unwrap(), k);
    }

    #[test]
    fn required_depth_is_clamped() {
        let c = ObjectiveSpec::parse("cvec:4,2,2,2", Sense::Maximize).unwrap();
        assert_eq!(c.required_depth(10), 4);
        assert_eq!(c.required_depth(3), 4);
        let w = ObjectiveSpec::parse("wiener", Sense::Maximize).unwrap();
        assert_eq!(w.required_depth(10), 9);
    }

    #[test]
    fn penalty_exceeds_extremes() {
        for n in 2..12 {
            let s = ObjectiveSpec::parse("cvec:4,2,2,2", Sense::Maximize).unwrap();
            let t = star(n).with_depth(4);
            assert!(s.penalty_base(n) > evaluate(&t, &s).unwrap());
            let w = ObjectiveSpec::parse("wiener", Sense::Maximize).unwrap();
            assert!(w.penalty_base(n) > wiener(&path(n)).unwrap());
            let c = ObjectiveSpec::parse("subtrees", Sense::Maximize).unwrap();
            assert!(c.penalty_base(n) > evaluate(&star(n), &c).unwrap());
        }
    }
}
