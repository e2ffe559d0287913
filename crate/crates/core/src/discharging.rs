//! Degree-sum bookkeeping for crown-free graphs near the `5n/3` edge threshold.
//!
//! Covers the per-edge quantities `s` and `s*`, the large-vertex set `L(H)`, `T*(H)`, and the
//! unit-transfer sequence `f_0, ..., f_k` that moves a near-uniform assignment (values 5 to 7)
//! to the true degree function. All arithmetic is integral or exact rational.

use std::collections::BTreeSet;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crown::find_crown;
use crate::graph::{DegreeVector, EdgeId, GraphError, LinearThreeGraph, Vertex};

/// Degree at or above which a vertex is large.
pub const LARGE_DEGREE: usize = 9;
/// Clamp applied to `s` on edges through a large vertex.
pub const S_STAR_CAP: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DischargeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("degree function is empty")]
    Empty,
    #[error("vertex {vertex} has degree {degree}; minimum degree 2 is required")]
    MinDegree { vertex: Vertex, degree: usize },
    #[error("degree sum {sum} is not 5n + l with l in {{0,1,2}} (n = {n})")]
    Residue { sum: usize, n: usize },
    #[error("l = 1 needs a vertex of degree at least 6")]
    NeedsDegreeSix,
    #[error("l = 2 needs a vertex of degree at least 7 or two of degree at least 6")]
    NeedsDegreeSevenOrTwoSixes,
    #[error("step {step}: f(x = {x}) = {fx} < f(y = {y}) = {fy}")]
    OrderViolated {
        step: usize,
        x: Vertex,
        y: Vertex,
        fx: usize,
        fy: usize,
    },
    #[error("vertex {vertex} has final degree {degree}, below {LARGE_DEGREE}")]
    NotLarge { vertex: Vertex, degree: usize },
    #[error("vertex {vertex}: trace ends at {traced}, expected {expected}")]
    DegreeMismatch {
        vertex: Vertex,
        traced: usize,
        expected: usize,
    },
}

/// `s(e)`, the degree sum of an edge.
pub fn s_of(h: &LinearThreeGraph, e: EdgeId) -> Result<usize, GraphError> {
    Ok(h.degree_vector(e)?.sum())
}

/// `s*(e)`.
pub fn s_star(h: &LinearThreeGraph, e: EdgeId) -> Result<usize, GraphError> {
    Ok(s_star_of(&h.degree_vector(e)?))
}

pub fn s_star_of(d: &DegreeVector) -> usize {
    if d.x >= LARGE_DEGREE {
        d.sum().min(S_STAR_CAP)
    } else {
        d.sum()
    }
}

/// `L(H)`: vertices of degree at least 9.
pub fn large_set(h: &LinearThreeGraph) -> BTreeSet<Vertex> {
    (0..h.n())
        .filter(|&v| h.degree(v) >= LARGE_DEGREE)
        .collect()
}

/// `T*(H)`, the sum of `s*` over all edges.
pub fn t_star(h: &LinearThreeGraph) -> usize {
    h.edge_ids()
        .map(|e| s_star_of(&h.degree_vector(e).expect("own edge")))
        .sum()
}

/// `Σ_e s(e)`.
pub fn t_plain(h: &LinearThreeGraph) -> usize {
    h.edge_ids()
        .map(|e| h.degree_vector(e).expect("own edge").sum())
        .sum()
}

/// Non-negative integer values indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegreeFunction(Vec<usize>);

impl DegreeFunction {
    pub fn new(values: Vec<usize>) -> Self {
        DegreeFunction(values)
    }

    pub fn from_graph(h: &LinearThreeGraph) -> Self {
        DegreeFunction(h.degrees().to_vec())
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn sum_of_squares(&self) -> i64 {
        self.0.iter().map(|&d| (d * d) as i64).sum()
    }
}

/// Which side of the partition a vertex falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// Never decreased.
    I,
    /// Decreased at least once.
    D,
}

/// A transfer sequence from `f0` to a degree function, with derived bookkeeping.
///
/// Step `i` (1-based) moves one unit from `steps[i-1].1` (`y_i`, in `D`) to `steps[i-1].0`
/// (`x_i`, in `I`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DischargeTrace {
    pub f0: Vec<usize>,
    pub steps: Vec<(Vertex, Vertex)>,
    pub partition: Vec<Side>,
    /// `l` in `Σ d = 5n + l`.
    pub residue: usize,
    /// `T_0 ..= T_k`.
    pub t: Vec<i64>,
    /// `Δ_1 ..= Δ_k` (index 0 is step 1).
    pub delta: Vec<i64>,
    pub g: Vec<i64>,
    pub h: Vec<i64>,
    /// `I_v`: 1-based indices of the steps touching `v`.
    pub touching: Vec<Vec<usize>>,
    /// `Δ_v`.
    pub delta_v: Vec<i64>,
}

fn sq(x: usize) -> i64 {
    (x * x) as i64
}

impl DischargeTrace {
    /// Replays `steps` from `f0` and fills in every derived quantity.
    ///
    /// The partition is not inferred; it is taken as given.
    pub fn assemble(
        f0: Vec<usize>,
        steps: Vec<(Vertex, Vertex)>,
        partition: Vec<Side>,
        residue: usize,
    ) -> Self {
        let n = f0.len();
        let mut f = f0.clone();
        let mut t = vec![f.iter().map(|&x| sq(x)).sum::<i64>()];
        let mut delta = Vec::with_capacity(steps.len());
        let mut g = Vec::with_capacity(steps.len());
        let mut h = Vec::with_capacity(steps.len());
        let mut touching = vec![Vec::new(); n];
        for (i, &(x, y)) in steps.iter().enumerate() {
            let gi = sq(f[x] + 1) - sq(f[x]);
            let hi = sq(f[y]) - sq(f[y].saturating_sub(1));
            f[x] += 1;
            f[y] = f[y].saturating_sub(1);
            let ti = f.iter().map(|&v| sq(v)).sum::<i64>();
            delta.push(ti - t[t.len() - 1]);
            t.push(ti);
            g.push(gi);
            h.push(hi);
            touching[x].push(i + 1);
            if y != x {
                touching[y].push(i + 1);
            }
        }
        let delta_v = touching
            .iter()
            .map(|steps| steps.iter().map(|&i| delta[i - 1]).sum())
            .collect();
        DischargeTrace {
            f0,
            steps,
            partition,
            residue,
            t,
            delta,
            g,
            h,
            touching,
            delta_v,
        }
    }

    pub fn k(&self) -> usize {
        self.steps.len()
    }

    /// `f_k`.
    pub fn final_values(&self) -> Vec<usize> {
        let mut f = self.f0.clone();
        for &(x, y) in &self.steps {
            f[x] += 1;
            f[y] = f[y].saturating_sub(1);
        }
        f
    }

    pub fn decreased(&self) -> BTreeSet<Vertex> {
        (0..self.partition.len())
            .filter(|&v| self.partition[v] == Side::D)
            .collect()
    }
}

/// Runs the transfer procedure on `d`.
///
/// Vertices are ordered by non-decreasing degree (ties by index) once, up front. `f0` is 5
/// everywhere except: `l = 1` puts 6 on the last vertex; `l = 2` puts 7 on the last vertex when
/// its degree is at least 7, and 6 on the last two otherwise. Each step lowers the earliest
/// vertex still above its degree and raises the latest vertex still below it.
pub fn build_discharge_sequence(d: &DegreeFunction) -> Result<DischargeTrace, DischargeError> {
    let deg = d.values();
    let n = deg.len();
    if n == 0 {
        return Err(DischargeError::Empty);
    }
    if let Some((vertex, &degree)) = deg.iter().enumerate().find(|(_, &x)| x < 2) {
        return Err(DischargeError::MinDegree { vertex, degree });
    }
    let sum = d.sum();
    if sum < 5 * n || sum > 5 * n + 2 {
        return Err(DischargeError::Residue { sum, n });
    }
    let residue = sum - 5 * n;

    let mut order: Vec<Vertex> = (0..n).collect();
    order.sort_by_key(|&v| (deg[v], v));
    let mut f = vec![5usize; n];
    let last = order[n - 1];
    match residue {
        0 => {}
        // Both guards below are forced by the degree sum; they only fire on inconsistent input.
        1 => {
            if deg[last] < 6 {
                return Err(DischargeError::NeedsDegreeSix);
            }
            f[last] = 6;
        }
        _ => {
            if deg[last] >= 7 {
                f[last] = 7;
            } else if n >= 2 && deg[order[n - 2]] >= 6 {
                f[last] = 6;
                f[order[n - 2]] = 6;
            } else {
                return Err(DischargeError::NeedsDegreeSevenOrTwoSixes);
            }
        }
    }
    let f0 = f.clone();
    let mut steps = Vec::new();
    let mut decreased = vec![false; n];
    loop {
        let a = order.iter().position(|&v| f[v] > deg[v]);
        let b = order.iter().rposition(|&v| f[v] < deg[v]);
        let (Some(a), Some(b)) = (a, b) else {
            debug_assert!(
                a.is_none() && b.is_none(),
                "sums agree, so both run out together"
            );
            break;
        };
        let (y, x) = (order[a], order[b]);
        if f[x] < f[y] {
            return Err(DischargeError::OrderViolated {
                step: steps.len() + 1,
                x,
                y,
                fx: f[x],
                fy: f[y],
            });
        }
        f[x] += 1;
        f[y] -= 1;
        decreased[y] = true;
        steps.push((x, y));
    }
    let partition = decreased
        .iter()
        .map(|&dec| if dec { Side::D } else { Side::I })
        .collect();
    Ok(DischargeTrace::assemble(f0, steps, partition, residue))
}

/// One failed check found by [`verify_discharge_trace`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum TraceViolation {
    /// Condition (1): `5 <= f0(v) <= 7`.
    InitialRange {
        vertex: Vertex,
        value: usize,
    },
    /// Condition (2): `f_k = d`.
    FinalMismatch {
        vertex: Vertex,
        traced: usize,
        degree: usize,
    },
    /// Condition (3), any of its clauses.
    StepRule {
        step: usize,
        reason: String,
    },
    /// Condition (4): decreased vertices start at 5.
    DecreasedStart {
        vertex: Vertex,
        value: usize,
    },
    Conservation {
        step: usize,
        sum: usize,
        expected: usize,
    },
    NonPositiveDelta {
        step: usize,
        delta: i64,
    },
    SquareSumIdentity {
        t_k: i64,
        sum_of_squares: i64,
    },
    ShapeMismatch(String),
    DerivedMismatch(String),
}

/// Outcome of [`verify_discharge_trace`]: passes iff `violations` is empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceVerification {
    pub ok: bool,
    pub violations: Vec<TraceViolation>,
}

/// Re-checks a trace against `d` from its `f0`, steps and partition alone, then compares the
/// stored derived values with a fresh replay.
pub fn verify_discharge_trace(trace: &DischargeTrace, d: &DegreeFunction) -> TraceVerification {
    let mut v = Vec::new();
    let deg = d.values();
    let n = deg.len();
    if trace.f0.len() != n || trace.partition.len() != n {
        v.push(TraceViolation::ShapeMismatch(format!(
            "f0 has {} entries, partition {}, degree function {n}",
            trace.f0.len(),
            trace.partition.len()
        )));
        return TraceVerification {
            ok: false,
            violations: v,
        };
    }
    for (vertex, &value) in trace.f0.iter().enumerate() {
        if !(5..=7).contains(&value) {
            v.push(TraceViolation::InitialRange { vertex, value });
        }
        if trace.partition[vertex] == Side::D && value != 5 {
            v.push(TraceViolation::DecreasedStart { vertex, value });
        }
    }
    let expected_sum = 5 * n + trace.residue;
    let mut f: Vec<i64> = trace.f0.iter().map(|&x| x as i64).collect();
    let sum_now = |f: &[i64]| f.iter().sum::<i64>();
    if sum_now(&f) != expected_sum as i64 {
        v.push(TraceViolation::Conservation {
            step: 0,
            sum: sum_now(&f).max(0) as usize,
            expected: expected_sum,
        });
    }
    let mut t_prev: i64 = f.iter().map(|x| x * x).sum();
    for (i, &(x, y)) in trace.steps.iter().enumerate() {
        let step = i + 1;
        if x >= n || y >= n || x == y {
            v.push(TraceViolation::StepRule {
                step,
                reason: format!("invalid pair ({x}, {y})"),
            });
            continue;
        }
        if trace.partition[x] != Side::I {
            v.push(TraceViolation::StepRule {
                step,
                reason: format!("x = {x} is not in I"),
            });
        }
        if trace.partition[y] != Side::D {
            v.push(TraceViolation::StepRule {
                step,
                reason: format!("y = {y} is not in D"),
            });
        }
        if f[x] < f[y] {
            v.push(TraceViolation::StepRule {
                step,
                reason: format!("f(x) = {} < f(y) = {}", f[x], f[y]),
            });
        }
        f[x] += 1;
        f[y] -= 1;
        if sum_now(&f) != expected_sum as i64 {
            v.push(TraceViolation::Conservation {
                step,
                sum: sum_now(&f).max(0) as usize,
                expected: expected_sum,
            });
        }
        let t_now: i64 = f.iter().map(|x| x * x).sum();
        if t_now - t_prev <= 0 {
            v.push(TraceViolation::NonPositiveDelta {
                step,
                delta: t_now - t_prev,
            });
        }
        t_prev = t_now;
    }
    for (vertex, (&traced, &degree)) in f.iter().zip(deg).enumerate() {
        if traced != degree as i64 {
            v.push(TraceViolation::FinalMismatch {
                vertex,
                traced: traced.max(0) as usize,
                degree,
            });
        }
    }
    if t_prev != d.sum_of_squares() {
        v.push(TraceViolation::SquareSumIdentity {
            t_k: t_prev,
            sum_of_squares: d.sum_of_squares(),
        });
    }
    if v.is_empty() {
        let fresh = DischargeTrace::assemble(
            trace.f0.clone(),
            trace.steps.clone(),
            trace.partition.clone(),
            trace.residue,
        );
        if fresh != *trace {
            v.push(TraceViolation::DerivedMismatch(
                "stored T_i, Δ_i, g, h, I_v or Δ_v disagree with a replay".into(),
            ));
        }
        for i in 0..trace.k() {
            if trace.g[i] - trace.h[i] != trace.delta[i] {
                v.push(TraceViolation::DerivedMismatch(format!(
                    "g - h != Δ at step {}",
                    i + 1
                )));
            }
        }
    }
    TraceVerification {
        ok: v.is_empty(),
        violations: v,
    }
}

/// Result of [`delta_v_bound_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaVCheck {
    pub vertex: Vertex,
    pub degree: usize,
    pub delta_v: i64,
    /// `m² − 9m + 14`.
    pub bound: i64,
    pub holds: bool,
    /// Largest `h(i)` over the steps touching `v` (`None` when there are none).
    pub max_h: Option<i64>,
    /// Every `h(i)`, `i ∈ I_v`, is at most 9.
    pub h_within_nine: bool,
}

/// Checks `Δ_v ≥ m² − 9m + 14` for a vertex ending at degree `m ≥ 9`.
pub fn delta_v_bound_check(
    trace: &DischargeTrace,
    v: Vertex,
    m: usize,
) -> Result<DeltaVCheck, DischargeError> {
    if m < LARGE_DEGREE {
        return Err(DischargeError::NotLarge {
            vertex: v,
            degree: m,
        });
    }
    if v >= trace.f0.len() {
        return Err(GraphError::InvalidVertex(v, trace.f0.len()).into());
    }
    let traced = trace.final_values()[v];
    if traced != m {
        return Err(DischargeError::DegreeMismatch {
            vertex: v,
            traced,
            expected: m,
        });
    }
    let m_i = m as i64;
    let bound = m_i * m_i - 9 * m_i + 14;
    let delta_v = trace.delta_v[v];
    let max_h = trace.touching[v].iter().map(|&i| trace.h[i - 1]).max();
    Ok(DeltaVCheck {
        vertex: v,
        degree: m,
        delta_v,
        bound,
        holds: delta_v >= bound,
        max_h,
        h_within_nine: max_h.is_none_or(|h| h <= 9),
    })
}

/// A precondition of [`star_deficit_check`] that the input graph fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum StarPrecondition {
    NotCrownFree,
    MinDegreeBelowTwo { vertex: Vertex, degree: usize },
}

/// Result of [`star_deficit_check`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StarDeficit {
    pub vertex: Vertex,
    pub degree: usize,
    /// `Σ_{e ∋ v} (s(e) − s*(e))`.
    pub deficit: i64,
    /// `m² − 9m`.
    pub bound: i64,
    pub holds: bool,
    /// Every vertex sharing an edge with `v` has degree at most 3.
    pub premise_holds: bool,
    pub heavy_neighbors: Vec<Vertex>,
    pub violated_preconditions: Vec<StarPrecondition>,
}

/// Compares the `s − s*` loss on the star of a large vertex with `m² − 9m`.
pub fn star_deficit_check(h: &LinearThreeGraph, v: Vertex) -> Result<StarDeficit, DischargeError> {
    h.check_vertex(v)?;
    let m = h.degree(v);
    if m < LARGE_DEGREE {
        return Err(DischargeError::NotLarge {
            vertex: v,
            degree: m,
        });
    }
    let mut deficit = 0i64;
    let mut heavy = BTreeSet::new();
    for &e in h.edges_at(v) {
        let dv = h.degree_vector(e)?;
        deficit += (dv.sum() - s_star_of(&dv)) as i64;
        for &u in &h.edges()[e.0] {
            if u != v && h.degree(u) > 3 {
                heavy.insert(u);
            }
        }
    }
    let mut violated = Vec::new();
    if find_crown(h).is_some() {
        violated.push(StarPrecondition::NotCrownFree);
    }
    if let Some(vertex) = (0..h.n()).find(|&u| h.degree(u) < 2) {
        violated.push(StarPrecondition::MinDegreeBelowTwo {
            vertex,
            degree: h.degree(vertex),
        });
    }
    let m_i = m as i64;
    let bound = m_i * m_i - 9 * m_i;
    Ok(StarDeficit {
        vertex: v,
        degree: m,
        deficit,
        bound,
        holds: deficit <= bound,
        premise_holds: heavy.is_empty(),
        heavy_neighbors: heavy.into_iter().collect(),
        violated_preconditions: violated,
    })
}

/// `(25n + 14L) / ((5n + 2) / 3)` as an exact reduced fraction.
pub fn lemma2_rhs(n: u64, large: u64) -> Ratio<u64> {
    assert!(n >= 1, "n must be positive");
    Ratio::new(3 * (25 * n + 14 * large), 5 * n + 2)
}

/// `lemma2_rhs(n, large) > k`, decided by integer cross-multiplication.
pub fn lemma2_rhs_exceeds(n: u64, large: u64, k: u64) -> bool {
    3 * (25 * n + 14 * large) > k * (5 * n + 2)
}
