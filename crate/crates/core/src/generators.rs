//! Graph generators: the hub construction, seeded random linear graphs, and a crown-free
//! local search.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::crown::{crown_oracle, crown_oracle_with_base, crown_through_edge};
use crate::graph::{validate_linear, GraphError, LinearThreeGraph, Triple, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("n must be at least 3, got {0}")]
    TooFewVertices(usize),
    #[error("{m} edges cannot fit on {n} vertices (at most n(n-1)/6)")]
    TooManyEdges { n: usize, m: usize },
    #[error("construction failed self-certification: {0}")]
    SelfCertification(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Edges of the K4 on `group` split into its three perfect matchings, matching `i` joined to
/// hub `i`.
fn hub_group_edges(hubs: [Vertex; 3], group: [Vertex; 4]) -> [Triple; 6] {
    let [p, q, r, s] = group;
    let matchings = [[(p, q), (r, s)], [(p, r), (q, s)], [(p, s), (q, r)]];
    let mut out = [[0; 3]; 6];
    for (i, m) in matchings.iter().enumerate() {
        for (j, &(u, v)) in m.iter().enumerate() {
            let mut t = [hubs[i], u, v];
            t.sort_unstable();
            out[2 * i + j] = t;
        }
    }
    out
}

/// Crown-free graph with `6⌊(n−3)/4⌋` edges.
///
/// Vertices 0, 1, 2 are hubs; each further block of four vertices carries a K4 whose three
/// perfect matchings are attached to the three hubs. Leftover vertices stay isolated. The result
/// is checked for linearity and crown-freeness before it is returned.
pub fn lower_bound_construction(n: usize) -> Result<LinearThreeGraph, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::TooFewVertices(n));
    }
    let groups = (n - 3) / 4;
    let mut edges = Vec::with_capacity(6 * groups);
    for g in 0..groups {
        let b = 3 + 4 * g;
        edges.extend(hub_group_edges([0, 1, 2], [b, b + 1, b + 2, b + 3]));
    }
    let h =
        validate_linear(&edges, n).map_err(|e| GeneratorError::SelfCertification(e.to_string()))?;
    let crowned = if h.edge_count() <= 60 {
        crown_oracle(&h).is_some()
    } else {
        h.edge_ids()
            .any(|e| crown_oracle_with_base(&h, e).is_some())
    };
    if crowned {
        return Err(GeneratorError::SelfCertification("contains a crown".into()));
    }
    if h.edge_count() != 6 * groups {
        return Err(GeneratorError::SelfCertification("wrong edge count".into()));
    }
    Ok(h)
}

/// `6⌊(n−3)/4⌋`, zero for `n < 3`.
pub fn lower_bound_value(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        6 * ((n - 3) / 4)
    }
}

/// Output of [`random_linear_graph`].
#[derive(Debug, Clone)]
pub struct RandomLinear {
    pub graph: LinearThreeGraph,
    pub requested: usize,
    /// True when the retry budget ran out before `requested` edges were placed.
    pub saturated: bool,
}

pub const DEFAULT_RETRY_FACTOR: usize = 400;

/// Seeded random linear graph: repeatedly draws uniform triples and keeps those whose pairs are
/// all unused.
pub fn random_linear_graph(n: usize, m: usize, seed: u64) -> Result<RandomLinear, GeneratorError> {
    random_linear_graph_with_budget(n, m, seed, DEFAULT_RETRY_FACTOR * (m + 1))
}

pub fn random_linear_graph_with_budget(
    n: usize,
    m: usize,
    seed: u64,
    retry_budget: usize,
) -> Result<RandomLinear, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::TooFewVertices(n));
    }
    if 6 * m > n * (n - 1) {
        return Err(GeneratorError::TooManyEdges { n, m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = vec![false; n * n];
    let mut edges: Vec<Triple> = Vec::with_capacity(m);
    let mut attempts = 0;
    while edges.len() < m && attempts < retry_budget {
        attempts += 1;
        let picked = rand::seq::index::sample(&mut rng, n, 3);
        let mut t = [picked.index(0), picked.index(1), picked.index(2)];
        t.sort_unstable();
        let pairs = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])];
        if pairs.iter().any(|&(u, v)| used[u * n + v]) {
            continue;
        }
        for (u, v) in pairs {
            used[u * n + v] = true;
        }
        edges.push(t);
    }
    let graph = validate_linear(&edges, n)?;
    Ok(RandomLinear {
        saturated: graph.edge_count() < m,
        graph,
        requested: m,
    })
}

/// Local search for dense crown-free linear graphs.
///
/// Starts from [`lower_bound_construction`]. Each iteration adds the first legal triple (in a
/// fresh random order) that keeps the graph linear and crown-free; when none exists it deletes
/// one or two random edges. The densest graph seen is returned. No optimality claim is made.
pub fn densify_crown_free(
    n: usize,
    seed: u64,
    iterations: usize,
) -> Result<LinearThreeGraph, GeneratorError> {
    let mut current = lower_bound_construction(n)?;
    let mut best = current.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all: Vec<Triple> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                all.push([a, b, c]);
            }
        }
    }
    for _ in 0..iterations {
        all.shuffle(&mut rng);
        let mut added = false;
        for t in &all {
            if !current.can_add(t) {
                continue;
            }
            let next = current.with_edge_unchecked(*t);
            let id = next.edge_index_of(t).expect("just added");
            if crown_through_edge(&next, id).is_none() {
                current = next;
                added = true;
                break;
            }
        }
        if added {
            if current.edge_count() > best.edge_count() {
                best = current.clone();
            }
            continue;
        }
        let kicks = rng.gen_range(1..=2).min(current.edge_count());
        for _ in 0..kicks {
            let drop = rng.gen_range(0..current.edge_count());
            let kept: Vec<Triple> = current
                .edges()
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != drop)
                .map(|(_, t)| *t)
                .collect();
            current = validate_linear(&kept, n)?;
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crown::find_crown;

    #[test]
    fn construction_sizes() {
        assert_eq!(lower_bound_construction(11).unwrap().edge_count(), 12);
        assert_eq!(lower_bound_construction(7).unwrap().edge_count(), 6);
        assert_eq!(lower_bound_construction(6).unwrap().edge_count(), 0);
        assert_eq!(lower_bound_construction(3).unwrap().edge_count(), 0);
        assert!(lower_bound_construction(2).is_err());
        for n in 3..40 {
            let h = lower_bound_construction(n).unwrap();
            assert_eq!(h.edge_count(), lower_bound_value(n));
            assert_eq!(h.n(), n);
        }
    }

    #[test]
    fn construction_is_crown_free_by_both_routes() {
        for n in [7, 11, 15, 19] {
            let h = lower_bound_construction(n).unwrap();
            assert!(crown_oracle(&h).is_none());
            assert!(find_crown(&h).is_none());
        }
    }

    #[test]
    fn random_graphs_are_reproducible() {
        let empty = random_linear_graph(9, 0, 3).unwrap();
        assert_eq!(empty.graph.edge_count(), 0);
        let a = random_linear_graph(9, 12, 1).unwrap();
        let b = random_linear_graph(9, 12, 1).unwrap();
        assert_eq!(a.graph, b.graph);
        assert_eq!(a.saturated, a.graph.edge_count() < 12);
        assert!(random_linear_graph(7, 8, 0).is_err());
        let mut complete = 0;
        for seed in 0..200 {
            let r = random_linear_graph(7, 7, seed).unwrap();
            complete += usize::from(r.graph.edge_count() == 7);
        }
        assert!(complete > 0);
    }

    #[test]
    fn densify_small() {
        let h = densify_crown_free(4, 1, 20).unwrap();
        assert_eq!(h.edge_count(), 1);
        let h = densify_crown_free(11, 7, 200).unwrap();
        assert!(h.edge_count() >= 12);
        assert!(crown_oracle(&h).is_none());
    }
}
